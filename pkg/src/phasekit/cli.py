"""Command line interface.

Subcommands:
  dist      one phase distribution sampled on a uniform grid, as CSV
  figure1   multi-column comparison table (both paths plus references)
  check     self-check suite at a cutoff; exits 1 if any check fails
  dump-op   matrix dump of the phase operator or the finite-basis angle matrix

CSV output opens with the versioned line "# phasekit v1", then "# key=value"
metadata lines, then "# columns=..." naming the data columns, then comma
separated rows printed with 17 significant digits so reading the file back
reproduces the floats bit for bit.  Files are written atomically (temp file
plus rename), so a crashed run never leaves a partial CSV behind.

Exit codes: 0 success, 1 check failure, 2 bad usage or unparsable input,
3 cutoff too small or method outside its validated range, 4 numerical
validation failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .checks import run_checks
from .errors import (
    CancellationOverflowError,
    CutoffMismatchError,
    CutoffTooSmallError,
    DegenerateSuperpositionError,
    KernelInconsistencyError,
    OperatorPathUnavailableError,
    QuadratureConstructionError,
    StateSpecError,
)
from .fock import (
    DEFAULT_EPS_TAIL,
    DensityMatrix,
    build_state,
    density_from_pure,
    load_density_file,
    required_cutoff,
    save_operator_file,
)
from .pegg_barnett import pair_pb_closed_form, pb_density, pb_density_mixed, phi_matrix
from .phase_operator import (
    OPERATOR_PATH_MAX_CUTOFF,
    pair_state_closed_form,
    phase_distribution_operator,
    phase_operator_at,
)
from .wigner import DISTRIBUTION_KINDS, PhaseGrid, phase_distribution_radial

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CUTOFF = 3
EXIT_NUMERICS = 4

FORMAT_HEADER = "# phasekit v1"
INTEGRAL_TOL = 1e-6
DEFAULT_GRID = 720

# short method names accepted on the command line, mapped to distribution kinds
METHOD_ALIASES = {
    "radial": "wigner_radial",
    "operator": "wigner_operator",
    "pb": "pegg_barnett",
    "closed-form": "closed_form",
}

_FIGURE1_VARIANTS = {
    # variant -> (state spec, default cutoff)
    "a1": ("pair:n=1", 20),
    "a2": ("pair:n=2", 20),
    "b": ("cat:alpha=-2,beta=8", 160),
}

_CONFIG_TYPES = {
    "state": str,
    "method": str,
    "variant": str,
    "op": str,
    "out": str,
    "force_method": str,
    "config": str,
    "cutoff": int,
    "grid": int,
    "seed": int,
    "theta0": float,
    "eps_tail": float,
}


def _merge_config(args) -> None:
    """Fill unset options from a key=value file; command line wins."""
    path = getattr(args, "config", None)
    if not path:
        return
    try:
        with open(path, encoding="utf-8") as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise StateSpecError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise StateSpecError(f"{path}: line {lineno}: expected key=value")
        dest = key.strip().lower().replace("-", "_")
        if dest not in _CONFIG_TYPES:
            raise StateSpecError(f"{path}: line {lineno}: unknown key {key.strip()!r}")
        if dest == "config" or not hasattr(args, dest):
            continue
        if getattr(args, dest) is None:
            try:
                setattr(args, dest, _CONFIG_TYPES[dest](value.strip()))
            except ValueError:
                raise StateSpecError(
                    f"{path}: line {lineno}: bad value {value.strip()!r} for {dest}"
                ) from None


class _Usage(Exception):
    """Post-parse option validation problem; maps to exit code 2."""


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".phasekit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _write_csv(out, meta: dict, columns: list[str], table: np.ndarray) -> None:
    lines = [FORMAT_HEADER]
    lines.extend(f"# {key}={value}" for key, value in meta.items())
    lines.append("# columns=" + ",".join(columns))
    lines.extend(",".join(f"{float(v):.17g}" for v in row) for row in table)
    text = "\n".join(lines) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        _atomic_write(out, text)


def _resolve_common(args, default_theta0=-math.pi):
    theta0 = getattr(args, "theta0", None)
    theta0 = theta0 if theta0 is not None else default_theta0
    m_count = getattr(args, "grid", None)
    m_count = m_count if m_count is not None else DEFAULT_GRID
    if m_count < 4:
        raise _Usage(f"grid must be at least 4, got {m_count}")
    cutoff = getattr(args, "cutoff", None)
    if cutoff is not None and cutoff < 0:
        raise _Usage(f"cutoff must be nonnegative, got {cutoff}")
    force_method = getattr(args, "force_method", None)
    if force_method not in (None, "operator"):
        raise _Usage(f"force-method must be 'operator', got {force_method!r}")
    return theta0, m_count, force_method == "operator"


def _load_input(args):
    """State spec -> (density matrix, state vector or None, cutoff)."""
    spec = args.state
    if spec is None:
        raise _Usage("a --state spec is required")
    eps_tail = args.eps_tail if args.eps_tail is not None else DEFAULT_EPS_TAIL
    if spec.strip().lower().startswith("density:"):
        rho = load_density_file(spec.strip()[len("density:"):])
        if args.cutoff is not None and args.cutoff != rho.cutoff:
            if args.cutoff < rho.cutoff:
                raise CutoffTooSmallError(
                    f"density file holds cutoff {rho.cutoff}, cannot truncate to {args.cutoff}"
                )
            padded = np.zeros((args.cutoff + 1, args.cutoff + 1), dtype=complex)
            padded[: rho.dim, : rho.dim] = rho.elems
            rho = DensityMatrix(args.cutoff, padded)
        return rho, None, rho.cutoff
    psi = build_state(spec, args.cutoff, eps_tail)
    return density_from_pure(psi), psi, psi.cutoff


class _Numerics(Exception):
    """Numerical validation failure; maps to exit code 4."""


def _check_integral(dist, label: str) -> None:
    err = abs(dist.integral() - 1.0)
    if err > INTEGRAL_TOL:
        raise _Numerics(f"{label}: integral deviates from 1 by {err:.3e}")


def cmd_dist(args) -> int:
    theta0, m_count, force = _resolve_common(args)
    method = args.method if args.method is not None else "radial"
    method = METHOD_ALIASES.get(method, method)
    if method not in DISTRIBUTION_KINDS:
        raise _Usage(
            f"unknown method {args.method!r}; choose from {sorted(METHOD_ALIASES)} "
            f"or {sorted(DISTRIBUTION_KINDS)}"
        )
    grid = PhaseGrid(theta0, m_count)
    rho, psi, cutoff = _load_input(args)
    if method == "wigner_radial":
        dist = phase_distribution_radial(rho, grid)
    elif method == "wigner_operator":
        dist = phase_distribution_operator(rho, grid, force=force)
    elif method == "pegg_barnett":
        dist = pb_density(psi, grid) if psi is not None else pb_density_mixed(rho, grid)
    else:
        n = _pair_order(args.state)
        dist = pair_state_closed_form(n, grid)
    _check_integral(dist, method)
    meta = {
        "state": args.state,
        "method": method,
        "cutoff": cutoff,
        "theta0": f"{theta0:.17g}",
        "M": m_count,
    }
    _write_csv(args.out, meta, ["theta", "value"], np.column_stack([grid.samples, dist.values]))
    return EXIT_OK


def _pair_order(spec: str) -> int:
    kind = spec.strip().partition(":")[0].strip().lower()
    if kind != "pair":
        raise _Usage(f"closed-form reference needs a pair state, got {spec!r}")
    return required_cutoff(spec) // 2


def cmd_figure1(args) -> int:
    variant = args.variant if args.variant is not None else "a1"
    if variant not in _FIGURE1_VARIANTS:
        raise _Usage(f"variant must be one of {sorted(_FIGURE1_VARIANTS)}, got {variant!r}")
    spec, default_cutoff = _FIGURE1_VARIANTS[variant]
    args.state = spec
    if args.cutoff is None:
        args.cutoff = default_cutoff
    theta0, m_count, force = _resolve_common(args)
    grid = PhaseGrid(theta0, m_count)
    rho, psi, cutoff = _load_input(args)

    columns = {"wigner_radial": phase_distribution_radial(rho, grid)}
    if variant != "b":
        n = _pair_order(spec)
        columns["wigner_operator"] = phase_distribution_operator(rho, grid, force=force)
        columns["pegg_barnett"] = pb_density(psi, grid)
        columns["closed_form_wigner"] = pair_state_closed_form(n, grid)
        columns["closed_form_pb"] = pair_pb_closed_form(n, grid)
    else:
        columns["pegg_barnett"] = pb_density(psi, grid)
    for label, dist in columns.items():
        _check_integral(dist, label)

    meta = {
        "state": spec,
        "method": "figure1",
        "variant": variant,
        "cutoff": cutoff,
        "theta0": f"{theta0:.17g}",
        "M": m_count,
    }
    table = np.column_stack([grid.samples] + [d.values for d in columns.values()])
    _write_csv(args.out, meta, ["theta", *columns], table)
    return EXIT_OK


def cmd_check(args) -> int:
    theta0, _, _ = _resolve_common(args)
    cutoff = args.cutoff if args.cutoff is not None else 20
    seed = args.seed if args.seed is not None else 20260825
    results = run_checks(cutoff, theta0, force_method=args.force_method, seed=seed)
    for res in results:
        print(f"[{'PASS' if res.passed else 'FAIL'}] {res.name}: {res.detail}")
    passed = sum(res.passed for res in results)
    print(f"{passed}/{len(results)} checks passed at cutoff {cutoff}")
    return EXIT_OK if passed == len(results) else EXIT_CHECK_FAILED


def cmd_dump_op(args) -> int:
    theta0, _, force = _resolve_common(args, default_theta0=0.0)
    op_name = args.op if args.op is not None else "rho_w"
    cutoff = args.cutoff if args.cutoff is not None else 20
    if args.out is None:
        raise _Usage("dump-op needs --out")
    if op_name == "rho_w":
        if cutoff > OPERATOR_PATH_MAX_CUTOFF and not force:
            raise OperatorPathUnavailableError(
                f"operator dump at cutoff {cutoff} is outside the validated range "
                f"(<= {OPERATOR_PATH_MAX_CUTOFF}); pass --force-method operator to override"
            )
        op = phase_operator_at(theta0, cutoff)
    elif op_name == "phi_s":
        op = phi_matrix(cutoff, theta0)
    else:
        raise _Usage(f"op must be 'rho_w' or 'phi_s', got {op_name!r}")
    tmp = f"{args.out}.tmp{os.getpid()}"
    save_operator_file(op, tmp)
    os.replace(tmp, args.out)
    return EXIT_OK


def _add_options(sub, *names):
    option_specs = {
        "state": dict(type=str, help="state spec, e.g. pair:n=1 or cat:alpha=-2,beta=8"),
        "method": dict(type=str, help="radial | operator | pb | closed-form"),
        "variant": dict(type=str, help="a1 (pair n=1) | a2 (pair n=2) | b (cat state)"),
        "op": dict(type=str, help="rho_w (phase operator) or phi_s (finite-basis angle matrix)"),
        "cutoff": dict(type=int, help="Fock truncation; phi_s dumps read this as s"),
        "theta0": dict(type=float, help="window start angle (default -pi; dump-op defaults to 0)"),
        "grid": dict(type=int, help=f"number of grid points (default {DEFAULT_GRID})"),
        "out": dict(type=str, help="output path; stdout when omitted"),
        "eps_tail": dict(type=float, help="coherent-state tail mass budget"),
        "force_method": dict(type=str, help="pass 'operator' to override the validated range"),
        "seed": dict(type=int, help="seed for randomized checks"),
        "config": dict(type=str, help="key=value file supplying defaults for unset options"),
    }
    for name in names:
        sub.add_argument("--" + name.replace("_", "-"), **option_specs[name])


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasekit",
        description="Phase distributions of truncated single-mode states, two ways.",
    )
    parser.add_argument("--version", action="version", version=f"phasekit {__version__}")
    subs = parser.add_subparsers(dest="command")

    p_dist = subs.add_parser("dist", help="one phase distribution as CSV")
    _add_options(
        p_dist, "state", "method", "cutoff", "theta0", "grid", "out",
        "eps_tail", "force_method", "config",
    )
    p_dist.set_defaults(func=cmd_dist)

    p_fig = subs.add_parser("figure1", help="comparison table for the standard figure")
    _add_options(
        p_fig, "variant", "cutoff", "theta0", "grid", "out",
        "eps_tail", "force_method", "config",
    )
    p_fig.set_defaults(func=cmd_figure1)

    p_check = subs.add_parser("check", help="run the self-check suite")
    _add_options(p_check, "cutoff", "theta0", "force_method", "seed", "config")
    p_check.set_defaults(func=cmd_check)

    p_dump = subs.add_parser("dump-op", help="dump an operator matrix")
    _add_options(p_dump, "op", "cutoff", "theta0", "out", "force_method", "config")
    p_dump.set_defaults(func=cmd_dump_op)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        _merge_config(args)
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StateSpecError, DegenerateSuperpositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CutoffTooSmallError, CutoffMismatchError, OperatorPathUnavailableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CUTOFF
    except (
        KernelInconsistencyError,
        CancellationOverflowError,
        QuadratureConstructionError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except _Numerics as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS

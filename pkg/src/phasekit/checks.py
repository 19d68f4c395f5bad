"""Self-check suite behind the CLI ``check`` subcommand.

Each check returns a CheckResult; the CLI prints one line per result and
fails the run if any check fails.  The state suite scales with the requested
cutoff (a coherent state with mean photon number cutoff/20 rides along when
it fits), so forcing the operator path beyond its validated range makes the
cross-path oracle fail loudly instead of silently returning garbage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import angle_moment_mismatch, weak_equivalence_scan
from .errors import PhasekitError
from .fock import (
    OperatorMatrix,
    StateVector,
    density_from_pure,
    expectation,
    make_coherent_state,
    make_number_state,
    phase_conjugate,
    phase_shift_state,
    superpose,
)
from .pegg_barnett import phi_moment
from .phase_operator import (
    OPERATOR_PATH_MAX_CUTOFF,
    phase_distribution_operator,
    phase_operator_at,
    phase_operator_zero,
)
from .wigner import PhaseGrid, phase_distribution_radial

CROSS_PATH_TOL = 1e-7
COVARIANCE_TOL = 1e-9
SCAN_COVARIANT_TOL = 1e-9
SCAN_NONCOVARIANT_MIN = 1e-3
PB_FINAL_GAP = 1e-3
QP1_TOL = 1e-9
QP2_MIN = 1e-3
COMPLETENESS_TOL = 1e-8
NORMALIZATION_TOL = 1e-6

# the scan is a property of family construction, not of the working cutoff
_SCAN_CUTOFF = 12
_SCAN_GRID = 48


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_state(cutoff: int, levels: int, rng) -> StateVector:
    amps = np.zeros(cutoff + 1, dtype=complex)
    k = min(levels, cutoff) + 1
    amps[:k] = rng.normal(size=k) + 1j * rng.normal(size=k)
    return StateVector(cutoff, amps / np.linalg.norm(amps))


def _state_suite(cutoff: int, rng):
    suite = [("fock0", make_number_state(0, cutoff))]
    if cutoff >= 3:
        suite.append(("fock3", make_number_state(3, cutoff)))
    if cutoff >= 2:
        suite.append(
            (
                "pair1",
                superpose(
                    [(1.0, make_number_state(0, cutoff)), (1.0, make_number_state(2, cutoff))]
                ),
            )
        )
    if cutoff >= 4:
        suite.append(
            (
                "pair2",
                superpose(
                    [(1.0, make_number_state(0, cutoff)), (1.0, make_number_state(4, cutoff))]
                ),
            )
        )
    mean = cutoff / 20.0
    if mean >= 0.25 and mean + 10.0 * math.sqrt(mean) <= cutoff:
        suite.append((f"coherent(mean={mean:g})", make_coherent_state(math.sqrt(mean), cutoff)))
    if cutoff >= 1:
        suite.append(("random5", _random_state(cutoff, 5, rng)))
    return suite


def _guarded(fn):
    """Turn an exception escaping a check into a failed CheckResult."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (PhasekitError, ValueError, FloatingPointError) as exc:
            name = fn.__name__.removeprefix("_check_").replace("_", "-")
            return CheckResult(name, False, f"{type(exc).__name__}: {exc}")

    return wrapper


@_guarded
def _check_radial_normalization(suite, cutoff, theta0):
    grid = PhaseGrid(theta0, max(256, 2 * cutoff + 4))
    worst = 0.0
    for _, psi in suite:
        dist = phase_distribution_radial(density_from_pure(psi), grid)
        worst = max(worst, abs(dist.integral() - 1.0))
    return CheckResult(
        "radial-normalization",
        worst <= NORMALIZATION_TOL,
        f"max |integral - 1| = {worst:.3e} (gate {NORMALIZATION_TOL:g})",
    )


@_guarded
def _check_cross_path(suite, cutoff, theta0, force):
    grid = PhaseGrid(theta0, max(128, 2 * cutoff + 4))
    worst = 0.0
    for _, psi in suite:
        rho = density_from_pure(psi)
        op_dist = phase_distribution_operator(rho, grid, force=force)
        rad_dist = phase_distribution_radial(rho, grid)
        worst = max(worst, float(np.max(np.abs(op_dist.values - rad_dist.values))))
    detail = f"max |operator - radial| = {worst:.3e} (gate {CROSS_PATH_TOL:g})"
    if worst > CROSS_PATH_TOL:
        info = phase_operator_zero(cutoff).build_info
        detail += (
            "; cancellation overflow in the alternating sum: worst element "
            f"{info['worst_element']} with {info['worst_term_count']} terms, "
            f"sum|term| = {info['worst_abs_term_sum']:.3e}"
        )
    return CheckResult("cross-path", worst <= CROSS_PATH_TOL, detail)


@_guarded
def _check_covariance(cutoff, theta0, rng, force):
    worst = 0.0
    for _ in range(3):
        psi = _random_state(cutoff, min(8, cutoff), rng)
        rho = density_from_pure(psi)
        for phi in (0.7, -2.1, 4.0):
            rho_shift = density_from_pure(phase_shift_state(psi, phi))
            for theta in (theta0, 0.3, 2.9):
                lhs = expectation(phase_operator_at(theta, cutoff), rho_shift).real
                rhs = expectation(phase_operator_at(theta - phi, cutoff), rho).real
                worst = max(worst, abs(lhs - rhs))
    return CheckResult(
        "covariance",
        worst <= COVARIANCE_TOL,
        f"max shift mismatch = {worst:.3e} (gate {COVARIANCE_TOL:g})",
    )


@_guarded
def _check_weak_equivalence(cutoff, theta0, rng, operator_ok):
    scan_cutoff = min(cutoff, _SCAN_CUTOFF)
    grid = PhaseGrid(theta0, _SCAN_GRID)
    worst_cov = 0.0
    if operator_ok:
        worst_cov = weak_equivalence_scan(
            lambda th: phase_operator_at(th, scan_cutoff), scan_cutoff, grid
        )
    herm = None
    for _ in range(3):
        base = rng.normal(size=(scan_cutoff + 1, scan_cutoff + 1))
        base = base + 1j * rng.normal(size=base.shape)
        herm = (base + base.conj().T) / 2.0
        a0 = OperatorMatrix(scan_cutoff, herm, hermitian_hint=True)
        worst_cov = max(
            worst_cov,
            weak_equivalence_scan(lambda th: phase_conjugate(a0, th), scan_cutoff, grid),
        )
    if scan_cutoff >= 1:
        const = OperatorMatrix(scan_cutoff, herm, hermitian_hint=True)
        noncov = weak_equivalence_scan(lambda th: const, scan_cutoff, grid)
    else:
        noncov = float("inf")
    ok = worst_cov <= SCAN_COVARIANT_TOL and noncov > SCAN_NONCOVARIANT_MIN
    return CheckResult(
        "weak-equivalence",
        ok,
        f"covariant scan = {worst_cov:.3e} (gate {SCAN_COVARIANT_TOL:g}), "
        f"non-covariant scan = {noncov:.3e} (must exceed {SCAN_NONCOVARIANT_MIN:g})",
    )


@_guarded
def _check_pb_convergence(cutoff, theta0):
    if cutoff >= 1:
        psi = superpose([(1.0, make_number_state(0, 1)), (1.0, make_number_state(1, 1))])
        orders = (1, 2)
    else:
        psi = make_number_state(0, 0)
        orders = (2,)
    worst_final = 0.0
    envelope_ok = True
    for p in orders:
        gaps = []
        for s in (64, 128, 256, 512, 1024):
            res = phi_moment(s, theta0, psi, p)
            gaps.append(abs(res.spectral - res.integral))
        worst_final = max(worst_final, gaps[-1])
        envelope_ok = envelope_ok and all(
            later <= earlier + 1e-12 for earlier, later in zip(gaps, gaps[1:])
        )
    ok = envelope_ok and worst_final <= PB_FINAL_GAP
    return CheckResult(
        "pb-convergence",
        ok,
        f"final gap = {worst_final:.3e} (gate {PB_FINAL_GAP:g}), "
        f"envelope {'decreasing' if envelope_ok else 'NOT decreasing'}",
    )


@_guarded
def _check_q_moment(suite, cutoff, theta0, force):
    worst_p1 = 0.0
    for _, psi in suite:
        res = angle_moment_mismatch(density_from_pure(psi), theta0, 1, force=force)
        worst_p1 = max(worst_p1, res.gap)
    detail = f"max p=1 gap = {worst_p1:.3e} (gate {QP1_TOL:g})"
    ok = worst_p1 <= QP1_TOL
    if cutoff >= 2:
        pair = superpose(
            [(1.0, make_number_state(0, cutoff)), (1.0, make_number_state(2, cutoff))]
        )
        res2 = angle_moment_mismatch(density_from_pure(pair), theta0, 2, force=force)
        ok = ok and res2.gap > QP2_MIN
        detail += f"; pair p=2 gap = {res2.gap:.3e} (must exceed {QP2_MIN:g})"
    return CheckResult("q-moment", ok, detail)


@_guarded
def _check_operator_completeness(suite, cutoff, theta0, force):
    m_count = max(4, 2 * cutoff + 2)
    grid = PhaseGrid(theta0, m_count)
    total = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for theta in grid.samples:
        total += phase_operator_at(float(theta), cutoff).elems
    total *= grid.spacing
    worst = 0.0
    for _, psi in suite:
        rho = density_from_pure(psi)
        worst = max(worst, abs(complex(np.sum(rho.elems * total.T)) - 1.0))
    return CheckResult(
        "operator-completeness",
        worst <= COMPLETENESS_TOL,
        f"max |Tr[rho integral] - 1| = {worst:.3e} (gate {COMPLETENESS_TOL:g})",
    )


def run_checks(
    cutoff: int,
    theta0: float = -math.pi,
    force_method: str | None = None,
    seed: int = 20260825,
) -> list[CheckResult]:
    """Run the suite at one cutoff; operator-path checks are skipped (reported
    as passed skips) beyond the validated range unless the caller forces them."""
    rng = np.random.default_rng(seed)
    suite = _state_suite(cutoff, rng)
    force = force_method == "operator"
    operator_ok = cutoff <= OPERATOR_PATH_MAX_CUTOFF or force

    results = [_check_radial_normalization(suite, cutoff, theta0)]
    if operator_ok:
        results.append(_check_cross_path(suite, cutoff, theta0, force))
        results.append(_check_covariance(cutoff, theta0, rng, force))
    else:
        results.append(
            CheckResult("cross-path", True, "skipped: operator path beyond validated range")
        )
        results.append(
            CheckResult("covariance", True, "skipped: operator path beyond validated range")
        )
    results.append(_check_weak_equivalence(cutoff, theta0, rng, operator_ok))
    results.append(_check_pb_convergence(cutoff, theta0))
    if operator_ok:
        results.append(_check_q_moment(suite, cutoff, theta0, force))
        results.append(_check_operator_completeness(suite, cutoff, theta0, force))
    else:
        results.append(
            CheckResult("q-moment", True, "skipped: operator path beyond validated range")
        )
        results.append(
            CheckResult(
                "operator-completeness",
                True,
                "skipped: operator path beyond validated range",
            )
        )
    return results

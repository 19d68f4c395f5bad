"""Truncated Fock space: states, density matrices, operators, and ladder algebra.

A truncation at ``cutoff`` N keeps the number states |0>..|N>.  Pure states are
complex amplitude vectors c_0..c_N, density matrices and operators are
(N+1)x(N+1) complex arrays.  Everything here is plain numpy; constructors
validate their invariants once and the resulting objects are treated as
immutable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CutoffMismatchError,
    CutoffTooSmallError,
    DegenerateSuperpositionError,
    StateSpecError,
)

NORM_TOL = 1e-10
DENSITY_HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
OPERATOR_HERMITICITY_TOL = 1e-10
DEFAULT_EPS_TAIL = 1e-10

# Spread of a Poisson photon-number distribution is sqrt(mean); ten standard
# deviations above the mean leaves tail mass far below any eps_tail in use.
_TAIL_SIGMAS = 10.0


@dataclass
class StateVector:
    """Pure state on a truncated Fock space.

    tail_mass is the probability the untruncated parent state (when one is
    known, e.g. a coherent state) carries beyond the cutoff.  normalization is
    set by superpose() to the constant c that rescaled the raw weighted sum.
    """

    cutoff: int
    amps: np.ndarray
    tail_mass: float = 0.0
    normalization: float | None = None

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        if self.amps.shape != (self.cutoff + 1,):
            raise ValueError(
                f"amplitude vector has shape {self.amps.shape}, expected ({self.cutoff + 1},)"
            )
        norm = float(np.linalg.norm(self.amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {NORM_TOL}")

    @property
    def dim(self) -> int:
        return self.cutoff + 1


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace matrix on the truncated space."""

    cutoff: int
    elems: np.ndarray

    def __post_init__(self):
        self.elems = np.asarray(self.elems, dtype=complex)
        n = self.cutoff + 1
        if self.elems.shape != (n, n):
            raise ValueError(f"density matrix shape {self.elems.shape}, expected ({n}, {n})")
        herm_dev = float(np.max(np.abs(self.elems - self.elems.conj().T)))
        if herm_dev > DENSITY_HERMITICITY_TOL:
            raise ValueError(f"density matrix Hermiticity deviation {herm_dev:g}")
        trace_dev = abs(complex(np.trace(self.elems)) - 1.0)
        if trace_dev > TRACE_TOL:
            raise ValueError(f"density matrix trace deviates from 1 by {trace_dev:g}")

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.elems)[0])


@dataclass
class OperatorMatrix:
    """General operator on the truncated space.

    hermitian_hint is only set by builders that verified Hermiticity; the
    constructor re-checks it so a wrong hint cannot survive construction.
    """

    cutoff: int
    elems: np.ndarray
    hermitian_hint: bool = False
    build_info: dict | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.elems = np.asarray(self.elems, dtype=complex)
        n = self.cutoff + 1
        if self.elems.shape != (n, n):
            raise ValueError(f"operator shape {self.elems.shape}, expected ({n}, {n})")
        if self.hermitian_hint:
            dev = float(np.max(np.abs(self.elems - self.elems.conj().T)))
            if dev > OPERATOR_HERMITICITY_TOL:
                raise ValueError(f"hermitian_hint set but deviation is {dev:g}")

    @property
    def dim(self) -> int:
        return self.cutoff + 1


@dataclass
class LadderSet:
    """Annihilation, creation and number operators sharing one cutoff."""

    cutoff: int
    a: OperatorMatrix
    a_dag: OperatorMatrix
    n_op: OperatorMatrix


def make_number_state(n: int, cutoff: int) -> StateVector:
    """|n> embedded at the given cutoff."""
    if n < 0:
        raise ValueError("photon number must be >= 0")
    if n > cutoff:
        raise CutoffTooSmallError(
            f"number state |{n}> does not fit at cutoff {cutoff}", suggested_cutoff=n
        )
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[n] = 1.0
    return StateVector(cutoff, amps)


def coherent_minimal_cutoff(alpha: complex) -> int:
    """Smallest truncation estimated adequate for |alpha> (mean + 10 sigma)."""
    mean = abs(alpha) ** 2
    return int(math.ceil(mean + _TAIL_SIGMAS * math.sqrt(mean))) if mean > 0 else 0


def make_coherent_state(alpha: complex, cutoff: int, eps_tail: float = DEFAULT_EPS_TAIL) -> StateVector:
    """Truncated coherent state |alpha>, renormalized on the kept levels.

    Amplitudes are assembled in log space, log|c_n| = -|alpha|^2/2
    + n log|alpha| - (1/2) log n!, so large photon numbers neither overflow
    nor underflow prematurely.  If the truncated tail mass reaches eps_tail
    the constructor refuses and names an adequate cutoff.
    """
    alpha = complex(alpha)
    n = np.arange(cutoff + 1)
    if alpha == 0:
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[0] = 1.0
        return StateVector(cutoff, amps)
    mean = abs(alpha) ** 2
    log_fact = np.array([math.lgamma(k + 1.0) for k in range(cutoff + 1)])
    log_mag = -mean / 2.0 + n * math.log(abs(alpha)) - 0.5 * log_fact
    phases = np.exp(1j * np.angle(alpha) * n)
    amps = np.exp(log_mag) * phases
    kept = float(np.sum(np.abs(amps) ** 2))
    tail = max(0.0, 1.0 - kept)
    if tail >= eps_tail:
        needed = coherent_minimal_cutoff(alpha)
        raise CutoffTooSmallError(
            f"coherent state alpha={alpha} keeps tail mass {tail:.3e} >= {eps_tail:.1e} "
            f"at cutoff {cutoff}; use cutoff >= {needed}",
            suggested_cutoff=needed,
        )
    amps = amps / math.sqrt(kept)
    return StateVector(cutoff, amps, tail_mass=tail)


def superpose(terms) -> StateVector:
    """Normalized weighted superposition sum_i w_i |psi_i>.

    terms is an iterable of (weight, StateVector) with a shared cutoff.  The
    returned state records the rescaling constant c = 1/||sum w_i psi_i|| in
    its normalization field.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("superpose needs at least one term")
    cutoff = terms[0][1].cutoff
    for _, psi in terms:
        if psi.cutoff != cutoff:
            raise CutoffMismatchError("superposition terms must share a cutoff")
    raw = np.zeros(cutoff + 1, dtype=complex)
    for w, psi in terms:
        raw = raw + complex(w) * psi.amps
    norm = float(np.linalg.norm(raw))
    if norm <= 1e-12:
        raise DegenerateSuperpositionError("weighted sum has numerically zero norm")
    c = 1.0 / norm
    tail = max(float(psi.tail_mass) for _, psi in terms)
    return StateVector(cutoff, raw * c, tail_mass=tail, normalization=c)


def ladder_matrices(cutoff: int) -> LadderSet:
    """Truncated a, a^dag and N = a^dag a.

    N is built as exact diag(0..cutoff); on the truncated space that agrees
    with the matrix product a^dag a to one ulp per entry.
    """
    n = cutoff + 1
    a = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        a[k - 1, k] = math.sqrt(k)
    a_dag = a.conj().T.copy()
    n_op = np.diag(np.arange(n, dtype=float)).astype(complex)
    return LadderSet(
        cutoff,
        a=OperatorMatrix(cutoff, a),
        a_dag=OperatorMatrix(cutoff, a_dag),
        n_op=OperatorMatrix(cutoff, n_op, hermitian_hint=True),
    )


def phase_conjugate(op: OperatorMatrix, theta: float) -> OperatorMatrix:
    """Exact matrix form of e^{i N theta} A e^{-i N theta}.

    Element-wise B_jk = e^{i (j-k) theta} A_jk; never a matrix exponential.
    For Hermitian input the result is assembled from the lower triangle so
    Hermiticity survives bit-exactly (a plain elementwise product drifts by
    one ulp per element, which matters when elements span many decades).
    """
    n = np.arange(op.cutoff + 1)
    p = np.exp(1j * theta * n)
    phases = p[:, None] * p.conj()[None, :]
    out = phases * op.elems
    if op.hermitian_hint:
        low = np.tril(out, -1)
        out = low + low.conj().T + np.diag(np.diag(op.elems).real)
    return OperatorMatrix(op.cutoff, out, hermitian_hint=op.hermitian_hint)


def phase_shift_state(psi: StateVector, phi: float) -> StateVector:
    """e^{i N phi} |psi>: amplitude n picks up e^{i n phi}."""
    n = np.arange(psi.cutoff + 1)
    return StateVector(
        psi.cutoff,
        psi.amps * np.exp(1j * phi * n),
        tail_mass=psi.tail_mass,
        normalization=psi.normalization,
    )


def density_from_pure(psi: StateVector) -> DensityMatrix:
    """|psi><psi| on the truncated space."""
    return DensityMatrix(psi.cutoff, np.outer(psi.amps, psi.amps.conj()))


def expectation(op: OperatorMatrix, rho: DensityMatrix) -> complex:
    """Tr[rho A].  Complex in general; real to ~1e-10 when both are Hermitian."""
    if op.cutoff != rho.cutoff:
        raise CutoffMismatchError(
            f"operator cutoff {op.cutoff} != density cutoff {rho.cutoff}"
        )
    return complex(np.sum(rho.elems * op.elems.T))


# ---------------------------------------------------------------------------
# File formats.
#
# Pure state file: header "#cutoff=N", then one "index,re,im" line per kept
# amplitude.  Matrix file: header "#cutoff=N", then "j,k,re,im" rows.  Both
# UTF-8, both round-trip at 17 significant digits.
# ---------------------------------------------------------------------------


def save_state_file(psi: StateVector, path) -> None:
    lines = [f"#cutoff={psi.cutoff}"]
    for i, c in enumerate(psi.amps):
        lines.append(f"{i},{c.real:.17g},{c.imag:.17g}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_matrix_lines(path, n_indices):
    """Shared reader for the state/matrix formats; yields (lineno, ints, re, im)."""
    cutoff = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = re.fullmatch(r"#\s*cutoff\s*=\s*(\d+)", line)
                if m:
                    cutoff = int(m.group(1))
                continue
            parts = line.split(",")
            if len(parts) != n_indices + 2:
                raise StateSpecError(f"{path}: line {lineno}: expected {n_indices + 2} fields")
            try:
                idx = [int(p) for p in parts[:n_indices]]
                re_v = float(parts[n_indices])
                im_v = float(parts[n_indices + 1])
            except ValueError:
                raise StateSpecError(f"{path}: line {lineno}: malformed number") from None
            rows.append((lineno, idx, re_v, im_v))
    if cutoff is None:
        raise StateSpecError(f"{path}: missing '#cutoff=N' header")
    return cutoff, rows


def load_state_file(path) -> StateVector:
    """Read an "index,re,im" amplitude file; unlisted indices are zero."""
    cutoff, rows = _parse_matrix_lines(path, 1)
    amps = np.zeros(cutoff + 1, dtype=complex)
    for lineno, (i,), re_v, im_v in rows:
        if not 0 <= i <= cutoff:
            raise StateSpecError(f"{path}: line {lineno}: index {i} outside 0..{cutoff}")
        amps[i] = re_v + 1j * im_v
    norm = float(np.linalg.norm(amps))
    if norm <= 1e-12:
        raise StateSpecError(f"{path}: amplitudes have zero norm")
    return StateVector(cutoff, amps / norm)


def save_operator_file(op: OperatorMatrix, path) -> None:
    lines = [f"#cutoff={op.cutoff}"]
    for j in range(op.dim):
        for k in range(op.dim):
            v = op.elems[j, k]
            lines.append(f"{j},{k},{v.real:.17g},{v.imag:.17g}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _load_matrix(path):
    cutoff, rows = _parse_matrix_lines(path, 2)
    elems = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for lineno, (j, k), re_v, im_v in rows:
        if not (0 <= j <= cutoff and 0 <= k <= cutoff):
            raise StateSpecError(f"{path}: line {lineno}: index ({j},{k}) outside 0..{cutoff}")
        elems[j, k] = re_v + 1j * im_v
    return cutoff, elems


def load_operator_file(path) -> OperatorMatrix:
    cutoff, elems = _load_matrix(path)
    return OperatorMatrix(cutoff, elems)


def load_density_file(path) -> DensityMatrix:
    """Ingest a density matrix from the matrix dump format, fully validated."""
    cutoff, elems = _load_matrix(path)
    try:
        rho = DensityMatrix(cutoff, elems)
    except ValueError as exc:
        raise StateSpecError(f"{path}: {exc}") from None
    if rho.min_eigenvalue() < -1e-10:
        raise StateSpecError(f"{path}: matrix is not positive semidefinite")
    return rho


# ---------------------------------------------------------------------------
# State spec mini-format:
#   fock:n=2 | coherent:alpha=-2 | pair:n=1 | cat:alpha=-2,beta=8
#   super:W1*S1+W2*S2   (complex weights "a+bi"; sub-specs must not be super)
#   file:path/to.state
# ---------------------------------------------------------------------------


def parse_complex(text: str) -> complex:
    """Parse "a+bi" style literals ("-2", "1i", "0.5-0.25i")."""
    t = text.strip().replace(" ", "")
    if not t:
        raise StateSpecError("empty complex literal")
    try:
        return complex(t.replace("i", "j").replace("I", "j"))
    except ValueError:
        raise StateSpecError(f"bad complex literal {text!r}") from None


def _split_params(body: str, spec: str) -> dict:
    params = {}
    for piece in body.split(","):
        if "=" not in piece:
            raise StateSpecError(f"bad state spec {spec!r}: expected key=value, got {piece!r}")
        key, val = piece.split("=", 1)
        params[key.strip()] = val.strip()
    return params


def _split_super_terms(body: str):
    """Split "w1*S1+w2*S2+..." into (weight, subspec) pairs.

    Weights may themselves contain '+' (complex literals), so the boundary is
    the leftmost '+' whose whole suffix parses as one complex literal; a '+'
    inside a state parameter (e.g. a complex alpha) leaves a suffix that does
    not parse and is skipped.
    """
    chunks = body.split("*")
    if len(chunks) < 2:
        raise StateSpecError(f"super spec needs weight*state terms, got {body!r}")
    weights = [chunks[0]]
    states = []
    for middle in chunks[1:-1]:
        split_at = None
        for pos in range(1, len(middle)):
            if middle[pos] != "+":
                continue
            try:
                parse_complex(middle[pos + 1 :])
            except StateSpecError:
                continue
            split_at = pos
            break
        if split_at is None:
            raise StateSpecError(f"cannot split super term boundary in {middle!r}")
        states.append(middle[:split_at])
        weights.append(middle[split_at + 1 :])
    states.append(chunks[-1])
    return [(parse_complex(w), s) for w, s in zip(weights, states)]


def required_cutoff(spec: str) -> int:
    """Minimal adequate truncation estimate for a state spec."""
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "fock":
        return int(_split_params(body, spec).get("n", "0"))
    if kind == "pair":
        return 2 * int(_split_params(body, spec).get("n", "1"))
    if kind == "coherent":
        return coherent_minimal_cutoff(parse_complex(_split_params(body, spec)["alpha"]))
    if kind == "cat":
        params = _split_params(body, spec)
        return max(
            coherent_minimal_cutoff(parse_complex(params["alpha"])),
            coherent_minimal_cutoff(parse_complex(params["beta"])),
        )
    if kind == "super":
        return max(required_cutoff(s) for _, s in _split_super_terms(body))
    if kind == "file":
        cutoff, _ = _parse_matrix_lines(body.strip(), 1)
        return cutoff
    raise StateSpecError(f"unknown state kind {kind!r} in {spec!r}")


def build_state(
    spec: str,
    cutoff: int | None = None,
    eps_tail: float = DEFAULT_EPS_TAIL,
    _allow_super: bool = True,
) -> StateVector:
    """Build the state named by a spec string at the given cutoff.

    With cutoff=None the minimal adequate estimate from required_cutoff() is
    used.  Raises StateSpecError for grammar problems and CutoffTooSmallError
    when the requested truncation cannot hold the state.
    """
    spec = spec.strip()
    kind, sep, body = spec.partition(":")
    kind = kind.strip().lower()
    if not sep:
        raise StateSpecError(f"state spec {spec!r} is missing ':'")
    if cutoff is None:
        cutoff = required_cutoff(spec)

    if kind == "fock":
        params = _split_params(body, spec)
        try:
            n = int(params["n"])
        except (KeyError, ValueError):
            raise StateSpecError(f"fock spec needs integer n, got {spec!r}") from None
        return make_number_state(n, cutoff)

    if kind == "pair":
        params = _split_params(body, spec)
        try:
            n = int(params["n"])
        except (KeyError, ValueError):
            raise StateSpecError(f"pair spec needs integer n, got {spec!r}") from None
        if n < 1:
            raise StateSpecError("pair spec needs n >= 1")
        return superpose(
            [(1.0, make_number_state(0, cutoff)), (1.0, make_number_state(2 * n, cutoff))]
        )

    if kind == "coherent":
        params = _split_params(body, spec)
        if "alpha" not in params:
            raise StateSpecError(f"coherent spec needs alpha, got {spec!r}")
        return make_coherent_state(parse_complex(params["alpha"]), cutoff, eps_tail)

    if kind == "cat":
        params = _split_params(body, spec)
        if "alpha" not in params or "beta" not in params:
            raise StateSpecError(f"cat spec needs alpha and beta, got {spec!r}")
        return superpose(
            [
                (1.0, make_coherent_state(parse_complex(params["alpha"]), cutoff, eps_tail)),
                (1.0, make_coherent_state(parse_complex(params["beta"]), cutoff, eps_tail)),
            ]
        )

    if kind == "super":
        if not _allow_super:
            raise StateSpecError("super specs cannot be nested")
        terms = [
            (w, build_state(s, cutoff, eps_tail, _allow_super=False))
            for w, s in _split_super_terms(body)
        ]
        return superpose(terms)

    if kind == "file":
        psi = load_state_file(body.strip())
        if cutoff == psi.cutoff:
            return psi
        if cutoff > psi.cutoff:
            amps = np.zeros(cutoff + 1, dtype=complex)
            amps[: psi.dim] = psi.amps
            return StateVector(cutoff, amps, tail_mass=psi.tail_mass)
        raise CutoffTooSmallError(
            f"state file holds cutoff {psi.cutoff}, cannot truncate to {cutoff}",
            suggested_cutoff=psi.cutoff,
        )

    raise StateSpecError(f"unknown state kind {kind!r} in {spec!r}")

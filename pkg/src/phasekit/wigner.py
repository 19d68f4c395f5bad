"""Wigner function in polar form and its radial integration to a phase density.

Conventions (fixed by the coherent-state direction check in the tests):

  W(r, theta) = sum_{jk} rho_jk K_jk(r, theta)
  K_jk(r, theta) = (2/pi) (-1)^j phi_j^{(k-j)}(4 r^2) e^{i (k-j) theta},  k >= j
  K_kj = conj(K_jk)

with phi_j^{(d)}(x) = sqrt(j!/(j+d)!) x^{d/2} e^{-x/2} L_j^{(d)}(x) the
orthonormalized Laguerre functions, evaluated by a scaled three-term
recurrence that keeps every intermediate O(1).  A coherent state |r e^{i phi}>
then peaks at theta = phi, matching e^{i N theta} advancing phase.

The phase density is P(theta) = integral_0^inf W(r, theta) r dr, evaluated
with a panel Gauss-Legendre rule whose exactness on r^q e^{-2 r^2} is enforced
by an explicit moment sweep at construction time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import KernelInconsistencyError, QuadratureConstructionError
from .fock import DensityMatrix

TWO_PI = 2.0 * math.pi

DISTRIBUTION_KINDS = frozenset(
    {"wigner_radial", "wigner_operator", "pegg_barnett", "closed_form"}
)

# |Im| above this in a should-be-real quantity means a convention bug, not noise.
IMAG_RESIDUE_LIMIT = 1e-8

_SWEEP_REL_TOL = 1e-10
_PANEL_WIDTH = 0.5
_PANEL_POINTS = 16


@dataclass
class PhaseGrid:
    """M uniform angles theta_i = theta0 + 2 pi i / M, i = 0..M-1."""

    theta0: float
    count: int

    def __post_init__(self):
        if self.count < 4:
            raise ValueError("phase grid needs at least 4 samples")

    @property
    def spacing(self) -> float:
        return TWO_PI / self.count

    @property
    def samples(self) -> np.ndarray:
        return self.theta0 + TWO_PI * np.arange(self.count) / self.count


@dataclass
class PhaseDistribution:
    """Sampled phase density of one kind on a PhaseGrid."""

    grid: PhaseGrid
    values: np.ndarray
    kind: str

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in DISTRIBUTION_KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.values.shape != (self.grid.count,):
            raise ValueError("values length must match the grid")

    def integral(self) -> float:
        """Periodic rectangle rule over one full period."""
        return float(self.values.sum() * self.grid.spacing)


@dataclass
class RadialQuadrature:
    """Nodes/weights for integral_0^{r_max} f(r) dr, exact on r^q e^{-2 r^2}."""

    nodes: np.ndarray
    weights: np.ndarray
    r_max: float
    order: int


def _log_gauss_moment(q: int) -> float:
    """log of integral_0^inf r^q e^{-2 r^2} dr = 2^{-(q+3)/2} Gamma((q+1)/2)."""
    return -0.5 * (q + 3) * math.log(2.0) + math.lgamma(0.5 * (q + 1))


def gauss_radial_moment(q: int) -> float:
    return math.exp(_log_gauss_moment(q))


@lru_cache(maxsize=32)
def build_radial_rule(cutoff: int) -> RadialQuadrature:
    """Panel Gauss-Legendre rule on [0, r_max] for the Wigner radial integrals.

    The integrands are polynomials of degree <= 2*cutoff+1 in r (from the
    Laguerre kernels, r measure included) times e^{-2 r^2}.  r_max is pushed
    out until the discarded tail of the worst moment is below 1e-15 relative,
    then a sweep re-checks every moment q = 0..2*cutoff+2 against the analytic
    value at 1e-10 relative.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    q_max = 2 * cutoff + 2
    log_target = _log_gauss_moment(q_max) - 35.0
    r_max = max(3.0, math.sqrt(q_max / 4.0) + 1.0)
    while q_max * math.log(r_max) - 2.0 * r_max * r_max > log_target:
        r_max += 0.25

    n_panels = int(math.ceil(r_max / _PANEL_WIDTH))
    x_ref, w_ref = np.polynomial.legendre.leggauss(_PANEL_POINTS)
    edges = np.linspace(0.0, r_max, n_panels + 1)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        nodes.append(0.5 * (a + b) + half * x_ref)
        weights.append(half * w_ref)
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)

    log_r = np.log(nodes)
    damp = 2.0 * nodes * nodes
    for q in range(q_max + 1):
        log_ref = _log_gauss_moment(q)
        # scaled so every moment is compared as ratio-to-1; safe at any cutoff
        ratio = float(np.dot(weights, np.exp(q * log_r - damp - log_ref)))
        if abs(ratio - 1.0) > _SWEEP_REL_TOL:
            raise QuadratureConstructionError(
                f"radial rule failed moment sweep at q={q}: relative error {abs(ratio - 1.0):.3e}"
            )
    return RadialQuadrature(nodes=nodes, weights=weights, r_max=r_max, order=nodes.size)


def _phi_first(d: int, x: np.ndarray) -> np.ndarray:
    """phi_0^{(d)}(x) = x^{d/2} e^{-x/2} / sqrt(d!), safe for x=0 and large d."""
    x = np.asarray(x, dtype=float)
    if d == 0:
        return np.exp(-0.5 * x)
    out = np.zeros_like(x)
    pos = x > 0.0
    xp = x[pos]
    out[pos] = np.exp(0.5 * (d * np.log(xp) - math.lgamma(d + 1.0)) - 0.5 * xp)
    return out


def _phi_step(j: int, d: int, x: np.ndarray, phi_j: np.ndarray, phi_jm1):
    """One step of the orthonormal Laguerre recurrence: returns phi_{j+1}^{(d)}."""
    num = (2 * j + d + 1 - x) * phi_j
    if j > 0:
        num = num - math.sqrt(j * (j + d)) * phi_jm1
    return num / math.sqrt((j + 1) * (j + d + 1))


def _diagonal_sums(rho_elems: np.ndarray, x: np.ndarray):
    """Per-diagonal kernel contractions of the density matrix.

    Returns (upper, lower): complex arrays of shape (cutoff+1, len(x)) with
      upper[d] = sum_j (-1)^j rho[j, j+d]   phi_j^{(d)}(x)
      lower[d] = sum_j (-1)^j rho[j+d, j]   phi_j^{(d)}(x)
    so that W = (2/pi) sum_d>=1 (upper[d] e^{i d theta} + lower[d] e^{-i d theta})
    + (2/pi) upper[0], without assuming rho is Hermitian.
    """
    dim = rho_elems.shape[0]
    nx = x.size
    upper = np.zeros((dim, nx), dtype=complex)
    lower = np.zeros((dim, nx), dtype=complex)
    signs = np.array([1.0 if j % 2 == 0 else -1.0 for j in range(dim)])
    for d in range(dim):
        phi_prev = None
        phi = _phi_first(d, x)
        for j in range(dim - d):
            coeff = signs[j]
            upper[d] += coeff * rho_elems[j, j + d] * phi
            if d > 0:
                lower[d] += coeff * rho_elems[j + d, j] * phi
            if j < dim - d - 1:
                phi, phi_prev = _phi_step(j, d, x, phi, phi_prev), phi
    return upper, lower


def wigner_eval(rho: DensityMatrix, r: float, theta: float) -> float:
    """W(r, theta) for one density matrix at one polar point."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    x = np.array([4.0 * r * r])
    upper, lower = _diagonal_sums(rho.elems, x)
    d = np.arange(rho.dim)
    phase = np.exp(1j * d * theta)
    total = upper[0, 0]
    total += np.sum(upper[1:, 0] * phase[1:]) + np.sum(lower[1:, 0] * phase[1:].conj())
    total *= 2.0 / math.pi
    if abs(total.imag) > IMAG_RESIDUE_LIMIT:
        raise KernelInconsistencyError(
            f"W({r}, {theta}) has imaginary residue {total.imag:.3e}"
        )
    return float(total.real)


def kernel_matrix(cutoff: int, r: float, theta: float) -> np.ndarray:
    """Dense K_jk(r, theta), mainly for tests; K_kj = conj(K_jk) by construction."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    dim = cutoff + 1
    x = np.array([4.0 * r * r])
    out = np.zeros((dim, dim), dtype=complex)
    for d in range(dim):
        phi_prev = None
        phi = _phi_first(d, x)
        phase = np.exp(1j * d * theta)
        for j in range(dim - d):
            val = (2.0 / math.pi) * (-1.0 if j % 2 else 1.0) * phi[0] * phase
            out[j, j + d] = val
            out[j + d, j] = np.conj(val)
            if j < dim - d - 1:
                phi, phi_prev = _phi_step(j, d, x, phi, phi_prev), phi
    return out


def phase_distribution_radial(
    rho: DensityMatrix, grid: PhaseGrid, rule: RadialQuadrature | None = None
) -> PhaseDistribution:
    """P(theta_i) = sum_q w_q W(r_q, theta_i) r_q on the grid.

    The r factor is the polar measure and is applied here, not baked into the
    rule weights.  The caller attests the state is adequately truncated (the
    coherent/cat constructors already enforce their tail bounds).
    """
    if rule is None:
        rule = build_radial_rule(rho.cutoff)
    upper, lower = _diagonal_sums(rho.elems, 4.0 * rule.nodes * rule.nodes)
    wr = rule.weights * rule.nodes
    h_upper = upper @ wr
    h_lower = lower @ wr
    d = np.arange(1, rho.dim)
    phases = np.exp(1j * np.outer(d, grid.samples))
    vals = h_upper[0] + h_upper[1:] @ phases + h_lower[1:] @ phases.conj()
    vals = vals * (2.0 / math.pi)
    worst = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
    if worst > IMAG_RESIDUE_LIMIT:
        raise KernelInconsistencyError(
            f"radial phase distribution has imaginary residue {worst:.3e}"
        )
    return PhaseDistribution(grid, vals.real, "wigner_radial")

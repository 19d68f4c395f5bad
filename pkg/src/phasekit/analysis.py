"""Phase-covariance scans, the integrated angle operator, and negativity reports.

The angle operator Q = integral theta * op(theta) d theta over one window and
its higher-moment companions M_p = integral theta^p op(theta) d theta have
closed-form elements: conjugation covariance makes op(theta)_jk carry
e^{i (j-k) theta}, so every element is the zero-angle element times

  I_p(q, theta0) = integral_{theta0}^{theta0+2pi} theta^p e^{i q theta} d theta

which integration by parts reduces to I_{p-1}.  A matrix power of Q is *not*
the same as M_p for p > 1; angle_moment_mismatch measures that gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CutoffMismatchError
from .fock import DensityMatrix, OperatorMatrix, expectation
from .phase_operator import (
    OPERATOR_PATH_MAX_CUTOFF,
    _require_validated,
    phase_operator_zero,
)
from .wigner import PhaseDistribution, PhaseGrid

TWO_PI = 2.0 * math.pi

# closed forms are kept only up to the cubic moment
MAX_MOMENT_ORDER = 3

NEGATIVITY_EPS = 1e-12


@dataclass
class MismatchResult:
    """Tr[rho Q^p] against Tr[rho M_p] and their absolute gap."""

    power_path: float
    integral_path: float
    gap: float


@dataclass
class NegativityReport:
    min_value: float
    argmin: float
    negative_fraction: float


def fourier_poly_integral(p: int, q: int, theta0: float) -> complex:
    """I_p(q, theta0) for 0 <= p <= 3 and integer q, in closed form."""
    if not 0 <= p <= MAX_MOMENT_ORDER:
        raise ValueError(f"moment order p={p} outside 0..{MAX_MOMENT_ORDER}")
    if p == 0:
        return complex(TWO_PI) if q == 0 else 0j
    hi = theta0 + TWO_PI
    if q == 0:
        return complex((hi ** (p + 1) - theta0 ** (p + 1)) / (p + 1))
    boundary = np.exp(1j * q * theta0) * (hi**p - theta0**p)
    return complex((boundary - p * fourier_poly_integral(p - 1, q, theta0)) / (1j * q))


def _integral_table(p: int, cutoff: int, theta0: float) -> np.ndarray:
    """I_p(q) for q = -cutoff..cutoff, with I_p(-q) = conj(I_p(q)) exactly."""
    pos = np.array([fourier_poly_integral(p, q, theta0) for q in range(cutoff + 1)])
    table = np.concatenate([np.conj(pos[:0:-1]), pos])
    return table


def moment_matrix(
    p: int,
    theta0: float,
    cutoff: int,
    max_cutoff: int = OPERATOR_PATH_MAX_CUTOFF,
    force: bool = False,
) -> OperatorMatrix:
    """M_p = integral theta^p op(theta) d theta, element-wise closed form."""
    _require_validated(cutoff, max_cutoff, force, f"moment matrix M_{p}")
    a0 = phase_operator_zero(cutoff)
    j = np.arange(cutoff + 1)
    diff = j[:, None] - j[None, :]
    table = _integral_table(p, cutoff, theta0)
    elems = a0.elems * table[diff + cutoff]
    return OperatorMatrix(cutoff, elems, hermitian_hint=True)


def angle_operator(
    theta0: float,
    cutoff: int,
    max_cutoff: int = OPERATOR_PATH_MAX_CUTOFF,
    force: bool = False,
) -> OperatorMatrix:
    """Q = integral theta * op(theta) d theta over [theta0, theta0 + 2 pi)."""
    return moment_matrix(1, theta0, cutoff, max_cutoff=max_cutoff, force=force)


def angle_moment_mismatch(
    rho: DensityMatrix,
    theta0: float,
    p: int,
    max_cutoff: int = OPERATOR_PATH_MAX_CUTOFF,
    force: bool = False,
) -> MismatchResult:
    """Compare Tr[rho Q^p] with Tr[rho M_p]; identical for p=1, not beyond."""
    if not 1 <= p <= MAX_MOMENT_ORDER:
        raise ValueError(f"moment order p={p} outside 1..{MAX_MOMENT_ORDER}")
    q = angle_operator(theta0, rho.cutoff, max_cutoff=max_cutoff, force=force)
    q_power = OperatorMatrix(rho.cutoff, np.linalg.matrix_power(q.elems, p))
    m_p = moment_matrix(p, theta0, rho.cutoff, max_cutoff=max_cutoff, force=force)
    lhs = expectation(q_power, rho).real
    rhs = expectation(m_p, rho).real
    return MismatchResult(power_path=lhs, integral_path=rhs, gap=abs(lhs - rhs))


def weak_equivalence_scan(op_at, cutoff: int, grid: PhaseGrid) -> float:
    """Spread of f(theta_i, phi_j) = Re Tr[op(theta_i) |phi_j><phi_j|/2pi]
    within classes of equal sampled angle difference.

    The grid samples both angles; values are grouped by (i - j) mod M and the
    largest within-class (max - min) is returned.  Functions of theta - phi
    alone score at rounding level; anything else scores large.
    """
    m_count = grid.count
    thetas = grid.samples
    n = np.arange(cutoff + 1)
    v = np.exp(1j * np.outer(n, thetas))
    f = np.empty((m_count, m_count))
    for i, theta in enumerate(thetas):
        op = op_at(float(theta))
        if op.cutoff != cutoff:
            raise CutoffMismatchError("op_at returned a mismatched cutoff")
        f[i] = np.real(np.einsum("nm,nk,km->m", v.conj(), op.elems, v)) / TWO_PI
    idx = np.arange(m_count)
    worst = 0.0
    for c in range(m_count):
        vals = f[idx, (idx - c) % m_count]
        worst = max(worst, float(vals.max() - vals.min()))
    return worst


def negativity_report(dist: PhaseDistribution) -> NegativityReport:
    """Minimum, its angle, and the fraction of samples below -1e-12."""
    i = int(np.argmin(dist.values))
    frac = float(np.count_nonzero(dist.values < -NEGATIVITY_EPS)) / dist.grid.count
    return NegativityReport(
        min_value=float(dist.values[i]),
        argmin=float(dist.grid.samples[i]),
        negative_fraction=frac,
    )

"""Phase operator whose expectation is the radially integrated Wigner density.

On Fock matrix elements the defining double-ladder series collapses to a
finite alternating sum: element (j, k) receives one term per pair (l, m) with

  max(0, k-j) <= l <= k,   0 <= m <= k - l,   n = j - k + 2l,

  term = (-1)^m 2^{m + n/2} Gamma(n/2 + 1)
         / (m! (n-l)! l!) * sqrt(j! k!) / (k - m - l)!

and the angle enters only as the overall factor e^{i (j-k) theta}, so the
operator at any angle is an exact element-wise phase conjugation of the
theta = 0 matrix (cached; the sum is never re-evaluated per angle).

Term magnitudes grow like the trinomial (2+2+1)^min(j,k) while the element
values stay O(1), so high-index elements lose significance in double
precision; the validated cutoff range below bounds where the trace path is
trusted.  Terms are evaluated from log-Gamma tables with explicit signs and
summed exactly with math.fsum.  The substitution l -> n-l maps the (j, k)
term multiset onto the (k, j) one, so only the lower triangle is evaluated
and mirrored; the matrix is Hermitian by construction and loss of
significance is watched through the overflow guard and the cross-path
checks, not through a symmetry residue.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import (
    CancellationOverflowError,
    KernelInconsistencyError,
    OperatorPathUnavailableError,
)
from .fock import DensityMatrix, OperatorMatrix, phase_conjugate
from .wigner import IMAG_RESIDUE_LIMIT, PhaseDistribution, PhaseGrid

OPERATOR_PATH_MAX_CUTOFF = 40

_LN2 = math.log(2.0)


def _ragged_arange(counts: np.ndarray) -> np.ndarray:
    """[0..c0-1, 0..c1-1, ...] for a vector of block lengths."""
    total = int(counts.sum())
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    return np.arange(total) - starts


@lru_cache(maxsize=8)
def _zero_matrix(cutoff: int):
    dim = cutoff + 1
    # log i! for integer i and log Gamma(n/2 + 1) for integer n, precomputed
    log_fact = np.array([math.lgamma(i + 1.0) for i in range(2 * cutoff + 3)])
    log_gamma_half = np.array(
        [math.lgamma(0.5 * n + 1.0) for n in range(2 * cutoff + 1)]
    )
    elems = np.zeros((dim, dim), dtype=complex)
    term_counts = np.zeros((dim, dim), dtype=int)
    abs_sums = np.zeros((dim, dim))
    max_terms = np.zeros((dim, dim))
    for j in range(dim):
        for k in range(j + 1):
            # lower triangle only (j >= k, so l starts at 0); (k, j) is the
            # same real value through the l -> n-l term bijection
            counts = np.arange(k + 1, 0, -1)  # m runs 0..k-l for each l
            ll = np.repeat(np.arange(k + 1), counts)
            mm = _ragged_arange(counts)
            nn = j - k + 2 * ll
            log_mag = (
                (mm + 0.5 * nn) * _LN2
                + log_gamma_half[nn]
                - log_fact[mm]
                - log_fact[ll]
                - log_fact[nn - ll]
                - log_fact[k - mm - ll]
                + 0.5 * (log_fact[j] + log_fact[k])
            )
            mags = np.exp(log_mag)
            if not np.isfinite(mags).all():
                raise CancellationOverflowError(
                    f"element ({j}, {k}) overflowed after {mags.size} terms "
                    f"at cutoff {cutoff}",
                    element=(j, k),
                    term_count=int(mags.size),
                )
            terms = np.where(mm % 2 == 0, mags, -mags)
            value = math.fsum(terms.tolist()) / (2.0 * math.pi)
            elems[j, k] = value
            elems[k, j] = value
            term_counts[j, k] = term_counts[k, j] = terms.size
            abs_sums[j, k] = abs_sums[k, j] = mags.sum()
            mx = mags.max() if mags.size else 0.0
            max_terms[j, k] = max_terms[k, j] = mx

    worst = np.unravel_index(np.argmax(abs_sums), abs_sums.shape)
    info = {
        "worst_element": (int(worst[0]), int(worst[1])),
        "worst_term_count": int(term_counts[worst]),
        "worst_abs_term_sum": float(abs_sums[worst]),
        "worst_max_abs_term": float(max_terms[worst]),
    }

    if not np.isfinite(elems).all():
        bad = np.argwhere(~np.isfinite(elems))[0]
        raise CancellationOverflowError(
            f"element ({bad[0]}, {bad[1]}) overflowed after "
            f"{term_counts[bad[0], bad[1]]} terms at cutoff {cutoff}",
            element=(int(bad[0]), int(bad[1])),
            term_count=int(term_counts[bad[0], bad[1]]),
        )
    elems.setflags(write=False)
    return elems, info


def phase_operator_zero(cutoff: int) -> OperatorMatrix:
    """The theta = 0 operator matrix; every diagonal element is 1/(2 pi)."""
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    elems, info = _zero_matrix(cutoff)
    return OperatorMatrix(cutoff, elems, hermitian_hint=True, build_info=dict(info))


def phase_operator_at(theta: float, cutoff: int) -> OperatorMatrix:
    """Operator at angle theta: exact phase conjugation of the cached zero matrix."""
    op = phase_conjugate(phase_operator_zero(cutoff), theta)
    op.build_info = dict(_zero_matrix(cutoff)[1])
    return op


def _require_validated(cutoff: int, max_cutoff: int, force: bool, what: str):
    if cutoff > max_cutoff and not force:
        raise OperatorPathUnavailableError(
            f"{what} at cutoff {cutoff} exceeds the validated operator-path range "
            f"(<= {max_cutoff}); use the radial path or force the operator path"
        )


def phase_distribution_operator(
    rho: DensityMatrix,
    grid: PhaseGrid,
    max_cutoff: int = OPERATOR_PATH_MAX_CUTOFF,
    force: bool = False,
) -> PhaseDistribution:
    """P(theta_i) = Tr[rho * operator(theta_i)] on the grid.

    The trace is organized as a finite Fourier series: with
    B_jk = rho_jk * A0_kj the coefficient of e^{i d theta} is trace(B, d),
    so the work is one element-wise product plus O(cutoff * M) phases.
    """
    _require_validated(rho.cutoff, max_cutoff, force, "operator-path distribution")
    a0 = phase_operator_zero(rho.cutoff)
    b = rho.elems * a0.elems.T
    offsets = np.arange(-rho.cutoff, rho.cutoff + 1)
    coeffs = np.array([np.trace(b, offset=d) for d in offsets])
    phases = np.exp(1j * np.outer(offsets, grid.samples))
    vals = coeffs @ phases
    worst = float(np.max(np.abs(vals.imag)))
    if worst > IMAG_RESIDUE_LIMIT:
        raise KernelInconsistencyError(
            f"operator-path distribution has imaginary residue {worst:.3e}"
        )
    return PhaseDistribution(grid, vals.real, "wigner_operator")


def pair_coefficient(n: int) -> float:
    """Contrast 2^n n! / sqrt((2n)!) of the (|0> + |2n>)/sqrt(2) density."""
    if n < 1:
        raise ValueError("pair index n must be >= 1")
    return math.exp(n * _LN2 + math.lgamma(n + 1.0) - 0.5 * math.lgamma(2 * n + 1.0))


def pair_state_closed_form(n: int, grid: PhaseGrid) -> PhaseDistribution:
    """Exact phase density (1/2pi) [1 + 2^n n!/sqrt((2n)!) cos(2 n theta)]."""
    vals = (1.0 + pair_coefficient(n) * np.cos(2 * n * grid.samples)) / (2.0 * math.pi)
    return PhaseDistribution(grid, vals, "closed_form")

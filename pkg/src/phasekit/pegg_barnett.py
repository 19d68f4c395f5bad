"""Finite phase-state basis, its Hermitian phase operator, and phase moments.

On a space truncated at s the phase states

  |theta_m> = (s+1)^{-1/2} sum_{n=0}^{s} e^{i n theta_m} |n>,
  theta_m = theta0 + 2 pi m / (s+1),  m = 0..s

form an orthonormal basis.  The phase operator is the spectral sum
sum_m theta_m |theta_m><theta_m|; moments of a state are evaluated through
the overlaps |<theta_m|psi>|^2 (never through matrix powers).  The s -> inf
limit of any moment is the integral of theta^p against the phase density

  P(theta) = (1/2pi) |sum_n c_n e^{-i n theta}|^2,

which is also what the continuum projector pb_projector traces to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CutoffMismatchError
from .fock import DensityMatrix, OperatorMatrix, StateVector
from .wigner import PhaseDistribution, PhaseGrid

TWO_PI = 2.0 * math.pi


@dataclass
class PBBasis:
    """The s+1 phase states of one window [theta0, theta0 + 2 pi)."""

    s: int
    theta0: float
    thetas: np.ndarray
    states: list


@dataclass
class MomentResult:
    """A finite-s spectral moment next to its s -> inf quadrature companion."""

    spectral: float
    integral: float


def pb_basis(s: int, theta0: float) -> PBBasis:
    if s < 0:
        raise ValueError("s must be >= 0")
    m = np.arange(s + 1)
    thetas = theta0 + TWO_PI * m / (s + 1)
    n = np.arange(s + 1)
    amp_matrix = np.exp(1j * np.outer(thetas, n)) / math.sqrt(s + 1)
    states = [StateVector(s, amp_matrix[i]) for i in range(s + 1)]
    return PBBasis(s=s, theta0=theta0, thetas=thetas, states=states)


def pb_density(psi: StateVector, grid: PhaseGrid) -> PhaseDistribution:
    """Phase density sampled on the grid; nonnegative by construction."""
    n = np.arange(psi.cutoff + 1)
    overlaps = np.exp(-1j * np.outer(grid.samples, n)) @ psi.amps
    vals = (np.abs(overlaps) ** 2) / TWO_PI
    return PhaseDistribution(grid, vals, "pegg_barnett")


def pb_density_mixed(rho: DensityMatrix, grid: PhaseGrid) -> PhaseDistribution:
    """Phase density Tr[rho |theta><theta|]/2pi for a general density matrix."""
    n = np.arange(rho.cutoff + 1)
    v = np.exp(1j * np.outer(grid.samples, n))
    vals = np.real(np.einsum("mj,jk,mk->m", v.conj(), rho.elems, v)) / TWO_PI
    return PhaseDistribution(grid, vals, "pegg_barnett")


def pair_pb_closed_form(n: int, grid: PhaseGrid) -> PhaseDistribution:
    """Exact phase density (1 + cos 2n theta)/2pi for (|0> + |2n>)/sqrt(2)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    vals = (1.0 + np.cos(2 * n * grid.samples)) / TWO_PI
    return PhaseDistribution(grid, vals, "closed_form")


def pb_projector(theta: float, cutoff: int) -> OperatorMatrix:
    """Continuum-normalized dyad |theta><theta| / 2pi on the truncated space.

    Tr[rho * pb_projector(theta)] reproduces pb_density at theta exactly.
    """
    v = np.exp(1j * theta * np.arange(cutoff + 1))
    return OperatorMatrix(cutoff, np.outer(v, v.conj()) / TWO_PI, hermitian_hint=True)


def phi_matrix(s: int, theta0: float) -> OperatorMatrix:
    """Matrix of sum_m theta_m |theta_m><theta_m|.

    The element (j, k) depends only on j - k, with the closed forms
    g(0) = theta0 + pi s/(s+1) and g(d) = h e^{i d theta0}/(e^{i d h} - 1),
    h = 2 pi/(s+1); g(-d) = conj(g(d)) keeps the build Hermitian exactly.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    h = TWO_PI / (s + 1)
    g = np.zeros(s + 1, dtype=complex)
    g[0] = theta0 + math.pi * s / (s + 1)
    for d in range(1, s + 1):
        g[d] = h * np.exp(1j * d * theta0) / (np.exp(1j * d * h) - 1.0)
    j = np.arange(s + 1)
    diff = j[:, None] - j[None, :]
    elems = np.where(diff >= 0, g[np.abs(diff)], np.conj(g[np.abs(diff)]))
    return OperatorMatrix(s, elems, hermitian_hint=True)


def _overlap_probs(psi: StateVector, thetas: np.ndarray, s: int) -> np.ndarray:
    n = np.arange(psi.cutoff + 1)
    overlaps = np.exp(-1j * np.outer(thetas, n)) @ psi.amps
    return (np.abs(overlaps) ** 2) / (s + 1)


def _density_at(psi: StateVector, thetas: np.ndarray) -> np.ndarray:
    n = np.arange(psi.cutoff + 1)
    overlaps = np.exp(-1j * np.outer(thetas, n)) @ psi.amps
    return (np.abs(overlaps) ** 2) / TWO_PI


def moment_integral(psi: StateVector, theta0: float, p: int) -> float:
    """integral over [theta0, theta0+2pi] of theta^p P(theta), by panel quadrature.

    Panel count scales with the cutoff so the highest Fourier component of the
    density (frequency 2*cutoff) stays well resolved.
    """
    n_panels = max(64, 4 * (psi.cutoff + 1))
    x_ref, w_ref = np.polynomial.legendre.leggauss(12)
    edges = np.linspace(theta0, theta0 + TWO_PI, n_panels + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    thetas = (centers[:, None] + half * x_ref[None, :]).ravel()
    weights = np.tile(half * w_ref, n_panels)
    dens = _density_at(psi, thetas)
    return float(np.dot(weights, (thetas**p) * dens))


def phi_moment(s: int, theta0: float, psi: StateVector, p: int) -> MomentResult:
    """p-th phase moment: finite-s spectral value plus its limit companion.

    spectral = sum_m theta_m^p |<theta_m|psi>|^2 evaluated through overlaps;
    integral = quadrature of theta^p against the phase density, which is the
    s -> inf limit the spectral value converges to.
    """
    if p < 1:
        raise ValueError("moment order p must be >= 1")
    if psi.cutoff > s:
        raise CutoffMismatchError(f"state cutoff {psi.cutoff} exceeds basis size s={s}")
    m = np.arange(s + 1)
    thetas = theta0 + TWO_PI * m / (s + 1)
    probs = _overlap_probs(psi, thetas, s)
    spectral = float(np.dot(thetas**p, probs))
    return MomentResult(spectral=spectral, integral=moment_integral(psi, theta0, p))

"""Entropic quantities, reported in bits.

Internally everything is accumulated in natural log; division by ln 2
happens once at the reporting boundary.  Infinite relative entropy is a
regular return value, not an error.
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import DEFAULT_FLOOR, DEFAULT_SUPPORT_TOL, eig_hermitian
from .states import DensityMatrix, entanglement_fidelity

LN2 = math.log(2.0)


def fidelity(sigma: DensityMatrix) -> float:
    """Entanglement fidelity <phi_plus| sigma |phi_plus>."""
    k = sigma.dims.d_a
    if sigma.dims.d_b != k:
        raise ValueError("fidelity is defined for equal local dimensions")
    return entanglement_fidelity(sigma.matrix, k)


def shannon_entropy(p: np.ndarray, floor: float = DEFAULT_FLOOR) -> float:
    """Entropy of a probability vector in bits; weights <= floor are skipped."""
    w = np.asarray(p, dtype=float)
    w = w[w > floor]
    if w.size == 0:
        return 0.0
    return max(0.0, float(-(w @ np.log(w)) / LN2))


def von_neumann_entropy(rho: DensityMatrix, floor: float = DEFAULT_FLOOR) -> float:
    """S(rho) = -Tr(rho log2 rho), clamped at zero."""
    return shannon_entropy(eig_hermitian(rho.matrix).eigenvalues, floor)


def entropy_nats(rho_mat: np.ndarray, floor: float = DEFAULT_FLOOR) -> float:
    """-Tr(rho ln rho) of a positive semidefinite matrix."""
    w = eig_hermitian(rho_mat).eigenvalues
    w = w[w > floor]
    if w.size == 0:
        return 0.0
    return float(-(w @ np.log(w)))


def relative_entropy_nats(
    rho_mat: np.ndarray,
    sigma_mat: np.ndarray,
    floor: float = DEFAULT_FLOOR,
    support_tol: float = DEFAULT_SUPPORT_TOL,
) -> float:
    """S(rho||sigma) in nats; +inf when rho leaves the support of sigma.

    The support test is on the eigenvectors of sigma: any direction with
    eigenvalue <= floor carrying rho-weight above ``support_tol`` makes the
    divergence infinite.  Directions below both cutoffs are skipped.
    """
    if rho_mat.shape != sigma_mat.shape:
        raise ValueError(f"shape mismatch: rho {rho_mat.shape}, sigma {sigma_mat.shape}")
    dec = eig_hermitian(sigma_mat)
    s, v = dec.eigenvalues, dec.eigenvectors
    weights = np.real(np.einsum("ij,ik,kj->j", v.conj(), rho_mat, v))
    kernel = s <= floor
    if kernel.any() and float(weights[kernel].max(initial=0.0)) > support_tol:
        return math.inf
    live = ~kernel
    cross = float(weights[live] @ np.log(s[live])) if live.any() else 0.0
    return -entropy_nats(rho_mat, floor) - cross


def relative_entropy(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    floor: float = DEFAULT_FLOOR,
    support_tol: float = DEFAULT_SUPPORT_TOL,
) -> float:
    """Relative entropy S(rho||sigma) = Tr rho (log2 rho - log2 sigma) in bits."""
    if rho.dims != sigma.dims:
        raise ValueError(f"dimension mismatch: rho {rho.dims}, sigma {sigma.dims}")
    value = relative_entropy_nats(rho.matrix, sigma.matrix, floor, support_tol)
    return value if math.isinf(value) else value / LN2

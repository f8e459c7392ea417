"""Dense Hermitian linear algebra for bipartite operators.

All functions work on plain square ``numpy`` arrays in the computational
product basis ``|i>_A |j>_B`` at flat index ``i * d_b + j``.  Bipartite
structure enters only through :class:`BipartiteDims`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_RTOL = 1e-12
DEFAULT_FLOOR = 1e-12
DEFAULT_SUPPORT_TOL = 1e-9
PSD_TOL = 1e-10


class HermiticityError(ValueError):
    """An input that must be Hermitian is not, beyond tolerance."""


class PositivityError(ValueError):
    """An input that must be positive semidefinite has a negative eigenvalue."""


class SupportError(ValueError):
    """The support of rho is not contained in the support of sigma."""


@dataclass(frozen=True)
class BipartiteDims:
    """Local dimensions (d_a, d_b) of a bipartite system."""

    d_a: int
    d_b: int

    def __post_init__(self) -> None:
        if self.d_a < 1 or self.d_b < 1:
            raise ValueError(f"local dimensions must be positive, got ({self.d_a}, {self.d_b})")

    @property
    def total(self) -> int:
        return self.d_a * self.d_b


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Spectral data of a Hermitian matrix: ascending real eigenvalues and
    a unitary whose columns are the matching eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def hermitianize(m: np.ndarray) -> np.ndarray:
    """Average away the anti-Hermitian rounding residue of ``m``."""
    return (m + m.conj().T) / 2.0


def check_square(m: np.ndarray, what: str = "matrix") -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{what} must be square, got shape {a.shape}")
    return a


def require_hermitian(m: np.ndarray, rtol: float = HERMITIAN_RTOL, what: str = "matrix") -> np.ndarray:
    a = check_square(m, what)
    dev = float(np.linalg.norm(a - a.conj().T))
    scale = max(1.0, float(np.linalg.norm(a)))
    if dev > rtol * scale:
        raise HermiticityError(f"{what} is not Hermitian: deviation {dev:.3e} exceeds {rtol:.1e} * scale")
    return a


def eig_hermitian(m: np.ndarray, rtol: float = HERMITIAN_RTOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Rejects non-Hermitian input instead of silently symmetrizing it.
    """
    a = require_hermitian(m, rtol)
    w, v = np.linalg.eigh(hermitianize(a))
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def exp_hermitian(m: np.ndarray) -> np.ndarray:
    """Matrix exponential of a Hermitian matrix via its spectral form."""
    dec = eig_hermitian(m)
    w, v = np.exp(dec.eigenvalues), dec.eigenvectors
    return hermitianize((v * w) @ v.conj().T)


def matrix_log(m: np.ndarray, floor: float = DEFAULT_FLOOR, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Natural matrix logarithm of a positive semidefinite matrix.

    Eigenvalues are clamped below at ``floor`` so boundary states stay
    representable; an eigenvalue under ``-psd_tol`` is a domain error.
    """
    dec = eig_hermitian(m)
    if dec.eigenvalues[0] < -psd_tol:
        raise PositivityError(
            f"matrix_log needs a positive semidefinite input, min eigenvalue {dec.eigenvalues[0]:.3e}"
        )
    w = np.log(np.maximum(dec.eigenvalues, floor))
    v = dec.eigenvectors
    return hermitianize((v * w) @ v.conj().T)


def divided_difference_log(s: np.ndarray, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    """Table of first divided differences of ln over the clamped values ``s``.

    Entry (i, j) is (ln s_i - ln s_j) / (s_i - s_j), with the diagonal limit
    1 / s_i.  Evaluated through atanh of the relative gap, which is accurate
    for coincident and for widely separated values alike.
    """
    sc = np.maximum(np.asarray(s, dtype=float), floor)
    avg = (sc[:, None] + sc[None, :]) / 2.0
    r = (sc[:, None] - sc[None, :]) / (2.0 * avg)
    ratio = np.ones_like(r)
    big = np.abs(r) > 1e-7
    ratio[big] = np.arctanh(r[big]) / r[big]
    return ratio / avg


def dd_gradient(
    rho: np.ndarray,
    sigma: np.ndarray,
    floor: float = DEFAULT_FLOOR,
    support_tol: float = DEFAULT_SUPPORT_TOL,
) -> np.ndarray:
    """Gradient of sigma -> Tr(rho ln sigma) as a Hermitian matrix.

    In the eigenbasis of sigma the gradient is rho entrywise-scaled by the
    divided differences of ln; it reduces to rho @ inv(sigma) whenever rho
    and sigma commute.  Requires supp(rho) inside supp(sigma): if any
    eigenvector of sigma with eigenvalue <= floor carries rho-weight above
    ``support_tol``, raises :class:`SupportError`.
    """
    r = require_hermitian(rho, what="rho")
    dec = eig_hermitian(sigma)
    if r.shape != sigma.shape:
        raise ValueError(f"shape mismatch: rho {r.shape}, sigma {sigma.shape}")
    s, v = dec.eigenvalues, dec.eigenvectors
    rho_t = v.conj().T @ r @ v
    kernel = s <= floor
    if kernel.any():
        weight = float(np.max(np.real(np.diag(rho_t))[kernel]))
        if weight > support_tol:
            raise SupportError(
                f"rho has weight {weight:.3e} on the null space of sigma (tol {support_tol:.1e})"
            )
    f = divided_difference_log(s, floor)
    if kernel.any():
        f[np.outer(kernel, kernel)] = 0.0
    g = v @ (rho_t * f) @ v.conj().T
    return hermitianize(g)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, (A kron B)[(i*db+k),(j*db+l)] = A[i,j] B[k,l]."""
    return np.kron(np.asarray(a), np.asarray(b))


def partial_transpose(m: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Transpose the B factor: out[(i,l),(k,j)] = m[(i,j),(k,l)]."""
    a = check_square(m)
    da, db = dims.d_a, dims.d_b
    if a.shape[0] != dims.total:
        raise ValueError(f"matrix of size {a.shape[0]} does not match dims {da}x{db}")
    return a.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(dims.total, dims.total)


def partial_trace(m: np.ndarray, dims: BipartiteDims, side: str) -> np.ndarray:
    """Trace out one factor; ``side`` names the factor that is removed."""
    a = check_square(m)
    da, db = dims.d_a, dims.d_b
    if a.shape[0] != dims.total:
        raise ValueError(f"matrix of size {a.shape[0]} does not match dims {da}x{db}")
    r = a.reshape(da, db, da, db)
    if side == "A":
        return np.einsum("ijil->jl", r)
    if side == "B":
        return np.einsum("ijkj->ik", r)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def tensor_bipartite(
    a: np.ndarray, dims_a: BipartiteDims, b: np.ndarray, dims_b: BipartiteDims
) -> tuple[np.ndarray, BipartiteDims]:
    """Tensor product of two bipartite operators, reordered so the joint
    bipartition is (A A') vs (B B') in lexicographic product order."""
    ka = check_square(a)
    kb = check_square(b)
    if ka.shape[0] != dims_a.total or kb.shape[0] != dims_b.total:
        raise ValueError("operator sizes do not match their stated dims")
    big = np.kron(ka, kb)
    shape = (dims_a.d_a, dims_a.d_b, dims_b.d_a, dims_b.d_b)
    n = dims_a.total * dims_b.total
    big = big.reshape(shape + shape).transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(n, n)
    return big, BipartiteDims(dims_a.d_a * dims_b.d_a, dims_a.d_b * dims_b.d_b)

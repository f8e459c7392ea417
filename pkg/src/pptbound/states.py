"""Bipartite state families, group twirls, and the non-additivity pair.

Constructors return :class:`DensityMatrix` values that already satisfy the
trace, Hermiticity, and positivity invariants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iterproduct

import numpy as np

from .linalg import (
    BipartiteDims,
    check_square,
    hermitianize,
    require_hermitian,
    tensor_bipartite,
)

TRACE_TOL = 1e-12
EIG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A bipartite density matrix together with its local dimensions."""

    matrix: np.ndarray
    dims: BipartiteDims

    @property
    def dim(self) -> int:
        return self.dims.total

    def validate(
        self,
        trace_tol: float = TRACE_TOL,
        eig_tol: float = EIG_TOL,
        herm_rtol: float = 1e-12,
    ) -> None:
        """Raise ValueError naming the first violated invariant, if any."""
        m = check_square(self.matrix, "density matrix")
        if m.shape[0] != self.dims.total:
            raise ValueError(
                f"density matrix size {m.shape[0]} does not match dims {self.dims.d_a}x{self.dims.d_b}"
            )
        require_hermitian(m, herm_rtol, "density matrix")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace invariant violated: trace = {tr:.15g}")
        low = float(np.linalg.eigvalsh(hermitianize(m))[0])
        if low < -eig_tol:
            raise ValueError(f"positivity invariant violated: min eigenvalue = {low:.3e}")


def density_matrix(matrix: np.ndarray, dims: BipartiteDims | None = None) -> DensityMatrix:
    """Checked constructor; with ``dims`` omitted, assumes equal local factors."""
    m = np.asarray(matrix, dtype=complex)
    m = check_square(m, "density matrix")
    if dims is None:
        k = math.isqrt(m.shape[0])
        if k * k != m.shape[0]:
            raise ValueError(f"cannot infer square bipartition from size {m.shape[0]}")
        dims = BipartiteDims(k, k)
    dm = DensityMatrix(matrix=m, dims=dims)
    dm.validate()
    return dm


def phi_plus(k: int) -> np.ndarray:
    """Maximally entangled vector (1/sqrt(k)) sum_i |ii> on a k x k system."""
    if k < 2:
        raise ValueError(f"need local dimension >= 2, got {k}")
    v = np.zeros(k * k, dtype=complex)
    v[:: k + 1] = 1.0 / math.sqrt(k)
    return v


def max_entangled_projector(k: int) -> np.ndarray:
    v = phi_plus(k)
    return np.outer(v, v.conj())


def entanglement_fidelity(matrix: np.ndarray, k: int) -> float:
    """Overlap <phi_plus| M |phi_plus> of a Hermitian matrix with the
    maximally entangled state."""
    v = phi_plus(k)
    return float(np.real(np.vdot(v, matrix @ v)))


def isotropic(k: int, f: float) -> DensityMatrix:
    """Isotropic state with entanglement fidelity ``f`` on a k x k system."""
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {f}")
    p = max_entangled_projector(k)
    eye = np.eye(k * k, dtype=complex)
    m = f * p + (1.0 - f) * (eye - p) / (k * k - 1)
    return DensityMatrix(matrix=m, dims=BipartiteDims(k, k))


@dataclass(frozen=True)
class AbelianGroup:
    """Finite abelian group as a product of cyclic factors Z_n1 x ... x Z_nk."""

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.orders or any(n < 1 for n in self.orders):
            raise ValueError(f"cyclic orders must be positive, got {self.orders}")

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    def elements(self) -> list[tuple[int, ...]]:
        """All group elements in lexicographic order."""
        return list(iterproduct(*(range(n) for n in self.orders)))

    def index(self, g: tuple[int, ...]) -> int:
        idx = 0
        for gi, n in zip(g, self.orders):
            idx = idx * n + (gi % n)
        return idx

    def subtract(self, g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((gi - hi) % n for gi, hi, n in zip(g, h, self.orders))

    def character(self, a: tuple[int, ...], h: tuple[int, ...]) -> complex:
        """Character chi_a evaluated at h: exp(2 pi i sum_j a_j h_j / n_j)."""
        phase = sum(aj * hj / n for aj, hj, n in zip(a, h, self.orders))
        return complex(np.exp(2j * math.pi * phase))


@dataclass(frozen=True)
class BellLabel:
    """Label (g, chi) of a generalized Bell vector: a shift g and a character
    exponent tuple chi, both componentwise residues for the group orders."""

    g: tuple[int, ...]
    chi: tuple[int, ...]


Z2 = AbelianGroup((2,))


def bell_labels(group: AbelianGroup) -> list[BellLabel]:
    """Labels in the lexicographic (g, chi) order used by the basis."""
    els = group.elements()
    return [BellLabel(g=g, chi=a) for g in els for a in els]


def generalized_bell_basis(group: AbelianGroup) -> np.ndarray:
    """Orthonormal Bell basis for a |G| x |G| system, one column per label.

    Column (g, chi) is (1/sqrt|G|) sum_h conj(chi(h)) |h, h - g>, with
    columns ordered as in :func:`bell_labels`.
    """
    n = group.size
    els = group.elements()
    basis = np.zeros((n * n, n * n), dtype=complex)
    col = 0
    for g in els:
        for a in els:
            for h in els:
                row = group.index(h) * n + group.index(group.subtract(h, g))
                basis[row, col] = np.conj(group.character(a, h)) / math.sqrt(n)
            col += 1
    return basis


def shift_operator(group: AbelianGroup, g: tuple[int, ...]) -> np.ndarray:
    """Permutation X(g) with X(g)|h> = |h + g>."""
    n = group.size
    m = np.zeros((n, n), dtype=complex)
    for h in group.elements():
        shifted = tuple((hi + gi) % order for hi, gi, order in zip(h, g, group.orders))
        m[group.index(shifted), group.index(h)] = 1.0
    return m


def phase_operator(group: AbelianGroup, a: tuple[int, ...]) -> np.ndarray:
    """Diagonal Z(chi_a) with Z|h> = chi_a(h) |h>."""
    diag = [group.character(a, h) for h in group.elements()]
    return np.diag(np.asarray(diag, dtype=complex))


def bell_diagonal(p: np.ndarray) -> DensityMatrix:
    """Mixture of the four Z_2 Bell projectors with weights ``p``, ordered
    (g, chi) = (0,0), (0,1), (1,0), (1,1)."""
    w = np.asarray(p, dtype=float)
    if w.shape != (4,):
        raise ValueError(f"need 4 weights, got shape {w.shape}")
    if w.min() < -1e-12 or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError(f"weights must form a probability vector, got {w}")
    basis = generalized_bell_basis(Z2)
    m = (basis * np.clip(w, 0.0, None)) @ basis.conj().T
    return DensityMatrix(matrix=hermitianize(m), dims=BipartiteDims(2, 2))


def max_correlated(alpha: np.ndarray) -> DensityMatrix:
    """Maximally correlated state sum_ij alpha_ij |ii><jj| from a density
    matrix ``alpha`` on the single-party space."""
    a = np.asarray(alpha, dtype=complex)
    a = require_hermitian(a, 1e-9, "alpha")
    k = a.shape[0]
    if abs(np.trace(a).real - 1.0) > 1e-9 or abs(np.trace(a).imag) > 1e-9:
        raise ValueError(f"alpha must have unit trace, got {np.trace(a):.12g}")
    if float(np.linalg.eigvalsh(hermitianize(a))[0]) < -1e-9:
        raise ValueError("alpha must be positive semidefinite")
    m = np.zeros((k * k, k * k), dtype=complex)
    diag_idx = np.arange(k) * (k + 1)
    m[np.ix_(diag_idx, diag_idx)] = hermitianize(a)
    return DensityMatrix(matrix=m, dims=BipartiteDims(k, k))


def pure_state(schmidt: np.ndarray) -> DensityMatrix:
    """Projector onto sum_i sqrt(schmidt_i) |ii>."""
    p = np.asarray(schmidt, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise ValueError(f"need at least two Schmidt coefficients, got shape {p.shape}")
    if p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"Schmidt coefficients must form a probability vector, got {p}")
    k = p.size
    v = np.zeros(k * k, dtype=complex)
    v[:: k + 1] = np.sqrt(np.clip(p, 0.0, None))
    v /= np.linalg.norm(v)
    return DensityMatrix(matrix=np.outer(v, v.conj()), dims=BipartiteDims(k, k))


def counterexample_pair() -> tuple[DensityMatrix, DensityMatrix]:
    """The explicit 4x4 pair (rho, sigma) witnessing non-additivity.

    sigma certifiably minimizes the relative entropy to rho over the PPT
    set, yet sigma tensor sigma fails the same certificate for rho tensor
    rho, so the bound of the two-copy state drops below twice the one-copy
    bound.  The middle-block entries of rho depend on x = 1/ln(73/23);
    everything else is rational.
    """
    x = 1.0 / math.log(73.0 / 23.0)
    sigma = np.array(
        [
            [1.0 / 6.0, 0.0, 0.0, 0.0],
            [0.0, 55.0 / 144.0, -1.0 / 6.0, 0.0],
            [0.0, -1.0 / 6.0, 41.0 / 144.0, 0.0],
            [0.0, 0.0, 0.0, 1.0 / 6.0],
        ],
        dtype=complex,
    )
    r11 = 45907.0 / 90000.0 - (7.0 / 150.0) * x
    r22 = 29093.0 / 90000.0 + (7.0 / 150.0) * x
    r12 = -1201.0 / 3750.0 - (49.0 / 3600.0) * x
    rho = np.array(
        [
            [1.0 / 12.0, 0.0, 0.0, 0.0],
            [0.0, r11, r12, 0.0],
            [0.0, r12, r22, 0.0],
            [0.0, 0.0, 0.0, 1.0 / 12.0],
        ],
        dtype=complex,
    )
    dims = BipartiteDims(2, 2)
    return DensityMatrix(matrix=rho, dims=dims), DensityMatrix(matrix=sigma, dims=dims)


def isotropic_twirl(state: DensityMatrix) -> DensityMatrix:
    """Project onto the isotropic family, preserving entanglement fidelity."""
    k = state.dims.d_a
    if state.dims.d_b != k:
        raise ValueError("isotropic twirl needs equal local dimensions")
    f = entanglement_fidelity(state.matrix, k)
    f = min(max(f, 0.0), 1.0)
    return isotropic(k, f)


def bell_twirl(state: DensityMatrix, group: AbelianGroup = Z2) -> DensityMatrix:
    """Pinch to the generalized-Bell-diagonal algebra of ``group``."""
    n = group.size
    if state.dims.d_a != n or state.dims.d_b != n:
        raise ValueError(
            f"bell twirl for group of size {n} needs dims {n}x{n}, got "
            f"{state.dims.d_a}x{state.dims.d_b}"
        )
    basis = generalized_bell_basis(group)
    weights = np.real(np.einsum("ik,ij,jk->k", basis.conj(), state.matrix, basis))
    m = (basis * weights) @ basis.conj().T
    return DensityMatrix(matrix=hermitianize(m), dims=state.dims)


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Tensor product as a bipartite state over (A A') vs (B B')."""
    m, dims = tensor_bipartite(a.matrix, a.dims, b.matrix, b.dims)
    return DensityMatrix(matrix=m, dims=dims)

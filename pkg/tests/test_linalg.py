"""Spectral primitives, the divided-difference gradient, and bipartite reshapes."""

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_definite_density, random_density, random_hermitian, random_unitary
from pptbound.linalg import (
    BipartiteDims,
    HermiticityError,
    PositivityError,
    SupportError,
    dd_gradient,
    divided_difference_log,
    eig_hermitian,
    exp_hermitian,
    frobenius,
    hermitianize,
    kron,
    matrix_log,
    partial_trace,
    partial_transpose,
    tensor_bipartite,
)
from pptbound.states import max_entangled_projector


def test_eig_hermitian_reconstructs_1000_random():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        n = int(rng.integers(2, 17))
        m = random_hermitian(rng, n)
        dec = eig_hermitian(m)
        w, v = dec.eigenvalues, dec.eigenvectors
        assert np.all(np.diff(w) >= 0)
        assert frobenius((v * w) @ v.conj().T - m) <= 1e-10 * max(1.0, frobenius(m))
        assert frobenius(v.conj().T @ v - np.eye(n)) <= 1e-12


def test_eig_hermitian_rejects_non_hermitian():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(HermiticityError):
        eig_hermitian(m)


def test_exp_log_round_trip_wide_spectrum():
    rng = np.random.default_rng(1)
    for n in (2, 5, 9):
        h = random_hermitian(rng, n)
        h *= 5.0 / max(np.abs(np.linalg.eigvalsh(h)))
        m = exp_hermitian(h)
        assert frobenius(matrix_log(m) - h) <= 1e-8 * max(1.0, frobenius(h))


def test_matrix_log_matches_scipy_on_definite_input():
    rng = np.random.default_rng(2)
    for n in (3, 6):
        m = random_definite_density(rng, n, mix=0.2)
        ours = matrix_log(m)
        ref = scipy.linalg.logm(m)
        assert frobenius(ours - ref) <= 1e-10 * max(1.0, frobenius(ref))


def test_matrix_log_rejects_indefinite():
    with pytest.raises(PositivityError):
        matrix_log(np.diag([1.0, -1e-3]))


def test_matrix_log_clamps_kernel_instead_of_diverging():
    out = matrix_log(np.diag([1.0, 0.0]))
    assert np.isfinite(out).all()
    assert out[1, 1] == pytest.approx(np.log(1e-12))


def test_divided_difference_log_separated_and_diagonal():
    s = np.array([0.1, 0.5, 2.0])
    f = divided_difference_log(s)
    for i in range(3):
        assert f[i, i] == pytest.approx(1.0 / s[i], rel=1e-14)
        for j in range(3):
            if i != j:
                want = (np.log(s[i]) - np.log(s[j])) / (s[i] - s[j])
                assert f[i, j] == pytest.approx(want, rel=1e-13)


def test_divided_difference_log_near_degenerate_is_stable():
    a = 0.37
    for eps in (1e-7, 1e-9, 1e-12, 0.0):
        f = divided_difference_log(np.array([a, a * (1 + eps)]))
        assert f[0, 1] == pytest.approx(1.0 / a, rel=1e-6)
        assert np.isfinite(f).all()


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_divided_difference_log_symmetric_positive(seed):
    rng = np.random.default_rng(seed)
    s = rng.uniform(1e-6, 3.0, size=6)
    f = divided_difference_log(s)
    assert np.array_equal(f, f.T)
    assert (f > 0).all()


def test_dd_gradient_matches_central_differences():
    rng = np.random.default_rng(3)
    h = 1e-5
    for n in (4, 9):
        for _ in range(10):
            rho = random_density(rng, n)
            sigma = random_definite_density(rng, n, mix=0.2)
            delta = random_hermitian(rng, n)
            delta /= frobenius(delta)
            grad = dd_gradient(rho, sigma)
            up = np.trace(rho @ scipy.linalg.logm(sigma + h * delta)).real
            dn = np.trace(rho @ scipy.linalg.logm(sigma - h * delta)).real
            fd = (up - dn) / (2 * h)
            an = np.trace(grad @ delta).real
            assert abs(an - fd) <= 1e-6 * max(1.0, abs(fd))


def test_dd_gradient_commuting_pair_is_ratio_in_shared_basis():
    rng = np.random.default_rng(4)
    v = random_unitary(rng, 5)
    p = rng.dirichlet(np.ones(5))
    s = rng.uniform(0.1, 1.0, size=5)
    s /= s.sum()
    rho = hermitianize((v * p) @ v.conj().T)
    sigma = hermitianize((v * s) @ v.conj().T)
    want = hermitianize((v * (p / s)) @ v.conj().T)
    assert frobenius(dd_gradient(rho, sigma) - want) <= 1e-9


def test_dd_gradient_rejects_support_violation():
    rho = np.diag([0.5, 0.5, 0.0])
    sigma = np.diag([1.0, 0.0, 0.0])
    with pytest.raises(SupportError):
        dd_gradient(rho, sigma)


def test_dd_gradient_allows_shared_kernel():
    rho = np.diag([0.7, 0.3, 0.0])
    sigma = np.diag([0.4, 0.6, 0.0])
    grad = dd_gradient(rho, sigma)
    assert np.isfinite(grad).all()
    assert grad[2, 2] == 0.0


def test_kron_mixed_product_rule():
    rng = np.random.default_rng(5)
    a, b, c, d = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(4))
    lhs = kron(a, b) @ kron(c, d)
    rhs = kron(a @ c, b @ d)
    assert frobenius(lhs - rhs) <= 1e-12 * frobenius(rhs)


@given(st.integers(0, 10_000), st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)]))
@settings(max_examples=40, deadline=None)
def test_partial_transpose_involution_trace_hermiticity(seed, shape):
    rng = np.random.default_rng(seed)
    dims = BipartiteDims(*shape)
    m = random_density(rng, dims.total)
    pt = partial_transpose(m, dims)
    assert frobenius(partial_transpose(pt, dims) - m) == 0.0
    assert np.trace(pt) == pytest.approx(np.trace(m))
    assert frobenius(pt - pt.conj().T) <= 1e-14


def test_partial_transpose_swaps_local_transpose():
    rng = np.random.default_rng(6)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    dims = BipartiteDims(2, 3)
    assert frobenius(partial_transpose(kron(a, b), dims) - kron(a, b.T)) <= 1e-13


@pytest.mark.parametrize("k", [2, 3, 4])
def test_partial_transpose_max_entangled_spectrum(k):
    pt = partial_transpose(max_entangled_projector(k), BipartiteDims(k, k))
    eigs = np.sort(np.linalg.eigvalsh(pt))
    want = np.sort(np.concatenate([np.full(k * (k - 1) // 2, -1.0 / k), np.full(k * (k + 1) // 2, 1.0 / k)]))
    assert np.max(np.abs(eigs - want)) <= 1e-12


def test_partial_trace_of_product_factorizes():
    rng = np.random.default_rng(7)
    a = random_density(rng, 2)
    b = random_density(rng, 3)
    dims = BipartiteDims(2, 3)
    m = kron(a, b)
    assert frobenius(partial_trace(m, dims, "B") - a) <= 1e-13
    assert frobenius(partial_trace(m, dims, "A") - b) <= 1e-13


def test_partial_trace_preserves_trace_and_rejects_bad_side():
    rng = np.random.default_rng(8)
    dims = BipartiteDims(2, 4)
    m = random_density(rng, dims.total)
    assert np.trace(partial_trace(m, dims, "A")) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        partial_trace(m, dims, "C")


def test_tensor_bipartite_regroups_parties():
    rng = np.random.default_rng(9)
    d1 = BipartiteDims(2, 2)
    d2 = BipartiteDims(2, 3)
    a = random_density(rng, d1.total)
    b = random_density(rng, d2.total)
    joint, dims = tensor_bipartite(a, d1, b, d2)
    assert (dims.d_a, dims.d_b) == (4, 6)
    assert np.trace(joint) == pytest.approx(1.0)
    eigs = np.sort(np.linalg.eigvalsh(joint))
    prod = np.sort(np.outer(np.linalg.eigvalsh(a), np.linalg.eigvalsh(b)).ravel())
    assert np.max(np.abs(eigs - prod)) <= 1e-12
    pt_joint = partial_transpose(joint, dims)
    pt_parts, _ = tensor_bipartite(partial_transpose(a, d1), d1, partial_transpose(b, d2), d2)
    assert frobenius(pt_joint - pt_parts) <= 1e-12

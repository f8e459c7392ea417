"""Shared random-matrix helpers for the test suite."""

import numpy as np


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) * (scale / 2.0)


def random_density(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    g = rng.standard_normal((n, rank or n)) + 1j * rng.standard_normal((n, rank or n))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_definite_density(rng: np.random.Generator, n: int, mix: float = 0.05) -> np.ndarray:
    return (1.0 - mix) * random_density(rng, n) + mix * np.eye(n) / n


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))

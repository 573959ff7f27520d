import numpy as np
import pytest

from resolvquad.core import SparseHermitianMatrix


def random_hermitian_dense(rng, n, real=False, scale=True):
    """Random (real or complex) Hermitian matrix; scaled so ||A||_2 ~ 2."""
    b = rng.standard_normal((n, n))
    if not real:
        b = b + 1j * rng.standard_normal((n, n))
    a = (b + b.conj().T) / 2
    if scale:
        a = a / np.sqrt(n)
    return a


def random_hermitian(rng, n, real=False, scale=True):
    return SparseHermitianMatrix.from_dense(
        random_hermitian_dense(rng, n, real=real, scale=scale))


def random_vector(rng, n, real=False):
    v = rng.standard_normal(n)
    if not real:
        v = v + 1j * rng.standard_normal(n)
    return v.astype(np.complex128)


def random_jacobi(rng, k):
    """Random Lanczos-style coefficients: real alphas, positive betas."""
    alpha = list(rng.standard_normal(k))
    beta = list(np.abs(rng.standard_normal(k - 1)) + 0.1)
    return alpha, beta


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

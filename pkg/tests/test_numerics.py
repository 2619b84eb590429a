import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hermitian, random_psd
from nwe_disc.errors import DomainError, NumericError, ValidationError
from nwe_disc.numerics import (
    as_hermitian,
    hermitian_eig,
    inv_sqrtm_psd,
    matrix_function_on_support,
    min_eigenvalue,
    pinv_hermitian,
    psd_check,
    schmidt_decompose,
    sqrtm_psd,
    support_projector,
)


def test_eig_diagonal_matrix():
    e = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(e.eigenvalues, [1, 2, 3])
    assert e.sweeps == 0


def test_eig_pauli_y():
    y = np.array([[0, -1j], [1j, 0]])
    e = hermitian_eig(y)
    assert np.allclose(e.eigenvalues, [-1, 1], atol=1e-14)
    assert np.allclose(e.reconstruct(), y, atol=1e-14)


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        hermitian_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValidationError):
        hermitian_eig(np.ones((2, 3)))


def test_eig_sweep_budget():
    rng = np.random.default_rng(0)
    with pytest.raises(NumericError):
        hermitian_eig(random_hermitian(rng, 8), max_sweeps=1)


def test_eig_empty_and_zero():
    assert hermitian_eig(np.zeros((0, 0))).eigenvalues.size == 0
    assert np.all(hermitian_eig(np.zeros((3, 3))).eigenvalues == 0)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**31 - 1), scale=st.sampled_from([1e-6, 1.0, 1e4]))
def test_eig_matches_numpy(n, seed, scale):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, n, scale)
    e = hermitian_eig(a)
    ref = np.linalg.eigvalsh(a)
    norm = max(np.linalg.norm(a), 1e-300)
    assert np.max(np.abs(e.eigenvalues - ref)) <= 1e-13 * norm
    v = e.eigenvectors
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-12
    assert np.max(np.abs(e.reconstruct() - a)) <= 1e-12 * norm
    assert np.all(np.diff(e.eigenvalues) >= 0)


def test_eig_deterministic_phase(rng):
    a = random_hermitian(rng, 6)
    v = hermitian_eig(a).eigenvectors
    lead = v[np.argmax(np.abs(v), axis=0), np.arange(6)]
    assert np.allclose(lead.imag, 0) and np.all(lead.real > 0)


def test_eig_runtime_16():
    rng = np.random.default_rng(1)
    a = random_hermitian(rng, 16)
    t0 = time.perf_counter()
    hermitian_eig(a)
    assert time.perf_counter() - t0 < 0.5


def test_as_hermitian_symmetrises():
    a = np.array([[1.0, 1 + 1e-14], [1.0, 2.0]])
    h = as_hermitian(a)
    assert np.allclose(h, h.conj().T, atol=0)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 9), seed=st.integers(0, 2**31 - 1))
def test_sqrt_squares_back(n, seed):
    rng = np.random.default_rng(seed)
    a = random_psd(rng, n)
    r = sqrtm_psd(a)
    assert np.max(np.abs(r @ r - a)) <= 1e-10 * np.linalg.norm(a)
    assert np.max(np.abs(r - r.conj().T)) <= 1e-12 * np.linalg.norm(a)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 9), seed=st.integers(0, 2**31 - 1), data=st.data())
def test_inverse_sqrt_on_support(n, seed, data):
    rank = data.draw(st.integers(1, n))
    rng = np.random.default_rng(seed)
    a = random_psd(rng, n, rank)
    p = support_projector(a)
    w = inv_sqrtm_psd(a)
    assert np.max(np.abs(w @ a @ w - p)) <= 1e-8
    assert np.allclose(p @ p, p, atol=1e-10)
    assert abs(np.trace(p).real - rank) < 1e-8


def test_pinv_matches_numpy(rng):
    a = random_psd(rng, 7, 4)
    assert np.allclose(pinv_hermitian(a), np.linalg.pinv(a, hermitian=True), atol=1e-10)


def test_matrix_function_domain_errors():
    neg = np.diag([1.0, -1.0])
    with pytest.raises(DomainError):
        inv_sqrtm_psd(neg)
    with pytest.raises(DomainError):
        matrix_function_on_support(neg, np.log)

    def bad(x):
        raise ValueError("nope")

    with pytest.raises(DomainError):
        matrix_function_on_support(np.eye(2), bad)


def test_psd_helpers():
    assert psd_check(np.eye(3))
    assert not psd_check(np.diag([1.0, -1e-3]))
    assert min_eigenvalue(np.diag([2.0, 0.5])) == pytest.approx(0.5)


def test_schmidt_product_and_bell():
    a = np.array([1, 1j, 0]) / np.sqrt(2)
    b = np.array([0, 1, 1]) / np.sqrt(2)
    sd = schmidt_decompose(np.kron(a, b), 3, 3)
    assert sd.rank == 1 and sd.coefficients[0] == pytest.approx(1)
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    sd = schmidt_decompose(bell, 2, 2)
    assert sd.rank == 2
    assert np.allclose(sd.coefficients, [2**-0.5, 2**-0.5])


def test_schmidt_rejects_bad_split():
    with pytest.raises(ValidationError):
        schmidt_decompose(np.ones(6), 4, 2)


@settings(max_examples=40, deadline=None)
@given(da=st.integers(1, 4), db=st.integers(1, 4), seed=st.integers(0, 2**31 - 1))
def test_schmidt_against_svd(da, db, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=da * db) + 1j * rng.normal(size=da * db)
    v /= np.linalg.norm(v)
    sd = schmidt_decompose(v, da, db)
    ref = np.linalg.svd(v.reshape(da, db), compute_uv=False)
    assert np.allclose(sd.coefficients, ref, atol=1e-12)
    assert np.allclose(sd.reconstruct(), v, atol=1e-10)
    assert abs(np.sum(sd.coefficients**2) - 1) < 1e-12

"""Analytic formulas against independent numerics (numpy.linalg)."""

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import GRID, overlaps
from nwe_disc import closed_forms


def _np_sqrtm(a):
    w, v = np.linalg.eigh(a)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def test_gram_eigenvalues_half():
    assert np.allclose(closed_forms.gram_eigenvalues(0.5), [0.25, 0.5, 0.5, 1, 1, 2.75])


@settings(max_examples=50, deadline=None)
@given(s=overlaps)
def test_gram_sqrt_against_numpy(s):
    assert np.max(np.abs(closed_forms.gram_sqrt(s) - _np_sqrtm(closed_forms.gram(s)))) < 1e-12


@pytest.mark.parametrize("s", GRID)
def test_gram_sqrt_equal_diagonal(s):
    d = np.diag(closed_forms.gram_sqrt(s))
    assert np.ptp(d) == 0.0
    g = closed_forms.gram_sqrt_gammas(s)
    r = closed_forms.gram_sqrt(s)
    assert r[0, 1] == r[1, 0] == pytest.approx(g[1] / 6)


def test_half_values():
    v0, v1, v2, v3 = np.sqrt(0.5), 1.0, 0.5, np.sqrt(2.75)
    g0 = 2 * v0 + 2 * v1 + v2 + v3
    assert closed_forms.gram_sqrt_gammas(0.5)[0] == pytest.approx(g0)
    assert g0 / 6 == pytest.approx(0.92875, abs=1e-5)
    assert closed_forms.srm_success(0.5) == pytest.approx(0.8625845985, abs=1e-9)


def test_small_overlap_limit():
    assert np.allclose(closed_forms.gram_sqrt(1e-12), np.eye(6), atol=1e-11)


@settings(max_examples=50, deadline=None)
@given(s=overlaps)
def test_srm_success_is_squared_diagonal(s):
    d = np.diag(_np_sqrtm(closed_forms.gram(s)))
    assert closed_forms.srm_success(s) == pytest.approx(d[0] ** 2, abs=1e-12)


def _np_inv_sqrt_in_b(s):
    # numerics independent of the package: product basis, rho and its
    # inverse square root on the support, coordinates by least squares
    g = np.full((3, 3), s)
    np.fill_diagonal(g, 1)
    f = np.linalg.cholesky(g)
    pairs = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (0, 0), (1, 1), (2, 2)]
    basis = np.array([np.kron(f[a], f[b]) for a, b in pairs])
    phi = basis[:6]
    rho = phi.T @ phi / 6
    w, v = np.linalg.eigh(rho)
    keep = w > 1e-10 * w.max()
    inv = (v[:, keep] / np.sqrt(w[keep])) @ v[:, keep].T
    coords = lambda a: np.linalg.lstsq(basis.T, a @ basis.T, rcond=None)[0]
    return coords(rho), coords(inv)


@pytest.mark.parametrize("s", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_rho_and_inverse_sqrt_in_product_basis(s):
    rho_b, inv_b = _np_inv_sqrt_in_b(s)
    assert np.max(np.abs(rho_b - closed_forms.rho_in_b(s))) < 1e-10
    assert np.max(np.abs(inv_b - closed_forms.rho_inv_sqrt_in_b(s))) < 1e-9


def test_last_gamma_denominator():
    # v5 needs q**1.5 in the denominator; sqrt(q) * 3q gives a third of it
    s = 0.5
    q = 3 * s**2 + 2 * s + 1
    third = (s**2 + 2 * s) / (np.sqrt(q) * (9 * s**2 + 6 * s + 3))
    _, inv_b = _np_inv_sqrt_in_b(s)
    v4 = s / np.sqrt(1 - s)
    gamma4_num = inv_b[0, 6] * np.sqrt(6)
    assert gamma4_num == pytest.approx(2 * v4 + 2 * 3 * third, abs=1e-12)
    assert gamma4_num != pytest.approx(2 * v4 + 2 * third, abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(s=overlaps)
def test_change_of_basis_maps_mu1(s):
    m = closed_forms.change_of_basis(s)
    mu = closed_forms.mu1_in_b(s)
    assert np.allclose(m @ mu, closed_forms.mu1_in_bprime(s), atol=1e-10)
    assert 0 < closed_forms.reciprocal_overlap(s) <= 1


@pytest.mark.parametrize("s", GRID)
def test_chen_components_nonzero(s):
    c = closed_forms.chen_components(s)
    assert min(abs(x) for x in c) > 1e-6


def test_chen_components_vanish_only_at_zero():
    # as s -> 0 the mu_12 and mu_14 components go to zero
    c = closed_forms.chen_components(1e-8)
    assert abs(c[1]) < 1e-7 and abs(c[2]) < 1e-7
    assert abs(c[0] - 1) < 1e-6

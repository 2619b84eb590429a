import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GRID, overlaps
from nwe_disc import closed_forms
from nwe_disc.ensembles import (
    PRODUCT_PAIRS,
    Ensemble,
    gram_matrix,
    linear_independence_check,
    make_double_trine,
    make_product_family,
    make_symmetric_states,
    product_states,
    pure_state,
    reciprocal_states,
    symmetric_interval,
    trine_states,
)
from nwe_disc.errors import ValidationError


def test_pure_state_normalisation():
    with pytest.raises(ValidationError):
        pure_state([1, 1])
    assert np.allclose(pure_state([3, 4], normalize=True), [0.6, 0.8])
    with pytest.raises(ValidationError):
        pure_state([0, 0], normalize=True)


def test_ensemble_validation():
    with pytest.raises(ValidationError):
        Ensemble(np.eye(2), [0.5, 0.6])
    with pytest.raises(ValidationError):
        Ensemble(np.eye(2), [1.0])
    with pytest.raises(ValidationError):
        Ensemble(np.array([[1.0, 1.0], [0, 1]]), [0.5, 0.5])
    e = Ensemble.uniform(np.eye(3))
    assert np.allclose(e.density(), np.eye(3) / 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_symmetric_states_overlaps(n):
    lo, _ = symmetric_interval(n)
    for s in [lo + 0.05, 0.0, 0.3, 0.9]:
        st_ = make_symmetric_states(s, n)
        g = gram_matrix(st_)
        target = np.full((n, n), s)
        np.fill_diagonal(target, 1)
        assert np.max(np.abs(g - target)) < 1e-12


def test_symmetric_states_padding_and_domain():
    assert make_symmetric_states(0.5, 3, dim=5).shape == (3, 5)
    with pytest.raises(ValidationError):
        make_symmetric_states(1.0)
    with pytest.raises(ValidationError):
        make_symmetric_states(-0.5, 3)
    with pytest.raises(ValidationError):
        make_symmetric_states(0.5, 3, dim=2)


def test_product_family_gram_is_closed_form():
    for s in GRID:
        fam = make_product_family(s)
        assert len(fam) == 6 and fam.dim == 9
        assert np.max(np.abs(fam.gram() - closed_forms.gram(s))) < 1e-12


def test_product_family_domain():
    for bad in (0.0, 1.0, -0.2):
        with pytest.raises(ValidationError):
            make_product_family(bad)


@settings(max_examples=40, deadline=None)
@given(s=overlaps)
def test_gram_spectrum_closed_form(s):
    lam = np.linalg.eigvalsh(make_product_family(s).gram())
    assert np.allclose(lam, closed_forms.gram_eigenvalues(s), atol=1e-12)
    assert abs(lam.sum() - 6) < 1e-12


@settings(max_examples=40, deadline=None)
@given(s=st.floats(-0.9, 0.98))
def test_interval_criterion_agrees_with_rank(s):
    lo, hi = symmetric_interval(3)
    if not lo + 1e-6 < s < hi - 1e-6:
        return
    rep = linear_independence_check(make_symmetric_states(s), overlap=s)
    assert rep.independent == rep.interval_ok == True  # noqa: E712


def test_dependent_states_detected():
    # three coplanar qubit states are dependent
    rep = linear_independence_check(trine_states(), overlap=-0.5)
    assert not rep.independent and rep.rank == 2
    assert rep.interval_ok is False
    with pytest.raises(ValidationError):
        reciprocal_states(trine_states())


def test_trine_overlaps():
    t = trine_states()
    g = gram_matrix(t)
    assert np.allclose(np.diag(g), 1, atol=1e-15)
    off = g[~np.eye(3, dtype=bool)]
    assert np.max(np.abs(off + 0.5)) < 1e-12
    d = make_double_trine().gram()
    assert np.max(np.abs(d[~np.eye(3, dtype=bool)] - 0.25)) < 1e-12
    assert linear_independence_check(make_double_trine().states).independent


@settings(max_examples=30, deadline=None)
@given(s=overlaps)
def test_reciprocal_states(s):
    psi = make_symmetric_states(s)
    rec = reciprocal_states(psi)
    ov = rec.conj() @ psi.T
    assert np.max(np.abs(ov - np.diag(np.diag(ov)))) < 1e-12
    assert np.allclose(np.diag(ov).imag, 0, atol=1e-14)
    assert np.allclose(np.diag(ov).real, closed_forms.reciprocal_overlap(s), atol=1e-12)
    assert np.allclose(np.linalg.norm(rec, axis=1), 1)
    assert np.allclose(rec, closed_forms.reciprocal_coefficients(s) @ psi, atol=1e-12)
    assert np.allclose(psi, closed_forms.inverse_reciprocal_coefficients(s) @ rec, atol=1e-12)


def test_product_states_labels():
    f = np.eye(3)
    p = product_states(f)
    for row, (a, b) in zip(p, PRODUCT_PAIRS):
        assert row[3 * a + b] == 1


def _alternative_triple(s):
    # Cholesky-based construction, then a random unitary
    g = np.full((3, 3), s)
    np.fill_diagonal(g, 1)
    rows = np.linalg.cholesky(g).astype(complex)
    q, _ = np.linalg.qr(np.random.default_rng(5).normal(size=(3, 3)) + 1j)
    return rows @ q.T


@pytest.mark.parametrize("s", [0.2, 0.5, 0.8])
def test_construction_independence(s):
    from nwe_disc.minerr import product_family_srm
    from nwe_disc.unambig import solve_ud_primal

    alt = _alternative_triple(s)
    a, b = make_product_family(s), make_product_family(s, alt)
    assert np.max(np.abs(a.gram() - b.gram())) < 1e-12
    assert abs(product_family_srm(s).success - product_family_srm(s, alt).success) < 1e-9
    va = solve_ud_primal(a.gram(), a.priors).value
    vb = solve_ud_primal(b.gram(), b.priors).value
    assert abs(va - vb) < 1e-9
    assert abs(np.linalg.eigvalsh(a.gram())[0] - np.linalg.eigvalsh(b.gram())[0]) < 1e-12


def test_orthogonal_limits():
    assert np.allclose(gram_matrix(make_symmetric_states(0.0)), np.eye(3), atol=1e-15)
    assert np.max(np.abs(make_product_family(1e-6).gram() - np.eye(6))) < 3e-6
    assert np.allclose(reciprocal_states(np.eye(3)), np.eye(3))


def test_duplicate_state_dependent():
    psi = make_symmetric_states(0.5)
    rep = linear_independence_check(np.vstack([psi, psi[:1]]))
    assert not rep.independent and not rep
    assert linear_independence_check(make_product_family(0.5).states).independent


def test_gram_pattern():
    s = 0.37
    g = make_product_family(s).gram()
    for i, (a, b) in enumerate(PRODUCT_PAIRS):
        for j, (c, d) in enumerate(PRODUCT_PAIRS):
            shared = (a == c) + (b == d)
            expected = {2: 1.0, 1: s, 0: s * s}[shared]
            assert abs(g[i, j] - expected) < 1e-12


def test_gram_matrix_dimension_mismatch():
    with pytest.raises(ValidationError):
        gram_matrix([np.ones(2), np.ones(3)])

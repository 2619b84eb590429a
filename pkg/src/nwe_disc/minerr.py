"""Minimum-error discrimination and LOCC indistinguishability of the SRM basis.

The square-root measurement (SRM) of an equiprobable, linearly independent
pure-state ensemble consists of rank-one projectors onto
``mu_i = rho^{-1/2} sqrt(eta) psi_i``.  For the six-state product family it
is optimal, and its vectors form an orthonormal basis of the span ``W`` of
the ensemble.  Whether LOCC can reach the optimum reduces to whether LOCC can
perfectly discriminate that basis; ``chen_analysis`` runs the product-vector
test showing it cannot.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import closed_forms
from .ensembles import (
    PRODUCT_PAIRS,
    Ensemble,
    as_state_array,
    gram_matrix,
    linear_independence_check,
    make_product_family,
    make_symmetric_states,
    product_states,
    reciprocal_states,
)
from .errors import DegeneracyError, ValidationError
from .numerics import (
    hermitian_eig,
    inv_sqrtm_psd,
    pinv_hermitian,
    schmidt_decompose,
    sqrtm_psd,
    support_projector,
)
from .oblique import (
    ObliqueBasis,
    ObliqueCoords,
    change_of_basis,
    coords_in_basis,
    operator_matrix_in_basis,
)

POVM_TOL = 1e-10
ALL_PAIRS = PRODUCT_PAIRS + ((0, 0), (1, 1), (2, 2))


@dataclass(frozen=True)
class Povm:
    """Measurement operators resolving ``closure`` (identity by default).

    With ``inconclusive=True`` element 0 is the inconclusive outcome and
    elements ``1..N`` identify states ``0..N-1``.
    """

    elements: np.ndarray
    closure: np.ndarray
    inconclusive: bool = False

    @classmethod
    def from_elements(cls, elements, closure=None, inconclusive=False, tol=POVM_TOL) -> "Povm":
        els = np.asarray(elements, dtype=complex)
        if els.ndim != 3 or els.shape[1] != els.shape[2]:
            raise ValidationError(f"POVM elements must be square matrices, got {els.shape}")
        d = els.shape[1]
        target = np.eye(d) if closure is None else np.asarray(closure, dtype=complex)
        for k, e in enumerate(els):
            if np.max(np.abs(e - e.conj().T)) > tol:
                raise ValidationError(f"POVM element {k} is not Hermitian")
            lo = hermitian_eig(e).min
            if lo < -tol:
                raise ValidationError(f"POVM element {k} has eigenvalue {lo:.3e} < 0")
        dev = float(np.max(np.abs(els.sum(axis=0) - target)))
        if dev > tol:
            raise ValidationError(f"POVM elements miss their closure by {dev:.3e}")
        return cls(els, target, inconclusive)

    @classmethod
    def projective(cls, vectors, closure=None) -> "Povm":
        v = as_state_array(vectors)
        return cls.from_elements(np.einsum("ki,kj->kij", v, v.conj()), closure)

    def __len__(self) -> int:
        return self.elements.shape[0]

    @property
    def guesses(self) -> np.ndarray:
        """Elements that name a state (skips the inconclusive element)."""
        return self.elements[1:] if self.inconclusive else self.elements

    def probabilities(self, states) -> np.ndarray:
        """``P[k, j] = <psi_j| E_k |psi_j>`` for every element and state."""
        s = as_state_array(states)
        return np.real(np.einsum("ji,kil,jl->kj", s.conj(), self.elements, s))


def _check_counts(ensemble: Ensemble, povm: Povm) -> np.ndarray:
    if povm.elements.shape[1] != ensemble.dim:
        raise ValidationError(
            f"POVM acts on dimension {povm.elements.shape[1]}, states have {ensemble.dim}"
        )
    if len(povm.guesses) != len(ensemble):
        raise ValidationError(
            f"{len(povm.guesses)} guess elements for {len(ensemble)} states"
        )
    gp = Povm(povm.guesses, povm.closure).probabilities(ensemble.states)
    return gp


def error_probability(ensemble: Ensemble, povm: Povm) -> float:
    """``sum_{i != j} eta_i Tr(M_j |psi_i><psi_i|)``."""
    table = _check_counts(ensemble, povm)
    off = table * (1.0 - np.eye(len(ensemble)))
    return float(np.sum(off @ ensemble.priors))


def success_probability(ensemble: Ensemble, povm: Povm) -> float:
    """``sum_i eta_i Tr(M_i |psi_i><psi_i|)``."""
    table = _check_counts(ensemble, povm)
    return float(np.diag(table) @ ensemble.priors)


@dataclass(frozen=True)
class DistilledBasis:
    """Orthonormal SRM vectors ``mu_i`` (one per row) of an ensemble."""

    vectors: np.ndarray
    source: Ensemble
    dims: tuple[int, int] | None = None
    factors: np.ndarray | None = field(default=None, repr=False)
    schmidt_ranks: tuple[int, ...] = ()

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def schmidt(self, i: int):
        if self.dims is None:
            raise ValidationError("basis has no bipartite structure")
        return schmidt_decompose(self.vectors[i], *self.dims)


class SquareRootMeasurement(NamedTuple):
    povm: Povm
    basis: DistilledBasis
    success: float


def build_srm(
    ensemble: Ensemble,
    dims: tuple[int, int] | None = None,
    factors: np.ndarray | None = None,
) -> SquareRootMeasurement:
    """Square-root measurement of an equiprobable independent ensemble.

    The POVM is closed on the support projector of ``rho`` (the span ``W``
    of the states); add ``1 - P_W`` to complete it on the full space.
    """
    if np.max(np.abs(ensemble.priors - ensemble.priors[0])) > 1e-12:
        raise ValidationError("square-root measurement here requires equal priors")
    if not linear_independence_check(ensemble.states):
        raise ValidationError("ensemble states are linearly dependent")
    rho = ensemble.density()
    weighted = ensemble.states * np.sqrt(ensemble.priors)[:, None]
    mu = weighted @ inv_sqrtm_psd(rho).T
    ortho = float(np.max(np.abs(gram_matrix(mu) - np.eye(len(ensemble)))))
    if ortho > 1e-10:
        raise ValidationError(f"SRM vectors are not orthonormal (deviation {ortho:.3e})")
    closure = support_projector(rho)
    povm = Povm.projective(mu, closure)
    ranks = ()
    if dims is not None:
        ranks = tuple(schmidt_decompose(m, *dims).rank for m in mu)
    basis = DistilledBasis(mu, ensemble, dims, factors, ranks)
    return SquareRootMeasurement(povm, basis, success_probability(ensemble, povm))


def product_family_srm(s: float, factors: np.ndarray | None = None) -> SquareRootMeasurement:
    """SRM of the six-state family, keeping the single-site factors."""
    if factors is None:
        factors = make_symmetric_states(s, 3)
    return build_srm(make_product_family(s, factors), dims=(3, 3), factors=factors)


class OptimalityReport(NamedTuple):
    optimal: bool
    spread: float
    diagonal: np.ndarray


def srm_optimality_check(gram, tol: float = 1e-9) -> OptimalityReport:
    """Equal-diagonal test on the square root of a (prior-weighted) Gram matrix."""
    root = sqrtm_psd(gram)
    diag = np.real(np.diag(root))
    spread = float(diag.max() - diag.min())
    return OptimalityReport(spread <= tol, spread, diag)


class ClosedFormReport(NamedTuple):
    gram_sqrt: float
    rho_b: float
    rho_inv_sqrt_b: float
    diagonal_spread: float
    srm_success: float

    @property
    def worst(self) -> float:
        return max(self.gram_sqrt, self.rho_b, self.rho_inv_sqrt_b)

    def ok(self, tol: float = 1e-9) -> bool:
        return self.worst <= tol


def product_bases(s: float, factors: np.ndarray | None = None) -> tuple[ObliqueBasis, ObliqueBasis]:
    """Nine-element product basis and its reciprocal-state counterpart."""
    if factors is None:
        factors = make_symmetric_states(s, 3)
    recips = reciprocal_states(factors)
    return (
        ObliqueBasis.from_vectors(product_states(factors, ALL_PAIRS)),
        ObliqueBasis.from_vectors(product_states(recips, ALL_PAIRS)),
    )


def srm_matches_closed_form(s: float) -> ClosedFormReport:
    """Residuals between the numerical pipeline and the analytic matrices."""
    fam = make_product_family(s)
    root = sqrtm_psd(fam.gram())
    basis, _ = product_bases(s)
    rho = fam.density()
    rho_b = operator_matrix_in_basis(rho, basis)
    inv_b = operator_matrix_in_basis(inv_sqrtm_psd(rho), basis)
    diag = np.real(np.diag(root))
    return ClosedFormReport(
        gram_sqrt=float(np.max(np.abs(root - closed_forms.gram_sqrt(s)))),
        rho_b=float(np.max(np.abs(rho_b - closed_forms.rho_in_b(s)))),
        rho_inv_sqrt_b=float(np.max(np.abs(inv_b - closed_forms.rho_inv_sqrt_in_b(s)))),
        diagonal_spread=float(diag.max() - diag.min()),
        srm_success=float(np.mean(diag) ** 2),
    )


def permutation_unitary(factors, perm) -> np.ndarray:
    """Unitary sending ``factors[a]`` to ``factors[perm[a]]``.

    Only unitary when the permutation preserves the Gram matrix of the
    factors, which holds for every permutation of an equal-overlap set.
    """
    f = as_state_array(factors)
    n = f.shape[0]
    pi = np.zeros((n, n))
    pi[list(perm), list(range(n))] = 1.0
    psi = f.T
    inv = pinv_hermitian(gram_matrix(f)) @ psi.conj().T
    return psi @ pi @ inv


def local_unitary_witness(basis: DistilledBasis, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Local unitaries ``(U_A, U_B)`` with ``(U_A (x) U_B) mu_i = mu_j``.

    Both factors get the same permutation unitary: the unique permutation
    of the three single-site states that sends the label pair of ``mu_i`` to
    that of ``mu_j``.  Applying the same permutation on both sides maps the
    family onto itself, so it commutes with ``rho`` and hence ``rho^{-1/2}``.
    """
    if basis.factors is None:
        raise ValidationError("basis was not built from a product family")
    n = len(basis)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"indices ({i}, {j}) out of range for {n} vectors")
    (a, b), (c, d) = PRODUCT_PAIRS[i], PRODUCT_PAIRS[j]
    perm = [0, 1, 2]
    perm[a], perm[b] = c, d
    rest = ({0, 1, 2} - {a, b}).pop()
    perm[rest] = ({0, 1, 2} - {c, d}).pop()
    u = permutation_unitary(basis.factors, perm)
    return u, u.copy()


def witness_residual(basis: DistilledBasis, i: int, j: int) -> float:
    """``|| (U_A (x) U_B) mu_i - e^{i phi} mu_j ||`` with the best global phase."""
    ua, ub = local_unitary_witness(basis, i, j)
    out = np.kron(ua, ub) @ basis.vectors[i]
    target = basis.vectors[j]
    ov = np.vdot(target, out)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(out - phase * target))


def perfect_discrimination_check(states, povm: Povm, tol: float = 1e-9) -> bool:
    """True iff ``Tr(E_i |xi_j><xi_j|) = delta_ij`` for orthonormal states."""
    s = as_state_array(states)
    dev = float(np.max(np.abs(gram_matrix(s) - np.eye(s.shape[0]))))
    if dev > tol:
        raise ValidationError(f"states are not orthonormal (deviation {dev:.3e})")
    table = Povm(povm.guesses, povm.closure).probabilities(s)
    if table.shape[0] != s.shape[0]:
        return False
    return bool(np.max(np.abs(table - np.eye(s.shape[0]))) <= tol)


def random_projective_successes(
    ensemble: Ensemble, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Success of ``count`` random rank-one orthonormal measurements on ``W``.

    Each measurement is a Haar-random orthonormal basis of the span of the
    states, with outcome ``k`` read as a guess for state ``k``.
    """
    rho = ensemble.density()
    eig = hermitian_eig(rho)
    keep = eig.eigenvalues > 1e-10 * eig.max
    q = eig.eigenvectors[:, keep]
    n = q.shape[1]
    out = np.empty(count)
    for t in range(count):
        z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
        u, r = np.linalg.qr(z)
        u = u * (np.diag(r) / np.abs(np.diag(r)))
        e = (q @ u).T
        amps = np.einsum("ki,ki->k", e.conj(), ensemble.states)
        out[t] = float(ensemble.priors @ np.abs(amps) ** 2)
    return out


# ---------------------------------------------------------------------------
# Product vectors in the span that can appear in a decomposition of mu_1


def chen_conditions(z) -> np.ndarray:
    """The three quadratic product conditions on reciprocal-basis coordinates.

    Returns ``(z1 z9 - z2 z6, z2 z8 - z1 z4, z4 z7 - z2 z3)`` (1-based labels).
    """
    z = np.asarray(z, dtype=complex)
    return np.array(
        [z[0] * z[8] - z[1] * z[5], z[1] * z[7] - z[0] * z[3], z[3] * z[6] - z[1] * z[2]]
    )


def max_minor(v, dims=(3, 3)) -> float:
    """Largest |2x2 minor| of the reshaped unit vector; zero iff product."""
    m = np.asarray(v, dtype=complex).reshape(dims)
    m = m / np.linalg.norm(m)
    best = 0.0
    for r1, r2 in itertools.combinations(range(dims[0]), 2):
        for c1, c2 in itertools.combinations(range(dims[1]), 2):
            best = max(best, abs(m[r1, c1] * m[r2, c2] - m[r1, c2] * m[r2, c1]))
    return best


def product_vectors_in_span(
    span_vectors,
    dims: tuple[int, int],
    starts: int,
    rng: np.random.Generator,
    max_iter: int = 1000,
    found_tol: float = 1e-12,
) -> list[np.ndarray]:
    """Randomised search for unit product vectors inside a subspace.

    Alternately maximises ``||P (a (x) b)||^2`` over ``b`` and ``a`` (each
    step is a small Hermitian eigenproblem) from random starts.  A start is
    kept when the captured weight reaches ``1 - found_tol``.
    """
    q, _ = np.linalg.qr(as_state_array(span_vectors).T)
    qm = q.T.reshape(-1, *dims).conj()
    found = []
    for _ in range(starts):
        a = rng.normal(size=dims[0]) + 1j * rng.normal(size=dims[0])
        b = rng.normal(size=dims[1]) + 1j * rng.normal(size=dims[1])
        a /= np.linalg.norm(a)
        prev = -1.0
        weight = 0.0
        for _ in range(max_iter):
            w = np.einsum("kij,i->kj", qm, a)
            b = np.linalg.eigh(w.conj().T @ w)[1][:, -1]
            w = np.einsum("kij,j->ki", qm, b)
            vals, vecs = np.linalg.eigh(w.conj().T @ w)
            a = vecs[:, -1]
            weight = float(vals[-1])
            if abs(weight - prev) < 1e-16:
                break
            prev = weight
        if 1.0 - weight <= found_tol:
            found.append(np.kron(a, b))
    return found


@dataclass(frozen=True)
class ChenReport:
    s: float
    mu1_bprime: ObliqueCoords
    k_ratios: tuple[complex, complex, complex]
    candidate_ray: np.ndarray
    ray_is_product: bool
    schmidt_gap: float
    ray_max_minor: float
    ray_condition_residual: float
    denominator_components: tuple[complex, complex, complex]
    search_found: int
    search_max_deviation: float
    locc_distinguishable: bool = False

    @property
    def verdict(self) -> str:
        return "locc_distinguishable" if self.locc_distinguishable else "not_locc_distinguishable"


def chen_analysis(
    s: float,
    search_starts: int = 100,
    seed: int = 0,
    factors: np.ndarray | None = None,
    overlap_tol: float = 1e-6,
    parallel_tol: float = 1e-8,
) -> ChenReport:
    """Show that at most one product direction can appear in ``mu_1``.

    Any product vector usable in a decomposition of ``mu_1`` under the
    orthogonality requirements lies in ``span{mu_1, psi'_j psi'_j}`` with a
    nonzero ``mu_1`` component.  Writing it in the reciprocal product basis,
    three of the rank-one conditions fix the ``psi'_j psi'_j`` components in
    terms of the ``mu_1`` component (the k-ratios), so all such vectors are
    parallel to one candidate ray.  Two linearly independent ones therefore
    never exist and the basis is not LOCC distinguishable.

    A randomised search for product vectors in the same span is run as an
    independent check: every one found with nonzero ``mu_1`` overlap must be
    parallel to the ray.
    """
    if not 0.0 < s < 1.0:
        raise ValidationError(f"s must lie in (0, 1), got {s}")
    if factors is None:
        factors = make_symmetric_states(s, 3)
    srm = product_family_srm(s, factors)
    mu1 = srm.basis.vectors[0]
    b, bp = product_bases(s, factors)
    coords_b = coords_in_basis(mu1, b)
    m = change_of_basis(b, bp)
    c = m @ coords_b.coeffs
    c11, c12, c14 = c[0], c[1], c[3]
    for name, val in (("mu_11", c11), ("mu_12", c12), ("mu_14", c14)):
        if abs(val) < 1e-9:
            raise DegeneracyError(f"{name} vanishes at s={s}")
    k1 = c[1] * c[2] / c[3] - c[6]
    k2 = c[0] * c[3] / c[1] - c[7]
    k3 = c[1] * c[5] / c[0] - c[8]
    ray_coords = c.copy()
    ray_coords[6:] += (k1, k2, k3)
    ray = bp.synthesize(ray_coords)
    unit_ray = ray / np.linalg.norm(ray)
    sd = schmidt_decompose(unit_ray, 3, 3)
    gap = float(sd.coefficients[1] / sd.coefficients[0])
    minor = max_minor(unit_ray)

    span = np.vstack([mu1, bp.vectors[6:]])
    found = product_vectors_in_span(span, (3, 3), search_starts, np.random.default_rng(seed))
    relevant = [z for z in found if abs(np.vdot(mu1, z)) > overlap_tol]
    deviation = 0.0
    for z in relevant:
        deviation = max(deviation, 1.0 - abs(np.vdot(unit_ray, z)))

    return ChenReport(
        s=s,
        mu1_bprime=ObliqueCoords(bp, c),
        k_ratios=(complex(k1), complex(k2), complex(k3)),
        candidate_ray=ray,
        ray_is_product=minor <= 1e-10,
        schmidt_gap=gap,
        ray_max_minor=minor,
        ray_condition_residual=float(np.max(np.abs(chen_conditions(ray_coords)))),
        denominator_components=(complex(c11), complex(c12), complex(c14)),
        search_found=len(relevant),
        search_max_deviation=deviation,
        locc_distinguishable=deviation > parallel_tol,
    )

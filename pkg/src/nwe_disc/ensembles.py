"""State families: symmetric sets, the six-state product family, trines.

States are plain 1-D complex numpy arrays of unit norm.  A collection of
states is passed around as a 2-D array with one state per row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ValidationError
from .numerics import hermitian_eig, pinv_hermitian

NORM_TOL = 1e-12
RANK_TOL = 1e-10

# Ordered (first factor, second factor) labels of the product family.
PRODUCT_PAIRS: tuple[tuple[int, int], ...] = (
    (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1),
)


def pure_state(amplitudes, normalize: bool = False) -> np.ndarray:
    """Validate (or normalise) an amplitude vector and return it as complex."""
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    n = float(np.linalg.norm(v))
    if normalize:
        if n == 0.0:
            raise ValidationError("cannot normalise the zero vector")
        return v / n
    if abs(n * n - 1.0) > NORM_TOL:
        raise ValidationError(f"state is not normalised: |v|^2 = {n * n:.15g}")
    return v


def as_state_array(states: Sequence | np.ndarray) -> np.ndarray:
    """Stack states into an ``(N, d)`` complex array, checking dimensions."""
    if isinstance(states, np.ndarray) and states.ndim == 2:
        return states.astype(complex, copy=False)
    rows = [np.asarray(s, dtype=complex).reshape(-1) for s in states]
    if not rows:
        raise ValidationError("empty state list")
    dims = {r.size for r in rows}
    if len(dims) != 1:
        raise ValidationError(f"states have mismatched dimensions {sorted(dims)}")
    return np.vstack(rows)


@dataclass(frozen=True)
class Ensemble:
    """Pure states (one per row) with prior probabilities."""

    states: np.ndarray
    priors: np.ndarray
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        states = as_state_array(self.states)
        priors = np.asarray(self.priors, dtype=float).reshape(-1)
        if states.shape[0] != priors.size:
            raise ValidationError(
                f"{states.shape[0]} states but {priors.size} priors"
            )
        if np.any(priors < 0) or abs(priors.sum() - 1.0) > NORM_TOL:
            raise ValidationError("priors must be nonnegative and sum to 1")
        norms = np.linalg.norm(states, axis=1) ** 2
        if np.any(np.abs(norms - 1.0) > NORM_TOL):
            raise ValidationError("ensemble states must be unit vectors")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "priors", priors)

    @classmethod
    def uniform(cls, states, labels: tuple = ()) -> "Ensemble":
        arr = as_state_array(states)
        n = arr.shape[0]
        return cls(arr, np.full(n, 1.0 / n), labels)

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def density(self) -> np.ndarray:
        """Average state ``sum_i eta_i |psi_i><psi_i|``."""
        s = self.states
        return (s.T * self.priors) @ s.conj()

    def gram(self) -> np.ndarray:
        return gram_matrix(self.states)


def symmetric_interval(n: int) -> tuple[float, float]:
    """Open interval of real pairwise overlaps giving independent states."""
    if n < 2:
        raise ValidationError("need at least two states")
    return -1.0 / (n - 1), 1.0


def symmetric_gram(s: float, n: int = 3) -> np.ndarray:
    g = np.full((n, n), float(s))
    np.fill_diagonal(g, 1.0)
    return g


def make_symmetric_states(s: float, n: int = 3, dim: int | None = None) -> np.ndarray:
    """``n`` unit states with every pairwise inner product equal to ``s``.

    The amplitudes come from the Jacobi factorisation of the target Gram
    matrix: with ``G = V diag(lam) V^H`` the columns of ``diag(sqrt(lam)) V^H``
    have Gram matrix ``G``.  They are real, padded with zeros up to ``dim``.
    """
    dim = n if dim is None else dim
    lo, hi = symmetric_interval(n)
    if not lo < s < hi:
        raise ValidationError(f"overlap {s} outside the open interval ({lo:.6g}, {hi})")
    if dim < n:
        raise ValidationError(f"dimension {dim} smaller than state count {n}")
    eig = hermitian_eig(symmetric_gram(s, n))
    factor = np.sqrt(np.clip(eig.eigenvalues, 0.0, None))[:, None] * eig.eigenvectors.conj().T
    states = np.zeros((n, dim), dtype=complex)
    states[:, :n] = factor.T
    return states / np.linalg.norm(states, axis=1, keepdims=True)


def product_states(factors: np.ndarray, pairs=PRODUCT_PAIRS) -> np.ndarray:
    """Rows ``factors[a] (x) factors[b]`` for each ``(a, b)`` in ``pairs``."""
    f = as_state_array(factors)
    return np.vstack([np.kron(f[a], f[b]) for a, b in pairs])


def make_product_family(s: float, factors: np.ndarray | None = None) -> Ensemble:
    """Equiprobable six-state product ensemble built from a symmetric triple.

    The states are ``psi_a (x) psi_b`` for ``a != b``, ordered
    (1,2), (1,3), (2,1), (2,3), (3,1), (3,2).  ``factors`` may supply an
    alternative construction of the symmetric triple (it must have pairwise
    overlaps ``s``); by default ``make_symmetric_states(s)`` is used.
    """
    if not 0.0 < s < 1.0:
        raise ValidationError(f"product family needs s in (0, 1), got {s}")
    if factors is None:
        factors = make_symmetric_states(s, 3)
    labels = tuple(f"psi{a + 1}psi{b + 1}" for a, b in PRODUCT_PAIRS)
    return Ensemble.uniform(product_states(factors), labels)


def trine_states() -> np.ndarray:
    """The three qubit trine states, 120 degrees apart on a great circle."""
    r3 = np.sqrt(3.0) / 2.0
    return np.array([[1.0, 0.0], [-0.5, -r3], [-0.5, r3]], dtype=complex)


def make_double_trine() -> Ensemble:
    t = trine_states()
    states = np.vstack([np.kron(a, a) for a in t])
    return Ensemble.uniform(states, ("a1a1", "a2a2", "a3a3"))


def gram_matrix(states) -> np.ndarray:
    """``G[i, j] = <state_i | state_j>``."""
    s = as_state_array(states)
    g = s.conj() @ s.T
    return 0.5 * (g + g.conj().T)


class IndependenceReport(NamedTuple):
    independent: bool
    rank: int
    min_eigenvalue: float
    interval_ok: bool | None = None

    def __bool__(self) -> bool:
        return self.independent


def linear_independence_check(states, overlap: float | None = None) -> IndependenceReport:
    """Rank test through the Gram spectrum (eigenvalues above ``1e-10``).

    Passing ``overlap`` for an equal-overlap family also evaluates the
    interval criterion ``-1/(N-1) < s < 1``; the two verdicts should agree.
    """
    arr = as_state_array(states)
    eig = hermitian_eig(gram_matrix(arr))
    rank = int(np.sum(eig.eigenvalues > RANK_TOL))
    independent = rank == arr.shape[0]
    interval_ok = None
    if overlap is not None:
        lo, hi = symmetric_interval(arr.shape[0])
        interval_ok = lo < overlap < hi
    return IndependenceReport(independent, rank, eig.min, interval_ok)


def reciprocal_states(states) -> np.ndarray:
    """Unit vectors ``psi'_i`` in the span, orthogonal to every ``psi_j`` (j != i).

    Computed as the normalised columns of ``Psi G^{-1}`` with ``Psi`` the
    matrix of states; the phase makes ``<psi'_i|psi_i>`` real and positive.
    """
    arr = as_state_array(states)
    report = linear_independence_check(arr)
    if not report.independent:
        raise ValidationError(
            f"states are linearly dependent (Gram rank {report.rank} < {arr.shape[0]})"
        )
    duals = pinv_hermitian(gram_matrix(arr)).T @ arr
    duals /= np.linalg.norm(duals, axis=1, keepdims=True)
    ov = np.einsum("ij,ij->i", duals.conj(), arr)
    return duals * (np.abs(ov) / ov)[:, None].conj()

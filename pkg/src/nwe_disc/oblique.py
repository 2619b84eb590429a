"""Coordinates and operator matrices with respect to nonorthogonal bases.

A basis here is an ordered list of linearly independent vectors spanning
some subspace of C^n.  Coordinates are solved through the metric (Gram)
matrix of the basis, ``c = G^{-1} <v_k|x>``, and inner products of
coordinate vectors must carry that metric: ``<a|b> = a^H G b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ensembles import as_state_array, gram_matrix
from .errors import SpanError, ValidationError
from .numerics import hermitian_eig, pinv_hermitian

SPAN_TOL = 1e-9
METRIC_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ObliqueBasis:
    """Ordered basis (one vector per row) with its cached metric."""

    vectors: np.ndarray
    metric: np.ndarray
    metric_inverse: np.ndarray

    @classmethod
    def from_vectors(cls, vectors) -> "ObliqueBasis":
        arr = np.array(as_state_array(vectors), dtype=complex)
        metric = gram_matrix(arr)
        eig = hermitian_eig(metric)
        if eig.min <= METRIC_TOL:
            raise ValidationError(
                f"basis vectors are not linearly independent "
                f"(metric min eigenvalue {eig.min:.3e})"
            )
        arr.setflags(write=False)
        return cls(arr, metric, pinv_hermitian(metric))

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[1]

    def synthesize(self, coeffs) -> np.ndarray:
        """The vector ``sum_k coeffs[k] v_k`` in canonical coordinates."""
        return np.asarray(coeffs, dtype=complex) @ self.vectors

    def solve(self, x) -> tuple[np.ndarray, float]:
        """Coordinates of the orthogonal projection of ``x`` and the residual."""
        x = np.asarray(x, dtype=complex).reshape(-1)
        if x.size != self.ambient_dim:
            raise ValidationError(
                f"vector of length {x.size} in a {self.ambient_dim}-dimensional space"
            )
        c = self.metric_inverse @ (self.vectors.conj() @ x)
        scale = max(float(np.linalg.norm(x)), 1.0)
        return c, float(np.linalg.norm(self.synthesize(c) - x)) / scale


@dataclass(frozen=True)
class ObliqueCoords:
    basis: ObliqueBasis
    coeffs: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.basis.synthesize(self.coeffs)


def coords_in_basis(v, basis: ObliqueBasis, tol: float = SPAN_TOL) -> ObliqueCoords:
    """Expansion coefficients of ``v`` in ``basis``.

    Raises SpanError if ``v`` is farther than ``tol`` (relative) from the span.
    """
    c, res = basis.solve(v)
    if res > tol:
        raise SpanError("vector lies outside the span of the basis", res)
    return ObliqueCoords(basis, c)


def operator_matrix_in_basis(a, basis: ObliqueBasis, tol: float = SPAN_TOL) -> np.ndarray:
    """Matrix of ``a`` with respect to ``basis``: column k = coords of ``a v_k``."""
    a = np.asarray(a, dtype=complex)
    n = basis.ambient_dim
    if a.shape != (n, n):
        raise ValidationError(f"operator of shape {a.shape} on a {n}-dimensional space")
    images = basis.vectors @ a.T
    cols = []
    for k, img in enumerate(images):
        c, res = basis.solve(img)
        if res > tol:
            raise SpanError(f"image of basis vector {k} leaves the span", res)
        cols.append(c)
    return np.column_stack(cols)


def change_of_basis(source: ObliqueBasis, target: ObliqueBasis, tol: float = SPAN_TOL) -> np.ndarray:
    """Matrix M with ``coords_target = M @ coords_source``."""
    if source.ambient_dim != target.ambient_dim or len(source) != len(target):
        raise SpanError("bases have different sizes", float("inf"))
    cols = []
    for k, vec in enumerate(source.vectors):
        c, res = target.solve(vec)
        if res > tol:
            raise SpanError(f"source vector {k} is outside the target span", res)
        cols.append(c)
    return np.column_stack(cols)


def convert(coords: ObliqueCoords, target: ObliqueBasis) -> ObliqueCoords:
    return ObliqueCoords(target, change_of_basis(coords.basis, target) @ coords.coeffs)


def oblique_inner_product(a: ObliqueCoords, b: ObliqueCoords) -> complex:
    """``<a|b>`` computed from coordinates with the basis metric."""
    if a.basis is not b.basis:
        raise ValidationError("coordinates refer to different bases")
    return complex(a.coeffs.conj() @ a.basis.metric @ b.coeffs)


def matrix_function_in_basis(
    a_matrix: np.ndarray,
    f: Callable[[float], float],
    null_tol: float = 1e-10,
) -> np.ndarray:
    """``P f(D) P^{-1}`` for a diagonalisable matrix given in an oblique basis.

    ``a_matrix`` is the (generally non-Hermitian) matrix of a Hermitian
    operator in a nonorthogonal basis.  Its eigenvalues are those of the
    operator; eigenvalues with magnitude below ``null_tol`` (relative to
    the largest) are mapped to zero, matching the support convention.
    """
    lam, p = np.linalg.eig(np.asarray(a_matrix, dtype=complex))
    lam = lam.real
    cut = null_tol * float(np.max(np.abs(lam)))
    fd = np.array([f(x) if abs(x) > cut else 0.0 for x in lam], dtype=complex)
    return (p * fd) @ np.linalg.inv(p)

"""Dense complex linear algebra used throughout the package.

Everything here works on small Hermitian matrices (dimension up to a few
dozen).  The eigensolver is a cyclic complex Jacobi iteration, and the
other routines (matrix functions, Schmidt decomposition, PSD tests) are
built on top of it so that a single kernel carries all spectral work.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NumericError, ValidationError

HERMITIAN_TOL = 1e-12
SCHMIDT_RANK_TOL = 1e-9

_EPS = np.finfo(float).eps


def as_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``a`` as a complex Hermitian array, symmetrised.

    Raises ValidationError if ``a`` is not square or deviates from its
    adjoint by more than ``tol`` (scaled by the largest entry when that
    exceeds one).
    """
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > tol * scale:
        raise ValidationError(f"matrix is not Hermitian: max|A - A^H| = {dev:.3e}")
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class EigDecomposition:
    """Eigenvalues in ascending order with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])


def _rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    # Unitary U (2x2) such that U^H [[app, apq], [apq*, aqq]] U is diagonal.
    mag = abs(apq)
    phase = np.conj(apq / mag)
    theta = (aqq - app) / (2.0 * mag)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
    c = 1.0 / np.hypot(t, 1.0)
    s = t * c
    return np.array([[c, s], [-s * phase, c * phase]], dtype=complex)


def hermitian_eig(a, max_sweeps: int = 64) -> EigDecomposition:
    """Diagonalise a Hermitian matrix with cyclic Jacobi rotations.

    Each rotation annihilates one off-diagonal pair after a diagonal phase
    change makes it real.  Sweeps continue until the off-diagonal Frobenius
    norm drops to roundoff level relative to the matrix norm.

    Eigenvectors are normalised so that their largest-magnitude component
    is real and positive, which makes the output deterministic.
    """
    m = as_hermitian(a).copy()
    n = m.shape[0]
    v = np.eye(n, dtype=complex)
    if n == 0:
        return EigDecomposition(np.zeros(0), v)

    norm = float(np.linalg.norm(m))
    target = 4.0 * n * _EPS * norm
    tiny = np.finfo(float).tiny / _EPS
    sweeps = 0
    while True:
        off = float(np.linalg.norm(m - np.diag(np.diag(m))))
        if off <= target or norm == 0.0:
            break
        if sweeps >= max_sweeps:
            raise NumericError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e})",
                best=np.real(np.diag(m)),
            )
        sweeps += 1
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if abs(apq) <= tiny:
                    continue
                u = _rotation(m[p, p].real, m[q, q].real, apq)
                idx = [p, q]
                m[:, idx] = m[:, idx] @ u
                m[idx, :] = u.conj().T @ m[idx, :]
                m[p, q] = m[q, p] = 0.0
                m[p, p] = m[p, p].real
                m[q, q] = m[q, q].real
                v[:, idx] = v[:, idx] @ u
                rotated = True
        if not rotated:
            break

    w = np.real(np.diag(m))
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    lead = np.argmax(np.abs(v), axis=0)
    ph = v[lead, np.arange(n)]
    v = v * (np.abs(ph) / ph)
    return EigDecomposition(w, v, sweeps)


def support_tolerance(eigenvalues: np.ndarray, rel: float = 1e-10) -> float:
    """Default null-space cutoff: ``rel`` times the largest |eigenvalue|."""
    if len(eigenvalues) == 0:
        return 0.0
    return rel * float(np.max(np.abs(eigenvalues)))


def matrix_function_on_support(
    a,
    f: Callable[[float], float],
    null_tol: float | None = None,
) -> np.ndarray:
    """Apply ``f`` to the spectrum of ``a`` restricted to its support.

    Returns the sum of ``f(lam) |v><v|`` over eigenpairs with
    ``|lam| > null_tol``; eigenvectors in the (numerical) kernel contribute
    nothing.  This is the pseudo-inverse convention, so ``f = lam**-0.5``
    gives the inverse square root on the range of a rank-deficient PSD
    matrix.
    """
    eig = hermitian_eig(a)
    lam = eig.eigenvalues
    tol = support_tolerance(lam) if null_tol is None else null_tol
    keep = np.abs(lam) > tol
    vals = []
    for x in lam[keep]:
        try:
            with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
                y = f(float(x))
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(f"f undefined at eigenvalue {x:.6g}: {exc}") from exc
        y = complex(y)
        if not np.isfinite(y):
            raise DomainError(f"f is not finite at eigenvalue {x:.6g}")
        vals.append(y)
    vecs = eig.eigenvectors[:, keep]
    return (vecs * np.asarray(vals, dtype=complex)) @ vecs.conj().T


def support_projector(a, null_tol: float | None = None) -> np.ndarray:
    """Orthogonal projector onto the range of Hermitian ``a``."""
    return matrix_function_on_support(a, lambda _: 1.0, null_tol)


def sqrtm_psd(a, null_tol: float | None = None) -> np.ndarray:
    return matrix_function_on_support(a, np.sqrt, null_tol)


def inv_sqrtm_psd(a, null_tol: float | None = None) -> np.ndarray:
    return matrix_function_on_support(a, lambda x: 1.0 / np.sqrt(x) if x > 0 else np.nan, null_tol)


def pinv_hermitian(a, null_tol: float | None = None) -> np.ndarray:
    return matrix_function_on_support(a, lambda x: 1.0 / x, null_tol)


@dataclass(frozen=True)
class SchmidtDecomposition:
    """``v = sum_k coefficients[k] * left[k] (x) right[k]``.

    ``left`` and ``right`` hold only the ``rank`` vectors with nonzero
    coefficient (one per row).
    """

    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray
    rank: int

    def reconstruct(self) -> np.ndarray:
        r = self.rank
        return np.einsum(
            "k,ki,kj->ij", self.coefficients[:r], self.left, self.right
        ).reshape(-1)


def schmidt_decompose(
    v, dim_a: int, dim_b: int, rank_tol: float = SCHMIDT_RANK_TOL
) -> SchmidtDecomposition:
    """Schmidt decomposition of a bipartite vector via the Jacobi kernel.

    The left Schmidt vectors are eigenvectors of ``M M^H`` where ``M`` is the
    ``dim_a x dim_b`` reshaping of ``v``.  Coefficients are then taken as
    ``||M^H u_k||`` rather than square roots of eigenvalues, which keeps
    vanishing coefficients at roundoff level instead of its square root.
    """
    vec = np.asarray(v, dtype=complex).reshape(-1)
    if dim_a < 1 or dim_b < 1 or dim_a * dim_b != vec.size:
        raise ValidationError(
            f"cannot split a vector of length {vec.size} as {dim_a} x {dim_b}"
        )
    m = vec.reshape(dim_a, dim_b)
    eig = hermitian_eig(m @ m.conj().T)
    u = eig.eigenvectors[:, ::-1]
    proj = m.conj().T @ u
    sig = np.linalg.norm(proj, axis=0)
    order = np.argsort(-sig, kind="stable")
    sig = sig[order][: min(dim_a, dim_b)]
    u = u[:, order][:, : min(dim_a, dim_b)]
    proj = proj[:, order][:, : min(dim_a, dim_b)]
    rank = int(np.sum(sig > rank_tol))
    left = u[:, :rank].T.copy()
    right = (proj[:, :rank].conj() / sig[:rank]).T.copy()
    return SchmidtDecomposition(sig, left, right, rank)


def psd_check(a, tol: float = 1e-10) -> bool:
    """True iff the smallest eigenvalue of Hermitian ``a`` is >= -tol."""
    return hermitian_eig(a).min >= -tol


def min_eigenvalue(a) -> float:
    return hermitian_eig(a).min

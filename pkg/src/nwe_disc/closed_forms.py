"""Analytic expressions for the six-state product family.

All functions take the common pairwise overlap ``s`` of the underlying
symmetric triple and return plain numpy arrays.  Index conventions follow
the product ordering (1,2), (1,3), (2,1), (2,3), (3,1), (3,2) and, for
nine-element bases, the three diagonal products (1,1), (2,2), (3,3) last.

These are independent of the numerical pipeline and serve as oracles for it.
"""

from __future__ import annotations

import numpy as np

# Which of gamma_0..gamma_3 sits at each position of the 6x6 square roots.
# Position (i, j) depends only on how the two labels relate: equal, share
# one factor in the same slot, swapped, or share one factor across slots.
_SQRT_PATTERN = np.array(
    [
        [0, 1, 2, 3, 3, 1],
        [1, 0, 3, 1, 2, 3],
        [2, 3, 0, 1, 1, 3],
        [3, 1, 1, 0, 3, 2],
        [3, 2, 1, 3, 0, 1],
        [1, 3, 3, 2, 1, 0],
    ]
)

# Columns 7..9 of the inverse square root: 0 -> gamma_4, 1 -> gamma_5.
_DIAG_PATTERN = np.array(
    [
        [0, 0, 1],
        [0, 1, 0],
        [0, 0, 1],
        [1, 0, 0],
        [0, 1, 0],
        [1, 0, 0],
    ]
)


def _overlap_pattern(s: float, n_rows: int, n_cols: int) -> np.ndarray:
    # <a b | c d> = <a|c><b|d> for the nine product labels.
    labels = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (0, 0), (1, 1), (2, 2)]
    out = np.empty((n_rows, n_cols))
    for i in range(n_rows):
        for j in range(n_cols):
            (a, b), (c, d) = labels[i], labels[j]
            out[i, j] = (1.0 if a == c else s) * (1.0 if b == d else s)
    return out


def gram(s: float) -> np.ndarray:
    """6x6 Gram matrix: 1 on the diagonal, ``s`` or ``s**2`` elsewhere."""
    return _overlap_pattern(s, 6, 6)


def gram_eigenvalues(s: float) -> np.ndarray:
    """Gram spectrum, sorted ascending."""
    vals = [
        1 - s, 1 - s, (1 - s) ** 2,
        1 + s - 2 * s**2, 1 + s - 2 * s**2,
        1 + 2 * s + 3 * s**2,
    ]
    return np.sort(np.array(vals))


def _gammas(v0: float, v1: float, v2: float, v3: float) -> np.ndarray:
    return np.array(
        [
            2 * v0 + 2 * v1 + v2 + v3,
            -v0 + v1 - v2 + v3,
            2 * v0 - 2 * v1 - v2 + v3,
            -v0 - v1 + v2 + v3,
        ]
    )


def gram_sqrt_gammas(s: float) -> np.ndarray:
    v = np.sqrt([1 - s, -2 * s**2 + s + 1, (s - 1) ** 2, 3 * s**2 + 2 * s + 1])
    return _gammas(*v)


def gram_sqrt(s: float) -> np.ndarray:
    """Square root of the Gram matrix; every diagonal entry equals gamma_0 / 6."""
    return gram_sqrt_gammas(s)[_SQRT_PATTERN] / 6.0


def srm_success(s: float) -> float:
    """Square-root measurement success probability ``(gamma_0 / 6)**2``."""
    return float((gram_sqrt_gammas(s)[0] / 6.0) ** 2)


def rho_in_b(s: float) -> np.ndarray:
    """Matrix of the average state in the nine-element product basis.

    Column ``j`` holds the coefficients of ``rho |b_j>`` on the first six
    basis vectors; the last three rows vanish because the range of ``rho``
    is spanned by the six off-diagonal products.
    """
    out = np.zeros((9, 9))
    out[:6, :] = _overlap_pattern(s, 6, 9) / 6.0
    return out


def rho_inv_sqrt_gammas(s: float) -> np.ndarray:
    """gamma_0..gamma_5 entering the inverse square root of ``rho``.

    ``v4 = s / sqrt(1-s)`` and ``v5 = (s**2 + 2s) / (3s**2 + 2s + 1)**1.5``.
    """
    q = 3 * s**2 + 2 * s + 1
    v0 = 1 / np.sqrt(1 - s)
    v1 = 1 / np.sqrt(-2 * s**2 + s + 1)
    v2 = 1 / np.sqrt((s - 1) ** 2)
    v3 = 1 / np.sqrt(q)
    v4 = s / np.sqrt(1 - s)
    v5 = (s**2 + 2 * s) / (np.sqrt(q) * q)
    return np.concatenate([_gammas(v0, v1, v2, v3), [2 * v4 + 2 * v5, -4 * v4 + 2 * v5]])


def rho_inv_sqrt_in_b(s: float) -> np.ndarray:
    """Matrix of ``rho**-1/2`` (support convention) in the product basis."""
    g = rho_inv_sqrt_gammas(s)
    out = np.zeros((9, 9))
    out[:6, :6] = g[:4][_SQRT_PATTERN]
    out[:6, 6:] = g[4:][_DIAG_PATTERN]
    return out / np.sqrt(6.0)


def reciprocal_overlap(s: float) -> float:
    """``<psi'_i|psi_i>`` for unit reciprocal states of the symmetric triple."""
    return float(np.sqrt((1 + s - 2 * s**2) / (1 + s)))


def reciprocal_coefficients(s: float) -> np.ndarray:
    """Matrix ``R`` with ``psi'_i = sum_j R[i, j] psi_j``."""
    c = np.sqrt((1 + s) / (1 + s - 2 * s**2))
    r = np.full((3, 3), -c * s / (1 + s))
    np.fill_diagonal(r, c)
    return r


def inverse_reciprocal_coefficients(s: float) -> np.ndarray:
    """Matrix ``Q`` with ``psi_i = sum_j Q[i, j] psi'_j``."""
    c = np.sqrt((1 + s) / (1 + s - 2 * s**2))
    q = np.full((3, 3), c * s)
    np.fill_diagonal(q, c)
    return q


def change_of_basis(s: float) -> np.ndarray:
    """Matrix taking product-basis coordinates to reciprocal-product coordinates."""
    return (1 + s) / (1 + s - 2 * s**2) * _overlap_pattern(s, 9, 9)


def mu1_in_b(s: float) -> np.ndarray:
    """Unit-norm first distilled vector in the product basis."""
    return rho_inv_sqrt_in_b(s)[:, 0] / np.sqrt(6.0)


def mu1_in_bprime(s: float) -> np.ndarray:
    """Unit-norm first distilled vector in the reciprocal-product basis.

    Written out componentwise; equal to ``change_of_basis(s) @ mu1_in_b(s)``.
    """
    r0 = np.sqrt(1 - s)
    r1 = np.sqrt(-2 * s**2 + s + 1)
    r3 = np.sqrt(s * (3 * s + 2) + 1)
    den = 6 * (s - 1) * (2 * s + 1)
    c1 = -(s + 1) * (2 * r1 - s + 2 * r0 + r3 + 1) / den
    c2 = (s + 1) * (-r1 - s + r0 - r3 + 1) / den
    c3 = -(s + 1) * (-2 * r1 + s + 2 * r0 + r3 - 1) / den
    c4 = (s + 1) * (r1 + s + r0 - r3 - 1) / den
    tail = 3 * (1 - s) ** 1.5 * (2 * s + 1) * r3
    c7 = s * (s + 1) * (2 * r0 + s * (r0 - r3) + r3) / tail
    c9 = s * (s + 1) * (s * r0 + 2 * r0 + 2 * s * r3 - 2 * r3) / tail
    return np.array([c1, c2, c3, c4, c4, c2, c7, c7, c9])


def chen_components(s: float) -> tuple[float, float, float]:
    """(mu_11, mu_12, mu_14): the components used as divisors in the k-ratios."""
    m = mu1_in_bprime(s)
    return float(m[0]), float(m[1]), float(m[3])

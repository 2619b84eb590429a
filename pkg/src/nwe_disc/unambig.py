"""Unambiguous discrimination: measurements, the efficiency SDP, LOCC protocol.

The optimal efficiencies ``p_i`` of an unambiguous measurement for
linearly independent pure states solve

    maximize  sum_i eta_i p_i   subject to   G - diag(p) >= 0,  p >= 0,

with ``G`` the Gram matrix; the dual is

    minimize  Tr(G Z)   subject to   z_i + eta_i - Z_ii = 0,  Z >= 0,  z >= 0.

``solve_ud_primal`` handles the primal with a log-det barrier and damped
Newton steps in the N efficiencies, and returns a dual certificate built
from the barrier optimum.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .ensembles import PRODUCT_PAIRS, as_state_array, make_symmetric_states, reciprocal_states
from .errors import AmbiguityError, InfeasibleError, NumericError, ValidationError
from .minerr import Povm
from .numerics import as_hermitian, hermitian_eig

UNAMBIGUITY_TOL = 1e-9
FEASIBILITY_TOL = 1e-9


def ud_condition_check(povm: Povm, states, tol: float = UNAMBIGUITY_TOL) -> np.ndarray:
    """Efficiencies ``p_i = Tr(E_i |chi_i><chi_i|)`` of an unambiguous POVM.

    ``povm`` must carry the inconclusive element first.  Raises
    AmbiguityError naming the first ``(i, j)`` with ``Tr(E_i chi_j) > tol``
    for ``i != j``.
    """
    s = as_state_array(states)
    if not povm.inconclusive or len(povm) != s.shape[0] + 1:
        raise ValidationError(
            f"expected {s.shape[0] + 1} elements with an inconclusive outcome first"
        )
    if povm.elements.shape[1] != s.shape[1]:
        raise ValidationError("POVM and states have different dimensions")
    table = Povm(povm.guesses, povm.closure).probabilities(s)
    n = s.shape[0]
    for i in range(n):
        for j in range(n):
            if i != j and abs(table[i, j]) > tol:
                raise AmbiguityError(i, j, float(table[i, j]))
    return np.diag(table).copy()


def _dual_frame(states) -> np.ndarray:
    # Unnormalised reciprocal vectors d_i with <d_i|psi_j> = delta_ij.
    s = as_state_array(states)
    recips = reciprocal_states(s)
    ov = np.einsum("ij,ij->i", recips.conj(), s).real
    return recips / ov[:, None]


def max_uniform_efficiency(states) -> float:
    """Largest ``p`` for which ``1 - p * sum_i |d_i><d_i|`` stays PSD."""
    d = _dual_frame(states)
    frame = np.einsum("ki,kj->ij", d, d.conj())
    return 1.0 / hermitian_eig(frame).max


def build_reciprocal_povm(states, efficiency: float, tol: float = FEASIBILITY_TOL) -> Povm:
    """UD measurement ``E_i = p |d_i><d_i|`` with equal efficiency ``p``.

    ``d_i`` is the reciprocal state rescaled so that ``<d_i|psi_i> = 1``,
    i.e. ``E_i = p / |<psi'_i|psi_i>|^2 |psi'_i><psi'_i|``.  The
    inconclusive element ``E_0 = 1 - sum E_i`` comes first.
    """
    if not 0.0 < efficiency <= 1.0:
        raise ValidationError(f"efficiency must lie in (0, 1], got {efficiency}")
    s = as_state_array(states)
    d = _dual_frame(s)
    elems = efficiency * np.einsum("ki,kj->kij", d, d.conj())
    e0 = np.eye(s.shape[1]) - elems.sum(axis=0)
    lo = hermitian_eig(e0).min
    if lo < -tol:
        raise InfeasibleError(efficiency, max_uniform_efficiency(s))
    return Povm.from_elements(
        np.concatenate([e0[None], elems]), inconclusive=True, tol=max(tol, 1e-10)
    )


@dataclass(frozen=True)
class UdSolution:
    efficiencies: np.ndarray
    value: float
    dual_Z: np.ndarray
    dual_z: np.ndarray
    gap: float
    iterations: int = 0


def _chol(m):
    try:
        return np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return None


def _barrier(gram, priors, p, mu):
    l = _chol(gram - np.diag(p))
    if l is None or np.any(p <= 0):
        return -np.inf, None
    logdet = 2.0 * float(np.sum(np.log(np.real(np.diag(l)))))
    return float(priors @ p) + mu * (logdet + float(np.sum(np.log(p)))), l


def _certificate(gram, priors, p, mu, l):
    # Z = mu (G - P)^{-1}, rescaled on both sides so that Z_ii = eta_i + z_i
    # exactly with z = mu / p.
    linv = np.linalg.inv(l)
    sinv = linv.conj().T @ linv
    z = mu / p
    zz = mu * sinv
    scale = np.sqrt((priors + z) / np.real(np.diag(zz)))
    zz = (zz * scale[:, None]) * scale[None, :]
    return 0.5 * (zz + zz.conj().T), z


def solve_ud_primal(
    gram,
    priors,
    gap_tol: float = 1e-7,
    mu0: float = 0.1,
    max_newton: int = 200,
) -> UdSolution:
    """Maximise ``sum eta_i p_i`` s.t. ``G - diag(p) >= 0``, ``p >= 0``.

    Path-following on ``eta.p + mu (log det(G - diag p) + sum log p)`` with
    ``mu`` halved after each centring, stopping once the certified
    primal-dual gap is below ``gap_tol``.
    """
    g = as_hermitian(gram)
    eta = np.asarray(priors, dtype=float).reshape(-1)
    n = g.shape[0]
    if eta.size != n:
        raise ValidationError(f"{eta.size} priors for a {n}x{n} Gram matrix")
    if np.any(eta < 0) or abs(eta.sum() - 1.0) > 1e-12:
        raise ValidationError("priors must be nonnegative and sum to 1")
    lam_min = hermitian_eig(g).min
    if lam_min <= 0:
        raise ValidationError(f"Gram matrix is singular (min eigenvalue {lam_min:.3e})")

    p = np.full(n, 0.5 * lam_min)
    mu = mu0
    steps = 0
    best = None
    while True:
        # centring by damped Newton
        for _ in range(max_newton):
            f, l = _barrier(g, eta, p, mu)
            linv = np.linalg.inv(l)
            sinv = linv.conj().T @ linv
            grad = eta + mu * (1.0 / p - np.real(np.diag(sinv)))
            hess = -mu * (np.abs(sinv) ** 2 + np.diag(1.0 / p**2))
            step = -np.linalg.solve(hess, grad)
            decrement = float(grad @ step)
            steps += 1
            if decrement < 1e-14 * max(1.0, mu):
                break
            t = 1.0
            while True:
                trial = p + t * step
                ft, _ = _barrier(g, eta, trial, mu)
                if ft >= f + 0.25 * t * float(grad @ step):
                    break
                t *= 0.5
                if t < 1e-14:
                    break
            if t < 1e-14:
                break
            p = trial
        else:
            raise NumericError(f"centring did not converge at mu={mu:.3e}", best=best)

        _, l = _barrier(g, eta, p, mu)
        zz, z = _certificate(g, eta, p, mu, l)
        value = float(eta @ p)
        gap = float(np.real(np.trace(g @ zz))) - value
        best = UdSolution(p.copy(), value, zz, z, gap, steps)
        if gap <= gap_tol:
            return best
        if mu < 1e-16:
            raise NumericError(f"duality gap stalled at {gap:.3e}", best=best)
        mu *= 0.5


class CertificateReport(NamedTuple):
    feasible: bool
    value: float
    equality_residual: float
    min_eig_Z: float
    min_z: float
    violations: tuple[str, ...]


def check_dual_certificate(gram, priors, Z, z, primal_value: float | None = None, tol: float = 1e-8) -> CertificateReport:
    """Verify a dual point and return its objective ``Tr(G Z)``.

    When ``primal_value`` is given, weak duality ``Tr(G Z) >= primal - tol``
    is checked as well.
    """
    g = np.asarray(gram, dtype=complex)
    eta = np.asarray(priors, dtype=float).reshape(-1)
    zm = np.asarray(Z, dtype=complex)
    zv = np.asarray(z, dtype=float).reshape(-1)
    n = g.shape[0]
    if zm.shape != (n, n) or zv.size != n or eta.size != n:
        raise ValidationError("certificate shapes do not match the Gram matrix")
    violations = []
    eq = float(np.max(np.abs(zv + eta - np.real(np.diag(zm)))))
    if eq > tol:
        violations.append(f"z_i + eta_i - Z_ii = 0 violated by {eq:.3e}")
    herm = float(np.max(np.abs(zm - zm.conj().T)))
    if herm > tol:
        violations.append(f"Z not Hermitian (deviation {herm:.3e})")
        lo = -np.inf
    else:
        lo = hermitian_eig(0.5 * (zm + zm.conj().T)).min
        if lo < -tol:
            violations.append(f"Z not PSD (min eigenvalue {lo:.3e})")
    zmin = float(zv.min())
    if zmin < -tol:
        violations.append(f"z has negative entry {zmin:.3e}")
    value = float(np.real(np.trace(g @ zm)))
    if primal_value is not None and value < primal_value - tol:
        violations.append(f"weak duality fails: {value:.12g} < {primal_value:.12g}")
    return CertificateReport(not violations, value, eq, float(lo), zmin, tuple(violations))


def equiprobable_optimum(gram) -> float:
    """Best common efficiency: the smallest Gram eigenvalue."""
    return hermitian_eig(gram).min


def symmetrize_efficiencies(efficiencies, perms) -> np.ndarray:
    """Average ``diag(p_sigma)`` over the given permutations."""
    p = np.asarray(efficiencies, dtype=float)
    perms = list(perms)
    acc = np.zeros((p.size, p.size))
    for sigma in perms:
        acc += np.diag(p[list(sigma)])
    return acc / len(perms)


def product_family_automorphisms() -> list[tuple[int, ...]]:
    """Permutations of the six product labels induced by relabelling factors.

    Relabelling the three single-site states by ``pi`` maps label
    ``(a, b)`` to ``(pi a, pi b)``; these six index permutations leave the
    Gram matrix invariant.
    """
    out = []
    for pi in itertools.permutations(range(3)):
        out.append(tuple(PRODUCT_PAIRS.index((pi[a], pi[b])) for a, b in PRODUCT_PAIRS))
    return out


@dataclass(frozen=True)
class ProtocolResult:
    s: float
    exact_success: float
    per_round_efficiency: float
    empirical_success: float | None = None
    stderr: float | None = None
    trials: int = 0
    seed: int | None = None
    wrong_conclusive: int = 0


def _born_table(povm: Povm, states) -> np.ndarray:
    # Rows: true state; columns: outcome (0 = inconclusive).
    t = povm.probabilities(states).T
    t[np.abs(t) < 1e-12] = 0.0
    return t / t.sum(axis=1, keepdims=True)


class _Protocol(NamedTuple):
    alice: np.ndarray          # (3, 4) outcome probabilities per true first factor
    bob: dict                  # alice's verdict a -> (labels, (3, 3) table over all true states)
    per_round: float


def _protocol_tables(s: float) -> _Protocol:
    if not 0.0 < s < 1.0:
        raise ValidationError(f"s must lie in (0, 1), got {s}")
    psi = make_symmetric_states(s, 3)
    eff = 1.0 - s
    alice_povm = build_reciprocal_povm(psi, eff)
    ud_condition_check(alice_povm, psi)
    alice = _born_table(alice_povm, psi)
    bob = {}
    for a in range(3):
        rest = [k for k in range(3) if k != a]
        bob_povm = build_reciprocal_povm(psi[rest], eff)
        ud_condition_check(bob_povm, psi[rest])
        bob[a] = (rest, _born_table(bob_povm, psi))
    per_round = float(np.mean(np.diag(alice[:, 1:])))
    return _Protocol(alice, bob, per_round)


def sequential_protocol_exact(s: float) -> ProtocolResult:
    """Exact success of the two-round local protocol on the product family.

    Alice runs the optimal equal-efficiency UD measurement for the three
    single-site states on her factor.  If she identifies ``psi_a``, Bob's
    state is one of the two others and he runs the two-state UD measurement
    for that pair.  The success probability is averaged over the six
    equiprobable inputs from the Born probabilities of both measurements.
    """
    proto = _protocol_tables(s)
    total = 0.0
    for a, b in PRODUCT_PAIRS:
        rest, table = proto.bob[a]
        total += proto.alice[a, 1 + a] * table[b, 1 + rest.index(b)]
    return ProtocolResult(s, float(total / 6.0), proto.per_round)


SHARD_SIZE = 1 << 14


def worker_count() -> int:
    """Worker cap from ``NWE_DISC_THREADS`` (0 or unset means auto)."""
    raw = os.environ.get("NWE_DISC_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"NWE_DISC_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValidationError("NWE_DISC_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def _sample(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    # Row-wise inverse-CDF sampling: cdf has one row per draw.
    return np.minimum((u[:, None] >= cdf).sum(axis=1), cdf.shape[1] - 1)


def _run_shard(proto: _Protocol, n: int, seed_seq: np.random.SeedSequence) -> tuple[int, int]:
    rng = np.random.Generator(np.random.Philox(seed_seq))
    which = rng.integers(0, 6, size=n)
    pairs = np.array(PRODUCT_PAIRS)[which]
    first, second = pairs[:, 0], pairs[:, 1]
    alice_cdf = np.cumsum(proto.alice, axis=1)[first]
    out_a = _sample(alice_cdf, rng.random(n))
    u_b = rng.random(n)
    concl_a = out_a > 0
    guess_a = out_a - 1
    wrong = int(np.sum(concl_a & (guess_a != first)))
    success = 0
    for a in range(3):
        rest, table = proto.bob[a]
        sel = concl_a & (guess_a == a)
        if not np.any(sel):
            continue
        truth = second[sel]
        out_b = _sample(np.cumsum(table, axis=1)[truth], u_b[sel])
        concl_b = out_b > 0
        guess_b = np.asarray(rest)[np.maximum(out_b - 1, 0)]
        wrong += int(np.sum(concl_b & (guess_b != truth)))
        success += int(np.sum(concl_b & (guess_b == truth) & (first[sel] == a)))
    return success, wrong


def monte_carlo_protocol(s: float, trials: int, seed: int, workers: int | None = None) -> ProtocolResult:
    """Sample the two-round protocol ``trials`` times.

    Trials are split into fixed-size shards, each with its own child of
    ``SeedSequence(seed)`` driving a Philox generator, so results depend only
    on ``(s, trials, seed)`` and not on the number of workers.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    proto = _protocol_tables(s)
    exact = sequential_protocol_exact(s)
    sizes = [SHARD_SIZE] * (trials // SHARD_SIZE)
    if trials % SHARD_SIZE:
        sizes.append(trials % SHARD_SIZE)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(sizes))) as pool:
            results = list(pool.map(lambda a: _run_shard(proto, *a), zip(sizes, seqs)))
    else:
        results = [_run_shard(proto, n, sq) for n, sq in zip(sizes, seqs)]
    hits = sum(r[0] for r in results)
    wrong = sum(r[1] for r in results)
    emp = hits / trials
    stderr = math.sqrt(emp * (1.0 - emp) / trials)
    return ProtocolResult(
        s=s,
        exact_success=exact.exact_success,
        per_round_efficiency=exact.per_round_efficiency,
        empirical_success=emp,
        stderr=stderr,
        trials=trials,
        seed=seed,
        wrong_conclusive=wrong,
    )

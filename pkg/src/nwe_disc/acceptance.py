"""Acceptance suite: nine end-to-end checks of the discrimination pipeline.

Each check returns a ``CriterionResult``; ``run_suite`` runs them in order.
The grid of overlaps is a parameter so that a fast run can use
``FAST_GRID`` and a full run ``FULL_GRID``.
"""

from __future__ import annotations

import itertools
import math
import time
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import closed_forms
from .ensembles import (
    gram_matrix,
    make_double_trine,
    make_product_family,
    make_symmetric_states,
    symmetric_gram,
    trine_states,
)
from .minerr import (
    chen_analysis,
    product_bases,
    product_family_srm,
    random_projective_successes,
    srm_matches_closed_form,
    srm_optimality_check,
    witness_residual,
)
from .numerics import hermitian_eig, sqrtm_psd
from .oblique import change_of_basis, coords_in_basis
from .unambig import (
    equiprobable_optimum,
    monte_carlo_protocol,
    sequential_protocol_exact,
    solve_ud_primal,
)

FULL_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
FAST_GRID = (0.25, 0.5, 0.75)
NEGATIVE_OVERLAPS = (-0.4, -0.2)
CLOSED_FORM_POINTS = (0.25, 0.5, 0.75)


class CriterionResult(NamedTuple):
    id: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} [{self.id}] {self.name}: {self.detail} ({self.seconds:.2f} s)"


def _timed(cid: int, name: str, budget: float | None, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    ok, detail = body()
    dt = time.perf_counter() - t0
    if budget is not None and dt >= budget:
        ok = False
        detail += f"; runtime {dt:.2f} s over budget {budget:g} s"
    return CriterionResult(cid, name, ok, detail, dt)


def _family_gram(s: float, fault: bool) -> np.ndarray:
    g = make_product_family(s).gram()
    if fault:
        # corrupt one symmetric pair of entries
        g = g.copy()
        g[0, 1] = g[1, 0] = -g[0, 1]
    return g


def spectrum(grid: Sequence[float], fault: bool = False) -> CriterionResult:
    def body():
        worst_eig = worst_trace = 0.0
        for s in grid:
            g = _family_gram(s, fault)
            lam = hermitian_eig(g).eigenvalues
            worst_eig = max(worst_eig, float(np.max(np.abs(lam - closed_forms.gram_eigenvalues(s)))))
            worst_trace = max(worst_trace, abs(float(np.real(np.trace(g))) - 6.0))
        ok = worst_eig <= 1e-10 and worst_trace <= 1e-10
        return ok, f"max eigenvalue error {worst_eig:.2e}, trace error {worst_trace:.2e}"

    return _timed(1, "spectrum", 1.0, body)


def gram_sqrt(grid: Sequence[float]) -> CriterionResult:
    def body():
        worst = spread = 0.0
        for s in grid:
            root = sqrtm_psd(make_product_family(s).gram())
            worst = max(worst, float(np.max(np.abs(root - closed_forms.gram_sqrt(s)))))
            d = np.real(np.diag(root))
            spread = max(spread, float(d.max() - d.min()))
        ok = worst <= 1e-9 and spread <= 1e-12
        return ok, f"max entry error {worst:.2e}, diagonal spread {spread:.2e}"

    return _timed(2, "gram_sqrt", 1.0, body)


def ud_optimum(grid: Sequence[float]) -> CriterionResult:
    def body():
        worst_val = worst_gap = worst_eq = 0.0
        cases = []
        for s in grid:
            fam = make_product_family(s)
            cases.append((fam.gram(), fam.priors, (1 - s) ** 2))
            worst_eq = max(worst_eq, abs(equiprobable_optimum(fam.gram()) - (1 - s) ** 2))
        for s in grid:
            cases.append((symmetric_gram(s), np.full(3, 1 / 3), 1 - s))
        for s in NEGATIVE_OVERLAPS:
            cases.append((symmetric_gram(s), np.full(3, 1 / 3), 1 + 2 * s))
        for g, eta, expected in cases:
            sol = solve_ud_primal(g, eta)
            worst_val = max(worst_val, abs(sol.value - expected))
            worst_gap = max(worst_gap, sol.gap)
        ok = worst_val <= 1e-6 and worst_gap <= 1e-6 and worst_eq <= 1e-10
        return ok, (
            f"{len(cases)} programs, max value error {worst_val:.2e}, "
            f"max gap {worst_gap:.2e}, equiprobable error {worst_eq:.2e}"
        )

    return _timed(3, "ud_optimum", 5.0, body)


def locc_attainment(grid: Sequence[float], trials: int = 100_000, seed: int = 7) -> CriterionResult:
    def body():
        worst = 0.0
        for s in grid:
            fam = make_product_family(s)
            sdp = solve_ud_primal(fam.gram(), fam.priors).value
            worst = max(worst, abs(sequential_protocol_exact(s).exact_success - sdp))
        mc = monte_carlo_protocol(0.5, trials, seed)
        sigma = math.sqrt(mc.exact_success * (1 - mc.exact_success) / trials)
        z = abs(mc.empirical_success - mc.exact_success) / sigma
        ok = worst <= 1e-6 and z <= 4.0 and mc.wrong_conclusive == 0
        return ok, (
            f"max |protocol - SDP| {worst:.2e}; Monte Carlo {mc.empirical_success:.5f} "
            f"({z:.2f} sigma), wrong conclusive {mc.wrong_conclusive}"
        )

    return _timed(4, "locc_attainment", 10.0, body)


def distilled_basis(grid: Sequence[float]) -> CriterionResult:
    def body():
        worst_orth = worst_wit = worst_coef = 0.0
        min_rank = 9
        for s in grid:
            basis = product_family_srm(s).basis
            mu = basis.vectors
            worst_orth = max(worst_orth, float(np.max(np.abs(gram_matrix(mu) - np.eye(6)))))
            for i, j in itertools.permutations(range(6), 2):
                worst_wit = max(worst_wit, witness_residual(basis, i, j))
            ref = basis.schmidt(0).coefficients
            for i in range(6):
                sd = basis.schmidt(i)
                worst_coef = max(worst_coef, float(np.max(np.abs(sd.coefficients - ref))))
                min_rank = min(min_rank, sd.rank)
        ok = worst_orth <= 1e-10 and worst_wit <= 1e-9 and worst_coef <= 1e-9 and min_rank >= 2
        return ok, (
            f"orthonormality {worst_orth:.2e}, witness residual {worst_wit:.2e}, "
            f"Schmidt spread {worst_coef:.2e}, min rank {min_rank}"
        )

    return _timed(5, "distilled_basis", None, body)


def chen(grid: Sequence[float]) -> CriterionResult:
    def body():
        smallest = math.inf
        worst_dev = 0.0
        finite = True
        verdicts = set()
        found = 0
        for s in grid:
            rep = chen_analysis(s)
            smallest = min(smallest, min(abs(c) for c in rep.denominator_components))
            finite &= all(np.isfinite(k) for k in rep.k_ratios)
            worst_dev = max(worst_dev, rep.search_max_deviation)
            found += rep.search_found
            verdicts.add(rep.verdict)
        ok = (
            smallest > 1e-6
            and finite
            and worst_dev <= 1e-8
            and verdicts == {"not_locc_distinguishable"}
        )
        return ok, (
            f"min |mu_11, mu_12, mu_14| {smallest:.3e}, k-ratios finite {finite}, "
            f"{found} product vectors found, max deviation from ray {worst_dev:.2e}, "
            f"verdicts {sorted(verdicts)}"
        )

    return _timed(6, "chen", None, body)


def srm_optimality(grid: Sequence[float], samples: int = 200, seed: int = 11) -> CriterionResult:
    def body():
        worst = 0.0
        all_ok = True
        for s in grid:
            rep = srm_optimality_check(make_product_family(s).gram())
            all_ok &= rep.optimal
            worst = max(worst, rep.spread)
        fam = make_product_family(0.5)
        srm = product_family_srm(0.5).success
        rand = random_projective_successes(fam, samples, np.random.default_rng(seed))
        ok = all_ok and srm >= float(rand.max())
        return ok, (
            f"diagonal spread {worst:.2e}; SRM {srm:.6f} vs best of {samples} random {rand.max():.6f}"
        )

    return _timed(7, "srm_optimality", None, body)


def oblique_round_trips(points: Sequence[float] = CLOSED_FORM_POINTS, seed: int = 3) -> CriterionResult:
    def body():
        rng = np.random.default_rng(seed)
        worst_rt = worst_cb = worst_cf = 0.0
        for s in points:
            b, bp = product_bases(s)
            v = rng.normal(size=9) + 1j * rng.normal(size=9)
            worst_rt = max(worst_rt, float(np.linalg.norm(coords_in_basis(v, b).reconstruct() - v)) / np.linalg.norm(v))
            m = change_of_basis(b, bp)
            m_inv = change_of_basis(bp, b)
            worst_cb = max(worst_cb, float(np.max(np.abs(m_inv @ m - np.eye(9)))))
            rep = srm_matches_closed_form(s)
            worst_cf = max(worst_cf, rep.rho_b, rep.rho_inv_sqrt_b)
        ok = worst_rt <= 1e-10 and worst_cb <= 1e-10 and worst_cf <= 1e-9
        return ok, (
            f"coordinate round trip {worst_rt:.2e}, change of basis {worst_cb:.2e}, "
            f"closed forms {worst_cf:.2e}"
        )

    return _timed(8, "oblique_round_trips", None, body)


def trine() -> CriterionResult:
    def body():
        t = trine_states()
        g1 = gram_matrix(t)
        err1 = float(np.max(np.abs(g1 - (1.5 * np.eye(3) - 0.5))))
        g2 = make_double_trine().gram()
        err2 = float(np.max(np.abs(g2 - (0.75 * np.eye(3) + 0.25))))
        ok = err1 <= 1e-12 and err2 <= 1e-12
        return ok, f"single-copy error {err1:.2e}, product error {err2:.2e}"

    return _timed(9, "trine", None, body)


def run_suite(grid: Sequence[float] = FULL_GRID, inject_fault: bool = False) -> list[CriterionResult]:
    grid = tuple(grid)
    return [
        spectrum(grid, fault=inject_fault),
        gram_sqrt(grid),
        ud_optimum(grid),
        locc_attainment(grid),
        distilled_basis(grid),
        chen(grid),
        srm_optimality(grid),
        oblique_round_trips(),
        trine(),
    ]

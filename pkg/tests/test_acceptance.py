"""Acceptance criteria, each checked at its stated tolerance.

Every test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""
import cmath
import math
import time
import timeit
from fractions import Fraction

import numpy as np
import pytest

from fibspec.charpoly import CharPolynomial, Regime, all_roots, dominant_root, root_count_report
from fibspec.invasion import InvasionModel, lambda_max_gamma5_closed, minimize_speed, speed_objective
from fibspec.operators import Kind, OperatorSpec, SeqVector, build_truncation, exact_power_norm, nonclosedness_demo
from fibspec.operators import power_iteration_radius
from fibspec.sequences import GenFibSequence, prefix_sum_identity, ratio_limit_estimate
from fibspec.spectra import (
    Part,
    classify,
    resolvent_apply,
    transpose_bound,
    transpose_eigvec_bound,
    transpose_eigvec_divergence,
    window_residual,
)

from oracles import companion_roots, dense_solve, fib_brute, p_coeffs, q_coeffs

PHI = 1.618033988749895
RHO_GRID = np.logspace(-6, 6, 25)


def test_ac01_golden_ratio(acceptance):
    poly = CharPolynomial.fibonacci(1)
    value = dominant_root(poly)
    best = min(timeit.repeat(lambda: dominant_root(poly), number=1, repeat=50))
    ok = abs(value - PHI) <= 1e-12 and best < 1e-3
    assert acceptance(1, "golden ratio", ok, f"|err|={abs(value - PHI):.1e}, best runtime {best * 1e6:.0f} us")


def test_ac02_q2_factorization(acceptance):
    worst = 0.0
    for rho in (0.25, 1.0, 4.0, 9.0):
        roots = sorted(all_roots(CharPolynomial.fib_like(1, rho)).roots, key=lambda z: z.real)
        want = [1 - math.sqrt(rho), 1 + math.sqrt(rho)]
        worst = max(worst, max(abs(z - w) for z, w in zip(roots, want)))
    assert acceptance(2, "q_2 roots 1 +- sqrt(rho)", worst <= 1e-10, f"worst gap {worst:.1e}")


def test_ac03_exact_norm_identity(acceptance):
    start = time.perf_counter()
    bad = []
    for n in range(1, 5):
        for k in range(n + 1, 21):
            got = exact_power_norm(OperatorSpec(Kind.F, n), k, k + n + 10)
            if got != fib_brute(n, k + n + 1)[-1]:
                bad.append((n, k))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    assert acceptance(3, "||F_n^k||_1 = f_{k+n+1}", ok, f"{len(bad)} mismatches, {elapsed:.2f} s")


def test_ac04_prefix_sum_identity(acceptance):
    bad = []
    for n in range(1, 9):
        seq = GenFibSequence(n)
        for k in range(1, 501):
            total, rhs = prefix_sum_identity(seq, k)
            if total != rhs:
                bad.append((n, k))
    # independent spot check of both sides
    total, rhs = prefix_sum_identity(GenFibSequence(8), 500)
    ok = not bad and total == sum(fib_brute(8, 500)) and rhs == fib_brute(8, 509)[-1] - 1
    assert acceptance(4, "prefix sums, n <= 8, k <= 500", ok, f"{len(bad)} mismatches of 4000")


def test_ac05_ratio_limit(acceptance):
    gaps = {1: abs(ratio_limit_estimate(1, 30) - PHI)}
    for n in (2, 3):
        lam = max(companion_roots(p_coeffs(n)).real)
        gaps[n] = abs(ratio_limit_estimate(n, 80) - lam)
    ok = gaps[1] < 1e-10 and gaps[2] < 1e-8 and gaps[3] < 1e-8
    detail = ", ".join(f"n={n}: {g:.1e}" for n, g in gaps.items())
    assert acceptance(5, "ratio limit", ok, detail)


def test_ac06_gamma5_closed_form(acceptance):
    worst = max(
        abs(lambda_max_gamma5_closed(rho) - dominant_root(CharPolynomial.fib_like(5, rho)))
        / dominant_root(CharPolynomial.fib_like(5, rho))
        for rho in RHO_GRID
    )
    assert acceptance(6, "Gamma_5 closed form vs Newton", worst <= 1e-10, f"worst rel gap {worst:.1e}")


def test_ac07_root_dominance(acceptance):
    polys = [CharPolynomial.fibonacci(n) for n in range(1, 13)]
    polys += [CharPolynomial.fib_like(n, rho) for n in range(1, 9) for rho in RHO_GRID]
    worst_margin = math.inf
    for poly in polys:
        rs = all_roots(poly)
        margin = rs.dominant - max(abs(z) for z in rs.others)
        worst_margin = min(worst_margin, margin)
    ok = worst_margin >= 1e-8
    assert acceptance(7, "root dominance", ok, f"{len(polys)} polynomials, smallest margin {worst_margin:.2e}")


def resolvent_cases(rng, kind, count):
    for _ in range(count):
        if kind == "F":
            n, rho = int(rng.integers(1, 9)), 1.0
        else:
            n, rho = int(rng.integers(2, 9)), float(np.exp(rng.uniform(np.log(0.05), np.log(5.0))))
        lam = rng.uniform(1.2, 4.0) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        y = rng.normal(size=int(rng.integers(1, 31)))
        yield n, rho, lam, y


def test_ac08_resolvent_residual(acceptance):
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_res = worst_gap = 0.0
    for kind in ("F", "G"):
        for n, rho, lam, y in resolvent_cases(rng, kind, 200):
            spec = OperatorSpec(kind, n, rho)
            yv = SeqVector(y)
            sol = resolvent_apply(spec, lam, yv, 200)
            worst_res = max(worst_res, window_residual(spec, lam, sol.head, sol.tail, yv) / yv.norm1)
            oracle = dense_solve(kind, n, rho, lam, y, 400)
            gap = np.abs(sol.head[:20] - oracle[:20]).max() / max(1.0, np.abs(oracle[:20]).max())
            worst_gap = max(worst_gap, gap)
    elapsed = time.perf_counter() - start
    ok = worst_res <= 1e-9 and worst_gap <= 1e-7 and elapsed < 30
    detail = f"400 cases, residual {worst_res:.1e}, oracle gap {worst_gap:.1e}, {elapsed:.1f} s"
    assert acceptance(8, "resolvent residual", ok, detail)


def test_ac09_classification_partition(acceptance):
    specs = [OperatorSpec(Kind.F, n) for n in range(1, 7)]
    specs += [OperatorSpec(Kind.G, n, rho) for n in (1, 2, 3, 5) for rho in (0.05, 1.0, 4.0)]
    moduli = np.linspace(0.2, 3.0, 40)
    args = np.linspace(0, 2 * np.pi, 32, endpoint=False)
    grid = [r * cmath.exp(1j * t) for r in moduli for t in args]
    total = agree = 0
    for spec in specs:
        roots = np.roots(spec.charpoly().coefficients)
        for lam in grid + [1.0] + list(roots):
            cases = {
                Part.CONTINUOUS: abs(lam - 1) <= 1e-9,
                Part.RESIDUAL: abs(lam - 1) > 1e-9 and abs(lam) <= 1 + 1e-9,
                Part.POINT: abs(lam) > 1 + 1e-9 and min(abs(lam - roots)) < 1e-7,
                Part.RESOLVENT: abs(lam) > 1 + 1e-9 and min(abs(lam - roots)) >= 1e-7,
            }
            assert sum(cases.values()) == 1
            expected = next(part for part, hit in cases.items() if hit)
            total += 1
            agree += classify(spec, lam).part is expected
    assert acceptance(9, "classification partition", agree == total, f"{agree}/{total} points agree")


def test_ac10_remark_regimes(acceptance):
    total = agree = 0
    for n in range(2, 6):
        lam1 = (n - 1) / (n + 1)
        rho0 = 4 * lam1 ** (n - 1) / (n + 1) ** 2
        for factor, regime, interior in ((2, Regime.NO_INTERIOR_ROOTS, 0), (1, Regime.ONE_DOUBLE_ROOT, None),
                                         (0.5, Regime.TWO_INTERIOR_ROOTS, 2)):
            rho = rho0 * factor
            rep = root_count_report(CharPolynomial.fib_like(n, rho))
            hit = rep.regime is regime
            if interior is not None:
                real = [z for z in companion_roots(q_coeffs(n, rho)) if abs(z.imag) < 1e-9 and 0 < z.real < 1]
                hit = hit and len(real) == interior == len(rep.interior_roots)
            total += 1
            agree += hit
    assert acceptance(10, "root-count regimes", agree == total, f"{agree}/{total} (n, rho) cases")


def test_ac11_nonclosedness(acceptance):
    rep = nonclosedness_demo(5, 2.0, 20)
    ok = [row.m for row in rep.rows] == list(range(1, 21)) and all(
        row.preimage_norm == Fraction(1, row.m) and row.image_gap == Fraction(1, row.m) for row in rep.rows
    )
    assert acceptance(11, "Gamma_5 not closed", ok, f"exact 1/m for m=1..20, graph jump {rep.graph_jump}")


def test_ac12_truncation_cross_check(acceptance):
    gap_f = abs(power_iteration_radius(build_truncation(OperatorSpec(Kind.F, 1), 60)) - PHI)
    lam = dominant_root(CharPolynomial.fib_like(5, 1.0))
    gap_g = abs(power_iteration_radius(build_truncation(OperatorSpec(Kind.G, 5, 1.0), 120)) - lam)
    ok = gap_f <= 1e-6 and gap_g <= 1e-4
    assert acceptance(12, "truncated spectral radius", ok, f"F_1 N=60 gap {gap_f:.1e}, G_5 N=120 gap {gap_g:.1e}")


def test_ac13_invasion_speed(acceptance):
    models = [InvasionModel("gaussian", 1.0, c) for c in (0.5, 1.0, 2.0)]
    models += [InvasionModel("laplace", s, 1.0) for s in (1.0, 2.0)]
    worst = 0.0
    for model in models:
        res = minimize_speed(model)
        hi = model.s_hat if math.isfinite(model.s_hat) else 10.0
        s = np.linspace(0, hi, 10_002)[1:-1]
        v_grid = min(speed_objective(model, x) for x in s)
        worst = max(worst, abs(res.v_star - v_grid))
    ok = worst <= 1e-6
    assert acceptance(13, "invasion speed vs 1e4-point grid", ok, f"worst |v* - grid| {worst:.1e} (oracle equivalence)")


def test_ac14_transpose_checks(acceptance):
    specs = [OperatorSpec(Kind.F, n) for n in (1, 2, 4, 7)]
    specs += [OperatorSpec(Kind.G, n, rho) for n in (1, 2, 5) for rho in (0.1, 1.0, 5.0)]
    disk = [r * cmath.exp(1j * t) for r in (0.0, 0.3, 0.7, 0.95, 1.0) for t in np.linspace(0, 2 * np.pi, 16, endpoint=False)]
    disk = [z for z in disk if abs(z - 1) > 1e-6]
    violations = checked = 0
    for spec in specs:
        for lam in disk:
            for K in (10, 100, 1000):
                checked += 1
                violations += transpose_eigvec_bound(spec, lam, K) > transpose_bound(spec, lam) * (1 + 1e-12)
    smallest = min(transpose_eigvec_divergence(spec, 3000) for spec in specs)
    ok = violations == 0 and smallest > 1e3
    detail = f"{checked} (lambda, K) checks, {violations} violations; min lambda=1 growth at K=3000: {smallest:.0f}"
    assert acceptance(14, "transpose eigenvector bounds", ok, detail)

"""Seeded self-check suites run by `fibspec verify`.

Each suite compares a fast path against an independent oracle (brute-force
sums, exact matrix powers, dense truncated solves) and reports counts and the
worst deviation seen.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import sequences
from .charpoly import CharPolynomial, dominant_root
from .operators import Kind, OperatorSpec, SeqVector, build_truncation, exact_power_norm, nonclosedness_demo
from .spectra import resolvent_apply, window_residual

RESIDUAL_TOL = 1e-9
ORACLE_TOL = 1e-7
ORACLE_SIZE = 400
SUITES = ("identities", "resolvent", "nonclosed")


@dataclass
class SuiteReport:
    name: str
    passed: int = 0
    failed: int = 0
    worst: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    table: list | None = None

    def check(self, ok: bool, label: str):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 20:
                self.failures.append(label)

    def track(self, key: str, value: float):
        self.worst[key] = max(self.worst.get(key, 0.0), float(value))

    @property
    def ok(self) -> bool:
        return self.failed == 0


def dense_resolvent(spec: OperatorSpec, lam: complex, y: SeqVector, N: int = ORACLE_SIZE) -> np.ndarray:
    """Solve the N x N section of (lambda I - H) x = y with LAPACK."""
    A = lam * np.eye(N) - build_truncation(spec, N).as_float()
    b = np.zeros(N, dtype=complex)
    b[: y.support] = y.coords[: y.support]
    return np.linalg.solve(A, b)


def random_resolvent_case(rng: np.random.Generator, kind: Kind, K: int = 200):
    """(spec, lambda, y) with |lambda| in [1.2, 4] and y supported on at most 30 indices."""
    if kind is Kind.F:
        spec = OperatorSpec(Kind.F, int(rng.integers(1, 9)))
    else:
        rho = float(np.exp(rng.uniform(np.log(0.05), np.log(5.0))))
        spec = OperatorSpec(Kind.G, int(rng.integers(2, 9)), rho)
    lam = complex(rng.uniform(1.2, 4.0) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
    support = int(rng.integers(1, min(30, K - 1) + 1))
    y = SeqVector(rng.normal(size=support))
    return spec, lam, y


def check_resolvent_case(spec, lam, y, K=200, report: SuiteReport | None = None):
    """(relative residual, relative oracle gap on the leading 20 coordinates)."""
    sol = resolvent_apply(spec, lam, y, K)
    residual = window_residual(spec, lam, sol.head, sol.tail, y) / y.norm1
    oracle = dense_resolvent(spec, lam, y)
    scale = max(1.0, float(np.abs(oracle[:20]).max()))
    gap = float(np.abs(sol.head[:20] - oracle[:20]).max()) / scale
    if report is not None:
        label = f"{spec.kind.value}_{spec.n} rho={spec.rho} lambda={lam:.6g}"
        report.check(residual <= RESIDUAL_TOL and gap <= ORACLE_TOL, label)
        report.track("residual", residual)
        report.track("oracle_gap", gap)
    return residual, gap


def identities_suite(seed: int = 0, budget: int = 100) -> SuiteReport:
    rng = np.random.default_rng(seed)
    report = SuiteReport("identities")
    for n in range(1, 9):
        seq = sequences.GenFibSequence(n)
        for k in sorted(set(rng.integers(1, 501, size=budget).tolist()) | {1, 500}):
            total, rhs = sequences.prefix_sum_identity(seq, k)
            report.check(total == rhs, f"prefix sum n={n} k={k}")
    for n in range(1, 5):
        for k in range(n + 1, 21):
            report.check(
                exact_power_norm(OperatorSpec(Kind.F, n), k, k + n + 10) == sequences.norm_of_power(n, k),
                f"norm of power n={n} k={k}",
            )
    for n, m, tol in ((1, 30, 1e-10), (2, 80, 1e-8), (3, 80, 1e-8)):
        gap = abs(sequences.ratio_limit_estimate(n, m) - dominant_root(CharPolynomial.fibonacci(n)))
        report.track("ratio_gap", gap)
        report.check(gap < tol, f"ratio limit n={n} m={m}")
    return report


def resolvent_suite(seed: int = 0, budget: int = 100) -> SuiteReport:
    rng = np.random.default_rng(seed)
    report = SuiteReport("resolvent")
    for i in range(budget):
        kind = Kind.F if i % 2 == 0 else Kind.G
        check_resolvent_case(*random_resolvent_case(rng, kind), report=report)
    return report


def nonclosed_suite(seed: int = 0, budget: int = 20, n: int = 5, rho: float = 2.0) -> SuiteReport:
    report = SuiteReport("nonclosed")
    demo = nonclosedness_demo(n, rho, max(2, budget))
    report.table = []
    for row in demo.rows:
        exact = Fraction(1, row.m)
        report.check(row.preimage_norm == exact and row.image_gap == exact, f"m={row.m}")
        report.table.append(
            {
                "m": row.m,
                "preimage_norm": float(row.preimage_norm),
                "image_gap": float(row.image_gap),
                "image_norm": float(row.image_norm),
            }
        )
    return report


def run(suite: str, seed: int = 0, budget: int | None = None) -> list[SuiteReport]:
    names = SUITES if suite == "all" else (suite,)
    runners = {"identities": identities_suite, "resolvent": resolvent_suite, "nonclosed": nonclosed_suite}
    out = []
    for name in names:
        if name not in runners:
            raise ValueError(f"unknown suite {name!r}")
        kwargs = {"seed": seed}
        if budget is not None:
            kwargs["budget"] = budget
        out.append(runners[name](**kwargs))
    return out

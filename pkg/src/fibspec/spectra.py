"""Spectrum classification, eigenvectors and resolvents of F_n and G_n.

For both operators the complex plane splits as

    point      |lambda| > 1 and lambda is a root of the characteristic polynomial
    resolvent  |lambda| > 1 otherwise
    residual   |lambda| <= 1, lambda != 1
    continuous lambda = 1

Resolvents are applied, never materialized: x_1 comes from a closed form and
the remaining coordinates from forward substitution. Past the support of y
the solution follows a closed tail rule, so the first-row infinite sum can be
evaluated exactly when checking residuals.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .charpoly import CharPolynomial
from .errors import (
    DomainError,
    NotAnEigenvalue,
    OutsideResolventSet,
    SingularResolvent,
)
from .operators import Kind, OperatorSpec, SeqVector

ROOT_TOL = 1e-9
PROBE_SIZE = 64


class Part(str, Enum):
    RESOLVENT = "resolvent"
    POINT = "point"
    RESIDUAL = "residual"
    CONTINUOUS = "continuous"


@dataclass(frozen=True)
class TailRule:
    """Closed form for x_k, k > start, continuing the stored head.

    Geometric (offset None):  x_k = value * ratio^(k - start)
    Weighted:                 x_k = value * (k - offset) / (start - offset) * ratio^(k - start)
    """

    start: int
    value: complex
    ratio: complex
    offset: int | None = None

    def coordinate(self, k: int) -> complex:
        if k < self.start:
            raise ValueError(f"tail starts at {self.start}")
        w = 1 if self.offset is None else (k - self.offset) / (self.start - self.offset)
        return self.value * w * self.ratio ** (k - self.start)

    def tail_sum(self) -> complex:
        """sum of x_k over k > start."""
        r = self.ratio
        if self.offset is None:
            return self.value * r / (1 - r)
        j = self.start + 1 - self.offset
        return self.value / (self.start - self.offset) * r * (j - (j - 1) * r) / (1 - r) ** 2

    def describe(self) -> dict:
        return {
            "kind": "geometric" if self.offset is None else "weighted_geometric",
            "start": self.start,
            "value": self.value,
            "ratio": self.ratio,
            "offset": self.offset,
        }


@dataclass(frozen=True, eq=False)
class Eigenvector:
    lam: complex
    head: np.ndarray
    tail: TailRule
    norm1: float


@dataclass(frozen=True, eq=False)
class Solution:
    """First K coordinates of (lambda I - H)^-1 y plus the rule for the rest."""

    lam: complex
    head: np.ndarray
    tail: TailRule

    @property
    def vector(self) -> SeqVector:
        return SeqVector(self.head)


@dataclass(frozen=True)
class SpectrumVerdict:
    lam: complex
    part: Part
    boundary_flag: bool
    witness: dict | None = None


def _require_f_or_g(spec: OperatorSpec):
    if spec.kind is Kind.GAMMA:
        raise DomainError("Gamma_n has an empty resolvent set; classify G_n instead")


def window_residual(spec: OperatorSpec, lam: complex, head, tail: TailRule, y: SeqVector | None = None) -> float:
    """||(lambda I - H) x - y||_1 for x = head followed by tail.

    Rows past the head vanish identically because the tail rule solves the
    homogeneous recurrence there, so only rows 1..K are summed.
    """
    head = np.asarray(head, dtype=complex)
    K = len(head)
    n = spec.n
    rhs = np.zeros(K, dtype=complex)
    if y is not None:
        if y.support > K:
            raise DomainError("y extends past the window")
        rhs[: y.support] = y.coords[: y.support]
    row1 = lam * head[0] - (head[n:].sum() + tail.tail_sum()) - rhs[0]
    sub = np.array([spec.subdiagonal(k) for k in range(1, K)], dtype=float)
    rows = lam * head[1:] - sub * head[:-1] - rhs[1:]
    return float(abs(row1) + np.abs(rows).sum())


def eigenvector(spec: OperatorSpec, lam: complex, K: int, tol: float = ROOT_TOL) -> Eigenvector:
    """Eigenvector with x_1 = 1 for a point-spectrum lambda."""
    _require_f_or_g(spec)
    lam = complex(lam)
    poly = spec.charpoly()
    if abs(lam) <= 1 or not poly.is_root(lam, tol):
        raise NotAnEigenvalue(f"{lam} is not in the point spectrum of {spec.kind.value}_{spec.n}")
    n = spec.n
    if spec.kind is Kind.G and K <= n:
        raise DomainError(f"K must exceed n={n} to reach the weighted tail")
    if K < 1:
        raise DomainError("K must be >= 1")
    r = 1 / lam
    k = np.arange(1, K + 1)
    head = r ** (k - 1)
    a = abs(lam)
    if spec.kind is Kind.F:
        tail = TailRule(K, complex(head[-1]), r)
        norm1 = a / (a - 1)
    else:
        head = np.where(k > n, spec.rho * (k - n) * head, head)
        tail = TailRule(K, complex(head[-1]), r, offset=n)
        norm1 = (a ** n - 1) / (a ** (n - 1) * (a - 1)) + spec.rho * a ** (2 - n) / (a - 1) ** 2
    return Eigenvector(lam, head, tail, float(norm1))


def _check_resolvent_point(poly: CharPolynomial, lam: complex, tol: float):
    if abs(lam) <= 1:
        raise OutsideResolventSet(f"|lambda| = {abs(lam):.6g} <= 1")
    if poly.is_root(lam, tol):
        raise SingularResolvent(f"{lam} is a root of the characteristic polynomial")


def _rhs(y: SeqVector, K: int) -> np.ndarray:
    if y.support + 1 > K:
        raise DomainError(f"K={K} must be at least support(y) + 1 = {y.support + 1}")
    out = np.zeros(K + 1, dtype=complex)  # 1-based
    out[1 : y.support + 1] = y.coords[: y.support]
    return out


def resolvent_apply_F(n: int, lam: complex, y: SeqVector, K: int, tol: float = ROOT_TOL) -> Solution:
    """(lambda I - F_n)^-1 y for finitely supported y."""
    lam = complex(lam)
    spec = OperatorSpec(Kind.F, n)
    poly = spec.charpoly()
    _check_resolvent_point(poly, lam, tol)
    yy = _rhs(y, K)
    v = yy[n + 1 :].sum()
    num = lam ** (n - 1) * (lam - 1) * yy[1] + lam ** (n - 1) * v
    for j in range(2, n + 1):
        num += lam ** (j - 2) * yy[j]
    x = np.empty(K + 1, dtype=complex)
    x[1] = num / poly(lam)
    for k in range(1, K):
        x[k + 1] = (x[k] + yy[k + 1]) / lam
    return Solution(lam, x[1:], TailRule(K, complex(x[K]), 1 / lam))


def _alpha_bar(n: int, lam: complex, k: int) -> complex:
    """Coefficient of y_{n+k}, k >= 2, in the numerator of x_1 for G_n."""
    r = 1 / lam
    alpha = r + r * r / (1 - r) + r * r / (k * (1 - r) ** 2)
    return lam ** (n - 2) * (lam - 1) ** 2 * alpha


def resolvent_apply_G(n: int, rho: float, lam: complex, y: SeqVector, K: int, tol: float = ROOT_TOL) -> Solution:
    """(lambda I - G_n)^-1 y for finitely supported y, n >= 2."""
    if n < 2:
        raise DomainError("the closed-form G_n resolvent needs n >= 2")
    lam = complex(lam)
    spec = OperatorSpec(Kind.G, n, rho)
    poly = spec.charpoly()
    _check_resolvent_point(poly, lam, tol)
    if K <= n:
        raise DomainError(f"K must exceed n={n}")
    yy = _rhs(y, K)
    num = lam ** (n - 2) * (lam - 1) ** 2 * yy[1] + lam ** (n - 1) * yy[n + 1]
    for j in range(2, n + 1):
        num += rho * lam ** (j - 2) * yy[j]
    for j in range(n + 2, y.support + 1):
        num += _alpha_bar(n, lam, j - n) * yy[j]
    x = np.empty(K + 1, dtype=complex)
    x[1] = num / poly(lam)
    for k in range(1, K):
        x[k + 1] = (spec.subdiagonal(k) * x[k] + yy[k + 1]) / lam
    return Solution(lam, x[1:], TailRule(K, complex(x[K]), 1 / lam, offset=n))


def resolvent_apply(spec: OperatorSpec, lam: complex, y: SeqVector, K: int, tol: float = ROOT_TOL) -> Solution:
    _require_f_or_g(spec)
    if spec.kind is Kind.F:
        return resolvent_apply_F(spec.n, lam, y, K, tol)
    return resolvent_apply_G(spec.n, spec.rho, lam, y, K, tol)


def transpose_eigvec_sequence(spec: OperatorSpec, lam: complex, K: int) -> np.ndarray:
    """x_1..x_K of the formal solution of (lambda I - H^t) x = 0 with x_1 = 1.

    Column j of H gives lambda x_j = [j > n] x_1 + s_j x_{j+1}, with s_j the
    subdiagonal entry, which is unrolled directly.
    """
    _require_f_or_g(spec)
    x = np.empty(K, dtype=complex)
    x[0] = 1
    for j in range(1, K):
        feed = x[0] if j > spec.n else 0
        x[j] = (lam * x[j - 1] - feed) / spec.subdiagonal(j)
    return x


def transpose_bound(spec: OperatorSpec, lam: complex) -> float:
    """Explicit sup bound for the transpose eigenvector, |lambda| <= 1, lambda != 1.

    F: 1 + 2/|lambda - 1| covers every coordinate. G: the tail bound
    1/(2 rho) + 2/|lambda - 1|^2 covers x_{n+k}, k >= 2; the head x_1..x_{n+1}
    is |lambda|^(k-1) up to x_n and |lambda|^n / rho at x_{n+1}.
    """
    d = abs(lam - 1)
    if spec.kind is Kind.F:
        return 1 + 2 / d
    head = max(1.0, abs(lam) ** spec.n / spec.rho)
    return max(head, 1 / (2 * spec.rho) + 2 / d ** 2)


def transpose_eigvec_bound(spec: OperatorSpec, lam: complex, K: int, tol: float = ROOT_TOL) -> float:
    """max_{k <= K} |x_k| for the transpose eigenvector; stays below transpose_bound."""
    lam = complex(lam)
    if abs(lam - 1) <= tol:
        raise DomainError("lambda = 1 gives an unbounded sequence; see transpose_eigvec_divergence")
    if abs(lam) > 1 + tol:
        raise DomainError(f"|lambda| = {abs(lam):.6g} > 1")
    return float(np.abs(transpose_eigvec_sequence(spec, lam, K)).max())


def transpose_eigvec_divergence(spec: OperatorSpec, K: int) -> float:
    """max_{k <= K} |x_k| at lambda = 1, which grows without bound in K."""
    if K < spec.n + 3:
        raise DomainError(f"K must be >= n + 3 = {spec.n + 3}")
    return float(np.abs(transpose_eigvec_sequence(spec, 1.0, K)).max())


def classify(spec: OperatorSpec, lam: complex, tol: float = ROOT_TOL) -> SpectrumVerdict:
    """Which part of the spectrum of F_n or G_n lambda belongs to."""
    _require_f_or_g(spec)
    lam = complex(lam)
    poly = spec.charpoly()
    near_circle = abs(abs(lam) - 1) <= tol
    near_root = poly.is_root(lam, tol)
    flag = near_circle or near_root

    if abs(lam - 1) <= tol:
        return SpectrumVerdict(lam, Part.CONTINUOUS, flag)
    if abs(lam) <= 1 + tol:
        witness = {"transpose_eigvec_max": transpose_eigvec_bound(spec, lam, PROBE_SIZE, tol)}
        return SpectrumVerdict(lam, Part.RESIDUAL, flag, witness)
    if near_root:
        ev = eigenvector(spec, lam, max(8, spec.n + 2), tol)
        witness = {"eigenvector_head": list(ev.head), "norm1": ev.norm1}
        return SpectrumVerdict(lam, Part.POINT, flag, witness)

    witness = None
    if spec.kind is Kind.F or spec.n >= 2:
        probe = SeqVector.basis(1)
        size = max(PROBE_SIZE, spec.n + 2)
        sol = resolvent_apply(spec, lam, probe, size, tol)
        witness = {
            "probe": "e1",
            "resolvent_residual": window_residual(spec, lam, sol.head, sol.tail, probe),
        }
    return SpectrumVerdict(lam, Part.RESOLVENT, flag, witness)

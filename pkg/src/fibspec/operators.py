"""Finite sections of F_n, G_n and Gamma_n, and the exact action of the infinite operators.

All three operators have a first row plus a subdiagonal:

    F_n:     x -> (sum_{k>n} x_k,            x_1, x_2, ...)
    Gamma_n: x -> (rho sum_{k>n} (k-n) x_k,  x_1, x_2, ...)
    G_n:     x -> (sum_{k>n} x_k,  x_1, ..., x_{n-1}, rho x_n, 2 x_{n+1}, 3/2 x_{n+2}, ...)

A truncation is only trusted where the cut cannot reach: callers get a
TruncationError instead of a silently wrong number.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Number
from typing import Sequence

import numpy as np

from .charpoly import CharPolynomial
from .errors import DomainError, NonConvergence, TruncationError


class Kind(str, Enum):
    F = "F"
    G = "G"
    GAMMA = "Gamma"


@dataclass(frozen=True)
class OperatorSpec:
    kind: Kind
    n: int
    rho: float | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if kind is Kind.F:
            object.__setattr__(self, "rho", None)
        elif self.rho is None or not self.rho > 0:
            raise DomainError(f"{kind.value} needs rho > 0, got {self.rho!r}")

    def charpoly(self) -> CharPolynomial:
        if self.kind is Kind.F:
            return CharPolynomial.fibonacci(self.n)
        # Gamma_n shares its point spectrum with G_n
        return CharPolynomial.fib_like(self.n, self.rho)

    def _rho(self, exact: bool):
        return Fraction(self.rho) if exact else self.rho

    def first_row(self, k: int, exact: bool = False):
        """Entry (1, k) of the matrix, 1-based."""
        if k <= self.n:
            return 0
        if self.kind is Kind.GAMMA:
            return self._rho(exact) * (k - self.n)
        return 1

    def subdiagonal(self, k: int, exact: bool = False):
        """Entry (k+1, k) of the matrix, 1-based."""
        if self.kind is not Kind.G or k < self.n:
            return 1
        if k == self.n:
            return self._rho(exact)
        j = k - self.n
        return Fraction(j + 1, j) if exact else (j + 1) / j

    def similarity_weight(self, k: int, exact: bool = False):
        """Diagonal entry k of D_n = diag(1, ..., 1, rho, 2 rho, ...), with G_n = D_n Gamma_n D_n^-1."""
        if k <= self.n:
            return 1
        return self._rho(exact) * (k - self.n)

    def act(self, coords: Sequence[Number], exact: bool = False) -> list:
        """Image of a finitely supported vector under the infinite operator.

        The result has one more coordinate than the input. With exact=True,
        rho and the G ratios enter as Fractions, so integer or Fraction input
        stays exact.
        """
        coords = list(coords)
        head = sum(self.first_row(k, exact) * x for k, x in enumerate(coords, start=1))
        shifted = [self.subdiagonal(k, exact) * x for k, x in enumerate(coords, start=1)]
        return [head] + shifted


@dataclass(frozen=True)
class SeqVector:
    """A finitely supported vector in l1; coordinate k lives at coords[k - 1]."""

    coords: tuple

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(coords))

    @classmethod
    def basis(cls, k: int, scale=1) -> "SeqVector":
        return cls([0] * (k - 1) + [scale])

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, k: int):
        """1-based coordinate access; zero beyond the stored prefix."""
        if k < 1:
            raise IndexError(k)
        return self.coords[k - 1] if k <= len(self.coords) else 0

    @property
    def norm1(self):
        return sum(abs(x) for x in self.coords)

    @property
    def support(self) -> int:
        """Largest index holding a nonzero, 0 for the zero vector."""
        for k in range(len(self.coords), 0, -1):
            if self.coords[k - 1] != 0:
                return k
        return 0

    def padded(self, size: int) -> list:
        if self.support > size:
            raise TruncationError(f"support {self.support} exceeds size {size}")
        return list(self.coords[:size]) + [0] * max(0, size - len(self.coords))


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Top-left N x N block. F blocks hold Python ints, G and Gamma blocks floats."""

    spec: OperatorSpec
    size: int
    entries: np.ndarray

    @property
    def exact(self) -> bool:
        return self.entries.dtype == object

    def as_float(self) -> np.ndarray:
        return self.entries.astype(float)


def build_truncation(spec: OperatorSpec, N: int) -> TruncatedOperator:
    if N < spec.n + 2:
        raise DomainError(f"N must be >= n + 2 = {spec.n + 2}, got {N}")
    exact = spec.kind is Kind.F
    entries = np.zeros((N, N), dtype=object if exact else float)
    if exact:
        entries[:] = 0
    for k in range(1, N + 1):
        entries[0, k - 1] = spec.first_row(k)
    for k in range(1, N):
        entries[k, k - 1] = spec.subdiagonal(k)
    entries.setflags(write=False)
    return TruncatedOperator(spec, N, entries)


def apply(op: TruncatedOperator, x: SeqVector) -> SeqVector:
    """op applied to x; exact as long as x vanishes from index N on."""
    if x.support >= op.size:
        raise TruncationError(
            f"support {x.support} reaches the truncation edge N={op.size}; the image would be cut"
        )
    vec = np.array(x.padded(op.size), dtype=object)
    entries = op.entries if op.exact else op.entries.astype(object)
    return SeqVector(entries.dot(vec))


def exact_power_norm(spec: OperatorSpec, k: int, N: int) -> int:
    """Max column sum of F_n^k over the columns the truncation leaves intact.

    Columns j <= N - k of the truncated power equal those of the infinite
    power, because no path of length k from j can leave the window.
    """
    if spec.kind is not Kind.F:
        raise DomainError("exact powers are only kept for F_n")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if N < k + spec.n + 2:
        raise DomainError(f"N must be >= k + n + 2 = {k + spec.n + 2}, got {N}")
    op = build_truncation(spec, N)
    # column sums of M^k are the row vector 1^T M^k; each column has at most two nonzeros
    cols = [[(i, op.entries[i, j]) for i in np.flatnonzero(op.entries[:, j] != 0)] for j in range(N)]
    sums = [1] * N
    for _ in range(k):
        sums = [sum(sums[i] * w for i, w in col) for col in cols]
    return int(max(sums[: N - k]))


def power_iteration_radius(op: TruncatedOperator, iters: int = 10_000, tol: float = 1e-12) -> float:
    """Perron root of the (nonnegative) truncation by l1-normalized iteration."""
    if iters < 1:
        raise DomainError("iters must be >= 1")
    A = op.as_float()
    x = np.full(op.size, 1.0 / op.size)
    prev = gap = None
    for _ in range(iters):
        y = A @ x
        est = float(np.abs(y).sum())
        x = y / est
        if prev is not None:
            gap = abs(est - prev)
            if gap <= tol:
                return est
        prev = est
    if gap is not None:
        raise NonConvergence(f"power iteration still moving by {gap:.3e} after {iters} steps")
    return est


@dataclass(frozen=True)
class NonClosednessRow:
    m: int
    preimage_norm: Fraction
    image_norm: Fraction
    image_gap: Fraction


@dataclass(frozen=True)
class NonClosednessReport:
    n: int
    rho: float
    rows: tuple[NonClosednessRow, ...]

    @property
    def preimage_limit_gap(self) -> Fraction:
        """||x^(m) - 0||_1 at the last m; tends to 0."""
        return self.rows[-1].preimage_norm

    @property
    def image_limit_gap(self) -> Fraction:
        """||Gamma_n x^(m) - rho e_1||_1 at the last m; tends to 0."""
        return self.rows[-1].image_gap

    @property
    def graph_jump(self) -> Fraction:
        """||rho e_1 - Gamma_n 0||_1: the limit pair is not on the graph."""
        return Fraction(self.rho)


def nonclosedness_demo(n: int, rho: float, m_max: int) -> NonClosednessReport:
    """x^(m) = e_{m+n} / m shrinks to 0 while Gamma_n x^(m) tends to rho e_1 != 0."""
    if m_max < 2:
        raise DomainError("m_max must be >= 2")
    spec = OperatorSpec(Kind.GAMMA, n, rho)
    target = Fraction(rho)
    rows = []
    for m in range(1, m_max + 1):
        x = SeqVector.basis(m + n, Fraction(1, m))
        image = SeqVector(spec.act(x.coords, exact=True))
        gap = SeqVector([image[1] - target] + list(image.coords[1:]))
        rows.append(NonClosednessRow(m, x.norm1, image.norm1, gap.norm1))
    return NonClosednessReport(n, rho, tuple(rows))

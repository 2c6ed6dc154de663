"""Characteristic polynomials of the Fibonacci (p) and Fibonacci-like (q) families.

    p_{n+1}(z) = z^{n+1} - z^n - 1
    q_{n+1}(z) = z^{n+1} - 2 z^n + z^{n-1} - rho = z^{n-1} (z - 1)^2 - rho

Both have exactly one real root larger than one, and every other root is
strictly smaller in modulus.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import BoundaryWarning, DomainError, NonConvergence

DOMINANT_TOL = 1e-12
ROOTS_TOL = 1e-10
REGIME_RTOL = 1e-9

_EPS = np.finfo(float).eps


class Family(str, Enum):
    FIBONACCI = "F"
    FIB_LIKE = "G"


@dataclass(frozen=True)
class CharPolynomial:
    family: Family
    n: int
    rho: float | None = None

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if family is Family.FIB_LIKE:
            if self.rho is None or not self.rho > 0 or not math.isfinite(self.rho):
                raise DomainError(f"rho must be a positive finite real, got {self.rho!r}")
            object.__setattr__(self, "rho", float(self.rho))
        else:
            object.__setattr__(self, "rho", None)

    @classmethod
    def fibonacci(cls, n: int) -> "CharPolynomial":
        return cls(Family.FIBONACCI, n)

    @classmethod
    def fib_like(cls, n: int, rho: float) -> "CharPolynomial":
        return cls(Family.FIB_LIKE, n, rho)

    @property
    def degree(self) -> int:
        return self.n + 1

    @property
    def coefficients(self) -> tuple[float, ...]:
        """Monomial coefficients, highest degree first."""
        c = [0.0] * (self.n + 2)
        c[0] = 1.0
        if self.family is Family.FIBONACCI:
            c[1] = -1.0
            c[-1] -= 1.0
        else:
            c[1] = -2.0
            c[2] += 1.0
            c[-1] -= self.rho
        return tuple(c)

    def __call__(self, z):
        return evaluate(self, z)

    def derivative(self, z):
        n = self.n
        if self.family is Family.FIBONACCI:
            return z ** (n - 1) * ((n + 1) * z - n)
        if n == 1:
            return 2 * (z - 1)
        return z ** (n - 2) * (z - 1) * ((n + 1) * z - (n - 1))

    def scale(self, z) -> float:
        """Residual scale (1 + |z|)^degree used by every tolerance test."""
        return (1.0 + abs(z)) ** self.degree

    def is_root(self, z, tol: float) -> bool:
        return abs(evaluate(self, z)) <= tol * self.scale(z)


def _is_real(z) -> bool:
    return isinstance(z, (int, float, np.integer, np.floating))


def evaluate(poly: CharPolynomial, z):
    """p_{n+1}(z) or q_{n+1}(z).

    For the q family the factored form is used on the real half-line z >= 0,
    where it avoids the cancellation near z = 1, and the monomial form elsewhere.
    Real input gives a float, anything else a complex.
    """
    n = poly.n
    real = _is_real(z)
    if not real:
        z = complex(z)
    if poly.family is Family.FIBONACCI:
        value = z ** (n + 1) - z ** n - 1
    elif real and z >= 0:
        value = z ** (n - 1) * (z - 1) ** 2 - poly.rho
    else:
        value = z ** (n + 1) - 2 * z ** n + z ** (n - 1) - poly.rho
    return float(value) if real else complex(value)


def dominant_root(poly: CharPolynomial, tol: float = DOMINANT_TOL, max_iter: int = 100) -> float:
    """The unique real root larger than one (lambda_max).

    Bracketed on [1, b] with b doubled from 2, narrowed by bisection, then
    polished with safeguarded Newton steps.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    f = poly.__call__
    lo, hi = 1.0, 2.0
    while f(hi) <= 0:
        lo, hi = hi, 2 * hi
        if not math.isfinite(hi):
            raise NonConvergence("could not bracket the dominant root")
    while hi - lo > 1e-3 * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid

    x = hi
    for _ in range(max_iter):
        fx = f(x)
        if fx == 0:
            return x
        if fx > 0:
            hi = x
        else:
            lo = x
        dfx = poly.derivative(x)
        step = fx / dfx if dfx > 0 else math.inf
        x_new = x - step
        if not lo <= x_new <= hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 2 * _EPS * x:
            x = x_new
            break
        x = x_new
    else:
        raise NonConvergence(f"Newton did not settle within {max_iter} iterations")
    if abs(f(x)) > tol * poly.scale(x):
        raise NonConvergence(f"residual {abs(f(x)):.3e} above tol at x={x!r}")
    return x


@dataclass(frozen=True)
class RootSet:
    dominant: float
    others: tuple[complex, ...]
    residual_bound: float
    iterations: int = field(default=0, compare=False)

    @property
    def roots(self) -> tuple[complex, ...]:
        return (complex(self.dominant),) + self.others


def _aberth(poly: CharPolynomial, radius: float, max_iter: int) -> tuple[np.ndarray, int]:
    deg = poly.degree
    # offset keeps the starting points off the real axis
    angles = 2 * np.pi * np.arange(deg) / deg + 0.4
    z = radius * np.exp(1j * angles)
    coeffs = np.abs(np.array(poly.coefficients[::-1]))
    done = np.zeros(deg, dtype=bool)
    for it in range(1, max_iter + 1):
        f = np.array([complex(poly(zi)) for zi in z])
        df = np.array([complex(poly.derivative(zi)) for zi in z])
        mod = np.abs(z)
        noise = 4 * _EPS * np.polynomial.polynomial.polyval(mod, coeffs)
        done |= np.abs(f) <= noise
        if done.all():
            return z, it
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(df != 0, f / df, f)
            w = ratio / (1 - ratio * np.sum(1.0 / diff, axis=1))
        w = np.where(done | ~np.isfinite(w), 0, w)
        z = z - w
        done |= np.abs(w) <= 4 * _EPS * (1 + np.abs(z))
    raise NonConvergence(f"simultaneous iteration did not converge in {max_iter} steps")


def all_roots(poly: CharPolynomial, tol: float = ROOTS_TOL, max_iter: int = 1000) -> RootSet:
    """Every root of poly via Aberth-Ehrlich iteration, with lambda_max pinned.

    The iterate closest to lambda_max is replaced by the Newton-refined
    dominant root; the rest are returned by decreasing modulus.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    lam = dominant_root(poly)
    z, iterations = _aberth(poly, max(1.0, lam), max_iter)
    idx = int(np.argmin(np.abs(z - lam)))
    others = [complex(v) for i, v in enumerate(z) if i != idx]
    others.sort(key=lambda v: (-abs(v), -v.imag, v.real))

    worst = abs(poly(lam))
    for root in others:
        r = abs(poly(root))
        if r > tol * poly.scale(root):
            raise NonConvergence(f"root {root} has residual {r:.3e}")
        worst = max(worst, r)
    if others and max(abs(v) for v in others) >= lam:
        raise NonConvergence("a non-dominant root does not lie strictly inside |z| < lambda_max")
    return RootSet(lam, tuple(others), worst, iterations)


def point_spectrum(poly: CharPolynomial, tol: float = ROOTS_TOL) -> list[complex]:
    """Roots with |z| > 1, dominant first.

    Roots within tol of the unit circle are left out and reported through a
    BoundaryWarning (for p_5 the pair exp(+-i pi/3) lies exactly on it).
    """
    roots = all_roots(poly, tol).roots
    near = [z for z in roots if abs(abs(z) - 1) <= tol]
    if near:
        warnings.warn(f"roots within {tol:g} of the unit circle: {near}", BoundaryWarning, stacklevel=2)
    return [z for z in roots if abs(z) > 1 + tol]


class Regime(str, Enum):
    NO_INTERIOR_ROOTS = "NoInteriorRoots"
    ONE_DOUBLE_ROOT = "OneDoubleRoot"
    TWO_INTERIOR_ROOTS = "TwoInteriorRoots"


@dataclass(frozen=True)
class RootCountReport:
    rho_0: float
    lambda_1: float
    regime: Regime
    interior_roots: tuple[float, ...]


def _bisect(f, lo: float, hi: float) -> float:
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fmid = f(mid)
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rho_threshold(n: int) -> tuple[float, float]:
    """(lambda_1, rho_0): the interior critical point of q and the matching rho."""
    lambda_1 = (n - 1) / (n + 1)
    return lambda_1, 4 * lambda_1 ** (n - 1) / (n + 1) ** 2


def root_count_report(poly: CharPolynomial, tol: float = REGIME_RTOL) -> RootCountReport:
    """Count and locate the real roots of q_{n+1} inside (0, lambda_max)."""
    if poly.family is not Family.FIB_LIKE:
        raise DomainError("root counting applies to the fib-like family only")
    if poly.n < 2:
        raise DomainError("root counting needs n >= 2")
    lambda_1, rho_0 = rho_threshold(poly.n)
    rho = poly.rho
    if abs(rho - rho_0) <= tol * rho_0:
        return RootCountReport(rho_0, lambda_1, Regime.ONE_DOUBLE_ROOT, (lambda_1,))
    if rho > rho_0:
        return RootCountReport(rho_0, lambda_1, Regime.NO_INTERIOR_ROOTS, ())
    left = _bisect(poly, 0.0, lambda_1)
    right = _bisect(poly, lambda_1, 1.0)
    return RootCountReport(rho_0, lambda_1, Regime.TWO_INTERIOR_ROOTS, (left, right))


"""Invasion-speed bound for a lesion-forming pathogen with a five-day latency.

The projection operator is Gamma_5 with rho(s) = const * M(s), M the
moment-generating function of the dispersal kernel. Its dominant eigenvalue
has a closed form, and the speed bound is

    v* = min_{0 < s < s_hat} ln(lambda_max(Gamma_5(rho(s)))) / s.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, NoInteriorMinimum

INV_PHI = (math.sqrt(5) - 1) / 2
CBRT2 = 2 ** (1 / 3)
GRID_PROBES = 64


class Kernel(str, Enum):
    GAUSSIAN = "gaussian"
    LAPLACE = "laplace"
    CUSTOM = "custom"


def lambda_max_gamma5_closed(rho: float) -> float:
    """Dominant root of q_6 = l^4 (l - 1)^2 - rho, by Cardano on l^2 (l - 1) = sqrt(rho).

    Only real cube roots are taken; the radicand is positive for rho > 0.
    """
    if not rho > 0 or not math.isfinite(rho):
        raise DomainError(f"rho must be a positive finite real, got {rho!r}")
    sr = math.sqrt(rho)
    c = (2 + 27 * sr + math.sqrt(108 * sr + 729 * rho)) ** (1 / 3)
    return 1 / 3 + CBRT2 / (3 * c) + c / (3 * CBRT2)


@dataclass(frozen=True, eq=False)
class InvasionModel:
    kernel: Kernel
    sigma: float = 1.0
    constant: float = 1.0
    table: tuple[np.ndarray, np.ndarray] | None = None
    _interp: PchipInterpolator | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        kernel = Kernel(self.kernel)
        object.__setattr__(self, "kernel", kernel)
        if not self.constant > 0:
            raise DomainError(f"const must be positive, got {self.constant!r}")
        if kernel is Kernel.CUSTOM:
            if self.table is None:
                raise DomainError("a custom kernel needs a tabulated (s, M) grid")
            s, m = (np.asarray(a, dtype=float) for a in self.table)
            _check_table(s, m)
            object.__setattr__(self, "table", (s, m))
            object.__setattr__(self, "_interp", PchipInterpolator(s, m, extrapolate=False))
        elif not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")

    @classmethod
    def from_file(cls, path, constant: float = 1.0) -> "InvasionModel":
        return cls(Kernel.CUSTOM, constant=constant, table=load_kernel_table(path))

    @property
    def s_low(self) -> float:
        if self.kernel is Kernel.CUSTOM:
            return max(0.0, float(self.table[0][0]))
        return 0.0

    @property
    def s_hat(self) -> float:
        if self.kernel is Kernel.GAUSSIAN:
            return math.inf
        if self.kernel is Kernel.LAPLACE:
            return 1 / self.sigma
        return float(self.table[0][-1])

    def mgf(self, s: float) -> float:
        if self.kernel is Kernel.GAUSSIAN:
            return math.exp(self.sigma ** 2 * s ** 2 / 2)
        if self.kernel is Kernel.LAPLACE:
            return 1 / (1 - self.sigma ** 2 * s ** 2)
        value = float(self._interp(s))
        if not math.isfinite(value):
            raise DomainError(f"s={s} lies outside the tabulated kernel")
        return value

    def rho(self, s: float) -> float:
        return self.constant * self.mgf(s)

    def describe(self) -> dict:
        out = {"kernel": self.kernel.value, "constant": self.constant, "s_hat": self.s_hat}
        if self.kernel is not Kernel.CUSTOM:
            out["sigma"] = self.sigma
        else:
            out["table_points"] = len(self.table[0])
        return out


def _check_table(s: np.ndarray, m: np.ndarray):
    if s.ndim != 1 or s.shape != m.shape or len(s) < 2:
        raise DomainError("kernel table needs two equal-length columns with at least 2 rows")
    if np.any(np.diff(s) <= 0):
        raise DomainError("kernel table s values must be strictly increasing")
    if np.any(s < 0) or np.any(m <= 0) or not np.all(np.isfinite(m)):
        raise DomainError("kernel table needs s >= 0 and finite M > 0")


def load_kernel_table(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a two-column `s,M` CSV; a non-numeric first row is taken as a header."""
    rows = []
    with Path(path).open(newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise DomainError(f"{path}: line {i + 1} does not have two columns")
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                if rows or i > 0:
                    raise DomainError(f"{path}: line {i + 1} is not numeric") from None
    if not rows:
        raise DomainError(f"{path}: no data rows")
    s, m = (np.array(col) for col in zip(*rows))
    _check_table(s, m)
    return s, m


def speed_objective(model: InvasionModel, s: float) -> float:
    if not model.s_low < s < model.s_hat:
        raise DomainError(f"s={s} outside ({model.s_low}, {model.s_hat})")
    return math.log(lambda_max_gamma5_closed(model.rho(s))) / s


@dataclass(frozen=True)
class SpeedResult:
    v_star: float
    s_star: float
    lambda_at_s: float
    iterations: int
    bracket: tuple[float, float]
    grid_ok: bool
    grid_min: float
    grid_argmin: float


def _golden_section(f, a: float, c: float, tol: float):
    h = c - a
    x1, x2 = c - INV_PHI * h, a + INV_PHI * h
    f1, f2 = f(x1), f(x2)
    it = 0
    while c - a > tol:
        it += 1
        if f1 < f2:
            c, x2, f2 = x2, x1, f1
            x1 = c - INV_PHI * (c - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (c - a)
            f2 = f(x2)
    s, v = (x1, f1) if f1 < f2 else (x2, f2)
    return s, v, (a, c), it


def _probe_points(lo: float, hi: float, span_hint: float) -> np.ndarray:
    if math.isinf(hi):
        return lo + span_hint * np.arange(1, GRID_PROBES + 1) / GRID_PROBES
    return lo + (hi - lo) * np.arange(1, GRID_PROBES + 1) / (GRID_PROBES + 1)


def minimize_speed(model: InvasionModel, tol: float = 1e-8, max_expand: int = 200) -> SpeedResult:
    """Bracket the minimizer from s0 = min(1, s_hat/2), refine by golden section.

    The objective is not known to be unimodal, so every run is checked against
    a coarse grid. A lower grid value at the domain edge raises
    NoInteriorMinimum; one in the interior gives a RuntimeWarning and
    grid_ok=False.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    lo, hi = model.s_low, model.s_hat
    f = lambda s: speed_objective(model, s)  # noqa: E731

    s0 = min(1.0, hi / 2) if lo == 0 else 0.5 * (lo + hi)
    if not lo < s0 < hi:
        s0 = 0.5 * (lo + hi)

    def left(s):
        return lo + (s - lo) / 2

    def right(s):
        return 2 * s if math.isinf(hi) else s + (hi - s) / 2

    b = s0
    a, c = left(b), right(b)
    fa, fb, fc = f(a), f(b), f(c)
    for _ in range(max_expand):
        if fa < fb and fa <= fc:
            step = left(a)
            if not lo < step < a:
                break
            c, fc, b, fb = b, fb, a, fa
            a, fa = step, f(step)
        elif fc < fb:
            step = right(c)
            if not c < step < hi:
                break
            a, fa, b, fb = b, fb, c, fc
            c, fc = step, f(step)
        else:
            break
    if not (fb <= fa and fb <= fc):
        raise NoInteriorMinimum(
            "bracket expansion kept descending toward the domain edge",
            {"left": (a, fa), "right": (c, fc)},
        )

    s_star, v_star, bracket, iterations = _golden_section(f, a, c, tol)

    probes = _probe_points(lo, hi, max(4 * c, 2 * s0))
    values = np.array([f(s) for s in probes])
    i_min = int(np.argmin(values))
    slack = 1e-12 * max(1.0, abs(v_star))
    grid_ok = bool(values[i_min] >= v_star - slack)
    if not grid_ok:
        if i_min in (0, len(probes) - 1):
            raise NoInteriorMinimum(
                f"grid probe at s={probes[i_min]:.6g} beats the bracketed minimum",
                {"left": (float(probes[0]), float(values[0])), "right": (float(probes[-1]), float(values[-1]))},
            )
        warnings.warn(
            f"grid probe at s={probes[i_min]:.6g} is below the golden-section minimum; "
            "the objective may be multimodal",
            RuntimeWarning,
            stacklevel=2,
        )
    return SpeedResult(
        v_star=v_star,
        s_star=s_star,
        lambda_at_s=lambda_max_gamma5_closed(model.rho(s_star)),
        iterations=iterations,
        bracket=bracket,
        grid_ok=grid_ok,
        grid_min=float(values[i_min]),
        grid_argmin=float(probes[i_min]),
    )

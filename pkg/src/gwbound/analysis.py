"""Extinction probabilities, inequality scans and survival curves."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

import numpy as np

from .algebra import binom
from .coeffs import cgt_closed
from .pgf import (
    Params,
    c_g,
    iterate_fl,
    nb_success_prob,
    offspring_mean,
    phi_fl,
    phi_nb,
    zhat,
)

FLOAT_TOL = 1e-12
EQUALITY_WINDOW = 1e-6
ITER_CAP = 10 ** 6


class ViolationFound(ArithmeticError):
    """The FL pgf exceeded the NB pgf somewhere on the grid."""

    def __init__(self, params: Params, x, phi_nb_value, phi_fl_value):
        self.params = params
        self.x = x
        self.phi_nb = phi_nb_value
        self.phi_fl = phi_fl_value
        super().__init__(f"phi_fl > phi_nb at x={x} ({params}): {phi_fl_value} > {phi_nb_value}")


class ConvergenceError(RuntimeError):
    pass


# extinction probability

def _phi_nb_prime(p: Params, x: float) -> float:
    s = float(nb_success_prob(p))
    return p.r * (1 - s) / (1 - (1 - s) * x) * phi_nb(p, x)


def extinction_probability(p: Params, tol: float = 1e-14, max_iter: int = ITER_CAP,
                           polish: bool = True) -> float:
    """Smallest fixed point of the NB pgf, by monotone iteration from 0.

    Returns 1.0 for a non-supercritical law.  A couple of Newton steps from
    below (which cannot overshoot, the pgf being convex) remove the tail left
    by slow geometric convergence.
    """
    p = p.as_float()
    if offspring_mean(p) <= 1:
        return 1.0
    x = 0.0
    for _ in range(max_iter):
        nxt = phi_nb(p, x)
        step = nxt - x
        x = nxt
        if step < tol:
            break
    else:
        raise ConvergenceError(f"no convergence after {max_iter} iterations ({p})")
    if polish:
        for _ in range(3):
            h = phi_nb(p, x) - x
            slope = _phi_nb_prime(p, x) - 1
            if h <= 0 or slope >= 0:
                break
            x = x - h / slope
    return x


def bisect_fixed_point(p: Params, tol: float = 1e-15) -> float:
    """Independent cross-check of :func:`extinction_probability` by bisection on ``phi(x) - x``."""
    p = p.as_float()
    h = lambda x: phi_nb(p, x) - x
    lo, hi = 0.0, 0.5
    while h(hi) >= 0:
        lo, hi = hi, (hi + 1) / 2
        if hi >= 1:
            return 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if h(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# vectorized float evaluation

def phi_nb_array(p: Params, xs: np.ndarray) -> np.ndarray:
    zr = float(p.extinction)
    y = (zr - xs) / float(zhat(p))
    out = zr / (1 + y) ** p.r
    return np.where(xs == 1, 1.0, out)


def phi_fl_array(p: Params, xs: np.ndarray) -> np.ndarray:
    zr = float(p.extinction)
    y = (zr - xs) / float(zhat(p))
    out = zr * (1 - xs - p.r * y) / (1 - xs - p.r * zr * y)
    return np.where(xs == 1, 1.0, out)


def _horner(coeffs, t):
    acc = np.zeros_like(t)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def gap_stable(p: Params, xs: np.ndarray) -> np.ndarray:
    """``phi_nb - phi_fl`` evaluated without cancellation.

    Uses the positive-coefficient expansions: the y-series for ``x <= zeta**r``
    and the (u, zeta) table for ``x > zeta**r``.
    """
    p = p.as_float()
    xs = np.asarray(xs, dtype=float)
    r, z = p.r, p.zeta
    zr, zh = z ** r, float(zhat(p))
    y = (zr - xs) / zh
    series = [binom(r, j + 1) * c_g(r, j, z) for j in range(r)]
    g_left = y * y * _horner(series, np.maximum(y, 0.0))
    u = (1 - xs) * (1 - z) / (1 - zr)
    rows = [0.0] + [
        sum(float(cgt_closed(r, k, n)) * z ** n for n in range(0, 2 * r - 2 - k))
        for k in range(1, r)
    ]
    g_right = y * y * _horner(rows, np.maximum(u, 0.0)) / (1 - z)
    g = np.where(y >= 0, g_left, g_right)
    f = g * (1 - z) ** 2 / (1 - xs - r * y)
    return f * phi_nb_array(p, xs) * phi_fl_array(p, xs) / zr


def exact_gap(p: Params, x: Fraction) -> Fraction:
    return phi_nb(p, x) - phi_fl(p, x)


def to_fraction(v) -> Fraction:
    """Exact value of a float or rational."""
    return v if isinstance(v, Fraction) else Fraction(v)


# scanning

@dataclass(frozen=True)
class GridSpec:
    points: int = 10_000
    mode: str = "float"  # "float" | "exact"

    def __post_init__(self):
        if self.points < 2:
            raise ValueError("grid needs at least 2 points")
        if self.mode not in ("float", "exact"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class GridReport:
    params: Params
    grid: GridSpec
    x: list
    phi_nb: list
    phi_fl: list
    gap: list
    equality_points: list
    unexpected_equalities: list
    min_positive_gap: object
    mode: str
    exact_adjudications: int = 0

    @property
    def ok(self) -> bool:
        return not self.unexpected_equalities

    def rows(self):
        for row in zip(self.x, self.phi_nb, self.phi_fl, self.gap):
            yield tuple(float(v) for v in row)

    def summary(self) -> dict:
        return {
            "r": self.params.r,
            "zeta": str(self.params.zeta),
            "mode": self.mode,
            "points": len(self.x),
            "violations": 0,
            "equality_points": [str(v) for v in self.equality_points],
            "unexpected_equalities": [str(v) for v in self.unexpected_equalities],
            "min_positive_gap": float(self.min_positive_gap) if self.min_positive_gap is not None else None,
            "exact_adjudications": self.exact_adjudications,
        }


def _near_mandated(p: Params, x) -> bool:
    return abs(x - p.extinction) < EQUALITY_WINDOW or abs(x - 1) < EQUALITY_WINDOW


def _is_mandated(p: Params, x) -> bool:
    return x == p.extinction or x == 1


def scan_inequality(p: Params, grid: GridSpec = GridSpec(), tol: float = FLOAT_TOL) -> GridReport:
    """Evaluate both pgfs on a grid of [0, 1] that contains ``zeta**r`` and 1 exactly.

    Raises :class:`ViolationFound` if ``phi_fl - phi_nb`` exceeds ``tol`` (float
    mode) or is positive at all (exact mode).
    """
    if grid.mode == "exact":
        return _scan_exact(p, grid)
    p = p.as_float()
    xs = np.unique(np.append(np.linspace(0.0, 1.0, grid.points), p.extinction))
    nb = phi_nb_array(p, xs)
    fl = phi_fl_array(p, xs)
    gap = nb - fl
    bad = np.flatnonzero(gap < -tol)
    if bad.size:
        i = bad[0]
        raise ViolationFound(p, float(xs[i]), float(nb[i]), float(fl[i]))
    stable = gap_stable(p, xs)
    band = np.abs(gap) < tol * np.maximum(1.0, np.abs(nb))
    equality, unexpected = [], []
    adjudicated = 0
    for i in np.flatnonzero(band):
        x = float(xs[i])
        if stable[i] > 0:
            continue
        if _is_mandated(p, x):
            equality.append(x)
            continue
        # stable route inconclusive: settle it in exact arithmetic
        adjudicated += 1
        pe = Params(p.r, Fraction(p.zeta))
        eg = exact_gap(pe, Fraction(x))
        if eg < 0:
            raise ViolationFound(p, x, float(nb[i]), float(fl[i]))
        if eg == 0:
            (equality if _near_mandated(p, x) else unexpected).append(x)
    off = np.array([not _near_mandated(p, float(x)) for x in xs])
    min_gap = float(stable[off].min()) if off.any() else None
    if min_gap is not None and min_gap <= 0:
        j = np.flatnonzero(off & (stable <= 0))[0]
        unexpected.append(float(xs[j]))
    return GridReport(p, grid, xs.tolist(), nb.tolist(), fl.tolist(), gap.tolist(),
                      equality, unexpected, min_gap, "float", adjudicated)


def _scan_exact(p: Params, grid: GridSpec) -> GridReport:
    if not p.exact:
        raise ValueError("exact mode needs a rational zeta")
    n = grid.points
    xs = sorted({Fraction(i, n - 1) for i in range(n)} | {p.extinction})
    nb, fl, gap = [], [], []
    equality, unexpected = [], []
    min_gap = None
    for x in xs:
        a, b = phi_nb(p, x), phi_fl(p, x)
        d = a - b
        if d < 0:
            raise ViolationFound(p, x, a, b)
        if d == 0:
            (equality if _is_mandated(p, x) else unexpected).append(x)
        elif min_gap is None or d < min_gap:
            min_gap = d
        nb.append(a)
        fl.append(b)
        gap.append(d)
    return GridReport(p, grid, xs, nb, fl, gap, equality, unexpected, min_gap, "exact")


def confirm_exact(p: Params, samples: int = 100, seed: int = 0, denominator: int = 10 ** 6):
    """Exact gaps at random rational points of (0, 1) other than ``zeta**r``.

    Returns ``(min_gap, count)``; a non-positive minimum means the strict
    inequality failed somewhere.
    """
    pe = p if p.exact else Params(p.r, to_fraction(p.zeta))
    rng = random.Random(seed)
    best = None
    count = 0
    while count < samples:
        x = Fraction(rng.randrange(1, denominator), denominator)
        if x == pe.extinction:
            continue
        d = exact_gap(pe, x)
        best = d if best is None else min(best, d)
        count += 1
    return best, count


# survival curves

@dataclass
class SurvivalCurve:
    params: Params
    n: List[int]
    fl_at_0: List[float]
    nb_at_0: List[float]
    limit: float

    @property
    def fl_survival(self) -> List[float]:
        return [1 - v for v in self.fl_at_0]

    @property
    def nb_survival(self) -> List[float]:
        return [1 - v for v in self.nb_at_0]

    def rows(self):
        for i, a, b in zip(self.n, self.fl_at_0, self.nb_at_0):
            yield i, a, b, self.limit

    def problems(self, tol: float = FLOAT_TOL) -> List[str]:
        """Violated invariants (empty when the curve is consistent)."""
        out = []
        for seq, name in ((self.fl_at_0, "fl"), (self.nb_at_0, "nb")):
            for i in range(1, len(seq)):
                if seq[i] < seq[i - 1] - tol:
                    out.append(f"{name} decreases at n={self.n[i]}")
                if seq[i] > self.limit + tol:
                    out.append(f"{name} exceeds the extinction probability at n={self.n[i]}")
        for i, a, b in zip(self.n, self.fl_at_0, self.nb_at_0):
            if a > b + tol:
                out.append(f"fl > nb at n={i}")
        return out


def survival_bounds(p: Params, n_max: int) -> SurvivalCurve:
    """Generation-n extinction probabilities from 0 under the FL and NB pgfs, n = 0..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    pf = p.as_float()
    ns = list(range(n_max + 1))
    fl = [iterate_fl(pf, n, 0.0) for n in ns]
    nb = [0.0]
    for _ in range(n_max):
        nb.append(phi_nb(pf, nb[-1]))
    return SurvivalCurve(pf, ns, fl, nb, float(pf.extinction))

"""Negative binomial pgf, its fractional linear lower bound, and derived functions.

Every function accepts either floats or :class:`fractions.Fraction` values; the
arithmetic is written so that a rational ``zeta`` and rational ``x`` give exact
results, and floats give ordinary double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Union

from .algebra import BiPoly, PowerFraction, binom

Number = Union[float, Fraction]


@dataclass(frozen=True)
class Params:
    """Offspring law parameters: shape ``r >= 2`` and ``0 < zeta < 1``.

    The extinction probability of the associated process is ``zeta**r``.
    """

    r: int
    zeta: Number

    def __post_init__(self):
        if isinstance(self.r, bool) or not isinstance(self.r, int):
            raise TypeError(f"r must be an integer, got {self.r!r}")
        if self.r < 2:
            raise ValueError(f"r must be >= 2, got {self.r}")
        if not isinstance(self.zeta, Real):
            raise TypeError(f"zeta must be real, got {self.zeta!r}")
        if not 0 < self.zeta < 1:
            raise ValueError(f"zeta must lie in (0, 1), got {self.zeta}")
        if isinstance(self.zeta, int):
            object.__setattr__(self, "zeta", Fraction(self.zeta))

    @property
    def exact(self) -> bool:
        return isinstance(self.zeta, Fraction)

    @property
    def extinction(self) -> Number:
        return self.zeta ** self.r

    def as_float(self) -> "Params":
        return Params(self.r, float(self.zeta))

    def __str__(self):
        return f"r={self.r}, zeta={self.zeta}"


def _check_x(x, lo=0, hi=1):
    if not lo <= x <= hi:
        raise ValueError(f"x = {x} outside [{lo}, {hi}]")


def zhat(p: Params) -> Number:
    """Geometric sum ``1 + zeta + ... + zeta**(r-1)``."""
    z = p.zeta
    total = 0 * z
    term = 1 + 0 * z
    for _ in range(p.r):
        total += term
        term *= z
    return total


def nb_success_prob(p: Params) -> Number:
    """Success probability ``zeta*(1-zeta**r)/(1-zeta**(r+1))`` of the NB offspring law.

    With this value ``phi_nb(x) = (s / (1 - (1 - s) x))**r``.
    """
    z = p.zeta
    return z * (1 - z ** p.r) / (1 - z ** (p.r + 1))


def offspring_mean(p: Params) -> Number:
    s = nb_success_prob(p)
    return p.r * (1 - s) / s


def y_of_x(p: Params, x: Number) -> Number:
    """``(zeta**r - x) / zhat``; zero at the extinction probability, ``-(1-zeta)`` at 1."""
    _check_x(x)
    return (p.extinction - x) / zhat(p)


def x_of_y(p: Params, y: Number) -> Number:
    return p.extinction - y * zhat(p)


def phi_nb(p: Params, x: Number) -> Number:
    """Negative binomial pgf written as ``zeta**r / (1 + y(x))**r``."""
    _check_x(x)
    if x == 1:
        return 1 + 0 * p.zeta
    return p.extinction / (1 + y_of_x(p, x)) ** p.r


def phi_nb_standard(p: Params, x: Number) -> Number:
    """The same pgf in the textbook form ``(s / (1 - (1-s) x))**r``."""
    _check_x(x)
    s = nb_success_prob(p)
    return (s / (1 - (1 - s) * x)) ** p.r


def _fl_parts(p: Params, x: Number):
    y = y_of_x(p, x)
    num = 1 - x - p.r * y
    den = 1 - x - p.r * p.extinction * y
    return num, den


def phi_fl(p: Params, x: Number) -> Number:
    """Fractional linear lower bound ``zeta**r (1-x-r y) / (1-x-r zeta**r y)``."""
    _check_x(x)
    if x == 1:
        return 1 + 0 * p.zeta
    num, den = _fl_parts(p, x)
    if not (num > 0 and den > 0):
        raise AssertionError(f"non-positive FL numerator/denominator at x={x} ({p}): {num}, {den}")
    return p.extinction * num / den


def f_nb(p: Params, x: Number) -> Number:
    """``zeta**r (1/phi_fl - 1/phi_nb)``; non-negative, zero only at ``x = zeta**r``."""
    _check_x(x, 0, 1)
    if x == 1:
        raise ValueError("f_nb is defined on [0, 1)")
    return p.extinction * (1 / phi_fl(p, x) - 1 / phi_nb(p, x))


def g_nb(p: Params, y: Number) -> Number:
    """Closed polynomial form of ``f_nb * (1-x-r y) / (1-zeta)**2`` as a function of ``y``."""
    r, z = p.r, p.zeta
    a = (1 + y) ** r - 1
    zr = z ** r
    num = y * a * (r * (1 - z) - (1 - zr)) - (1 - z) * (1 - zr) * (a - r * y)
    return num / (1 - z) ** 3


def g_nb_from_f(p: Params, x: Number) -> Number:
    """``g_nb(y(x))`` through its definition from ``f_nb``."""
    y = y_of_x(p, x)
    return f_nb(p, x) * (1 - x - p.r * y) / (1 - p.zeta) ** 2


def _cg_bracket_terms(r: int, j: int):
    """Coefficients of ``zeta**k`` (k < r-1) and of ``zeta**(r-1)/(1-zeta)`` in c_g, before 1/(2(j+2))."""
    poly = [(k + 1) * (2 * r * (1 + j) - (2 + j) * k - 2) for k in range(r - 1)]
    return poly, r * (r + 1) * j


def c_g(r: int, j: int, zeta: Number) -> Number:
    """Coefficient of ``y**(j+2) * binom(r, j+1)`` in ``g_nb``."""
    if not 0 <= j <= r - 1:
        raise IndexError(f"j = {j} outside [0, {r - 1}]")
    poly, tail = _cg_bracket_terms(r, j)
    s = 0 * zeta
    for k in reversed(range(len(poly))):
        s = s * zeta + poly[k]
    s = s + zeta ** (r - 1) / (1 - zeta) * tail
    if isinstance(zeta, Fraction):
        return s / (2 * (j + 2))
    return s / (2.0 * (j + 2))


def c_g_exact(r: int, j: int, vars=("y", "z")) -> PowerFraction:
    """``c_g(r, j, .)`` as ``numerator(zeta) / (1-zeta)**power``; zeta is ``vars[1]``."""
    if not 0 <= j <= r - 1:
        raise IndexError(f"j = {j} outside [0, {r - 1}]")
    poly, tail = _cg_bracket_terms(r, j)
    zpoly = BiPoly.from_univariate(poly, vars[1], vars)
    one_minus = BiPoly({(0, 0): 1, (0, 1): -1}, vars)
    top = BiPoly({(0, r - 1): tail}, vars)
    num = (zpoly * one_minus + top) * Fraction(1, 2 * (j + 2))
    return PowerFraction(num, 1)


def g_nb_series(p: Params, y: Number) -> Number:
    """``g_nb`` evaluated through its y-power series with ``c_g`` coefficients."""
    r = p.r
    s = 0 * y
    for j in reversed(range(r)):
        s = s * y + binom(r, j + 1) * c_g(r, j, p.zeta)
    return y * y * s


def u_of_x(p: Params, x: Number) -> Number:
    """``(1-x)(1-zeta)/(1-zeta**r)``, which maps ``[zeta**r, 1]`` onto ``[0, 1-zeta]``."""
    _check_x(x)
    return (1 - x) * (1 - p.zeta) / (1 - p.extinction)


def g_tilde(p: Params, u: Number, route: str = "quotient") -> Number:
    """``(1-zeta) g_nb(u-(1-zeta)) / (u-(1-zeta))**2``.

    ``route="quotient"`` evaluates the definition (singular at ``u = 1-zeta``);
    ``route="table"`` sums the closed-form coefficient table.
    """
    z = p.zeta
    if route == "quotient":
        y = u - (1 - z)
        if y == 0:
            raise ZeroDivisionError("g_tilde quotient route is singular at u = 1 - zeta")
        return (1 - z) * g_nb(p, y) / (y * y)
    if route == "table":
        from .coeffs import cgt_closed

        r = p.r
        total = 0 * u
        for k in range(r - 1, 0, -1):
            row = 0 * z
            for n in range(2 * r - 3 - k, -1, -1):
                row = row * z + cgt_closed(r, k, n)
            total = (total + row) * u
        return total
    raise ValueError(f"unknown route {route!r}")


class MobiusMap:
    """The map ``x -> (a x + b) / (c x + d)``; composition is matrix multiplication."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        # float powers legitimately approach rank one (the constant limit map)
        if a * d - b * c == 0 and all(isinstance(e, (int, Fraction)) for e in (a, b, c, d)):
            raise ValueError("singular Mobius matrix")
        self.a, self.b, self.c, self.d = a, b, c, d

    def __call__(self, x):
        return (self.a * x + self.b) / (self.c * x + self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """``self o other``."""
        return MobiusMap(self.a * other.a + self.b * other.c,
                         self.a * other.b + self.b * other.d,
                         self.c * other.a + self.d * other.c,
                         self.c * other.b + self.d * other.d)

    __matmul__ = compose

    def normalized(self) -> "MobiusMap":
        """Rescale the entries (projectively the same map) to keep their size bounded."""
        entries = (self.a, self.b, self.c, self.d)
        if all(isinstance(e, (int, Fraction)) for e in entries):
            fr = [Fraction(e) for e in entries]
            lcm = 1
            for e in fr:
                lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
            ints = [int(e * lcm) for e in fr]
            g = 0
            for v in ints:
                g = math.gcd(g, abs(v))
            return MobiusMap(*(Fraction(v, g) for v in ints))
        scale = max(abs(e) for e in entries)
        return MobiusMap(*(e / scale for e in entries))

    def power(self, n: int) -> "MobiusMap":
        """n-fold self-composition by repeated squaring."""
        if n < 0:
            raise ValueError("n must be >= 0")
        one = 1 + 0 * self.a
        result = MobiusMap(one, 0 * self.a, 0 * self.a, one)
        base = self
        while n:
            if n & 1:
                result = result.compose(base).normalized()
            n >>= 1
            if n:
                base = base.compose(base).normalized()
        return result

    def fixed_points(self):
        """Real fixed points (solutions of ``c x**2 + (d-a) x - b = 0``), floats."""
        a, b, c, d = (float(v) for v in (self.a, self.b, self.c, self.d))
        if c == 0:
            return [] if a == d else [b / (d - a)]
        disc = (d - a) ** 2 + 4 * b * c
        if disc < 0:
            return []
        s = math.sqrt(disc)
        return sorted({(a - d - s) / (2 * c), (a - d + s) / (2 * c)})

    def __repr__(self):
        return f"MobiusMap({self.a}, {self.b}, {self.c}, {self.d})"


def mobius_from_params(p: Params) -> MobiusMap:
    """Matrix form of :func:`phi_fl` in x."""
    r, q, zh = p.r, p.extinction, zhat(p)
    return MobiusMap(q * (r - zh), q * (zh - r * q), r * q - zh, zh - r * q * q)


def iterate_fl(p: Params, n: int, x: Number) -> Number:
    """n-th functional iterate of :func:`phi_fl` at ``x`` via a matrix power."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_x(x)
    if n == 0:
        return x
    return mobius_from_params(p).power(n)(x)


def iterate_sequential(phi, p: Params, n: int, x: Number) -> Number:
    """Apply ``phi(p, .)`` n times starting from ``x``."""
    for _ in range(n):
        x = phi(p, x)
    return x

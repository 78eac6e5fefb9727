"""Exact scalars, generalized binomials and sparse bivariate polynomials over Q.

Scalars are :class:`fractions.Fraction` (integers stay plain ``int`` where
possible, which keeps the hot loops fast).  :class:`BiPoly` stores a sparse
map ``{(i, j): coeff}`` for ``sum coeff * v**i * w**j`` in two named
variables ``(v, w)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple, Union

Scalar = Union[int, Fraction]
Monomial = Tuple[int, int]


class NonzeroRemainder(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder."""


def sign(e: int) -> int:
    """(-1)**e for any integer e, as an int."""
    return -1 if e % 2 else 1


def binom(n: int, k: int) -> int:
    """Binomial coefficient with the generalized conventions used in the proof.

    ``binom(n, k) = 0`` for ``k < 0`` and for ``k > n >= 0``.  For negative
    upper index only ``n = -1`` and ``n = -2`` are supported:
    ``binom(-1, k) = (-1)**k`` and ``binom(-2, k) = (-1)**k * (k + 1)``.
    Any other negative upper index raises ``ValueError``.
    """
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k) if k <= n else 0
    if n == -1:
        return sign(k)
    if n == -2:
        return sign(k) * (k + 1)
    raise ValueError(f"binom({n}, {k}): negative upper index outside the supported table")


def as_scalar(c) -> Scalar:
    """Normalize an exact rational to int when integral, else Fraction."""
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return as_scalar(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


class BiPoly:
    """Immutable sparse polynomial in two named variables with rational coefficients."""

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None,
                 vars: Tuple[str, str] = ("u", "z")):
        if len(vars) != 2 or vars[0] == vars[1]:
            raise ValueError(f"need two distinct variable names, got {vars!r}")
        self.vars = tuple(vars)
        clean: Dict[Monomial, Scalar] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in {(i, j)}")
            c = as_scalar(c)
            if c:
                clean[(i, j)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Scalar], vars) -> "BiPoly":
        # terms must already be clean (exact, nonzero)
        p = cls.__new__(cls)
        p.vars = vars
        p._terms = terms
        p._hash = None
        return p

    # construction helpers
    @classmethod
    def const(cls, c: Scalar, vars=("u", "z")) -> "BiPoly":
        return cls({(0, 0): c}, vars)

    @classmethod
    def var(cls, name: str, vars=("u", "z")) -> "BiPoly":
        if name == vars[0]:
            return cls({(1, 0): 1}, vars)
        if name == vars[1]:
            return cls({(0, 1): 1}, vars)
        raise ValueError(f"{name!r} is not one of {vars}")

    @classmethod
    def from_univariate(cls, coeffs: Iterable[Scalar], name: str, vars=("u", "z")) -> "BiPoly":
        """Polynomial in a single variable from a low-to-high coefficient list."""
        if name not in vars:
            raise ValueError(f"{name!r} is not one of {vars}")
        key = (lambda e: (e, 0)) if name == vars[0] else (lambda e: (0, e))
        return cls({key(e): c for e, c in enumerate(coeffs)}, vars)

    # access
    @property
    def terms(self) -> Dict[Monomial, Scalar]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, i: int, j: int) -> Scalar:
        return self._terms.get((i, j), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self, name: str) -> int:
        """Degree in the named variable; -1 for the zero polynomial."""
        idx = self._index(name)
        return max((m[idx] for m in self._terms), default=-1)

    def _index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise ValueError(f"{name!r} is not one of {self.vars}") from None

    def leading_monomial(self) -> Monomial:
        """Largest monomial in lex order with ``vars[0] > vars[1]``."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms)

    # arithmetic
    def _check(self, other: "BiPoly"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _coerce(self, other) -> "BiPoly":
        if isinstance(other, BiPoly):
            self._check(other)
            return other
        return BiPoly.const(as_scalar(other), self.vars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = as_scalar(s)
            else:
                out.pop(m, None)
        return BiPoly._raw(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly._raw({m: -c for m, c in self._terms.items()}, self.vars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            c = as_scalar(other)
            if not c:
                return BiPoly._raw({}, self.vars)
            return BiPoly._raw({m: as_scalar(v * c) for m, v in self._terms.items()}, self.vars)
        self._check(other)
        out: Dict[Monomial, Scalar] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                m = (i1 + i2, j1 + j2)
                out[m] = out.get(m, 0) + c1 * c2
        return BiPoly(out, self.vars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = BiPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.vars == other.vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == BiPoly.const(other, self.vars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._terms.items())))
        return self._hash

    def divexact(self, divisor: "BiPoly") -> "BiPoly":
        """Exact quotient; raises :class:`NonzeroRemainder` if divisor does not divide self."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lm = divisor.leading_monomial()
        lc = divisor._terms[lm]
        dterms = list(divisor._terms.items())
        rem = dict(self._terms)
        quot: Dict[Monomial, Scalar] = {}
        while rem:
            m = max(rem)
            if m[0] < lm[0] or m[1] < lm[1]:
                raise NonzeroRemainder(
                    f"leading term {m} of remainder not divisible by {lm} "
                    f"in {self.vars}")
            t = as_scalar(Fraction(rem[m]) / lc)
            qm = (m[0] - lm[0], m[1] - lm[1])
            quot[qm] = t
            for (i, j), c in dterms:
                key = (qm[0] + i, qm[1] + j)
                s = rem.get(key, 0) - t * c
                if s:
                    rem[key] = s
                else:
                    rem.pop(key, None)
        return BiPoly(quot, self.vars)

    def subst(self, name: str, expr: "BiPoly") -> "BiPoly":
        """Replace variable ``name`` by ``expr``; the result lives in ``expr``'s ring.

        The variable that is kept must also be a variable of ``expr``.
        """
        idx = self._index(name)
        keep = self.vars[1 - idx]
        if keep not in expr.vars:
            raise ValueError(f"{keep!r} must be a variable of the substituted expression")
        # Horner in the substituted variable
        by_power: Dict[int, Dict[int, Scalar]] = {}
        for m, c in self._terms.items():
            by_power.setdefault(m[idx], {})[m[1 - idx]] = c
        top = max(by_power, default=-1)
        result = BiPoly._raw({}, expr.vars)
        kidx = expr.vars.index(keep)
        for e in range(top, -1, -1):
            result = result * expr
            row = by_power.get(e)
            if row:
                terms = {((d, 0) if kidx == 0 else (0, d)): c for d, c in row.items()}
                result = result + BiPoly(terms, expr.vars)
        return result

    def evaluate(self, **values):
        """Evaluate at scalar (or numpy) values given by variable name."""
        v0, v1 = values[self.vars[0]], values[self.vars[1]]
        total = 0
        for (i, j), c in self._terms.items():
            total = total + c * v0 ** i * v1 ** j
        return total

    def rename(self, vars: Tuple[str, str]) -> "BiPoly":
        return BiPoly._raw(dict(self._terms), tuple(vars))

    def __repr__(self):
        if not self._terms:
            return f"BiPoly(0; {self.vars[0]}, {self.vars[1]})"
        parts = []
        for (i, j) in sorted(self._terms, reverse=True):
            mono = "*".join(s for s in (
                f"{self.vars[0]}^{i}" if i > 1 else (self.vars[0] if i == 1 else ""),
                f"{self.vars[1]}^{j}" if j > 1 else (self.vars[1] if j == 1 else ""),
            ) if s)
            c = self._terms[(i, j)]
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)


def poly_mul(a: BiPoly, b: BiPoly) -> BiPoly:
    return a * b


def poly_divexact(a: BiPoly, b: BiPoly) -> BiPoly:
    return a.divexact(b)


def poly_subst(p: BiPoly, var: str, expr: BiPoly) -> BiPoly:
    return p.subst(var, expr)


class PowerFraction:
    """Rational function ``numerator / (1 - w)**power`` where ``w`` is ``numerator.vars[1]``.

    Common factors of ``(1 - w)`` are cancelled on construction.
    """

    __slots__ = ("numerator", "power")

    def __init__(self, numerator: BiPoly, power: int):
        if power < 0:
            raise ValueError("power must be non-negative")
        one_minus = BiPoly({(0, 0): 1, (0, 1): -1}, numerator.vars)
        while power and not numerator.is_zero():
            try:
                numerator = numerator.divexact(one_minus)
            except NonzeroRemainder:
                break
            power -= 1
        if numerator.is_zero():
            power = 0
        self.numerator = numerator
        self.power = power

    def evaluate(self, **values):
        w = values[self.numerator.vars[1]]
        return self.numerator.evaluate(**values) / (1 - w) ** self.power

    def __eq__(self, other):
        if not isinstance(other, PowerFraction):
            return NotImplemented
        return self.numerator == other.numerator and self.power == other.power

    def __repr__(self):
        return f"PowerFraction({self.numerator!r}, power={self.power})"

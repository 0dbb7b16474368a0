"""
Exact real algebraic numbers.

A ``RealAlgebraic`` is an irreducible primitive defining polynomial plus a rational
isolating interval. Only sign, comparison and minimum are offered; arithmetic on
algebraic quantities happens inside ``number_fields``.
"""

import logging
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Optional

import mpmath

from app.core.exceptions import InternalConsistencyError
from app.services.poly_core import (
    X,
    IsolatingInterval,
    Number,
    UniPoly,
    format_fraction,
    halve,
    isolate_real_roots,
    sturm_count,
)

logger = logging.getLogger(__name__)

LOCATE_MAX_STEPS = 4000


class Comparison(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class Sign(Enum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def mpf_to_fraction(value) -> Fraction:
    """Exact rational value of a finite mpmath number."""
    value = mpmath.mpf(value)
    if value == 0:
        return Fraction(0)
    sign, man, exp, _ = value._mpf_
    result = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -result if sign else result


@total_ordering
class RealAlgebraic:
    """
    A real root of a rational polynomial, selected by an isolating interval.

    Args:
        defining: Polynomial with the root; it is reduced to the irreducible factor
            holding the root, so equal numbers share their defining polynomial.
        interval: Interval containing exactly one root of ``defining``.
    """

    __slots__ = ("defining", "interval")

    def __init__(self, defining: UniPoly, interval: IsolatingInterval, reduce: bool = True):
        defining = defining.with_var(X)
        if defining.degree < 1:
            raise InternalConsistencyError(f"Defining polynomial {defining} has no roots")
        if reduce and defining.degree > 1:
            defining = _factor_holding_root(defining, interval)
        defining = defining.primitive()
        if defining.degree == 1:
            c1, c0 = defining.coefficients
            root = -c0 / c1
            interval = IsolatingInterval(root, root)
        elif interval.exact and defining.evaluate(interval.lo) == 0:
            # irreducible of degree > 1 has no rational roots
            raise InternalConsistencyError(f"Rational root {interval.lo} of irreducible {defining}")
        self.defining = defining
        self.interval = interval

    @classmethod
    def from_rational(cls, value: Number) -> "RealAlgebraic":
        value = Fraction(value)
        return cls(UniPoly.from_coefficients([value.denominator, -value.numerator]), IsolatingInterval(value, value))

    @classmethod
    def roots_of(cls, p: UniPoly) -> list:
        """All real roots of ``p`` in ascending order."""
        sqf = p.squarefree_part()
        return [cls(sqf, iv) for iv in isolate_real_roots(sqf)]

    @classmethod
    def locate(cls, defining: UniPoly, approximation, tolerance: Optional[Fraction] = None) -> "RealAlgebraic":
        """
        Select the root of ``defining`` that a high-precision approximation points at.

        Args:
            defining: Nonzero polynomial with a real root near ``approximation``.
            approximation: mpmath number accurate to well below ``tolerance``.
            tolerance: Radius around the approximation; defaults to ``10^(-dps/2)``.

        Raises:
            InternalConsistencyError: If no root or several roots stay near the approximation.
        """
        sqf = defining.squarefree_part()
        if tolerance is None:
            tolerance = Fraction(1, 10 ** max(10, mpmath.mp.dps // 2))
        target = mpf_to_fraction(approximation)
        candidates = isolate_real_roots(sqf)
        for _ in range(LOCATE_MAX_STEPS):
            near = [iv for iv in candidates if iv.lo - tolerance <= target <= iv.hi + tolerance]
            if len(near) == 1:
                return cls(sqf, near[0])
            if not near:
                break
            candidates = [halve(sqf, iv) for iv in near]
        raise InternalConsistencyError(
            f"Could not locate a root of {sqf} near {mpmath.nstr(approximation, 20)}"
        )

    @property
    def is_rational(self) -> bool:
        return self.defining.degree == 1

    @property
    def rational_value(self) -> Optional[Fraction]:
        return self.interval.lo if self.is_rational else None

    @property
    def degree(self) -> int:
        return self.defining.degree

    def refine(self, width: Number) -> "RealAlgebraic":
        """Copy whose interval is at most ``width`` wide."""
        interval = self.interval
        while interval.width > width:
            interval = halve(self.defining, interval)
        return RealAlgebraic(self.defining, interval, reduce=False)

    def compare_rational(self, value: Number) -> Comparison:
        value = Fraction(value)
        interval = self.interval
        while interval.contains(value) and not interval.exact:
            if self.defining.evaluate(value) == 0:
                return Comparison.EQUAL
            interval = halve(self.defining, interval)
        if interval.exact and interval.lo == value:
            return Comparison.EQUAL
        return Comparison.LESS if interval.hi < value else Comparison.GREATER

    def compare(self, other: "RealAlgebraic") -> Comparison:
        if other.is_rational:
            return self.compare_rational(other.rational_value)
        if self.is_rational:
            return _flip(other.compare_rational(self.rational_value))
        a, b = self.interval, other.interval
        if not a.disjoint(b):
            common = self.defining.gcd(other.defining)
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if common.degree >= 1 and sturm_count(common, lo, hi) >= 1:
                return Comparison.EQUAL
        while not a.disjoint(b):
            a = halve(self.defining, a)
            b = halve(other.defining, b)
        return Comparison.LESS if a.hi < b.lo else Comparison.GREATER

    def sign(self) -> Sign:
        return Sign(self.compare_rational(0).value)

    def to_mpf(self, dps: int = 30):
        width = Fraction(1, 10 ** (dps + 2))
        interval = self.refine(width).interval
        with mpmath.workdps(dps + 5):
            mid = interval.midpoint
            return mpmath.mpf(mid.numerator) / mid.denominator

    def to_float(self, width: float = 1e-15) -> float:
        """Approximation within ``width``, by refinement."""
        if width <= 0:
            raise ValueError("width must be positive")
        if self.is_rational:
            return float(self.rational_value)
        return float(self.refine(Fraction(width)).interval.midpoint)

    def __neg__(self) -> "RealAlgebraic":
        coeffs = self.defining.coefficients
        n = len(coeffs) - 1
        flipped = [c if (n - i) % 2 == 0 else -c for i, c in enumerate(coeffs)]
        return RealAlgebraic(
            UniPoly.from_coefficients(flipped), IsolatingInterval(-self.interval.hi, -self.interval.lo), reduce=False
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.compare_rational(other) is Comparison.EQUAL
        return isinstance(other, RealAlgebraic) and self.compare(other) is Comparison.EQUAL

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.compare_rational(other) is Comparison.LESS
        return self.compare(other) is Comparison.LESS

    def __hash__(self) -> int:
        return hash(self.defining)

    def __str__(self) -> str:
        if self.is_rational:
            return format_fraction(self.rational_value)
        return f"root of {self.defining} in {self.interval}"

    def __repr__(self) -> str:
        return f"RealAlgebraic({self})"


def _flip(c: Comparison) -> Comparison:
    return Comparison(-c.value)


def _factor_holding_root(p: UniPoly, interval: IsolatingInterval) -> UniPoly:
    for factor, _ in p.factors():
        if factor.degree >= 1 and sturm_count(factor, interval.lo, interval.hi) >= 1:
            return factor
    raise InternalConsistencyError(f"No factor of {p} has a root in {interval}")


@total_ordering
class ExtendedValue:
    """An element of the extended reals: a ``RealAlgebraic`` or one of ``±inf``."""

    __slots__ = ("kind", "value")

    FINITE, POS_INF, NEG_INF = "finite", "+inf", "-inf"

    def __init__(self, kind: str, value: Optional[RealAlgebraic] = None):
        if (kind == self.FINITE) != (value is not None):
            raise ValueError("Finite extended values need a value, infinite ones must not carry one")
        self.kind = kind
        self.value = value

    @classmethod
    def finite(cls, value) -> "ExtendedValue":
        if not isinstance(value, RealAlgebraic):
            value = RealAlgebraic.from_rational(value)
        return cls(cls.FINITE, value)

    @classmethod
    def pos_inf(cls) -> "ExtendedValue":
        return cls(cls.POS_INF)

    @classmethod
    def neg_inf(cls) -> "ExtendedValue":
        return cls(cls.NEG_INF)

    @property
    def is_finite(self) -> bool:
        return self.kind == self.FINITE

    @property
    def is_pos_inf(self) -> bool:
        return self.kind == self.POS_INF

    @property
    def is_neg_inf(self) -> bool:
        return self.kind == self.NEG_INF

    def _rank(self) -> int:
        return {self.NEG_INF: -1, self.FINITE: 0, self.POS_INF: 1}[self.kind]

    def compare(self, other: "ExtendedValue") -> Comparison:
        if self.is_finite and other.is_finite:
            return self.value.compare(other.value)
        diff = self._rank() - other._rank()
        return Comparison((diff > 0) - (diff < 0))

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtendedValue) and self.compare(other) is Comparison.EQUAL

    def __lt__(self, other: "ExtendedValue") -> bool:
        return self.compare(other) is Comparison.LESS

    def __hash__(self) -> int:
        return hash((self.kind, self.value))

    def to_float(self) -> float:
        if self.is_pos_inf:
            return float("inf")
        if self.is_neg_inf:
            return float("-inf")
        return self.value.to_float()

    def __str__(self) -> str:
        return str(self.value) if self.is_finite else self.kind

    def __repr__(self) -> str:
        return f"ExtendedValue({self})"


def min_of_set(values: Iterable[ExtendedValue]) -> ExtendedValue:
    """Least element; the minimum of the empty set is ``+inf``."""
    best = ExtendedValue.pos_inf()
    for v in values:
        if v.compare(best) is Comparison.LESS:
            best = v
    return best


def dedupe(values: Iterable[RealAlgebraic]) -> list:
    """Distinct values in ascending order."""
    result: list = []
    for v in sorted(values):
        if not result or result[-1].compare(v) is not Comparison.EQUAL:
            result.append(v)
    return result

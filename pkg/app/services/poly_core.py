"""
Exact polynomial kernel over the rationals.

Thin immutable wrappers around ``sympy.Poly`` with domain ``QQ``: ``MultiPoly`` for
bivariate polynomials in ``x, y`` and ``UniPoly`` for univariate ones, plus the
elimination and root isolation primitives the engine is built on.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath
import sympy
from sympy import Poly, QQ
from sympy.polys.polyerrors import ExactQuotientFailed

from app.core.exceptions import DegenerateInputError

logger = logging.getLogger(__name__)

X, Y = sympy.symbols("x y")
Z = sympy.Symbol("z")

Rational = Fraction
Number = Union[int, Fraction]


def to_fraction(value) -> Fraction:
    """Convert a sympy/gmpy/python rational to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    return Fraction(int(value.numerator), int(value.denominator))


def to_qq(value: Number):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class IsolatingInterval:
    """Closed rational interval ``[lo, hi]`` holding exactly one root of its polynomial."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"Empty interval [{self.lo}, {self.hi}]")

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value: Number) -> bool:
        return self.lo <= value <= self.hi

    def disjoint(self, other: "IsolatingInterval") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def __str__(self) -> str:
        return f"[{format_fraction(self.lo)}, {format_fraction(self.hi)}]"


class UniPoly:
    """Univariate polynomial with rational coefficients in a single tagged variable."""

    __slots__ = ("_poly",)

    def __init__(self, poly: Poly):
        if len(poly.gens) != 1:
            raise ValueError(f"UniPoly needs exactly one generator, got {poly.gens}")
        if poly.get_domain() != QQ:
            poly = poly.set_domain(QQ)
        self._poly = poly

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[Number], var: sympy.Symbol = X) -> "UniPoly":
        """Build from coefficients listed highest degree first."""
        coeffs = [to_qq(c) for c in coefficients] or [QQ.zero]
        return cls(Poly.from_list(coeffs, var, domain=QQ))

    @classmethod
    def from_expr(cls, expr, var: sympy.Symbol = X) -> "UniPoly":
        return cls(Poly(expr, var, domain=QQ))

    @classmethod
    def constant(cls, value: Number, var: sympy.Symbol = X) -> "UniPoly":
        return cls.from_coefficients([value], var)

    @property
    def poly(self) -> Poly:
        return self._poly

    @property
    def var(self) -> sympy.Symbol:
        return self._poly.gens[0]

    @property
    def is_zero(self) -> bool:
        return self._poly.is_zero

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return -1 if self.is_zero else self._poly.degree()

    @property
    def coefficients(self) -> List[Fraction]:
        """Coefficients highest degree first."""
        return [to_fraction(c) for c in self._poly.rep.to_list()] if not self.is_zero else [Fraction(0)]

    @property
    def leading_coefficient(self) -> Fraction:
        return to_fraction(self._poly.LC())

    def evaluate(self, value: Number) -> Fraction:
        result = Fraction(0)
        for c in self.coefficients:
            result = result * value + c
        return result

    def evaluate_mpf(self, value):
        result = mpmath.mpf(0)
        for c in self.coefficients:
            result = result * value + mpmath.mpf(c.numerator) / c.denominator
        return result

    def sign_at(self, value: Number) -> int:
        v = self.evaluate(value)
        return (v > 0) - (v < 0)

    def diff(self) -> "UniPoly":
        return UniPoly(self._poly.diff(self.var))

    def monic(self) -> "UniPoly":
        return self if self.is_zero else UniPoly(self._poly.monic())

    def primitive(self) -> "UniPoly":
        """Integer-content-free, positive leading coefficient."""
        if self.is_zero:
            return self
        coeffs = self.coefficients
        scale = lcm(*[c.denominator for c in coeffs])
        ints = [int(c * scale) for c in coeffs]
        content = gcd(*ints)
        if ints[0] < 0:
            content = -content
        return UniPoly.from_coefficients([Fraction(i, content) for i in ints], self.var)

    def squarefree_part(self) -> "UniPoly":
        if self.is_zero:
            raise DegenerateInputError("Square-free part of the zero polynomial")
        return UniPoly(self._poly.sqf_part()).primitive()

    def gcd(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(self._poly.gcd(other.poly))

    def exquo(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(self._poly.exquo(other.poly))

    def rem(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(self._poly.rem(other.poly))

    def factors(self) -> List[Tuple["UniPoly", int]]:
        """Irreducible factors over Q with multiplicities, each primitive."""
        if self.is_zero:
            raise DegenerateInputError("Factorization of the zero polynomial")
        _, factors = self._poly.factor_list()
        return [(UniPoly(p).primitive(), k) for p, k in factors]

    def real_roots(self) -> List[IsolatingInterval]:
        return isolate_real_roots(self)

    def compose(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(self._poly.compose(other.poly))

    def with_var(self, var: sympy.Symbol) -> "UniPoly":
        return UniPoly.from_coefficients(self.coefficients, var)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(self._poly + other.poly)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(self._poly - other.poly)

    def __mul__(self, other: Union["UniPoly", Number]) -> "UniPoly":
        if isinstance(other, UniPoly):
            return UniPoly(self._poly * other.poly)
        return UniPoly(self._poly * sympy.Rational(*_ratio(other)))

    __rmul__ = __mul__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-self._poly)

    def __pow__(self, n: int) -> "UniPoly":
        return UniPoly(self._poly**n)

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.var == other.var and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash((str(self.var), tuple(self.coefficients)))

    def __str__(self) -> str:
        name = str(self.var)
        coeffs = self.coefficients
        n = len(coeffs) - 1
        return _format_terms([((n - i,), c) for i, c in enumerate(coeffs) if c != 0], (name,))

    def __repr__(self) -> str:
        return f"UniPoly({self})"


class MultiPoly:
    """
    Sparse bivariate polynomial in ``x, y`` with rational coefficients.

    Immutable; arithmetic returns new instances. The zero polynomial is a regular value.
    """

    __slots__ = ("_poly",)

    def __init__(self, poly: Poly):
        if tuple(poly.gens) != (X, Y):
            poly = Poly(poly.as_expr(), X, Y, domain=QQ)
        elif poly.get_domain() != QQ:
            poly = poly.set_domain(QQ)
        self._poly = poly

    @classmethod
    def from_expr(cls, expr) -> "MultiPoly":
        return cls(Poly(expr, X, Y, domain=QQ))

    @classmethod
    def from_terms(cls, terms: Dict[Tuple[int, int], Number]) -> "MultiPoly":
        cleaned = {k: to_qq(v) for k, v in terms.items() if v != 0}
        if not cleaned:
            return cls.zero()
        return cls(Poly.from_dict(cleaned, X, Y, domain=QQ))

    @classmethod
    def constant(cls, value: Number) -> "MultiPoly":
        return cls.from_terms({(0, 0): value})

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls(Poly(0, X, Y, domain=QQ))

    @classmethod
    def x(cls) -> "MultiPoly":
        return cls(Poly(X, X, Y, domain=QQ))

    @classmethod
    def y(cls) -> "MultiPoly":
        return cls(Poly(Y, X, Y, domain=QQ))

    @property
    def poly(self) -> Poly:
        return self._poly

    @property
    def expr(self):
        return self._poly.as_expr()

    def terms(self) -> Dict[Tuple[int, int], Fraction]:
        if self.is_zero:
            return {}
        return {monom: to_fraction(c) for monom, c in self._poly.terms()}

    @property
    def is_zero(self) -> bool:
        return self._poly.is_zero

    @property
    def is_constant(self) -> bool:
        return self.is_zero or self.total_degree == 0

    @property
    def total_degree(self) -> int:
        return -1 if self.is_zero else self._poly.total_degree()

    def degree(self, var: sympy.Symbol) -> int:
        if self.is_zero:
            return -1
        return self._poly.degree(var)

    @property
    def leading_coefficient(self) -> Fraction:
        """Leading coefficient in graded-lex order."""
        return to_fraction(self._poly.LC(order="grlex")) if not self.is_zero else Fraction(0)

    @property
    def constant_value(self) -> Fraction:
        return self.terms().get((0, 0), Fraction(0))

    def diff(self, var: sympy.Symbol) -> "MultiPoly":
        return MultiPoly(self._poly.diff(var))

    def evaluate(self, x: Number, y: Number) -> Fraction:
        return sum((c * Fraction(x) ** i * Fraction(y) ** j for (i, j), c in self.terms().items()), Fraction(0))

    def evaluate_float(self, x: float, y: float) -> float:
        return float(sum(float(c) * x**i * y**j for (i, j), c in self.terms().items()))

    def substitute(self, x_image: "MultiPoly", y_image: "MultiPoly") -> "MultiPoly":
        """Simultaneous substitution ``x -> x_image, y -> y_image``."""
        result = MultiPoly.zero()
        x_powers: Dict[int, MultiPoly] = {}
        y_powers: Dict[int, MultiPoly] = {}
        for (i, j), c in self.terms().items():
            if i not in x_powers:
                x_powers[i] = x_image**i
            if j not in y_powers:
                y_powers[j] = y_image**j
            result = result + x_powers[i] * y_powers[j] * c
        return result

    def swap(self) -> "MultiPoly":
        return MultiPoly.from_terms({(j, i): c for (i, j), c in self.terms().items()})

    def shear(self, k: int) -> "MultiPoly":
        """Return ``p(x + k*y, y)``."""
        if k == 0:
            return self
        return self.substitute(MultiPoly.x() + MultiPoly.y() * k, MultiPoly.y())

    def at_x(self, x0: Number) -> UniPoly:
        """Specialize ``x = x0``; the result is a polynomial in ``y``."""
        coeffs: Dict[int, Fraction] = {}
        for (i, j), c in self.terms().items():
            coeffs[j] = coeffs.get(j, Fraction(0)) + c * Fraction(x0) ** i
        return _dense(coeffs, Y)

    def at_y(self, y0: Number) -> UniPoly:
        coeffs: Dict[int, Fraction] = {}
        for (i, j), c in self.terms().items():
            coeffs[i] = coeffs.get(i, Fraction(0)) + c * Fraction(y0) ** j
        return _dense(coeffs, X)

    def coefficients_in_y(self) -> List[UniPoly]:
        """Coefficients of ``y^0, y^1, ...`` as polynomials in ``x``."""
        by_power: Dict[int, Dict[int, Fraction]] = {}
        for (i, j), c in self.terms().items():
            by_power.setdefault(j, {})[i] = c
        top = self.degree(Y)
        return [_dense(by_power.get(j, {}), X) for j in range(top + 1)]

    def as_univariate(self, var: sympy.Symbol) -> UniPoly:
        """View a polynomial that only involves ``var`` as a ``UniPoly``."""
        other = Y if var == X else X
        if self.degree(other) > 0:
            raise ValueError(f"{self} depends on {other}")
        return UniPoly(Poly(self.expr, var, domain=QQ))

    @classmethod
    def from_univariate(cls, p: UniPoly, var: sympy.Symbol) -> "MultiPoly":
        return cls.from_expr(p.poly.as_expr().subs(p.var, var))

    def normalized(self) -> "MultiPoly":
        """Primitive integer content and positive graded-lex leading coefficient."""
        if self.is_zero:
            return self
        terms = self.terms()
        scale = lcm(*[c.denominator for c in terms.values()])
        content = gcd(*[int(c * scale) for c in terms.values()])
        factor = Fraction(scale, content)
        if self.leading_coefficient < 0:
            factor = -factor
        return self * factor

    def exquo(self, other: "MultiPoly") -> "MultiPoly":
        return MultiPoly(self._poly.exquo(other.poly))

    def __add__(self, other: Union["MultiPoly", Number]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other)
        return MultiPoly(self._poly + other.poly)

    __radd__ = __add__

    def __sub__(self, other: Union["MultiPoly", Number]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other)
        return MultiPoly(self._poly - other.poly)

    def __rsub__(self, other: Number) -> "MultiPoly":
        return MultiPoly.constant(other) - self

    def __mul__(self, other: Union["MultiPoly", Number]) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return MultiPoly(self._poly * other.poly)
        return MultiPoly(self._poly * sympy.Rational(*_ratio(other)))

    __rmul__ = __mul__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(-self._poly)

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("Negative powers are not polynomials")
        return MultiPoly(self._poly**n)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.terms() == other.terms()

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms().items())))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        ordered = [(monom, to_fraction(c)) for monom, c in self._poly.terms(order="grlex")]
        return _format_terms(ordered, ("x", "y"))

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


def _ratio(value: Number) -> Tuple[int, int]:
    value = Fraction(value)
    return value.numerator, value.denominator


def _dense(coeffs: Dict[int, Fraction], var: sympy.Symbol) -> UniPoly:
    coeffs = {k: v for k, v in coeffs.items() if v != 0}
    if not coeffs:
        return UniPoly.constant(0, var)
    top = max(coeffs)
    return UniPoly.from_coefficients([coeffs.get(k, Fraction(0)) for k in range(top, -1, -1)], var)


def _format_terms(terms: Iterable[Tuple[Tuple[int, ...], Fraction]], names: Tuple[str, ...]) -> str:
    """Render terms in the input grammar, e.g. ``x^4*y^2 - 3/2*x + 1``."""
    parts: List[str] = []
    for monom, coeff in terms:
        factors = []
        for name, exp in zip(names, monom):
            if exp == 1:
                factors.append(name)
            elif exp > 1:
                factors.append(f"{name}^{exp}")
        magnitude = abs(coeff)
        if not factors:
            body = format_fraction(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = f"{format_fraction(magnitude)}*" + "*".join(factors)
        if not parts:
            parts.append(f"-{body}" if coeff < 0 else body)
        else:
            parts.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(parts) if parts else "0"


def resultant(p: MultiPoly, q: MultiPoly, eliminate: sympy.Symbol = Y) -> UniPoly:
    """
    Resultant of two bivariate polynomials with respect to one variable.

    A factor constant in the eliminated variable is raised to the other's degree
    (Sylvester convention); the resultant of two such constants is 1.

    Args:
        p: First polynomial.
        q: Second polynomial.
        eliminate: ``X`` or ``Y``.

    Returns:
        UniPoly in the remaining variable.

    Raises:
        DegenerateInputError: If both inputs are zero.
    """
    keep = X if eliminate == Y else Y
    if p.is_zero and q.is_zero:
        raise DegenerateInputError("Resultant of two zero polynomials")
    if p.is_zero or q.is_zero:
        return UniPoly.constant(0, keep)
    dp, dq = p.degree(eliminate), q.degree(eliminate)
    if dp == 0 or dq == 0:
        base, exponent = (p, dq) if dp == 0 else (q, dp)
        if dp == 0 and dq == 0:
            return UniPoly.constant(1, keep)
        return UniPoly(Poly(base.expr, keep, domain=QQ) ** exponent)
    pe = Poly(p.expr, eliminate, keep, domain=QQ)
    qe = Poly(q.expr, eliminate, keep, domain=QQ)
    res = pe.resultant(qe)
    if isinstance(res, Poly):
        return UniPoly(Poly(res.as_expr(), keep, domain=QQ))
    return UniPoly(Poly(res, keep, domain=QQ))


def isolate_real_roots(p: UniPoly) -> List[IsolatingInterval]:
    """
    Isolate the distinct real roots of ``p``.

    Returns:
        Pairwise disjoint intervals sorted ascending, one per distinct real root.

    Raises:
        DegenerateInputError: If ``p`` is zero.
    """
    if p.is_zero:
        raise DegenerateInputError("Real roots of the zero polynomial")
    if p.degree == 0:
        return []
    sqf = p.squarefree_part()
    raw = sqf.poly.intervals()
    intervals = [IsolatingInterval(to_fraction(lo), to_fraction(hi)) for (lo, hi), _ in raw]
    intervals.sort(key=lambda iv: (iv.lo, iv.hi))
    for i in range(len(intervals) - 1):
        while not intervals[i].disjoint(intervals[i + 1]):
            intervals[i] = halve(sqf, intervals[i])
            intervals[i + 1] = halve(sqf, intervals[i + 1])
    return intervals


def halve(p: UniPoly, interval: IsolatingInterval) -> IsolatingInterval:
    """One bisection step on an isolating interval of the square-free ``p``."""
    if interval.exact:
        return interval
    lo, hi = interval.lo, interval.hi
    mid = interval.midpoint
    s_lo, s_mid = p.sign_at(lo), p.sign_at(mid)
    if s_mid == 0:
        return IsolatingInterval(mid, mid)
    if s_lo == 0:
        return IsolatingInterval(lo, lo)
    if s_lo * s_mid < 0:
        return IsolatingInterval(lo, mid)
    if p.sign_at(hi) == 0:
        return IsolatingInterval(hi, hi)
    return IsolatingInterval(mid, hi)


def divides(h: MultiPoly, j: MultiPoly) -> bool:
    """True iff ``j = h * q`` for a rational polynomial ``q``."""
    if h.is_zero:
        raise DegenerateInputError("Division by the zero polynomial")
    if j.is_zero:
        return True
    try:
        j.poly.exquo(h.poly)
    except ExactQuotientFailed:
        return False
    return True


def squarefree_part(p: Union[MultiPoly, UniPoly]) -> Union[MultiPoly, UniPoly]:
    """Product of the distinct irreducible factors of ``p``, normalized."""
    if p.is_zero:
        raise DegenerateInputError("Square-free part of the zero polynomial")
    if isinstance(p, UniPoly):
        return p.squarefree_part()
    if p.is_constant:
        return MultiPoly.constant(1)
    g = bivariate_gcd(bivariate_gcd(p, p.diff(X)), p.diff(Y))
    return p.exquo(g).normalized()


def bivariate_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor, unique up to a rational scalar."""
    if p.is_zero and q.is_zero:
        raise DegenerateInputError("gcd of two zero polynomials")
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    return MultiPoly(p.poly.gcd(q.poly))


def _sign_variations(values: Sequence[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: UniPoly, lo: Number, hi: Number) -> int:
    """Number of distinct real roots of ``p`` in ``[lo, hi]`` by a Sturm sequence."""
    if p.is_zero:
        raise DegenerateInputError("Sturm sequence of the zero polynomial")
    sqf = p.squarefree_part()
    if sqf.degree == 0:
        return 0
    chain = [UniPoly(s) for s in sympy.sturm(sqf.poly)]
    v_lo = _sign_variations([s.evaluate(lo) for s in chain])
    v_hi = _sign_variations([s.evaluate(hi) for s in chain])
    return v_lo - v_hi + (1 if sqf.evaluate(lo) == 0 else 0)


def root_bound(p: UniPoly) -> Fraction:
    """Cauchy bound: every real root lies in ``(-B, B)``."""
    if p.is_zero:
        raise DegenerateInputError("Root bound of the zero polynomial")
    coeffs = p.coefficients
    lead = abs(coeffs[0])
    return 1 + max((abs(c) / lead for c in coeffs[1:]), default=Fraction(0))


def parse_rational(text: str) -> Optional[Fraction]:
    """Parse ``"3"``, ``"-7/2"`` or ``"0.25"`` exactly; None when malformed."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        return None

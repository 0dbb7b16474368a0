"""
Exact arithmetic in real number fields Q(θ).

Elements are native sympy domain elements: rationals of ``QQ`` or ``ANP`` values of an
``AlgebraicField``. The field remembers which real root θ is, so every element has a
real value that can be turned into a ``RealAlgebraic``.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import sympy
from mpmath import iv
from sympy import CRootOf, Poly, QQ

from app.core.config import get_settings
from app.core.exceptions import InternalConsistencyError
from app.services.algebraic_numbers import RealAlgebraic
from app.services.poly_core import X, Y, MultiPoly, Number, UniPoly, resultant, to_fraction, to_qq

logger = logging.getLogger(__name__)

_T = sympy.Symbol("_t")
_W = sympy.Symbol("_w")

Element = Any


class NumberField:
    """
    Q itself or Q(θ) for a real algebraic θ.

    Args:
        generator: The real algebraic number adjoined to Q. None or a rational
            generator gives the rational field.
    """

    def __init__(self, generator: Optional[RealAlgebraic] = None):
        if generator is not None and generator.is_rational:
            generator = None
        self.generator = generator
        self._charpoly_cache: Dict[Tuple[Fraction, ...], UniPoly] = {}
        self._theta_cache: Dict[Tuple[Fraction, Fraction], Any] = {}
        if generator is None:
            self.domain = QQ
            self.minpoly: Optional[UniPoly] = None
            return
        self.minpoly = generator.defining
        roots = RealAlgebraic.roots_of(self.minpoly)
        index = next(i for i, r in enumerate(roots) if r == generator)
        monic = Poly(self.minpoly.monic().poly.as_expr().subs(X, _T), _T, domain=QQ)
        self.domain = QQ.algebraic_field((monic, CRootOf(monic.as_expr(), index)))
        logger.debug(f"Built number field of degree {self.degree} for {generator}")

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls(None)

    @property
    def is_rational_field(self) -> bool:
        return self.generator is None

    @property
    def degree(self) -> int:
        return 1 if self.minpoly is None else self.minpoly.degree

    def rational(self, value: Number) -> Element:
        value = Fraction(value)
        if self.is_rational_field:
            return to_qq(value)
        return self.domain.from_sympy(sympy.Rational(value.numerator, value.denominator))

    @property
    def zero(self) -> Element:
        return self.domain.zero

    @property
    def one(self) -> Element:
        return self.domain.one

    @property
    def theta(self) -> Element:
        """The generator as an element; the rational field has none."""
        if self.is_rational_field:
            raise ValueError("The rational field has no generator")
        return self.domain.unit

    def from_coefficients(self, coefficients: Sequence[Number]) -> Element:
        """Element ``c_0 θ^n + ... + c_n`` from rational coefficients, highest first."""
        if self.is_rational_field:
            if len(coefficients) > 1:
                raise ValueError("Rational field elements have a single coefficient")
            return self.rational(coefficients[0] if coefficients else 0)
        result = self.zero
        for c in coefficients:
            result = result * self.theta + self.rational(c)
        return result

    def coefficient_list(self, e: Element) -> List[Fraction]:
        """Rational coordinates of ``e`` in the power basis, highest power first."""
        if self.is_rational_field:
            return [to_fraction(e)]
        coeffs = [to_fraction(c) for c in e.to_list()]
        return coeffs or [Fraction(0)]

    def add(self, a: Element, b: Element) -> Element:
        return self.domain.add(a, b)

    def sub(self, a: Element, b: Element) -> Element:
        return self.domain.sub(a, b)

    def mul(self, a: Element, b: Element) -> Element:
        return self.domain.mul(a, b)

    def div(self, a: Element, b: Element) -> Element:
        if self.domain.is_zero(b):
            raise ZeroDivisionError("Division by zero in a number field")
        return self.domain.quo(a, b)

    def neg(self, a: Element) -> Element:
        return self.domain.neg(a)

    def power(self, a: Element, n: int) -> Element:
        if n < 0:
            return self.div(self.one, self.domain.pow(a, -n))
        return self.domain.pow(a, n)

    def is_zero(self, a: Element) -> bool:
        return self.domain.is_zero(a)

    def is_rational_element(self, e: Element) -> bool:
        return len(self.coefficient_list(e)) == 1

    def as_rational(self, e: Element) -> Optional[Fraction]:
        coeffs = self.coefficient_list(e)
        return coeffs[0] if len(coeffs) == 1 else None

    def theta_mpf(self, at: Optional[RealAlgebraic] = None):
        root = at or self.generator
        key = (root.interval.lo, root.interval.hi)
        if key not in self._theta_cache:
            self._theta_cache[key] = root.to_mpf(get_settings().algebraic_dps)
        return self._theta_cache[key]

    def to_mpf(self, e: Element, at: Optional[RealAlgebraic] = None):
        """High-precision real value of ``e``; ``at`` selects another root of the minimal polynomial."""
        coeffs = self.coefficient_list(e)
        if len(coeffs) == 1:
            return mpmath.mpf(coeffs[0].numerator) / coeffs[0].denominator
        with mpmath.workdps(get_settings().algebraic_dps):
            theta = self.theta_mpf(at)
            result = mpmath.mpf(0)
            for c in coeffs:
                result = result * theta + mpmath.mpf(c.numerator) / c.denominator
            return result

    def to_float(self, e: Element) -> float:
        return float(self.to_mpf(e))

    def charpoly(self, e: Element) -> UniPoly:
        """Characteristic polynomial of multiplication by ``e``: ``Res_T(m(T), Z - e(T))``."""
        coeffs = tuple(self.coefficient_list(e))
        if coeffs in self._charpoly_cache:
            return self._charpoly_cache[coeffs]
        m = MultiPoly.from_univariate(self.minpoly, X)
        e_poly = MultiPoly.from_univariate(UniPoly.from_coefficients(list(coeffs), X), X)
        result = resultant(m, MultiPoly.y() - e_poly, eliminate=X)
        self._charpoly_cache[coeffs] = result
        return result

    def to_real_algebraic(self, e: Element, at: Optional[RealAlgebraic] = None) -> RealAlgebraic:
        """
        Exact real value of ``e``.

        Args:
            e: Field element.
            at: Optional other real root of the minimal polynomial to evaluate at.

        Raises:
            InternalConsistencyError: If the value cannot be isolated.
        """
        value = self.as_rational(e)
        if value is not None:
            return RealAlgebraic.from_rational(value)
        with mpmath.workdps(get_settings().algebraic_dps):
            return RealAlgebraic.locate(self.charpoly(e), self.to_mpf(e, at))

    def sign(self, e: Element) -> int:
        if self.is_zero(e):
            return 0
        return self.to_real_algebraic(e).sign().value

    def real_embeddings(self) -> List[RealAlgebraic]:
        """All real roots of the minimal polynomial, the generator among them."""
        if self.is_rational_field:
            return []
        return RealAlgebraic.roots_of(self.minpoly)

    def poly(self, coefficients: Sequence[Element]) -> Poly:
        """sympy ``Poly`` over this field from element coefficients, highest first."""
        coeffs = list(coefficients) or [self.zero]
        return Poly.from_list(coeffs, _W, domain=self.domain)

    def poly_coefficients(self, p: Poly) -> List[Element]:
        if p.is_zero:
            return [self.zero]
        return [self.domain.convert(c) for c in p.rep.to_list()]

    def evaluate(self, coefficients: Sequence[Element], point: Element) -> Element:
        result = self.zero
        for c in coefficients:
            result = self.add(self.mul(result, point), c)
        return result

    def evaluate_bivariate(self, p: MultiPoly, x: Element, y: Element) -> Element:
        """``p(x, y)`` for field elements ``x, y``."""
        x_powers: Dict[int, Element] = {0: self.one}
        y_powers: Dict[int, Element] = {0: self.one}
        result = self.zero
        for (i, j), c in p.terms().items():
            if i not in x_powers:
                x_powers[i] = self.power(x, i)
            if j not in y_powers:
                y_powers[j] = self.power(y, j)
            result = self.add(result, self.mul(self.rational(c), self.mul(x_powers[i], y_powers[j])))
        return result

    def element_str(self, e: Element) -> str:
        value = self.as_rational(e)
        if value is not None:
            return str(value)
        return str(self.to_real_algebraic(e))

    def __repr__(self) -> str:
        return "NumberField(QQ)" if self.is_rational_field else f"NumberField({self.generator})"


@dataclass
class FieldRoot:
    """A real root of a polynomial over ``NumberField``, living in a (possibly larger) field."""

    field: NumberField
    embed: Callable[[Element], Element]
    root: Element
    multiplicity: int
    value: RealAlgebraic


def _identity(e: Element) -> Element:
    return e


def _rational_embedding(target: NumberField) -> Callable[[Element], Element]:
    return lambda e: target.rational(to_fraction(e))


def _lift(field: NumberField, coefficients: Sequence[Element]) -> MultiPoly:
    """``h~(W, T)``: coefficients as polynomials in T (stored in X), W stored in Y."""
    n = len(coefficients) - 1
    terms: Dict[Tuple[int, int], Fraction] = {}
    for power, c in enumerate(coefficients):
        coeffs = field.coefficient_list(c)
        m = len(coeffs) - 1
        for k, a in enumerate(coeffs):
            if a != 0:
                terms[(m - k, n - power)] = a
    return MultiPoly.from_terms(terms)


def real_roots(field: NumberField, coefficients: Sequence[Element]) -> List[FieldRoot]:
    """
    Distinct real roots of a polynomial with coefficients in ``field``.

    Roots that lie in ``field`` come back with the identity embedding; irrational ones
    come with a new field containing both the old field and the root.

    Args:
        field: Coefficient field.
        coefficients: Polynomial coefficients, highest first; not all zero.

    Returns:
        Roots sorted by value.
    """
    coefficients = list(coefficients)
    while coefficients and field.is_zero(coefficients[0]):
        coefficients.pop(0)
    if len(coefficients) < 2:
        return []
    p = field.poly(coefficients)
    _, factors = p.factor_list()
    found: List[FieldRoot] = []
    for factor, mult in factors:
        fc = field.poly_coefficients(factor)
        if len(fc) == 2:
            root = field.neg(field.div(fc[1], fc[0]))
            found.append(FieldRoot(field, _identity, root, mult, field.to_real_algebraic(root)))
        elif field.is_rational_field:
            rational_factor = UniPoly.from_coefficients([to_fraction(c) for c in fc])
            for value in RealAlgebraic.roots_of(rational_factor):
                extension = NumberField(value)
                found.append(
                    FieldRoot(extension, _rational_embedding(extension), extension.theta, mult, value)
                )
        else:
            found.extend(_extension_roots(field, fc, mult))
    found.sort(key=lambda r: r.value)
    return found


def _extension_roots(field: NumberField, coefficients: List[Element], mult: int) -> List[FieldRoot]:
    """Real roots of an irreducible polynomial over an algebraic field, each in its own extension."""
    lifted = _lift(field, coefficients)
    m = MultiPoly.from_univariate(field.minpoly, X)
    norm = resultant(m, lifted, eliminate=X)
    dps = get_settings().algebraic_dps
    roots: List[FieldRoot] = []
    # roots of the norm include those of every conjugate polynomial
    for candidate in RealAlgebraic.roots_of(norm):
        if _excludes_root(field, coefficients, candidate, dps):
            continue
        with mpmath.workdps(dps):
            theta = field.theta_mpf()
            rho = candidate.to_mpf(dps)
        root = _adjoin(field, coefficients, lifted, m, candidate, rho, theta, mult)
        if root is not None:
            roots.append(root)
    return roots


def _rational_box(lo: Fraction, hi: Fraction):
    a = iv.mpf(lo.numerator) / lo.denominator
    b = iv.mpf(hi.numerator) / hi.denominator
    return iv.mpf([a.a, b.b])


def _excludes_root(field: NumberField, coefficients: List[Element], candidate: RealAlgebraic, dps: int) -> bool:
    """
    Interval evaluation of the polynomial at ``candidate`` with theta enclosed rigorously.

    True only when the enclosure misses zero, so a true root is never excluded.
    """
    width = Fraction(1, 10**dps)
    theta_box = field.generator.refine(width).interval
    rho_box = candidate.refine(width).interval
    saved = iv.dps
    iv.dps = dps + 10
    try:
        theta = _rational_box(theta_box.lo, theta_box.hi)
        rho = _rational_box(rho_box.lo, rho_box.hi)
        value = iv.mpf(0)
        for c in coefficients:
            coefficient = iv.mpf(0)
            for a in field.coefficient_list(c):
                coefficient = coefficient * theta + iv.mpf(a.numerator) / a.denominator
            value = value * rho + coefficient
        return 0 not in value
    finally:
        iv.dps = saved


def _adjoin(field, coefficients, lifted, m, candidate, rho, theta, mult) -> Optional[FieldRoot]:
    """
    Build Q(γ) with γ = ρ + kθ containing both θ and the root ρ.

    Returns None when ρ is a root of a conjugate polynomial only: then ``m(T)`` and
    ``h~(γ - kT, T)`` share no factor.
    """
    limit = get_settings().shear_limit
    for k in range(limit):
        shifted = lifted.substitute(MultiPoly.x(), MultiPoly.y() - MultiPoly.x() * k)
        r = resultant(m, shifted, eliminate=X)
        if r.squarefree_part().degree != r.degree:
            continue
        gamma = RealAlgebraic.locate(r, rho + k * theta)
        extension = NumberField(gamma)
        g = extension.theta if not extension.is_rational_field else extension.rational(gamma.rational_value)
        # gcd over Q(γ) of m(T) and h~(γ - kT, T) is T - θ
        t_poly = extension.poly([extension.rational(c) for c in field.minpoly.coefficients])
        shifted_poly = _substitute_shift(extension, lifted, g, k)
        common = t_poly.gcd(shifted_poly)
        if common.degree() == 0:
            logger.debug(f"{candidate} is a root of a conjugate polynomial only")
            return None
        if common.degree() != 1:
            continue
        cc = extension.poly_coefficients(common)
        theta_l = extension.neg(extension.div(cc[1], cc[0]))
        rho_l = extension.sub(g, extension.mul(extension.rational(k), theta_l))

        def embed(e, _field=field, _ext=extension, _theta=theta_l):
            return _ext.evaluate([_ext.rational(c) for c in _field.coefficient_list(e)], _theta)

        check = extension.evaluate([embed(c) for c in coefficients], rho_l)
        if not extension.is_zero(check):
            raise InternalConsistencyError(f"Adjoined root {candidate} does not satisfy its polynomial")
        logger.debug(f"Adjoined {candidate} with shift {k}, field degree {extension.degree}")
        return FieldRoot(extension, embed, rho_l, mult, candidate)
    raise InternalConsistencyError(f"No primitive element found for {candidate} within {limit} shifts")


def _substitute_shift(extension: NumberField, lifted: MultiPoly, gamma: Element, k: int) -> Poly:
    """``h~(γ - kT, T)`` as a polynomial in T over the extension."""
    domain = extension.domain
    w = Poly.from_list([extension.rational(-k), gamma], _W, domain=domain)
    total = Poly(0, _W, domain=domain)
    by_w: Dict[int, Dict[int, Fraction]] = {}
    for (i, j), c in lifted.terms().items():
        by_w.setdefault(j, {})[i] = c
    for j, t_terms in by_w.items():
        top = max(t_terms)
        coeff = Poly.from_list(
            [extension.rational(t_terms.get(d, 0)) for d in range(top, -1, -1)], _W, domain=domain
        )
        total = total + coeff * w**j
    return total

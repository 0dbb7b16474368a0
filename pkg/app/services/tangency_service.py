"""
Tangency curves, critical sets and the constraint qualification.

Zero-dimensional systems are solved by a sheared resultant in ``x`` followed by a gcd
in ``y`` over the field of each root; positive-dimensional critical components are
sampled on vertical lines chosen between the critical ``x`` values of the component.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import get_settings
from app.core.exceptions import (
    DegenerateInputError,
    InternalConsistencyError,
    LICQFailureError,
    UnsupportedInputError,
)
from app.services.algebraic_numbers import RealAlgebraic, dedupe
from app.services.curve_branches import branches_at_infinity
from app.services.number_fields import Element, NumberField, real_roots
from app.services.poly_core import (
    X,
    Y,
    MultiPoly,
    UniPoly,
    bivariate_gcd,
    isolate_real_roots,
    resultant,
    squarefree_part,
)

logger = logging.getLogger(__name__)


class FeasibleSet(BaseModel):
    """The plane, or the real zero set of one polynomial constraint."""

    mode: Literal["plane", "curve"] = Field("plane", description="plane: S = R^2; curve: S = {g = 0}")
    constraint: Optional[MultiPoly] = Field(None, description="Constraint polynomial g in curve mode")

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def check_constraint(self) -> "FeasibleSet":
        if self.mode == "plane" and self.constraint is not None:
            raise ValueError("Plane mode takes no constraint")
        if self.mode == "curve" and self.constraint is None:
            raise ValueError("Curve mode needs a constraint")
        return self

    @classmethod
    def plane(cls) -> "FeasibleSet":
        return cls(mode="plane")

    @classmethod
    def curve(cls, g: MultiPoly) -> "FeasibleSet":
        if g.is_zero:
            raise DegenerateInputError("The constraint polynomial is zero")
        return cls(mode="curve", constraint=g)

    def describe(self) -> str:
        return "R^2" if self.mode == "plane" else f"{{{self.constraint} = 0}}"


class CriticalPoint(BaseModel):
    """An isolated real critical point with the objective's value there."""

    x: RealAlgebraic
    y: RealAlgebraic
    value: RealAlgebraic

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def box(self) -> Tuple[Tuple[str, str], Tuple[str, str]]:
        return box_of(self.x, self.y)


class CriticalData(BaseModel):
    """The finite set f(Σ) and what is known about Σ."""

    values: List[RealAlgebraic] = Field(default_factory=list, description="f(Σ), ascending, duplicate-free")
    sigma_nonempty: bool = False
    has_positive_dimensional_part: bool = False
    points: List[CriticalPoint] = Field(default_factory=list, description="Isolated critical points")

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @field_validator("values")
    @classmethod
    def distinct_values(cls, v: List[RealAlgebraic]) -> List[RealAlgebraic]:
        return dedupe(v)

    def minimum(self) -> Optional[RealAlgebraic]:
        return self.values[0] if self.values else None


@dataclass(frozen=True)
class RadialFlag:
    """The tangency polynomial vanishes identically: f is a polynomial in x^2 + y^2."""

    objective: MultiPoly


@dataclass(frozen=True, eq=False)
class _PointFamily:
    """
    Points ``(x(θ), y(θ))`` for the real conjugates θ of a field generator.

    With ``conjugates`` False only the generator itself is meant.
    """

    field: NumberField
    x: Element
    y: Element
    conjugates: bool = True

    def embeddings(self) -> List[Optional[RealAlgebraic]]:
        if self.field.is_rational_field:
            return [None]
        if not self.conjugates:
            return [self.field.generator]
        return self.field.real_embeddings()

    def points(self) -> Iterator[Tuple[RealAlgebraic, RealAlgebraic, Optional[RealAlgebraic]]]:
        for at in self.embeddings():
            yield self.field.to_real_algebraic(self.x, at), self.field.to_real_algebraic(self.y, at), at

    def values(self, f: MultiPoly) -> List[Tuple[RealAlgebraic, RealAlgebraic, RealAlgebraic]]:
        v = self.field.evaluate_bivariate(f, self.x, self.y)
        return [(px, py, self.field.to_real_algebraic(v, at)) for px, py, at in self.points()]

    def vanishes(self, p: MultiPoly) -> bool:
        return self.field.is_zero(self.field.evaluate_bivariate(p, self.x, self.y))


def box_of(x: RealAlgebraic, y: RealAlgebraic) -> Tuple[Tuple[str, str], Tuple[str, str]]:
    return (str(x.interval.lo), str(x.interval.hi)), (str(y.interval.lo), str(y.interval.hi))


def _shear_sequence(limit: int) -> Iterator[int]:
    yield 0
    for k in range(1, limit + 1):
        yield k
        yield -k


def _specialize_x(field: NumberField, p: MultiPoly, a: Element) -> List[Element]:
    """Coefficients of ``p(a, y)`` over ``field``, highest power first."""
    coeffs = [field.evaluate([field.rational(c) for c in cy.coefficients], a) for cy in p.coefficients_in_y()]
    return list(reversed(coeffs))


def _generator(field: NumberField, root: RealAlgebraic) -> Element:
    return field.rational(root.rational_value) if field.is_rational_field else field.theta


def solve_coprime(p1: MultiPoly, p2: MultiPoly) -> List[_PointFamily]:
    """
    Real common zeros of two coprime polynomials.

    Raises:
        InternalConsistencyError: If no shear puts the system in generic position.
    """
    for k in _shear_sequence(get_settings().shear_limit):
        s1, s2 = p1.shear(k), p2.shear(k)
        r = resultant(s1, s2, eliminate=Y)
        if r.is_zero:
            raise InternalConsistencyError(f"Resultant of coprime {p1} and {p2} vanishes")
        families: List[_PointFamily] = []
        generic = True
        for factor, _ in r.factors():
            if factor.degree < 1:
                continue
            roots = RealAlgebraic.roots_of(factor)
            if not roots:
                continue
            field = NumberField(roots[0])
            a = _generator(field, roots[0])
            common = field.poly(_specialize_x(field, s1, a)).gcd(field.poly(_specialize_x(field, s2, a)))
            if common.degree() <= 0:
                continue
            common = common.sqf_part()
            if common.degree() > 1:
                generic = False
                break
            c1, c0 = field.poly_coefficients(common)
            y_e = field.neg(field.div(c0, c1))
            x_e = field.add(a, field.mul(field.rational(k), y_e))
            families.append(_PointFamily(field, x_e, y_e))
        if generic:
            return families
        logger.warning(f"Shear {k} leaves {p1}, {p2} in non-generic position, retrying")
    raise InternalConsistencyError(f"No generic shear found for {p1} and {p2}")


def _content_in_y(p: MultiPoly) -> UniPoly:
    content: Optional[UniPoly] = None
    for c in p.coefficients_in_y():
        if c.is_zero:
            continue
        content = c if content is None else content.gcd(c)
    return content.primitive()


def sample_points(q: MultiPoly) -> List[_PointFamily]:
    """
    At least one real point on every connected component of ``{q = 0}``.

    Components over a cell of the critical ``x`` values are hit by a rational vertical
    line inside the cell; components sitting over a critical ``x`` value are hit by that
    value itself.
    """
    q = squarefree_part(q)
    if q.is_constant:
        return []
    samples: List[_PointFamily] = []
    content = _content_in_y(q)
    for factor, _ in content.factors():
        if factor.degree < 1:
            continue
        for root in RealAlgebraic.roots_of(factor):
            field = NumberField(root)
            samples.append(_PointFamily(field, _generator(field, root), field.zero, conjugates=False))
    prim = q.exquo(MultiPoly.from_univariate(content, X)) if content.degree >= 1 else q
    if prim.degree(Y) < 1:
        return samples
    lead = prim.coefficients_in_y()[-1]
    critical = lead * resultant(prim, prim.diff(Y), eliminate=Y)
    intervals = isolate_real_roots(critical)
    if intervals:
        abscissas = [intervals[0].lo - 1, intervals[-1].hi + 1]
        abscissas += [(left.hi + right.lo) / 2 for left, right in zip(intervals, intervals[1:])]
    else:
        abscissas = [Fraction(0)]
    for x0 in abscissas:
        for y_root in RealAlgebraic.roots_of(prim.at_x(x0)):
            field = NumberField(y_root)
            samples.append(_PointFamily(field, field.rational(x0), _generator(field, y_root), conjugates=False))
    for x_root in RealAlgebraic.roots_of(critical):
        field = NumberField(x_root)
        a = _generator(field, x_root)
        for found in real_roots(field, _specialize_x(field, prim, a)):
            samples.append(_PointFamily(found.field, found.embed(a), found.root, conjugates=False))
    return samples


def _defining_system(f: MultiPoly, S: FeasibleSet) -> Tuple[MultiPoly, MultiPoly]:
    if S.mode == "plane":
        return f.diff(X), f.diff(Y)
    g = squarefree_part(S.constraint)
    return g, f.diff(X) * g.diff(Y) - f.diff(Y) * g.diff(X)


def critical_values(f: MultiPoly, S: FeasibleSet) -> CriticalData:
    """
    Exact critical values of ``f`` on ``S``.

    Args:
        f: Objective polynomial.
        S: Feasible set; in curve mode LICQ must already hold.

    Returns:
        CriticalData with values, isolated points and the positive-dimensional flag.
    """
    p1, p2 = _defining_system(f, S)
    if p1.is_zero and p2.is_zero:
        value = RealAlgebraic.from_rational(f.constant_value)
        return CriticalData(values=[value], sigma_nonempty=True, has_positive_dimensional_part=True)
    q = bivariate_gcd(p1, p2)
    a_part = p1.exquo(q) if not p1.is_zero else p1
    b_part = p2.exquo(q) if not p2.is_zero else p2
    values: List[RealAlgebraic] = []
    points: List[CriticalPoint] = []
    if not (a_part.is_constant and not a_part.is_zero) and not (b_part.is_constant and not b_part.is_zero):
        for family in solve_coprime(a_part, b_part):
            for x, y, value in family.values(f):
                points.append(CriticalPoint(x=x, y=y, value=value))
                values.append(value)
    positive_dimensional = False
    if not q.is_constant:
        for family in sample_points(q):
            for _, _, value in family.values(f):
                positive_dimensional = True
                values.append(value)
    data = CriticalData(
        values=values,
        sigma_nonempty=bool(values),
        has_positive_dimensional_part=positive_dimensional,
        points=points,
    )
    logger.info(
        f"Critical set of {f} on {S.describe()}: {len(points)} isolated points, "
        f"{len(data.values)} distinct values, positive-dimensional part: {positive_dimensional}"
    )
    return data


def licq_witness(g: MultiPoly) -> Optional[Tuple[Tuple[str, str], Tuple[str, str]]]:
    """Isolating box of a real point where ``g`` and its gradient vanish, or None."""
    if g.is_zero:
        raise DegenerateInputError("LICQ check of the zero polynomial")
    if g.is_constant:
        return None
    repeated = bivariate_gcd(bivariate_gcd(g, g.diff(X)), g.diff(Y))
    if not repeated.is_constant:
        for family in sample_points(repeated):
            for x, y, _ in family.points():
                return box_of(x, y)
    h = squarefree_part(g)
    h_x, h_y = h.diff(X), h.diff(Y)
    if h_y.is_zero:
        candidates = [] if h_x.is_zero else solve_coprime(h, h_x)
        for family in candidates:
            for x, y, _ in family.points():
                return box_of(x, y)
        return None
    q = bivariate_gcd(h, h_y)
    a_part, b_part = h.exquo(q), h_y.exquo(q)
    if not a_part.is_constant and not b_part.is_constant:
        for family in solve_coprime(a_part, b_part):
            if family.vanishes(h_x):
                for x, y, _ in family.points():
                    return box_of(x, y)
    if not q.is_constant:
        for family in solve_coprime(q, h_x):
            for x, y, _ in family.points():
                return box_of(x, y)
    return None


def licq_check(g: MultiPoly) -> bool:
    """True iff the gradient of ``g`` vanishes at no real point of ``{g = 0}``."""
    return licq_witness(g) is None


def require_licq(g: MultiPoly) -> None:
    witness = licq_witness(g)
    if witness is not None:
        (xlo, xhi), (ylo, yhi) = witness
        logger.error(f"LICQ fails for {g} at a point in [{xlo}, {xhi}] x [{ylo}, {yhi}]")
        raise LICQFailureError(
            f"The gradient of {g} vanishes at a real point in [{xlo}, {xhi}] x [{ylo}, {yhi}]", witness
        )


def tangency_curve(f: MultiPoly, S: FeasibleSet, max_order: Optional[Fraction] = None):
    """
    The curve whose unbounded branches carry the asymptotics of ``f`` on ``S``.

    Returns:
        The square-free part of ``y*f_x - x*f_y`` (plane), ``RadialFlag`` when that is
        identically zero, or the square-free part of ``g`` (curve).

    Raises:
        UnsupportedInputError: If the constraint curve has no real point at infinity.
    """
    if S.mode == "plane":
        t = MultiPoly.y() * f.diff(X) - MultiPoly.x() * f.diff(Y)
        if t.is_zero:
            logger.info(f"Tangency polynomial of {f} vanishes identically")
            return RadialFlag(f)
        return squarefree_part(t)
    g = squarefree_part(S.constraint)
    if g.is_constant:
        raise UnsupportedInputError(f"The constraint {S.constraint} = 0 has no points")
    order = max_order if max_order is not None else Fraction(-(g.total_degree + 1))
    if not branches_at_infinity(g, order):
        raise UnsupportedInputError(f"The real curve {S.constraint} = 0 is bounded")
    return g


class RadialProfile(BaseModel):
    """``f = P(x^2 + y^2)`` and the critical data of ``f`` read off ``P``."""

    profile: UniPoly = Field(..., description="P with f = P(x^2 + y^2), in the variable s")
    critical: CriticalData

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def degree(self) -> int:
        return self.profile.degree


def radial_profile(f: MultiPoly) -> RadialProfile:
    """
    Recover ``P`` and the critical values ``P(0)`` and ``P(s)`` for ``s > 0`` with ``P'(s) = 0``.

    Raises:
        InternalConsistencyError: If ``f`` is not a polynomial in ``x^2 + y^2``.
    """
    coeffs = {}
    for (i, j), c in f.terms().items():
        if j == 0:
            if i % 2:
                raise InternalConsistencyError(f"{f} has an odd power of x and cannot be radial")
            coeffs[i // 2] = c
    top = max(coeffs, default=0)
    p = UniPoly.from_coefficients([coeffs.get(k, 0) for k in range(top, -1, -1)])
    norm_sq = MultiPoly.x() ** 2 + MultiPoly.y() ** 2
    if MultiPoly.from_univariate(p, X).substitute(norm_sq, MultiPoly.zero()) != f:
        raise InternalConsistencyError(f"{f} is flagged radial but is not a polynomial in x^2 + y^2")
    origin = RealAlgebraic.from_rational(p.evaluate(0))
    zero = RealAlgebraic.from_rational(0)
    values = [origin]
    positive_dimensional = p.degree == 0
    if p.degree >= 1:
        for s in RealAlgebraic.roots_of(p.diff()) if p.degree >= 2 else []:
            if s.sign().value <= 0:
                continue
            field = NumberField(s)
            value = field.evaluate([field.rational(c) for c in p.coefficients], _generator(field, s))
            values.append(field.to_real_algebraic(value))
            positive_dimensional = True
    critical = CriticalData(
        values=values,
        sigma_nonempty=True,
        has_positive_dimensional_part=positive_dimensional,
        points=[CriticalPoint(x=zero, y=zero, value=origin)],
    )
    logger.info(f"Radial profile P(s) = {p.with_var(X)} with {len(critical.values)} critical values")
    return RadialProfile(profile=p, critical=critical)

"""
Real branches at infinity of plane algebraic curves.

Branches are found by Newton–Puiseux expansion at infinity. A branch on which ``|x|``
grows at least as fast as ``|y|`` is parametrized by ``x = ±t`` and carries ``y`` as a
Puiseux series in ``t``; every other branch is parametrized by ``y = ±t``. Exponents are
kept as rationals, so a ramified branch simply has fractional exponents and ``t > 0``
throughout.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb, lcm
from typing import Dict, List, Optional, Tuple

import mpmath
import sympy
from pydantic import BaseModel, ConfigDict, Field

from app.core.exceptions import (
    BranchCollisionError,
    DegenerateInputError,
    PreconditionError,
    TruncationExhaustedError,
)
from app.services.algebraic_numbers import ExtendedValue, RealAlgebraic, Sign
from app.services.number_fields import Element, NumberField, real_roots
from app.services.poly_core import (
    X,
    Y,
    Z,
    MultiPoly,
    UniPoly,
    bivariate_gcd,
    format_fraction,
)

logger = logging.getLogger(__name__)

ORIENTATIONS = ("x", "y")
DEEPEN_ATTEMPTS = 4

PathStep = Tuple[Optional[Fraction], int]


class ShallowExpansionError(TruncationExhaustedError):
    """The objective series has no usable term above its truncation order."""


def _format_exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({format_fraction(e)})"


def _format_series(terms: List[Tuple[Fraction, str, bool]], truncation: Optional[Fraction]) -> str:
    """Render ``[(exponent, |coefficient| text, negative)]`` as ``-t + 1/2*t^-1 + O(t^-3)``."""
    parts: List[str] = []
    for exp, magnitude, negative in terms:
        if exp == 0:
            body = magnitude
        else:
            power = "t" if exp == 1 else f"t^{_format_exponent(exp)}"
            body = power if magnitude == "1" else f"{magnitude}*{power}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    if truncation is not None:
        tail = f"O(t^{_format_exponent(truncation)})"
        parts.append(f" + {tail}" if parts else tail)
    return "".join(parts) or "0"


@dataclass(frozen=True, eq=False)
class PuiseuxSeries:
    """
    Series ``sum c_i t^(e_i)`` with strictly decreasing rational exponents, t -> +inf.

    ``truncation`` is None for an exact (finite) series; otherwise the series is only
    known up to ``O(t^truncation)`` and every listed exponent lies above it.
    """

    field: NumberField
    terms: Tuple[Tuple[Fraction, Element], ...]
    truncation: Optional[Fraction]

    @property
    def is_exact(self) -> bool:
        return self.truncation is None

    @property
    def ramification(self) -> int:
        return lcm(1, *[e.denominator for e, _ in self.terms])

    @property
    def leading_exponent(self) -> Optional[Fraction]:
        return self.terms[0][0] if self.terms else None

    @property
    def leading_coefficient(self) -> Optional[Element]:
        return self.terms[0][1] if self.terms else None

    def coefficient(self, exponent: Fraction) -> Optional[Element]:
        for e, c in self.terms:
            if e == exponent:
                return c
        return None

    @cached_property
    def coefficient_values(self) -> List[RealAlgebraic]:
        """Exact real values of the coefficients, in term order."""
        return [self.field.to_real_algebraic(c) for _, c in self.terms]

    def evaluate(self, t: float) -> float:
        return float(sum(self.field.to_float(c) * t ** float(e) for e, c in self.terms))

    def exponents(self) -> List[Fraction]:
        return [e for e, _ in self.terms]

    def __str__(self) -> str:
        rendered = []
        for e, c in self.terms:
            value = self.field.as_rational(c)
            if value is not None:
                rendered.append((e, format_fraction(abs(value)), value < 0))
            else:
                approx = self.field.to_float(c)
                rendered.append((e, f"{abs(approx):.10g}", approx < 0))
        return _format_series(rendered, self.truncation)


class _Series:
    """Truncated series arithmetic used for substitution into polynomials."""

    __slots__ = ("field", "terms", "truncation")

    def __init__(self, field: NumberField, terms: Dict[Fraction, Element], truncation: Optional[Fraction]):
        self.field = field
        self.truncation = truncation
        self.terms = {
            e: c
            for e, c in terms.items()
            if not field.is_zero(c) and (truncation is None or e > truncation)
        }

    @classmethod
    def from_puiseux(cls, series: PuiseuxSeries) -> "_Series":
        return cls(series.field, dict(series.terms), series.truncation)

    @classmethod
    def monomial(cls, field: NumberField, exponent: Fraction, coefficient: Element) -> "_Series":
        return cls(field, {exponent: coefficient}, None)

    @property
    def is_exact_zero(self) -> bool:
        return not self.terms and self.truncation is None

    def magnitude(self) -> Optional[Fraction]:
        if self.terms:
            return max(self.terms)
        return self.truncation

    def __add__(self, other: "_Series") -> "_Series":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = self.field.add(terms[e], c) if e in terms else c
        bounds = [t for t in (self.truncation, other.truncation) if t is not None]
        return _Series(self.field, terms, max(bounds) if bounds else None)

    def __mul__(self, other: "_Series") -> "_Series":
        if self.is_exact_zero or other.is_exact_zero:
            return _Series(self.field, {}, None)
        terms: Dict[Fraction, Element] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                product = self.field.mul(c1, c2)
                terms[e] = self.field.add(terms[e], product) if e in terms else product
        bounds = []
        if self.truncation is not None:
            bounds.append(other.magnitude() + self.truncation)
        if other.truncation is not None:
            bounds.append(self.magnitude() + other.truncation)
        return _Series(self.field, terms, max(bounds) if bounds else None)

    def scale(self, factor: Element) -> "_Series":
        if self.field.is_zero(factor):
            return _Series(self.field, {}, None)
        return _Series(self.field, {e: self.field.mul(c, factor) for e, c in self.terms.items()}, self.truncation)

    def to_puiseux(self) -> PuiseuxSeries:
        ordered = tuple(sorted(self.terms.items(), key=lambda item: item[0], reverse=True))
        return PuiseuxSeries(self.field, ordered, self.truncation)


def substitute_series(field: NumberField, p: MultiPoly, x: _Series, y: _Series) -> _Series:
    """``p(x(t), y(t))`` as a truncated series."""
    x_powers: Dict[int, _Series] = {0: _Series.monomial(field, Fraction(0), field.one)}
    y_powers: Dict[int, _Series] = {0: _Series.monomial(field, Fraction(0), field.one)}

    def power(cache: Dict[int, _Series], base: _Series, n: int) -> _Series:
        if n not in cache:
            cache[n] = power(cache, base, n - 1) * base
        return cache[n]

    total = _Series(field, {}, None)
    for (i, j), c in p.terms().items():
        term = (power(x_powers, x, i) * power(y_powers, y, j)).scale(field.rational(c))
        total = total + term
    return total


@dataclass(frozen=True, eq=False)
class BranchAtInfinity:
    """
    One real unbounded arc of a curve.

    ``orientation`` names the parameter coordinate (``x = sign*t`` or ``y = sign*t``);
    ``coordinate`` is the other coordinate as a series in ``t``. The norm of the point
    grows like ``kappa * t^d``.
    """

    curve: MultiPoly
    orientation: str
    sign: int
    coordinate: PuiseuxSeries
    path: Tuple[PathStep, ...]
    d: Fraction
    kappa: RealAlgebraic
    label: str = ""
    objective_series: Optional[PuiseuxSeries] = None

    @property
    def field(self) -> NumberField:
        return self.coordinate.field

    def parameter_series(self) -> _Series:
        return _Series.monomial(self.field, Fraction(1), self.field.rational(self.sign))

    def xy_series(self) -> Tuple[_Series, _Series]:
        other = _Series.from_puiseux(self.coordinate)
        if self.orientation == "x":
            return self.parameter_series(), other
        return other, self.parameter_series()

    def point_at(self, t: float) -> Tuple[float, float]:
        """Point of the truncated parametrization at parameter ``t``."""
        other = self.coordinate.evaluate(t)
        if self.orientation == "x":
            return self.sign * t, other
        return other, self.sign * t

    def deepen(self, target: Fraction) -> "BranchAtInfinity":
        """Re-expand this branch so its coordinate series reaches ``target``."""
        if self.coordinate.is_exact or self.coordinate.truncation <= target:
            return self
        found = _expand_orientation(self.curve, self.orientation, self.sign, target, self.path)
        if len(found) != 1:
            raise TruncationExhaustedError(
                f"Re-expansion of branch {self.label} produced {len(found)} branches", [self.label]
            )
        deeper = _make_branch(self.curve, self.orientation, self.sign, found[0])
        logger.debug(f"Deepened {self.label} to order {target}")
        return replace(deeper, objective_series=None)


class BranchAsymptotics(BaseModel):
    """Leading behavior of the objective along one branch, in the norm scale."""

    index: int = Field(..., description="Position of the branch in the report")
    label: str = Field(..., description="Human-readable parametrization")
    alpha: Fraction = Field(..., description="Leading exponent in the norm scale; 0 for constant branches")
    a: RealAlgebraic = Field(..., description="Leading coefficient in the parameter scale")
    a_sign: Sign
    a_norm_numeric: float = Field(..., description="Leading coefficient in the norm scale, approximate")
    a_norm_lower: Fraction = Field(..., description="Rigorous rational lower bound of |a| in the norm scale")
    limit: ExtendedValue = Field(..., description="Limit of the objective along the branch")
    is_constant: bool
    approach_exponent: Optional[Fraction] = Field(
        None, description="Norm-scale exponent of the first term of f - limit, finite limits only"
    )
    approach_sign: Optional[int] = None
    series: str = Field("", description="Objective series in the branch parameter")

    model_config = ConfigDict(arbitrary_types_allowed=True)


@dataclass
class _State:
    field: NumberField
    poly: Dict[Tuple[Fraction, int], Element]
    terms: List[Tuple[Fraction, Element]]
    base: Fraction
    path: Tuple[PathStep, ...]


@dataclass
class _Found:
    field: NumberField
    terms: List[Tuple[Fraction, Element]]
    truncation: Optional[Fraction]
    path: Tuple[PathStep, ...]


def _initial_poly(curve: MultiPoly, orientation: str, sign: int) -> Dict[Tuple[Fraction, int], Element]:
    """``C(sign*t, w)`` (or the swapped curve) as ``{(t-exponent, w-degree): coefficient}``."""
    source = curve if orientation == "x" else curve.swap()
    field = NumberField.rationals()
    return {
        (Fraction(i), j): field.rational(c * (sign**i))
        for (i, j), c in source.terms().items()
    }


def _edges(poly: Dict[Tuple[Fraction, int], Element], upper: Fraction, inclusive: bool):
    """Newton polygon edges ``(mu, top, points)`` with ``mu < upper`` (or ``<=``), steepest first."""
    points = list(poly)
    candidates = set()
    for (i1, k1), (i2, k2) in combinations(points, 2):
        if k1 != k2:
            mu = Fraction(i1 - i2) / (k2 - k1)
            if mu < upper or (inclusive and mu == upper):
                candidates.add(mu)
    edges = []
    for mu in sorted(candidates, reverse=True):
        top = max(i + mu * k for i, k in points)
        on = [(i, k) for i, k in points if i + mu * k == top]
        if len({k for _, k in on}) >= 2:
            edges.append((mu, top, on))
    return edges


def _substitute(field: NumberField, poly, mu: Fraction, c: Element, top: Fraction):
    """``t^(-top) * Q(t, t^mu * (c + w))``."""
    out: Dict[Tuple[Fraction, int], Element] = {}
    c_powers = [field.one]
    for (i, k), a in poly.items():
        while len(c_powers) <= k:
            c_powers.append(field.mul(c_powers[-1], c))
        base = i + mu * k - top
        for l in range(k + 1):
            coeff = field.mul(a, field.mul(field.rational(comb(k, l)), c_powers[k - l]))
            key = (base, l)
            out[key] = field.add(out[key], coeff) if key in out else coeff
    return {key: v for key, v in out.items() if not field.is_zero(v)}


def _prefix_label(field: NumberField, terms: List[Tuple[Fraction, Element]]) -> str:
    return str(PuiseuxSeries(field, tuple(terms), None)) if terms else "0"


def _simple_tail(state: _State, target: Fraction) -> _Found:
    """Finish a branch whose last coefficient was a simple root: one term per step."""
    field, poly, terms, base = state.field, dict(state.poly), list(state.terms), state.base
    truncated = False
    while True:
        relative = target - base
        kept = {key: v for key, v in poly.items() if key[0] >= relative}
        if len(kept) != len(poly):
            truncated = True
            poly = kept
        row0 = [i for i, k in poly if k == 0]
        if not row0:
            return _Found(field, terms, target if truncated else None, state.path)
        k0 = max(row0)
        if k0 < relative:
            return _Found(field, terms, target if truncated else base + k0, state.path)
        c = field.neg(field.div(poly[(k0, 0)], poly[(Fraction(0), 1)]))
        base = base + k0
        terms.append((base, c))
        poly = _substitute(field, poly, k0, c, k0)


def _expand(state: _State, target: Fraction, first: bool, inclusive: bool, path_filter) -> List[_Found]:
    found: List[_Found] = []
    poly = state.poly
    depth = len(state.path)
    choice = path_filter[depth] if path_filter is not None and depth < len(path_filter) else None
    if poly and not any(k == 0 for _, k in poly):
        if choice is None or choice[0] is None:
            found.append(_Found(state.field, list(state.terms), None, state.path + ((None, 0),)))
        poly = {(i, k - 1): a for (i, k), a in poly.items()}
    if choice is not None and choice[0] is None:
        return found
    upper = Fraction(1) if first else Fraction(0)
    for mu, top, on in _edges(poly, upper, inclusive=first and inclusive):
        if choice is not None and choice[0] != mu:
            continue
        ks = [k for _, k in on]
        kmin, kmax = min(ks), max(ks)
        characteristic = [state.field.zero] * (kmax - kmin + 1)
        for i, k in on:
            characteristic[kmax - k] = poly[(i, k)]
        logger.debug(f"Edge mu={mu} with {len(on)} points, characteristic degree {kmax - kmin}")
        for ordinal, root in enumerate(real_roots(state.field, characteristic)):
            if choice is not None and choice[1] != ordinal:
                continue
            lifted = {key: root.embed(a) for key, a in poly.items()}
            terms = [(e, root.embed(c)) for e, c in state.terms]
            absolute = state.base + mu
            terms.append((absolute, root.root))
            child = _State(
                root.field,
                _substitute(root.field, lifted, mu, root.root, top),
                terms,
                absolute,
                state.path + ((mu, ordinal),),
            )
            if root.multiplicity == 1:
                found.append(_simple_tail(child, target))
                continue
            if absolute <= target:
                prefix = _prefix_label(root.field, terms)
                raise BranchCollisionError(
                    f"Branches sharing the expansion {prefix} did not separate above order {target}",
                    [prefix],
                )
            found.extend(_expand(child, target, False, False, path_filter))
    return found


def _expand_orientation(curve: MultiPoly, orientation: str, sign: int, target: Fraction, path_filter=None):
    state = _State(NumberField.rationals(), _initial_poly(curve, orientation, sign), [], Fraction(0), ())
    return _expand(state, target, True, orientation == "x", path_filter)


def _sqrt_one_plus_square(field: NumberField, c: Element) -> RealAlgebraic:
    """``sqrt(1 + c^2)`` exactly."""
    v = field.add(field.one, field.mul(c, c))
    value = field.as_rational(v)
    if value is not None:
        defining = UniPoly.from_coefficients([value.denominator, 0, -value.numerator])
    else:
        defining = field.charpoly(v).compose(UniPoly.from_coefficients([1, 0, 0]))
    with mpmath.workdps(60):
        return RealAlgebraic.locate(defining, mpmath.sqrt(field.to_mpf(v)))


def norm_growth(series: PuiseuxSeries) -> Tuple[Fraction, RealAlgebraic]:
    """
    Exponent ``d`` and constant ``kappa`` with ``|(t, series(t))| ~ kappa * t^d``.
    """
    q0 = series.leading_exponent
    if q0 is None or q0 < 1:
        return Fraction(1), RealAlgebraic.from_rational(1)
    c = series.leading_coefficient
    if q0 == 1:
        return Fraction(1), _sqrt_one_plus_square(series.field, c)
    value = series.field.to_real_algebraic(c)
    return q0, value if value.sign() is Sign.POSITIVE else -value


def _make_branch(curve: MultiPoly, orientation: str, sign: int, found: _Found) -> BranchAtInfinity:
    coordinate = PuiseuxSeries(
        found.field, tuple(sorted(found.terms, key=lambda item: item[0], reverse=True)), found.truncation
    )
    d, kappa = norm_growth(coordinate)
    other = "y" if orientation == "x" else "x"
    label = f"{orientation}={'+' if sign > 0 else '-'}t, {other}={_short(coordinate)}"
    return BranchAtInfinity(curve, orientation, sign, coordinate, found.path, d, kappa, label)


def _short(series: PuiseuxSeries, keep: int = 3) -> str:
    head = PuiseuxSeries(series.field, series.terms[:keep], None)
    text = str(head)
    if len(series.terms) > keep or not series.is_exact:
        text += " + ..."
    return text


def _check_squarefree(curve: MultiPoly) -> None:
    g = bivariate_gcd(bivariate_gcd(curve, curve.diff(X)), curve.diff(Y))
    if not g.is_constant:
        raise PreconditionError(f"Curve {curve} is not square-free (repeated factor {g.normalized()})")


def branches_at_infinity(curve: MultiPoly, max_order: Fraction) -> List[BranchAtInfinity]:
    """
    Enumerate the real branches at infinity of a square-free curve.

    Args:
        curve: Nonzero square-free polynomial.
        max_order: Negative order each coordinate series is expanded to.

    Returns:
        Branches, x-parametrized first, each real arc exactly once.

    Raises:
        DegenerateInputError: If the curve is zero.
        PreconditionError: If the curve has a repeated factor.
        BranchCollisionError: If branches still coincide at ``max_order``.
    """
    if curve.is_zero:
        raise DegenerateInputError("Branches of the zero polynomial")
    if curve.is_constant:
        return []
    _check_squarefree(curve)
    branches: List[BranchAtInfinity] = []
    for orientation in ORIENTATIONS:
        for sign in (1, -1):
            for found in _expand_orientation(curve, orientation, sign, Fraction(max_order)):
                branches.append(_make_branch(curve, orientation, sign, found))
    logger.info(f"Curve {curve}: {len(branches)} real branches at infinity")
    return branches


def _compose(f: MultiPoly, branch: BranchAtInfinity) -> PuiseuxSeries:
    x, y = branch.xy_series()
    return substitute_series(branch.field, f, x, y).to_puiseux()


def compose_and_deepen(f: MultiPoly, branch: BranchAtInfinity, max_order: Fraction) -> BranchAtInfinity:
    """Copy of ``branch`` whose objective series is determined down to ``max_order``."""
    current = branch
    for _ in range(DEEPEN_ATTEMPTS):
        series = _compose(f, current)
        if series.is_exact or series.truncation <= max_order:
            return replace(current, objective_series=series)
        deficit = series.truncation - max_order
        current = current.deepen(current.coordinate.truncation - deficit)
    raise TruncationExhaustedError(
        f"Objective series on {branch.label} not determined to order {max_order}", [branch.label]
    )


def compose_objective(f: MultiPoly, branch: BranchAtInfinity, max_order: Fraction) -> PuiseuxSeries:
    """Puiseux series of ``f`` along the branch, correct down to ``max_order``."""
    return compose_and_deepen(f, branch, Fraction(max_order)).objective_series


def curve_residual(branch: BranchAtInfinity) -> PuiseuxSeries:
    """The curve polynomial evaluated along the branch; its known terms must all vanish."""
    return _compose(branch.curve, branch)


def constancy_bound(curve: MultiPoly, f: MultiPoly) -> Fraction:
    """Order below which a non-constant objective series must show a term."""
    return Fraction(-(max(curve.total_degree, 1) * max(f.total_degree, 1) + 1))


def _value_resultant(curve: MultiPoly, f: MultiPoly) -> MultiPoly:
    """``Res_y(curve, z - f)`` with ``z`` stored in the ``y`` slot."""
    c_poly = sympy.Poly(curve.expr, Y, X, Z, domain="QQ")
    g_poly = sympy.Poly(Z - f.expr, Y, X, Z, domain="QQ")
    res = c_poly.resultant(g_poly)
    expr = res.as_expr() if isinstance(res, sympy.Poly) else res
    return MultiPoly.from_expr(sympy.sympify(expr).subs(Z, Y))


def passes_through(p: MultiPoly, branch: BranchAtInfinity) -> bool:
    """Whether every known term of ``p`` composed with the branch vanishes."""
    residual = _compose(p, branch)
    return all(branch.field.is_zero(c) for _, c in residual.terms)


def is_constant_on_branch(curve_sqfree: MultiPoly, f: MultiPoly, branch: BranchAtInfinity) -> Optional[RealAlgebraic]:
    """
    The constant value of ``f`` on the branch, or None when ``f`` varies along it.

    The series must show no non-constant term down to the degree bound, and the
    candidate value ``c`` must pass an exact test: ``gcd(curve, f - c)`` has a factor
    vanishing along the branch (rational ``c``) or ``Res_y(curve, z - f)`` vanishes
    identically at ``z = c`` (algebraic ``c``). Vanishing along the branch is read off
    the composed series, so it holds down to the branch's truncation.
    """
    bound = constancy_bound(curve_sqfree, f)
    if branch.objective_series is None or (
        not branch.objective_series.is_exact and branch.objective_series.truncation > bound
    ):
        branch = compose_and_deepen(f, branch, bound)
    series = branch.objective_series
    if any(e != 0 for e in series.exponents()):
        return None
    field = series.field
    c = series.coefficient(Fraction(0))
    if c is None:
        c = field.zero
    value = field.as_rational(c)
    if value is not None:
        common = bivariate_gcd(curve_sqfree, f - value)
        if common.is_constant or not passes_through(common, branch):
            return None
        return RealAlgebraic.from_rational(value)
    curve_o, f_o = (curve_sqfree, f) if branch.orientation == "x" else (curve_sqfree.swap(), f.swap())
    m = _value_resultant(curve_o, f_o)
    by_x: Dict[int, Element] = {}
    for (i, j), coeff in m.terms().items():
        term = field.mul(field.rational(coeff), field.power(c, j))
        by_x[i] = field.add(by_x[i], term) if i in by_x else term
    if all(field.is_zero(v) for v in by_x.values()):
        return field.to_real_algebraic(c)
    return None


def _rational_power_lower_bound(kappa: RealAlgebraic, exponent: Fraction) -> Fraction:
    """Rational ``r > 0`` with ``r <= kappa^exponent``."""
    if exponent == 0:
        return Fraction(1)
    refined = kappa.refine(Fraction(1, 10**6)).interval
    lo, hi = refined.lo, refined.hi
    p, q = exponent.numerator, exponent.denominator
    guess = Fraction(float(kappa.to_float()) ** float(exponent)).limit_denominator(10**6)
    r = max(guess, Fraction(1, 10**9))
    if p > 0:
        while r**q > lo**p:
            r = r * Fraction(99, 100)
    else:
        while r**q * hi ** (-p) > 1:
            r = r * Fraction(99, 100)
    return r


def _abs_lower_bound(value: RealAlgebraic) -> Fraction:
    if value.is_rational:
        return abs(value.rational_value)
    interval = value.interval
    while interval.lo <= 0 <= interval.hi:
        interval = value.refine(interval.width / 2).interval
    refined = value.refine(abs(interval.lo if interval.lo > 0 else interval.hi) / 4).interval
    return min(abs(refined.lo), abs(refined.hi))


def to_norm_asymptotics(
    branch: BranchAtInfinity,
    objective_series: PuiseuxSeries,
    constancy: Optional[RealAlgebraic],
    index: int = 0,
) -> BranchAsymptotics:
    """
    Rewrite the objective series in the norm scale and read off ``(alpha, a, limit)``.

    Raises:
        ShallowExpansionError: If a needed term lies below the series' truncation.
    """
    series_text = str(objective_series)
    if constancy is not None:
        return BranchAsymptotics(
            index=index,
            label=branch.label,
            alpha=Fraction(0),
            a=constancy,
            a_sign=constancy.sign(),
            a_norm_numeric=constancy.to_float(),
            a_norm_lower=_abs_lower_bound(constancy) if constancy.sign() is not Sign.ZERO else Fraction(0),
            limit=ExtendedValue.finite(constancy),
            is_constant=True,
            series=series_text,
        )
    if not objective_series.terms:
        raise ShallowExpansionError(f"No leading term of f along {branch.label}", [branch.label])
    field = objective_series.field
    lead_exp, lead_coeff = objective_series.terms[0]
    a = field.to_real_algebraic(lead_coeff)
    alpha = lead_exp / branch.d
    a_sign = a.sign()
    a_norm = a.to_float() * branch.kappa.to_float() ** (-float(alpha))
    a_norm_lower = _abs_lower_bound(a) * _rational_power_lower_bound(branch.kappa, -alpha)
    approach_exponent: Optional[Fraction] = None
    approach_sign: Optional[int] = None
    if lead_exp > 0:
        limit = ExtendedValue.pos_inf() if a_sign is Sign.POSITIVE else ExtendedValue.neg_inf()
    elif lead_exp == 0:
        limit = ExtendedValue.finite(a)
        if len(objective_series.terms) < 2:
            raise ShallowExpansionError(f"Approach to the limit along {branch.label} not resolved", [branch.label])
        next_exp, next_coeff = objective_series.terms[1]
        approach_exponent = next_exp / branch.d
        approach_sign = field.sign(next_coeff)
    else:
        limit = ExtendedValue.finite(0)
        approach_exponent = alpha
        approach_sign = a_sign.value
    return BranchAsymptotics(
        index=index,
        label=branch.label,
        alpha=alpha,
        a=a,
        a_sign=a_sign,
        a_norm_numeric=a_norm,
        a_norm_lower=a_norm_lower,
        limit=limit,
        is_constant=False,
        approach_exponent=approach_exponent,
        approach_sign=approach_sign,
        series=series_text,
    )

"""
Verdicts of the tangency-variety analysis.

``analyze`` runs the pipeline tangency curve -> branches at infinity -> objective
asymptotics -> critical values and combines the results into an ``AnalysisReport``.
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from app.core.config import get_settings
from app.core.exceptions import (
    InternalConsistencyError,
    PreconditionError,
    TruncationExhaustedError,
)
from app.services.algebraic_numbers import (
    Comparison,
    ExtendedValue,
    RealAlgebraic,
    Sign,
    dedupe,
    min_of_set,
)
from app.services.curve_branches import (
    BranchAsymptotics,
    BranchAtInfinity,
    branches_at_infinity,
    compose_and_deepen,
    constancy_bound,
    is_constant_on_branch,
    to_norm_asymptotics,
)
from app.services.poly_core import MultiPoly, UniPoly, format_fraction
from app.services.tangency_service import (
    CriticalData,
    FeasibleSet,
    RadialFlag,
    critical_values,
    radial_profile,
    require_licq,
    tangency_curve,
)

logger = logging.getLogger(__name__)

Level = Union[int, Fraction, RealAlgebraic]


class AnalysisConfig(BaseModel):
    """Per-call overrides of the settings."""

    max_order: Optional[int] = Field(None, description="Truncation order; the sign is ignored, the order is -|N|")
    escalation_cap: Optional[int] = Field(None, ge=0)
    precision: Optional[int] = Field(None, ge=1, le=100)

    def resolved_cap(self) -> int:
        return self.escalation_cap if self.escalation_cap is not None else get_settings().escalation_cap

    def resolved_precision(self) -> int:
        return self.precision if self.precision is not None else get_settings().precision

    def resolved_order(self) -> Optional[Fraction]:
        order = self.max_order if self.max_order is not None else get_settings().max_order
        if order is None:
            return None
        return Fraction(-abs(order)) if order != 0 else Fraction(-1)


class SublevelVerdict(str, Enum):
    COMPACT = "Compact"
    UNBOUNDED = "Unbounded"


class StabilityKind(str, Enum):
    BOUNDEDNESS = "boundedness"
    COERCIVITY = "coercivity"


class StabilityVerdict(BaseModel):
    """
    Stability of a property of ``f`` under perturbations ``|g(x)| <= epsilon*|x|^alpha``.

    ``threshold`` None with a Stable verdict means every epsilon works.
    """

    kind: StabilityKind
    verdict: Literal["Stable", "UnstableWitness", "Indeterminate"]
    epsilon: Fraction
    alpha: Fraction
    alpha_star: Optional[Fraction] = None
    threshold: Optional[Fraction] = None
    beta: Optional[Fraction] = Field(None, description="Witness exponent of g(x) = -epsilon*|x|^beta")
    branch: Optional[str] = Field(None, description="Branch along which f + g decreases to -inf")
    note: str = ""

    def witness(self) -> Optional[str]:
        if self.beta is None:
            return None
        return f"g(x) = -{self.epsilon}*|x|^({self.beta})"


class AnalysisReport(BaseModel):
    """Everything the engine decides about ``f`` on ``S``."""

    objective: MultiPoly
    feasible_set: FeasibleSet
    tangency: Optional[MultiPoly] = Field(None, description="Square-free tangency curve; None for radial input")
    radial_profile: Optional[UniPoly] = Field(None, description="P with f = P(x^2 + y^2) for radial input")
    branches: List[BranchAsymptotics] = Field(default_factory=list)
    branch_data: List[BranchAtInfinity] = Field(default_factory=list, exclude=True)
    nonconstant_indices: List[int] = Field(default_factory=list, description="K: branches where f varies")
    t_infinity: List[RealAlgebraic] = Field(default_factory=list)
    critical: CriticalData
    bounded_below: bool
    bounded_above: bool
    infimum: ExtendedValue
    attained: bool
    argmin_nonempty_compact: bool
    lambda_star: ExtendedValue
    coercive: bool
    alpha_star: Optional[Fraction] = None
    max_order: Optional[Fraction] = None
    escalations: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def sublevel(self, level: Level) -> SublevelVerdict:
        return sublevel_compactness(self, level)

    def stability(self, epsilon: Fraction, alpha: Fraction, kind: StabilityKind = StabilityKind.BOUNDEDNESS):
        return stability_report(self, epsilon, alpha, kind)


def _branch_asymptotics(curve: MultiPoly, f: MultiPoly, branch: BranchAtInfinity, order: Fraction, index: int):
    expanded = compose_and_deepen(f, branch, order)
    constancy = is_constant_on_branch(curve, f, expanded)
    return expanded, to_norm_asymptotics(expanded, expanded.objective_series, constancy, index)


def _expand_all(curve: MultiPoly, f: MultiPoly, order: Fraction, cap: int):
    escalations: List[str] = []
    for attempt in range(cap + 1):
        try:
            expanded, asymptotics = [], []
            for index, branch in enumerate(branches_at_infinity(curve, order)):
                b, a = _branch_asymptotics(curve, f, branch, order, index)
                expanded.append(b)
                asymptotics.append(a)
            return expanded, asymptotics, order, escalations
        except TruncationExhaustedError as e:
            if attempt == cap:
                logger.error(f"Truncation exhausted at order {order} after {cap} escalations: {e.message}")
                raise TruncationExhaustedError(
                    f"{e.message} (order {order}, {cap} escalations)", e.prefix
                ) from e
            escalations.append(f"order {order}: {e.message}")
            logger.warning(f"Escalating truncation order {order} -> {order * 2}: {e.message}")
            order *= 2
    raise InternalConsistencyError("Escalation loop fell through")


def _min_limit(asymptotics: List[BranchAsymptotics]) -> ExtendedValue:
    return min_of_set(a.limit for a in asymptotics)


def _assemble(
    f: MultiPoly,
    S: FeasibleSet,
    asymptotics: List[BranchAsymptotics],
    critical: CriticalData,
    **extra,
) -> AnalysisReport:
    nonconstant = [a for a in asymptotics if not a.is_constant]
    constant = [a for a in asymptotics if a.is_constant]
    lambda_star = _min_limit(asymptotics)
    t_infinity = dedupe(a.limit.value for a in asymptotics if a.limit.is_finite)
    bounded_below = not lambda_star.is_neg_inf
    bounded_above = not any(a.limit.is_pos_inf for a in asymptotics)

    crit_min = critical.minimum()
    if bounded_below:
        infimum = min_of_set(
            [ExtendedValue.finite(v) for v in critical.values] + [ExtendedValue.finite(v) for v in t_infinity]
        )
        if infimum.is_pos_inf:
            raise InternalConsistencyError(f"{f} is bounded below on {S.describe()} with no candidate infimum")
    else:
        infimum = ExtendedValue.neg_inf()

    attained = False
    argmin_compact = False
    if critical.sigma_nonempty and crit_min is not None:
        crit = ExtendedValue.finite(crit_min)
        attained = crit.compare(_min_limit(nonconstant)) is not Comparison.GREATER
        argmin_compact = attained and crit.compare(_min_limit(constant)) is Comparison.LESS
    if attained and not bounded_below:
        raise InternalConsistencyError(f"Infimum of {f} attained although unbounded below")

    all_growing = all(not a.is_constant and a.alpha > 0 and a.a_sign is Sign.POSITIVE for a in asymptotics)
    infinite_level = lambda_star.is_pos_inf
    no_finite_limits = bounded_below and not t_infinity
    if not (all_growing == infinite_level == no_finite_limits):
        logger.error(
            f"Coercivity conditions disagree for {f}: branches {all_growing}, "
            f"level {infinite_level}, limits {no_finite_limits}"
        )
        raise InternalConsistencyError(
            f"Coercivity criteria disagree for {f}: {all_growing}, {infinite_level}, {no_finite_limits}"
        )

    alpha_star = min((a.alpha for a in asymptotics), default=None)
    report = AnalysisReport(
        objective=f,
        feasible_set=S,
        branches=asymptotics,
        nonconstant_indices=[a.index for a in nonconstant],
        t_infinity=t_infinity,
        critical=critical,
        bounded_below=bounded_below,
        bounded_above=bounded_above,
        infimum=infimum,
        attained=attained,
        argmin_nonempty_compact=argmin_compact,
        lambda_star=lambda_star,
        coercive=infinite_level,
        alpha_star=alpha_star,
        **extra,
    )
    logger.info(
        f"Analysis of {f}: bounded below {bounded_below}, infimum {infimum}, attained {attained}, "
        f"lambda* {lambda_star}, coercive {infinite_level}"
    )
    return report


def analyze(f: MultiPoly, S: Optional[FeasibleSet] = None, config: Optional[AnalysisConfig] = None) -> AnalysisReport:
    """
    Classify ``f`` on ``S``.

    Args:
        f: Objective polynomial.
        S: Feasible set, the plane by default.
        config: Per-call overrides of the settings.

    Returns:
        AnalysisReport with every verdict populated.

    Raises:
        LICQFailureError: Constraint gradient vanishes on the curve.
        UnsupportedInputError: Bounded or empty constraint curve.
        TruncationExhaustedError: Branches still ambiguous after the escalation cap.
    """
    S = S or FeasibleSet.plane()
    config = config or AnalysisConfig()
    if S.mode == "curve":
        require_licq(S.constraint)
    curve = tangency_curve(f, S, config.resolved_order())
    if isinstance(curve, RadialFlag):
        return analyze_radial(f)
    order = config.resolved_order() or constancy_bound(curve, f)
    logger.info(f"Tangency curve {curve}, truncation order {order}")
    expanded, asymptotics, used, escalations = _expand_all(curve, f, order, config.resolved_cap())
    critical = critical_values(f, S)
    notes = [f"{len(asymptotics)} branches at infinity; components of the tangency curve outside a large disk may be fewer"]
    if S.mode == "curve":
        notes.append("In the plane the tangency variety on a curve is the curve itself; every branch of g is used")
    return _assemble(
        f,
        S,
        asymptotics,
        critical,
        tangency=curve,
        branch_data=expanded,
        max_order=used,
        escalations=escalations,
        notes=notes,
    )


def _radial_branch(p: UniPoly) -> BranchAsymptotics:
    lead = RealAlgebraic.from_rational(p.leading_coefficient)
    series = " + ".join(
        f"{format_fraction(c)}*t^{2 * (p.degree - i)}" for i, c in enumerate(p.coefficients) if c != 0
    )
    if p.degree == 0:
        return BranchAsymptotics(
            index=0,
            label="all rays",
            alpha=Fraction(0),
            a=lead,
            a_sign=lead.sign(),
            a_norm_numeric=float(p.leading_coefficient),
            a_norm_lower=abs(p.leading_coefficient),
            limit=ExtendedValue.finite(lead),
            is_constant=True,
            series=series,
        )
    return BranchAsymptotics(
        index=0,
        label="all rays",
        alpha=Fraction(2 * p.degree),
        a=lead,
        a_sign=lead.sign(),
        a_norm_numeric=float(p.leading_coefficient),
        a_norm_lower=abs(p.leading_coefficient),
        limit=ExtendedValue.pos_inf() if p.leading_coefficient > 0 else ExtendedValue.neg_inf(),
        is_constant=False,
        series=series,
    )


def analyze_radial(f: MultiPoly) -> AnalysisReport:
    """Classify ``f = P(x^2 + y^2)``; all rays behave alike and form one synthetic branch."""
    profile = radial_profile(f)
    return _assemble(
        f,
        FeasibleSet.plane(),
        [_radial_branch(profile.profile)],
        profile.critical,
        radial_profile=profile.profile,
        notes=["The tangency polynomial vanishes identically; f depends on x^2 + y^2 only"],
    )


def _as_value(level: Level) -> RealAlgebraic:
    return level if isinstance(level, RealAlgebraic) else RealAlgebraic.from_rational(level)


def sublevel_compactness(report: AnalysisReport, level: Level) -> SublevelVerdict:
    """
    Compactness of ``{x in S : f(x) <= level}``.

    Raises:
        PreconditionError: If ``f`` is unbounded below on ``S``.
    """
    if not report.bounded_below:
        raise PreconditionError("Sublevel analysis needs an objective bounded below")
    star = report.lambda_star
    if star.is_pos_inf:
        return SublevelVerdict.COMPACT
    relation = _as_value(level).compare(star.value)
    if relation is Comparison.LESS:
        return SublevelVerdict.COMPACT
    if relation is Comparison.GREATER:
        return SublevelVerdict.UNBOUNDED
    minimal = [a for a in report.branches if a.limit == star]
    decreasing = all(
        not a.is_constant
        and a.approach_exponent is not None
        and a.approach_exponent < 0
        and a.approach_sign is not None
        and a.approach_sign > 0
        for a in minimal
    )
    return SublevelVerdict.COMPACT if decreasing else SublevelVerdict.UNBOUNDED


def _extremal_branch(report: AnalysisReport) -> Optional[BranchAsymptotics]:
    return next((a for a in report.branches if a.alpha == report.alpha_star), None)


def _threshold(report: AnalysisReport) -> Fraction:
    lower = min(a.a_norm_lower for a in report.branches if a.alpha == report.alpha_star)
    return lower / 2


def stability_report(
    report: AnalysisReport,
    epsilon: Fraction,
    alpha: Fraction,
    kind: StabilityKind = StabilityKind.BOUNDEDNESS,
) -> StabilityVerdict:
    """
    Decide whether boundedness (or coercivity) survives perturbations of size ``epsilon*|x|^alpha``.

    Raises:
        PreconditionError: If the property does not hold for ``f`` or ``epsilon <= 0``.
    """
    epsilon, alpha = Fraction(epsilon), Fraction(alpha)
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    if kind is StabilityKind.BOUNDEDNESS and not report.bounded_below:
        raise PreconditionError("Boundedness stability needs an objective bounded below")
    if kind is StabilityKind.COERCIVITY and not report.coercive:
        raise PreconditionError("Coercivity stability needs a coercive objective")
    star = report.alpha_star
    base = dict(kind=kind, epsilon=epsilon, alpha=alpha, alpha_star=star)
    note = "Attainment of the infimum is not assessed; it can fail under perturbations that keep boundedness"
    if star is None:
        return StabilityVerdict(verdict="Stable", note="No branch at infinity", **base)
    floor = max(Fraction(0), star) if kind is StabilityKind.BOUNDEDNESS else star
    if kind is StabilityKind.BOUNDEDNESS and alpha <= 0:
        return StabilityVerdict(verdict="Stable", note=f"The perturbation is bounded. {note}", **base)
    if alpha < star:
        return StabilityVerdict(verdict="Stable", note=f"Growth alpha* = {star} dominates. {note}", **base)
    if alpha == star:
        threshold = _threshold(report)
        verdict = "Stable" if epsilon <= threshold else "Indeterminate"
        return StabilityVerdict(verdict=verdict, threshold=threshold, note=note, **base)
    beta = (floor + alpha) / 2
    branch = _extremal_branch(report)
    logger.info(f"Unstable {kind.value}: witness exponent {beta} along {branch.label}")
    return StabilityVerdict(
        verdict="UnstableWitness",
        beta=beta,
        branch=branch.label,
        note=f"f - epsilon*|x|^{beta} decreases to -inf along {branch.label}",
        **base,
    )

"""
Report documents: exact JSON and rich tables built from an ``AnalysisReport``.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import List, Optional

import jsonschema
import mpmath
import orjson
import sympy
from rich.console import Console
from rich.table import Table

from app.core.config import get_settings
from app.core.exceptions import InternalConsistencyError
from app.schemas.report_schemas import (
    AlgebraicNumberDocument,
    BranchDocument,
    CriticalPointDocument,
    DiscrepancyDocument,
    PsiCheckDocument,
    ReportDocument,
    StabilityDocument,
    SublevelDocument,
    ValueDocument,
)
from app.services.algebraic_numbers import ExtendedValue, RealAlgebraic
from app.services.classifier_service import AnalysisReport, StabilityVerdict, SublevelVerdict
from app.services.numeric_oracle import Discrepancy, PsiProfile
from app.services.poly_core import format_fraction

logger = logging.getLogger(__name__)

SCHEMA_PATH = Path(__file__).resolve().parents[2] / "docs" / "report_schema.json"
JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS


def _fraction(value: Optional[Fraction]) -> Optional[str]:
    return None if value is None else format_fraction(value)


def algebraic_document(value: RealAlgebraic, precision: int) -> AlgebraicNumberDocument:
    """Exact description of ``value`` with a ``precision``-digit decimal annotation."""
    approx = mpmath.nstr(value.to_mpf(precision + 5), precision)
    return AlgebraicNumberDocument(
        defining_polynomial=str(value.defining),
        interval=[format_fraction(value.interval.lo), format_fraction(value.interval.hi)],
        approx=approx,
        exact=_fraction(value.rational_value),
    )


def value_document(value: ExtendedValue, precision: int) -> ValueDocument:
    if value.is_finite:
        return algebraic_document(value.value, precision)
    return value.kind


def stability_document(verdict: StabilityVerdict) -> StabilityDocument:
    return StabilityDocument(
        kind=verdict.kind.value,
        verdict=verdict.verdict,
        epsilon=format_fraction(verdict.epsilon),
        alpha=format_fraction(verdict.alpha),
        alpha_star=_fraction(verdict.alpha_star),
        threshold=_fraction(verdict.threshold),
        beta=_fraction(verdict.beta),
        branch=verdict.branch,
        witness=verdict.witness(),
        note=verdict.note,
    )


def psi_check_document(profile: PsiProfile, discrepancies: List[Discrepancy]) -> PsiCheckDocument:
    samples = profile.samples
    fit = profile.fit
    return PsiCheckDocument(
        t_min=samples[0].t,
        t_max=samples[-1].t,
        points=len(samples),
        psi=[[s.t, s.psi, s.argmin_theta] for s in samples],
        fitted_limit=fit.limit if fit else None,
        fitted_exponent=fit.exponent if fit else None,
        discrepancies=[DiscrepancyDocument(**d.model_dump()) for d in discrepancies],
    )


def build_document(
    report: AnalysisReport,
    precision: Optional[int] = None,
    sublevel: Optional[tuple] = None,
    stability: Optional[StabilityVerdict] = None,
    psi_check: Optional[PsiCheckDocument] = None,
) -> ReportDocument:
    """
    Turn a report into its document form.

    Args:
        report: Output of ``analyze``.
        precision: Digits of the decimal annotations; defaults to the settings.
        sublevel: Optional ``(level, SublevelVerdict)`` pair.
        stability: Optional stability verdict.
        psi_check: Optional numeric cross-check.
    """
    digits = precision or get_settings().precision
    S = report.feasible_set
    profile = report.radial_profile
    branches = [
        BranchDocument(
            index=a.index,
            label=a.label,
            alpha=format_fraction(a.alpha),
            leading_coefficient=algebraic_document(a.a, digits),
            leading_sign=a.a_sign.value,
            leading_coefficient_norm=a.a_norm_numeric,
            limit=value_document(a.limit, digits),
            constant=a.is_constant,
            approach_exponent=_fraction(a.approach_exponent),
            approach_sign=a.approach_sign,
            series=a.series,
        )
        for a in report.branches
    ]
    points = [
        CriticalPointDocument(
            x_interval=[format_fraction(p.x.interval.lo), format_fraction(p.x.interval.hi)],
            y_interval=[format_fraction(p.y.interval.lo), format_fraction(p.y.interval.hi)],
            value=algebraic_document(p.value, digits),
        )
        for p in report.critical.points
    ]
    level_doc = None
    if sublevel is not None:
        level, verdict = sublevel
        level_doc = SublevelDocument(level=str(level), verdict=SublevelVerdict(verdict).value)
    return ReportDocument(
        objective=str(report.objective),
        feasible_set=S.describe(),
        mode=S.mode,
        constraint=str(S.constraint) if S.constraint is not None else None,
        tangency_polynomial=str(report.tangency) if report.tangency is not None else None,
        radial_profile=str(profile.with_var(sympy.Symbol("s"))) if profile is not None else None,
        branches=branches,
        nonconstant_branches=list(report.nonconstant_indices),
        t_infinity=[algebraic_document(v, digits) for v in report.t_infinity],
        critical_values=[algebraic_document(v, digits) for v in report.critical.values],
        critical_points=points,
        sigma_nonempty=report.critical.sigma_nonempty,
        positive_dimensional_critical_set=report.critical.has_positive_dimensional_part,
        bounded_below=report.bounded_below,
        bounded_above=report.bounded_above,
        infimum=value_document(report.infimum, digits),
        attained=report.attained,
        argmin_nonempty_compact=report.argmin_nonempty_compact,
        lambda_star=value_document(report.lambda_star, digits),
        coercive=report.coercive,
        alpha_star=_fraction(report.alpha_star),
        max_order=_fraction(report.max_order),
        escalations=list(report.escalations),
        notes=list(report.notes),
        sublevel=level_doc,
        stability=stability_document(stability) if stability is not None else None,
        psi_check=psi_check,
    )


@lru_cache
def load_schema() -> dict:
    return orjson.loads(SCHEMA_PATH.read_bytes())


def validate_payload(payload: dict) -> None:
    """
    Check a JSON payload against the published report schema.

    Raises:
        InternalConsistencyError: If the payload does not validate.
    """
    try:
        jsonschema.validate(instance=payload, schema=load_schema())
    except jsonschema.ValidationError as e:
        logger.error(f"Report document violates its schema at {list(e.absolute_path)}: {e.message}")
        raise InternalConsistencyError(f"Report document violates its schema: {e.message}") from e


def to_json(document: ReportDocument) -> bytes:
    """Validated JSON bytes with sorted keys."""
    payload = document.model_dump(mode="json")
    validate_payload(payload)
    return orjson.dumps(payload, option=JSON_OPTIONS)


def from_json(data: bytes) -> ReportDocument:
    return ReportDocument.model_validate(orjson.loads(data))


def _value_text(value: ValueDocument) -> str:
    if isinstance(value, str):
        return value
    if value.exact is not None:
        return value.exact
    return f"{value.approx} (root of {value.defining_polynomial})"


def _yes_no(flag: bool) -> str:
    return "[green]yes[/green]" if flag else "[red]no[/red]"


class ReportRenderer:
    """
    Human-readable output of a report document.

    Args:
        console: Target console; a fresh stdout console by default.
    """

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console()

    def render(self, document: ReportDocument) -> None:
        self.console.print(f"[bold]f[/bold] = {document.objective} on {document.feasible_set}")
        if document.tangency_polynomial is not None:
            self.console.print(f"Tangency curve: {document.tangency_polynomial} = 0")
        if document.radial_profile is not None:
            self.console.print(f"Radial: f = P(x^2 + y^2) with P(s) = {document.radial_profile}")
        self.console.print(self._branch_table(document))
        self.console.print(self._verdict_table(document))
        if document.sublevel is not None:
            s = document.sublevel
            self.console.print(f"Sublevel set at {s.level}: [bold]{s.verdict}[/bold]")
        if document.stability is not None:
            self._render_stability(document.stability)
        if document.psi_check is not None:
            self._render_psi(document.psi_check)
        for note in document.escalations + document.notes:
            self.console.print(f"[dim]note: {note}[/dim]")

    def _branch_table(self, document: ReportDocument) -> Table:
        table = Table(title="Branches at infinity")
        for column in ("#", "branch", "f along the branch", "alpha", "limit", "K"):
            table.add_column(column)
        for b in document.branches:
            table.add_row(
                str(b.index),
                b.label,
                b.series,
                b.alpha,
                _value_text(b.limit),
                "" if b.constant else "*",
            )
        return table

    def _verdict_table(self, document: ReportDocument) -> Table:
        table = Table(title="Verdicts", show_header=False)
        table.add_column("property")
        table.add_column("value")
        table.add_row("T_inf", "{" + ", ".join(_value_text(v) for v in document.t_infinity) + "}")
        table.add_row("critical values", "{" + ", ".join(_value_text(v) for v in document.critical_values) + "}")
        table.add_row("isolated critical points", str(len(document.critical_points)))
        table.add_row("bounded below", _yes_no(document.bounded_below))
        table.add_row("bounded above", _yes_no(document.bounded_above))
        table.add_row("infimum", _value_text(document.infimum))
        table.add_row("attained", _yes_no(document.attained))
        table.add_row("argmin nonempty and compact", _yes_no(document.argmin_nonempty_compact))
        table.add_row("lambda*", _value_text(document.lambda_star))
        table.add_row("coercive", _yes_no(document.coercive))
        table.add_row("alpha*", document.alpha_star or "n/a")
        return table

    def _render_stability(self, s: StabilityDocument) -> None:
        self.console.print(f"Stability of {s.kind} for eps = {s.epsilon}, alpha = {s.alpha}: [bold]{s.verdict}[/bold]")
        if s.threshold is not None:
            self.console.print(f"  threshold eps <= {s.threshold}")
        if s.witness is not None:
            self.console.print(f"  witness {s.witness} along {s.branch}")
        if s.note:
            self.console.print(f"  {s.note}")

    def _render_psi(self, check: PsiCheckDocument) -> None:
        table = Table(title=f"psi profile on [{check.t_min:g}, {check.t_max:g}]")
        for column in ("t", "psi(t)", "argmin angle"):
            table.add_column(column, justify="right")
        for t, value, theta in check.psi:
            table.add_row(f"{t:.6g}", f"{value:.10g}", "" if theta is None else f"{theta:.6f}")
        self.console.print(table)
        if check.fitted_exponent is not None:
            self.console.print(f"fitted exponent {check.fitted_exponent:.4f}")
        if not check.discrepancies:
            self.console.print("[green]numeric evidence agrees with the report[/green]")
        for d in check.discrepancies:
            self.console.print(f"[red]discrepancy[/red] {d.field}: claim {d.claim}, evidence {d.evidence}")

"""
One analysis request from text input to report document, shared by the CLI and the API.
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.core.exceptions import PolynomialParseError
from app.schemas.report_schemas import ReportDocument
from app.services.classifier_service import (
    AnalysisConfig,
    AnalysisReport,
    StabilityKind,
    StabilityVerdict,
    SublevelVerdict,
    analyze,
)
from app.services.expression_parser import parse_constraint, parse_polynomial
from app.services.numeric_oracle import check_report, psi_profile, write_profile_csv
from app.services.poly_core import MultiPoly, format_fraction, parse_rational
from app.services.report_service import build_document, psi_check_document
from app.services.tangency_service import FeasibleSet

logger = logging.getLogger(__name__)


class PsiCheckOptions(BaseModel):
    t_min: float = Field(..., gt=0)
    t_max: float
    points: int = Field(..., ge=2)
    csv_path: Optional[Path] = None


class AnalysisOutcome(BaseModel):
    """The exact report, the parsed input and the document built from them."""

    objective: MultiPoly
    feasible_set: FeasibleSet
    report: AnalysisReport
    sublevel: Optional[Tuple[Fraction, SublevelVerdict]] = None
    stability: Optional[StabilityVerdict] = None
    document: ReportDocument

    model_config = ConfigDict(arbitrary_types_allowed=True)


def parse_level(text: str) -> Fraction:
    value = parse_rational(text)
    if value is None:
        raise PolynomialParseError(f"Sublevel '{text}' is not a rational number")
    return value


def parse_stability(text: str) -> Tuple[Fraction, Fraction]:
    """Parse ``"epsilon,alpha"``, e.g. ``"1/10,1"``."""
    parts = text.split(",")
    values = [parse_rational(p) for p in parts]
    if len(values) != 2 or any(v is None for v in values):
        raise PolynomialParseError(f"Stability '{text}' must read 'epsilon,alpha' with rational entries")
    return values[0], values[1]


class AnalysisService:
    """
    Parse, analyze and optionally cross-check one problem.

    Args:
        max_order: Truncation order override.
        precision: Digits of the decimal annotations.
    """

    def __init__(self, max_order: Optional[int] = None, precision: Optional[int] = None):
        self.config = AnalysisConfig(max_order=max_order, precision=precision)

    def run(
        self,
        objective: str,
        constraint: Optional[str] = None,
        sublevel: Optional[str] = None,
        stability: Optional[str] = None,
        stability_kind: StabilityKind = StabilityKind.BOUNDEDNESS,
        psi_check: Optional[PsiCheckOptions] = None,
    ) -> AnalysisOutcome:
        """
        Raises:
            TangencyError: Any engine error; its ``exit_code`` tells the CLI what to return.
        """
        f = parse_polynomial(objective)
        S = FeasibleSet.curve(parse_constraint(constraint)) if constraint else FeasibleSet.plane()
        level = parse_level(sublevel) if sublevel is not None else None
        perturbation = parse_stability(stability) if stability is not None else None
        logger.info(f"Analyzing {f} on {S.describe()}")
        report = analyze(f, S, self.config)

        level_verdict = (level, report.sublevel(level)) if level is not None else None
        stability_verdict = report.stability(*perturbation, kind=stability_kind) if perturbation else None
        check = self._psi_check(report, f, S, psi_check) if psi_check is not None else None
        document = build_document(
            report,
            precision=self.config.resolved_precision(),
            sublevel=(format_fraction(level), level_verdict[1]) if level_verdict else None,
            stability=stability_verdict,
            psi_check=check,
        )
        return AnalysisOutcome(
            objective=f,
            feasible_set=S,
            report=report,
            sublevel=level_verdict,
            stability=stability_verdict,
            document=document,
        )

    def _psi_check(self, report: AnalysisReport, f: MultiPoly, S: FeasibleSet, options: PsiCheckOptions):
        limit = report.lambda_star.to_float() if report.lambda_star.is_finite else None
        profile = psi_profile(f, S, options.t_min, options.t_max, options.points, limit=limit)
        if options.csv_path is not None:
            write_profile_csv(profile, options.csv_path)
            logger.info(f"Wrote psi profile to {options.csv_path}")
        return psi_check_document(profile, check_report(report, f, S))

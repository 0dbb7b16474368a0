"""
Pydantic schemas of the report document.

The document is the JSON face of an ``AnalysisReport``: exact numbers stay exact
(rationals as ``"p/q"`` strings, algebraic numbers as a defining polynomial plus an
isolating interval) and decimal approximations are annotations only.
"""

from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field


class AlgebraicNumberDocument(BaseModel):
    """A real algebraic number."""

    defining_polynomial: str = Field(..., description="Irreducible integer polynomial in x with the number as a root")
    interval: List[str] = Field(..., min_length=2, max_length=2, description="Isolating interval [lo, hi]")
    approx: str = Field(..., description="Decimal approximation")
    exact: Optional[str] = Field(None, description="The rational value when the number is rational")


ValueDocument = Union[AlgebraicNumberDocument, Literal["+inf", "-inf"]]


class BranchDocument(BaseModel):
    index: int
    label: str
    alpha: str = Field(..., description="Leading exponent of the objective in the norm scale")
    leading_coefficient: AlgebraicNumberDocument
    leading_sign: int
    leading_coefficient_norm: float = Field(..., description="Leading coefficient in the norm scale, approximate")
    limit: ValueDocument
    constant: bool
    approach_exponent: Optional[str] = None
    approach_sign: Optional[int] = None
    series: str


class CriticalPointDocument(BaseModel):
    x_interval: List[str]
    y_interval: List[str]
    value: AlgebraicNumberDocument


class SublevelDocument(BaseModel):
    level: str
    verdict: Literal["Compact", "Unbounded"]


class StabilityDocument(BaseModel):
    kind: Literal["boundedness", "coercivity"]
    verdict: Literal["Stable", "UnstableWitness", "Indeterminate"]
    epsilon: str
    alpha: str
    alpha_star: Optional[str] = None
    threshold: Optional[str] = None
    beta: Optional[str] = None
    branch: Optional[str] = None
    witness: Optional[str] = None
    note: str = ""


class DiscrepancyDocument(BaseModel):
    field: str
    claim: str
    evidence: str


class PsiCheckDocument(BaseModel):
    """Numeric cross-check of the report; never feeds back into the verdicts."""

    t_min: float
    t_max: float
    points: int
    psi: List[List[Optional[float]]] = Field(..., description="Rows [t, psi(t), argmin angle]")
    fitted_limit: Optional[float] = None
    fitted_exponent: Optional[float] = None
    discrepancies: List[DiscrepancyDocument] = Field(default_factory=list)


class ReportDocument(BaseModel):
    """Everything ``analyze`` decided, in exact form."""

    objective: str
    feasible_set: str
    mode: Literal["plane", "curve"]
    constraint: Optional[str] = None
    tangency_polynomial: Optional[str] = None
    radial_profile: Optional[str] = None
    branches: List[BranchDocument] = Field(default_factory=list)
    nonconstant_branches: List[int] = Field(default_factory=list)
    t_infinity: List[AlgebraicNumberDocument] = Field(default_factory=list)
    critical_values: List[AlgebraicNumberDocument] = Field(default_factory=list)
    critical_points: List[CriticalPointDocument] = Field(default_factory=list)
    sigma_nonempty: bool
    positive_dimensional_critical_set: bool
    bounded_below: bool
    bounded_above: bool
    infimum: ValueDocument
    attained: bool
    argmin_nonempty_compact: bool
    lambda_star: ValueDocument
    coercive: bool
    alpha_star: Optional[str] = None
    max_order: Optional[str] = None
    escalations: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    sublevel: Optional[SublevelDocument] = None
    stability: Optional[StabilityDocument] = None
    psi_check: Optional[PsiCheckDocument] = None

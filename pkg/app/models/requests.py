from typing import Optional

from pydantic import BaseModel, Field


class AnalysisRequest(BaseModel):
    objective: str = Field(..., min_length=1, description="Polynomial in x and y, e.g. 'x^2*y^4 + x^4*y^2 - 3*x^2*y^2 + 1'")
    constraint: Optional[str] = Field(None, description="Equality constraint g or 'lhs = rhs'")
    max_order: Optional[int] = Field(None, description="Truncation order; read as -|max_order|")
    precision: Optional[int] = Field(None, ge=1, le=100)
    sublevel: Optional[str] = Field(None, description="Rational level of the sublevel-set query")
    stability: Optional[str] = Field(None, description="'epsilon,alpha' of the boundedness stability query")

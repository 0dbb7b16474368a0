from pydantic import BaseModel

from app.schemas.report_schemas import ReportDocument


class AnalysisResponse(ReportDocument):
    pass


class HealthResponse(BaseModel):
    status: str

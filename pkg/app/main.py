from fastapi import FastAPI

from app.api.endpoints import analysis
from app.core.config import get_settings
from app.core.logging_config import setup_logging

setup_logging(get_settings().log_level)

app = FastAPI(title="Tangency Classifier")

app.include_router(analysis.router, prefix="/api/analysis", tags=["analysis"])

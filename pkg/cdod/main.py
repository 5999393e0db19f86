import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI

from cdod import __version__
from cdod.config import AnalysisConfig
from cdod.features import load_presets
from cdod.routers.configs_router import router as configs_router
from cdod.routers.consistency_router import router as consistency_router

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    # Presets and tool settings are read once; requests only read app.state
    app.state.presets = load_presets()
    app.state.settings = AnalysisConfig().get_settings()
    logger.info("solver %s, conflict limit %d", app.state.settings.solver, app.state.settings.conflict_limit)
    yield


app = FastAPI(title="cdod", version=__version__, lifespan=lifespan)

app.include_router(consistency_router, prefix="/consistency", tags=["Consistency"])
app.include_router(configs_router, prefix="/configs", tags=["Configurations"])


@app.get("/")
async def root():
    return {"service": "cdod", "version": __version__}

from typing import Literal, Optional

from fastapi import APIRouter, HTTPException, Request
from pydantic import BaseModel, Field, model_validator

from cdod.alloy import emit_module
from cdod.analysis import CheckReport, run_check
from cdod.diagrams import parse_cd, parse_od, resolve
from cdod.engines.scope import ScopeOverrides
from cdod.errors import CdodError, ConfigError, Diagnostic
from cdod.features import parse_config, require_valid
from cdod.features.semantic_config import SemanticConfig

router = APIRouter()


class PairRequest(BaseModel):
    cd: str = Field(description="Class diagram text")
    od: str = Field(description="Object diagram text")
    config: Optional[str] = Field(default=None, description="Configuration file text")
    preset: Optional[str] = Field(default=None, description="Name of a shipped preset")

    @model_validator(mode="after")
    def _one_config(self):
        if (self.config is None) == (self.preset is None):
            raise ValueError("give exactly one of config or preset")
        return self


class CheckRequest(PairRequest):
    engine: Literal["sat", "enum", "both"] = "sat"
    max_objects: Optional[int] = Field(default=None, ge=0)


def unprocessable(error: CdodError) -> HTTPException:
    return HTTPException(status_code=422, detail=[d.model_dump() for d in error.diagnostics])


def _config(request: Request, body: PairRequest) -> SemanticConfig:
    if body.preset is not None:
        presets = request.app.state.presets
        if body.preset not in presets:
            raise ConfigError([Diagnostic.error(f"no preset named '{body.preset}'")])
        return presets[body.preset]
    return require_valid(parse_config(body.config))


@router.post("/check", response_model=CheckReport)
def check(request: Request, body: CheckRequest):
    """Decide consistency of the posted diagrams under the posted configuration."""
    try:
        pair = resolve(parse_cd(body.cd), parse_od(body.od))
        config = _config(request, body)
        user_scope = ScopeOverrides(max_objects=body.max_objects) if body.max_objects is not None else None
        return run_check(
            pair, config, engine=body.engine, settings=request.app.state.settings, user_scope=user_scope
        )
    except CdodError as e:
        raise unprocessable(e)


@router.post("/emit")
def emit(request: Request, body: PairRequest):
    """Render the Alloy module for the posted diagrams and configuration."""
    try:
        pair = resolve(parse_cd(body.cd), parse_od(body.od))
        config = _config(request, body)
        return {"module": emit_module(pair, config, request.app.state.settings)}
    except CdodError as e:
        raise unprocessable(e)

from fastapi import APIRouter
from pydantic import BaseModel

from cdod.errors import ConfigError
from cdod.features import enumerate_valid, parse_config, validate
from cdod.features.semantic_config import ConfigViolation

router = APIRouter()


class ValidateRequest(BaseModel):
    text: str


class ValidateResponse(BaseModel):
    valid: bool
    key: str = ""
    violations: list[ConfigViolation] = []
    errors: list[str] = []


@router.get("/")
def list_configs():
    """All valid configurations in canonical order."""
    return [{"name": c.label, "key": c.key, **c.model_dump(exclude={"name"})} for c in enumerate_valid()]


@router.get("/count")
def count_configs():
    return {"count": len(enumerate_valid())}


@router.post("/validate", response_model=ValidateResponse)
def validate_config(body: ValidateRequest):
    try:
        config = parse_config(body.text)
    except ConfigError as e:
        return ValidateResponse(valid=False, errors=[str(d) for d in e.diagnostics])
    violations = validate(config)
    return ValidateResponse(valid=not violations, key=config.key, violations=violations)

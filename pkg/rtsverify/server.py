import logging
import uuid
from typing import Any, Dict, Optional

from fastapi import BackgroundTasks, FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field

from .checker import CheckOptions, Settings, load_instance_text, run_check
from .errors import RtsError
from .frameworks.catalog import generate_framework_catalog
from .tools.log import configure_logging, preview
from .tools.registry import RunRegistry
from .verification.separability import brute_force_separate, separate

# -------------------------
# Logging
# -------------------------
settings = Settings.from_env()
configure_logging(settings.log_level, settings.log_file)
logger = logging.getLogger("rtsverify.server")


# -------------------------
# FastAPI
# -------------------------
app = FastAPI(title="RTS Abstract Safety Service")

registry = RunRegistry()


class CheckRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    instance: str = Field(..., min_length=1, description="instance file text")
    framework: Optional[str] = Field(default=None, description="framework spec; defaults to the file's framework")
    options: CheckOptions = Field(default_factory=CheckOptions)


class SeparateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    instance: str = Field(..., min_length=1)
    framework: Optional[str] = None
    c: str
    c_prime: str
    brute_force: bool = False


def _http_error(e: RtsError) -> HTTPException:
    return HTTPException(status_code=e.http_status, detail=str(e))


def _require_run(run_id: str) -> Dict[str, Any]:
    run = registry.get(run_id)
    if run is None:
        raise HTTPException(status_code=404, detail="unknown run_id")
    return run


def _check(req: CheckRequest, run_id: str) -> Dict[str, Any]:
    inst = load_instance_text(req.instance, req.framework)
    report = run_check(inst, req.options, run_id=run_id)
    data = report.model_dump()
    data.update(verdict="Safe" if report.safe else "NotAbstractSafe", exit_code=report.exit_code)
    return data


@app.get("/health")
def health():
    return {"ok": True}


@app.get("/frameworks")
def frameworks():
    return generate_framework_catalog()


@app.post("/check")
def check(req: CheckRequest):
    run_id = uuid.uuid4().hex
    logger.info("[%s] check framework=%s instance=%s", run_id, req.framework, preview(req.instance, 80))
    try:
        return _check(req, run_id)
    except RtsError as e:
        logger.warning("[%s] check failed: %s", run_id, e)
        raise _http_error(e) from None


@app.post("/separate")
def separate_pair(req: SeparateRequest):
    try:
        inst = load_instance_text(req.instance, req.framework)
        if req.brute_force:
            a = brute_force_separate(inst, req.c, req.c_prime, guard=settings.brute_force_guard)
        else:
            a = separate(inst, req.c, req.c_prime)
    except RtsError as e:
        raise _http_error(e) from None
    return {"separable": a is not None, "separator": None if a is None else " ".join(a)}


@app.post("/runs")
def trigger(req: CheckRequest, background: BackgroundTasks):
    run_id = uuid.uuid4().hex
    registry.add_run(run_id, preview(req.instance, 40), req.framework or "file", req.options.mode)
    logger.info("[%s] queued framework=%s mode=%s", run_id, req.framework, req.options.mode)

    def _job():
        registry.upsert_status(run_id, "running")
        logger.info("[%s] running", run_id)
        try:
            report = _check(req, run_id)
        except Exception as e:
            logger.exception("[%s] error: %s", run_id, str(e))
            status = e.http_status if isinstance(e, RtsError) else 500
            registry.upsert_status(run_id, "error", error=str(e), http_status=status)
            return
        registry.upsert_status(run_id, "done", report=report)
        logger.info("[%s] done verdict=%s wall_s=%.3f", run_id, report["verdict"], report["wall_s"])

    background.add_task(_job)
    return {"run_id": run_id, "status": "queued"}


@app.get("/runs")
def list_runs():
    return registry.export()


@app.get("/runs/{run_id}")
def run_status(run_id: str):
    return _require_run(run_id)

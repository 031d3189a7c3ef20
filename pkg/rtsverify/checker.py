from __future__ import annotations

import logging
import os
import time
import uuid
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .automata.dfa import sizes
from .automata.dot import write_dot
from .errors import UsageError
from .frameworks.catalog import parse_framework
from .tools.instance_io import InstanceFile, parse_instance_text, read_instance_file
from .tools.report import Report
from .verification.instance import AutomatonSize, SafetyInstance, Verdict
from .verification.invariants import abstract_safety_direct
from .verification.learner import DEFAULT_MAX_EQ, learn_and_check
from .verification.separability import BRUTE_FORCE_GUARD

logger = logging.getLogger(__name__)


# -------------------------
# Settings / options
# -------------------------
class Settings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    log_level: str = "INFO"
    log_file: Optional[str] = None
    max_eq: int = DEFAULT_MAX_EQ
    brute_force_guard: int = BRUTE_FORCE_GUARD

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            log_level=os.getenv("RTS_LOG_LEVEL", "INFO"),
            log_file=os.getenv("RTS_LOG_FILE") or None,
            max_eq=int(os.getenv("RTS_MAX_EQ", str(DEFAULT_MAX_EQ))),
            brute_force_guard=int(os.getenv("RTS_BRUTE_FORCE_GUARD", str(BRUTE_FORCE_GUARD))),
        )


class CheckOptions(BaseModel):
    """Options of one check, shared by the command line and the HTTP API."""

    model_config = ConfigDict(extra="forbid")

    mode: Literal["direct", "lazy"] = "direct"
    exact: bool = False
    max_eq: int = Field(default=DEFAULT_MAX_EQ, ge=1)
    dot_dir: Optional[str] = None
    dimacs_dir: Optional[str] = None
    property: Optional[str] = None


# -------------------------
# Loading
# -------------------------
def with_framework(parsed: InstanceFile, framework: Optional[str]) -> SafetyInstance:
    """Instance with the framework named by a spec string, or the file's own framework: section."""
    fw = parse_framework(framework, parsed.sigma) if framework else None
    return parsed.instance(fw)


def load_instance(path: str | Path, framework: Optional[str] = None) -> SafetyInstance:
    return with_framework(read_instance_file(path), framework)


def load_instance_text(text: str, framework: Optional[str] = None, name: str = "request") -> SafetyInstance:
    return with_framework(parse_instance_text(text, name=name), framework)


# -------------------------
# Checking
# -------------------------
def _check_property(inst: SafetyInstance, options: CheckOptions, run_id: str) -> Verdict:
    if options.mode == "direct":
        return abstract_safety_direct(inst)
    return learn_and_check(
        inst, exact=options.exact, max_eq=options.max_eq, dimacs_dir=options.dimacs_dir, run_id=run_id
    )


def _export_dot(inst: SafetyInstance, verdict: Verdict, dot_dir: str) -> None:
    out = Path(dot_dir)
    write_dot(inst.delta, out / f"{inst.name}_delta.dot", "delta")
    write_dot(inst.c_init, out / f"{inst.name}_init.dot", "init")
    write_dot(inst.c_unsafe, out / f"{inst.name}_{inst.prop}_unsafe.dot", inst.prop)
    if verdict.certificate is not None:
        label = "ind" if verdict.mode == "direct" else "h"
        write_dot(verdict.certificate, out / f"{inst.name}_{inst.prop}_{label}.dot", label)


def run_check(inst: SafetyInstance, options: CheckOptions, run_id: Optional[str] = None) -> Report:
    """Check every property of the instance (or the selected one) and collect the verdicts."""
    run_id = run_id or uuid.uuid4().hex
    if options.exact and options.mode != "lazy":
        raise UsageError("--exact only applies to --mode lazy")
    if options.property is not None and options.property not in inst.properties:
        raise UsageError(f"unknown property {options.property!r}; instance '{inst.name}' has {list(inst.properties)}")
    props = [options.property] if options.property else list(inst.properties)

    t0 = time.perf_counter()
    logger.info(
        "[%s] check %s: framework %s, mode %s, properties %s",
        run_id,
        inst.name,
        inst.framework.name,
        options.mode,
        props,
    )
    rows = []
    for prop in props:
        sub = inst.select(prop)
        verdict = _check_property(sub, options, run_id)
        if options.dot_dir:
            _export_dot(sub, verdict, options.dot_dir)
        logger.info("[%s] %s / %s: %s", run_id, inst.name, prop, verdict.kind)
        rows.append(verdict)

    s = sizes(inst.c_init)
    return Report(
        instance=inst.name,
        framework=inst.framework.name,
        mode="exact" if options.exact else options.mode,
        c_init=AutomatonSize(trim=s.trim, complete=s.complete),
        delta_states=inst.delta.num_states,
        rows=rows,
        wall_s=round(time.perf_counter() - t0, 3),
        run_id=run_id,
    )

from __future__ import annotations

import re
from typing import Any, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from ..verification.instance import AutomatonSize, Verdict

SIZE_COLUMNS = ("H", "PReach_H", "Ind", "PReach")
_KEY_BAD = re.compile(r"[^a-z_.]")


def _key(*parts: str) -> str:
    """Lower-case dotted key; anything outside [a-z_.] becomes '_'."""
    return ".".join(_KEY_BAD.sub("_", p.lower()) for p in parts)


def _word(w) -> str:
    return " ".join(w) if w else "eps"


def _size_cell(s: Optional[AutomatonSize]) -> str:
    return "-" if s is None else f"{s.trim}/{s.complete}"


class Report(BaseModel):
    """Verdicts for every checked property of one instance, plus input sizes."""

    model_config = ConfigDict(extra="forbid")

    instance: str
    framework: str
    mode: str
    c_init: AutomatonSize
    delta_states: int
    rows: list[Verdict] = Field(default_factory=list)
    wall_s: float = 0.0
    run_id: str = "-"

    @property
    def safe(self) -> bool:
        return all(v.safe for v in self.rows)

    @property
    def exit_code(self) -> int:
        return 0 if self.safe else 1

    def max_sizes(self) -> dict[str, AutomatonSize]:
        """Largest size per automaton over all properties."""
        out: dict[str, AutomatonSize] = {}
        for v in self.rows:
            for name, s in v.sizes.items():
                old = out.get(name)
                out[name] = s if old is None else AutomatonSize(
                    trim=max(old.trim, s.trim), complete=max(old.complete, s.complete)
                )
        return out

    def frame(self) -> pd.DataFrame:
        records = []
        for v in self.rows:
            rec: dict[str, Any] = {"property": v.property, "result": v.kind}
            for name in SIZE_COLUMNS:
                if any(name in r.sizes for r in self.rows):
                    rec[f"|{name}|"] = _size_cell(v.sizes.get(name))
            if "equivalence" in v.stats:
                rec["eq"] = v.stats["equivalence"]
                rec["mem"] = v.stats.get("membership", 0)
            rec["time_s"] = v.stats.get("wall_s", "")
            rec["witness"] = "" if v.witness is None else f"{_word(v.witness[0])} -> {_word(v.witness[1])}"
            records.append(rec)
        return pd.DataFrame.from_records(records)

    def table(self) -> str:
        head = (
            f"instance {self.instance}  framework {self.framework}  mode {self.mode}  "
            f"|C_I| {_size_cell(self.c_init)}  |Delta| {self.delta_states}"
        )
        if not self.rows:
            return head + "\n(no properties checked)\n"
        body = self.frame().to_string(index=False)
        return f"{head}\nsizes are minimal trim/complete DFA state counts\n{body}\n"

    def lines(self) -> list[str]:
        """key=value lines, one fact each."""
        out = [
            f"instance={self.instance}",
            f"framework={self.framework}",
            f"mode={self.mode}",
            f"run_id={self.run_id}",
            f"size.c_init.trim={self.c_init.trim}",
            f"size.c_init.complete={self.c_init.complete}",
            f"size.delta.states={self.delta_states}",
        ]
        for v in self.rows:
            out.append(f"property={v.property}")
            out.append(f"result={v.kind}")
            for name, s in v.sizes.items():
                out.append(f"{_key('size', name, 'trim')}={s.trim}")
                out.append(f"{_key('size', name, 'complete')}={s.complete}")
            for k, val in v.stats.items():
                out.append(f"{_key('stats', k)}={val}")
            if v.witness is not None:
                out.append(f"witness.c={_word(v.witness[0])}")
                out.append(f"witness.c_prime={_word(v.witness[1])}")
        for name, s in self.max_sizes().items():
            out.append(f"{_key('max', name, 'trim')}={s.trim}")
            out.append(f"{_key('max', name, 'complete')}={s.complete}")
        out.append(f"verdict={'Safe' if self.safe else 'NotAbstractSafe'}")
        out.append(f"wall_s={self.wall_s}")
        out.append(f"exit_code={self.exit_code}")
        return out

    def render(self) -> str:
        return self.table() + "\n" + "\n".join(self.lines()) + "\n"

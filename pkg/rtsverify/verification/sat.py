"""CNF formulas, DIMACS text and a small conflict-driven clause-learning solver."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Iterable, Optional, Sequence, Union

from ..errors import ParseError, RtsError

logger = logging.getLogger(__name__)


class CnfFormula:
    """Clauses over variables 1..num_vars; var_names maps structured names to indices."""

    def __init__(self, num_vars: int = 0, clauses: Iterable[Sequence[int]] = ()):
        self.num_vars = num_vars
        self.clauses: list[list[int]] = []
        self.var_names: dict[Hashable, int] = {}
        for c in clauses:
            self.add(c)

    def var(self, name: Hashable) -> int:
        """Index of a named variable, allocated on first use."""
        idx = self.var_names.get(name)
        if idx is None:
            self.num_vars += 1
            idx = self.num_vars
            self.var_names[name] = idx
        return idx

    def fresh(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, clause: Sequence[int]) -> None:
        lits = list(clause)
        for lit in lits:
            if lit == 0 or abs(lit) > self.num_vars:
                raise RtsError(f"literal {lit} outside 1..{self.num_vars}")
        self.clauses.append(lits)

    def exactly_one(self, lits: Sequence[int]) -> None:
        self.add(lits)
        self.at_most_one(lits)

    def at_most_one(self, lits: Sequence[int]) -> None:
        for i in range(len(lits)):
            for j in range(i + 1, len(lits)):
                self.add([-lits[i], -lits[j]])

    @property
    def trivially_unsat(self) -> bool:
        return any(not c for c in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(str(lit) for lit in c) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"

    def write_dimacs(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_dimacs(), encoding="utf-8")
        return path


def read_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF; 'c' lines are comments and clauses may span lines."""
    header = None
    clauses: list[list[int]] = []
    pending: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if header is None:
            m = re.match(r"p\s+cnf\s+(\d+)\s+(\d+)$", line)
            if m is None:
                raise ParseError(f"expected 'p cnf <vars> <clauses>', got {line!r}", lineno)
            header = (int(m.group(1)), int(m.group(2)))
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"non-integer literal in {line!r}", lineno) from None
        for lit in nums:
            if lit == 0:
                clauses.append(pending)
                pending = []
            elif abs(lit) > header[0]:
                raise ParseError(f"literal {lit} exceeds declared {header[0]} variables", lineno)
            else:
                pending.append(lit)
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if pending:
        raise ParseError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], clauses)


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    model: Optional[tuple[bool, ...]] = None  # model[i - 1] is the value of variable i

    def value(self, var: int) -> bool:
        if self.model is None:
            raise RtsError("no model: formula is unsatisfiable")
        return self.model[var - 1]

    def __bool__(self) -> bool:
        return self.satisfiable


class _Solver:
    """
    Two watched literals per clause, first-UIP learning and non-chronological
    backjumping. Decisions take the lowest unassigned variable, true first,
    and there are no restarts, so runs are deterministic.
    """

    def __init__(self, num_vars: int, clauses: list[list[int]]):
        self.n = num_vars
        self.value = [0] * (num_vars + 1)
        self.level = [0] * (num_vars + 1)
        self.reason: list[Optional[int]] = [None] * (num_vars + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[int]] = {lit: [] for v in range(1, num_vars + 1) for lit in (v, -v)}
        self.units: list[int] = []
        self.empty = False
        for c in clauses:
            lits = list(dict.fromkeys(c))
            if any(-lit in lits for lit in lits):
                continue
            if not lits:
                self.empty = True
            elif len(lits) == 1:
                self.units.append(lits[0])
            else:
                self._attach(lits)

    def _attach(self, lits: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0]].append(ci)
        self.watches[lits[1]].append(ci)
        return ci

    def _lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit: int, reason: Optional[int]) -> bool:
        cur = self._lit_value(lit)
        if cur != 0:
            return cur > 0
        var = abs(lit)
        self.value[var] = 1 if lit > 0 else -1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.trail.append(lit)
        return True

    def _propagate(self) -> Optional[int]:
        while self.qhead < len(self.trail):
            false_lit = -self.trail[self.qhead]
            self.qhead += 1
            watching = self.watches[false_lit]
            kept: list[int] = []
            conflict = None
            i = 0
            while i < len(watching):
                ci = watching[i]
                i += 1
                c = self.clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if self._lit_value(c[0]) > 0:
                    kept.append(ci)
                    continue
                for k in range(2, len(c)):
                    if self._lit_value(c[k]) >= 0:
                        c[1], c[k] = c[k], c[1]
                        self.watches[c[1]].append(ci)
                        break
                else:
                    kept.append(ci)
                    if self._lit_value(c[0]) < 0:
                        conflict = ci
                        kept.extend(watching[i:])
                        break
                    self._enqueue(c[0], ci)
            self.watches[false_lit] = kept
            if conflict is not None:
                return conflict
        return None

    def _analyze(self, conflict: int) -> tuple[list[int], int]:
        current = len(self.trail_lim)
        seen = [False] * (self.n + 1)
        learnt: list[int] = [0]
        counter = 0
        p: Optional[int] = None
        clause = self.clauses[conflict]
        idx = len(self.trail) - 1
        while True:
            for q in clause:
                if p is not None and q == p:
                    continue
                var = abs(q)
                if not seen[var] and self.level[var] > 0:
                    seen[var] = True
                    if self.level[var] == current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            clause = self.clauses[self.reason[abs(p)]]
        learnt[0] = -p
        back = 0
        if len(learnt) > 1:
            best = max(range(1, len(learnt)), key=lambda j: self.level[abs(learnt[j])])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = self.level[abs(learnt[1])]
        return learnt, back

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        for lit in self.trail[start:]:
            var = abs(lit)
            self.value[var] = 0
            self.reason[var] = None
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def solve(self) -> Optional[list[int]]:
        if self.empty:
            return None
        for lit in self.units:
            if not self._enqueue(lit, None):
                return None
        next_var = 1
        while True:
            conflict = self._propagate()
            if conflict is not None:
                if not self.trail_lim:
                    return None
                learnt, back = self._analyze(conflict)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._enqueue(learnt[0], self._attach(learnt))
                next_var = 1
                continue
            while next_var <= self.n and self.value[next_var] != 0:
                next_var += 1
            if next_var > self.n:
                return self.value[1:]
            self.trail_lim.append(len(self.trail))
            self._enqueue(next_var, None)


def sat_solve(formula: CnfFormula) -> SatResult:
    """Complete decision procedure; a returned model is re-checked against every clause."""
    solver = _Solver(formula.num_vars, formula.clauses)
    values = solver.solve()
    if values is None:
        logger.debug("SAT: unsat (%d vars, %d clauses)", formula.num_vars, len(formula.clauses))
        return SatResult(False)
    model = tuple(v > 0 for v in values)
    for clause in formula.clauses:
        if not any(model[abs(lit) - 1] == (lit > 0) for lit in clause):
            raise RtsError(f"solver model violates clause {clause}")
    logger.debug("SAT: sat (%d vars, %d clauses, %d learnt)", formula.num_vars, len(formula.clauses),
                 len(solver.clauses))
    return SatResult(True, model)

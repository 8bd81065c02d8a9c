"""DRAT proof emission and an independent RUP checker.

The solver logs every learnt clause as an addition and every clause-
database deletion as a deletion, in text DRAT ("<lits> 0", "d <lits> 0").
An unsatisfiability proof ends with the empty clause.

check_rup() replays a proof against the original formula: each added
clause must be derivable by reverse unit propagation (assume its negated
literals, propagate, reach a conflict) from the formula plus earlier
additions that have not been deleted. It validates plain RUP only; this
solver never emits clauses needing the full RAT check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Sequence, Union

from .formula import Formula

ADD = "add"
DELETE = "delete"


@dataclass
class ProofEvent:
    kind: str  # ADD or DELETE
    lits: list[int]  # signed DIMACS literals

    def to_line(self) -> str:
        body = " ".join(str(x) for x in self.lits + [0])
        return body if self.kind == ADD else f"d {body}"


class ProofWriter:
    """Serializes proof events to a text sink as they happen."""

    def __init__(self, sink: IO[str]):
        self.sink = sink

    def emit(self, event: ProofEvent) -> None:
        self.sink.write(event.to_line() + "\n")

    def add(self, lits: Sequence[int]) -> None:
        self.emit(ProofEvent(ADD, list(lits)))

    def delete(self, lits: Sequence[int]) -> None:
        self.emit(ProofEvent(DELETE, list(lits)))

    def flush(self) -> None:
        self.sink.flush()


def parse_drat(text: str) -> list[ProofEvent]:
    """Parse text DRAT into events; raises ValueError on malformed lines."""
    events: list[ProofEvent] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        kind = ADD
        if stripped.startswith("d"):
            kind = DELETE
            stripped = stripped[1:].strip()
        try:
            nums = [int(t) for t in stripped.split()]
        except ValueError:
            raise ValueError(f"proof line {lineno}: non-integer token") from None
        if not nums or nums[-1] != 0:
            raise ValueError(f"proof line {lineno}: missing terminating 0")
        if any(n == 0 for n in nums[:-1]):
            raise ValueError(f"proof line {lineno}: embedded 0")
        events.append(ProofEvent(kind, nums[:-1]))
    return events


class _ClauseDb:
    """Watched-literal clause store for repeated RUP propagations.

    Watch positions persist across checks; that stays sound because every
    check undoes its assignments, and a stale watch is re-examined the
    next time its literal is falsified.
    """

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self.value: list[int] = [0] * (num_vars + 1)  # 1-indexed vars; 0/1/-1
        self.watches: dict[int, list[list[int]]] = {}
        self.units: list[list[int]] = []  # singleton clauses, wrapped for deletion
        self.has_empty = False
        # sorted-tuple key -> live clause objects, for deletions
        self.registry: dict[tuple[int, ...], list[list[int]]] = {}

    def _lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def add(self, lits: Sequence[int]) -> None:
        clause = list(lits)
        self.registry.setdefault(tuple(sorted(clause)), []).append(clause)
        if not clause:
            self.has_empty = True
        elif len(clause) == 1:
            self.units.append(clause)
        else:
            self.watches.setdefault(clause[0], []).append(clause)
            self.watches.setdefault(clause[1], []).append(clause)

    def delete(self, lits: Sequence[int]) -> None:
        """Drop one clause with these literals; unknown clauses are a no-op
        (deleting a clause never makes a proof unsound)."""
        key = tuple(sorted(lits))
        bucket = self.registry.get(key)
        if not bucket:
            return
        clause = bucket.pop()
        if not clause:
            return  # the empty clause is never meaningfully deleted
        if len(clause) == 1:
            self.units.remove(clause)
        else:
            for w in (clause[0], clause[1]):
                lst = self.watches.get(w, [])
                for i, c in enumerate(lst):
                    if c is clause:
                        del lst[i]
                        break

    def propagates_to_conflict(self, assumptions: Sequence[int]) -> bool:
        """Assume the given literals, unit propagate, report conflict.

        All assignments are undone before returning.
        """
        if self.has_empty:
            return True
        trail: list[int] = []
        conflict = False

        def assign(lit: int) -> bool:
            val = self._lit_value(lit)
            if val > 0:
                return True
            if val < 0:
                return False
            self.value[abs(lit)] = 1 if lit > 0 else -1
            trail.append(lit)
            return True

        for lit in assumptions:
            if not assign(lit):
                conflict = True
                break
        if not conflict:
            for unit in self.units:
                if not assign(unit[0]):
                    conflict = True
                    break

        head = 0
        while not conflict and head < len(trail):
            falsified = -trail[head]
            head += 1
            watch_list = self.watches.get(falsified, [])
            i = 0
            while i < len(watch_list):
                clause = watch_list[i]
                # normalize: watched literals sit in slots 0 and 1
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                other = clause[0]
                if self._lit_value(other) > 0:
                    i += 1
                    continue
                moved = False
                for j in range(2, len(clause)):
                    if self._lit_value(clause[j]) >= 0:
                        clause[1], clause[j] = clause[j], clause[1]
                        watch_list[i] = watch_list[-1]
                        watch_list.pop()
                        self.watches.setdefault(clause[1], []).append(clause)
                        moved = True
                        break
                if moved:
                    continue
                if not assign(other):
                    conflict = True
                    break
                i += 1

        for lit in trail:
            self.value[abs(lit)] = 0
        return conflict


def check_rup(formula: Formula, proof: Union[str, Iterable[ProofEvent]]) -> bool:
    """True iff every added clause is RUP in order and the proof reaches
    the empty clause."""
    events = parse_drat(proof) if isinstance(proof, str) else list(proof)
    max_var = formula.num_vars
    for ev in events:
        for lit in ev.lits:
            max_var = max(max_var, abs(lit))

    db = _ClauseDb(max_var)
    for clause in formula.clauses:
        db.add(clause.to_ints())

    for ev in events:
        if ev.kind == DELETE:
            db.delete(ev.lits)
            continue
        if not db.propagates_to_conflict([-l for l in ev.lits]):
            return False
        if not ev.lits:
            return True  # verified empty clause: unsatisfiability derived
        db.add(ev.lits)
    return False  # proof never derived the empty clause

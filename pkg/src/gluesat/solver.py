"""The CDCL search engine.

Trail-based assignment with two watched literals per clause, first-UIP
conflict analysis, EVSIDS branching, phase saving, Luby restarts, and
LBD-aware clause-database reduction (clauses with LBD <= 2 are kept
forever). Glue tracking and per-decision-class metrics plug in through
the tracker/collector objects the solver owns; a DRAT proof writer can
be attached to log every learnt clause and deletion.

Determinism: for a fixed formula and config the run is bit-reproducible.
Ties in branching go to the lowest variable index, the default phase is
False, and the wall-clock budget is only consulted between conflicts —
it can truncate a run but never reorders heuristic state.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

from .activity import ActivityTable
from .formula import Clause, Formula, lit_to_int
from .glue import GlueTracker
from .metrics import (
    GF_SAMPLE_INTERVAL,
    MetricsCollector,
    MetricsReport,
    finalize_report,
)
from .proof import ProofWriter

CLAUSE_ACT_LIMIT = 1e20
CLAUSE_ACT_RESCALE = 1e-20
CLAUSE_DECAY = 0.999

_ABSENT = object()  # sentinel: "construct the default tracker"


def luby(i: int) -> int:
    """The i-th term (1-based) of the Luby sequence 1,1,2,1,1,2,4,..."""
    if i < 1:
        raise ValueError("luby is 1-indexed")
    k = i.bit_length()
    if i == (1 << k) - 1:
        return 1 << (k - 1)
    return luby(i - (1 << (k - 1)) + 1)


def compute_lbd(lits: Iterable[int], levels: Sequence[int], values: Sequence[int]) -> int:
    """Count the distinct decision levels among a clause's literals.

    Every literal must be assigned; raises ValueError otherwise.
    """
    distinct = set()
    for lit in lits:
        v = lit >> 1
        if values[v] == 0:
            raise ValueError(f"literal {lit_to_int(lit)} is unassigned")
        distinct.add(levels[v])
    return len(distinct)


class Verdict(Enum):
    SAT = "SATISFIABLE"
    UNSAT = "UNSATISFIABLE"
    UNKNOWN = "UNKNOWN"


@dataclass
class SolverConfig:
    glue_bump: bool = False
    decay: float = 0.95
    restart_base: int = 100
    learnt_limit: int = 2000
    learnt_limit_growth: int = 300
    glue_lbd_max: int = 2
    phase_default: bool = False
    # Recorded in outputs for reproducibility bookkeeping; the built-in
    # heuristics are fully deterministic and consume no randomness.
    seed: int = 0
    max_conflicts: Optional[int] = None
    time_limit_s: Optional[float] = None


@dataclass
class SearchCounters:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    glue_clauses: int = 0


@dataclass
class SolveResult:
    verdict: Verdict
    model: Optional[list[int]]  # signed DIMACS literals, one per variable
    counters: SearchCounters
    report: MetricsReport
    restarts: int
    elapsed_s: float


class Solver:
    """One single-use CDCL solver instance over a parsed formula.

    The instance owns all mutable state; run independent instances for
    concurrent solves. The input formula is never mutated (clauses are
    copied, since propagation reorders watched literals in place).
    """

    def __init__(
        self,
        formula: Formula,
        config: Optional[SolverConfig] = None,
        proof: Optional[ProofWriter] = None,
        glue_tracker=_ABSENT,
        metrics: Optional[MetricsCollector] = None,
    ):
        self.config = config or SolverConfig()
        self.formula = formula
        n = formula.num_vars
        self.num_vars = n
        self.proof = proof
        if glue_tracker is _ABSENT:
            glue_tracker = GlueTracker(
                n, self.config.glue_lbd_max, bump_enabled=self.config.glue_bump
            )
        self.glue: Optional[GlueTracker] = glue_tracker
        self.metrics = metrics if metrics is not None else MetricsCollector()
        self.counters = SearchCounters()

        self.values = [0] * n  # 0 unassigned, 1 true, -1 false
        self.levels = [0] * n
        self.reasons: list[Optional[Clause]] = [None] * n
        self.phases = [self.config.phase_default] * n
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.activities = ActivityTable(n, self.config.decay)
        for v in range(n):
            self.activities.heap.insert(v)

        self.watches: list[list[Clause]] = [[] for _ in range(2 * n)]
        self.clauses: list[Clause] = []
        self.learnts: list[Clause] = []
        self.cla_inc = 1.0
        self.learnt_limit = self.config.learnt_limit
        self.restarts = 0
        self.conflicts_since_restart = 0
        self._root_conflict = False

        for clause in formula.clauses:
            self._add_original(clause)

    # ---- assignment primitives -------------------------------------------

    @property
    def current_level(self) -> int:
        return len(self.trail_lim)

    def lit_value(self, lit: int) -> int:
        """1 if the literal is true, -1 false, 0 unassigned."""
        v = self.values[lit >> 1]
        return -v if (lit & 1) else v

    def _enqueue(self, lit: int, reason: Optional[Clause]) -> None:
        v = lit >> 1
        self.values[v] = -1 if (lit & 1) else 1
        self.levels[v] = len(self.trail_lim)
        self.reasons[v] = reason
        self.trail.append(lit)
        heap = self.activities.heap
        if v in heap:
            heap.remove(v)
        if reason is not None:
            self.counters.propagations += 1
            self.metrics.record_propagation()

    def _watch(self, clause: Clause) -> None:
        self.watches[clause.lits[0]].append(clause)
        self.watches[clause.lits[1]].append(clause)

    def _unwatch(self, clause: Clause) -> None:
        self.watches[clause.lits[0]].remove(clause)
        self.watches[clause.lits[1]].remove(clause)

    def _add_original(self, clause: Clause) -> None:
        lits = list(clause.lits)
        if not lits:
            self._root_conflict = True
            self.clauses.append(Clause([]))
            return
        c = Clause(lits)
        self.clauses.append(c)
        if len(lits) == 1:
            val = self.lit_value(lits[0])
            if val < 0:
                self._root_conflict = True
            elif val == 0:
                self._enqueue(lits[0], c)
        else:
            self._watch(c)

    # ---- propagation -----------------------------------------------------

    def propagate(self) -> Optional[Clause]:
        """Assign all unit consequences of the trail.

        Returns a conflicting clause, or None once a fixpoint is reached.
        """
        values = self.values
        watches = self.watches
        trail = self.trail
        levels = self.levels
        reasons = self.reasons
        heap = self.activities.heap
        heap_pos = heap.pos
        ctr = self.counters
        bucket = self.metrics.current_bucket()
        level = len(self.trail_lim)

        while self.qhead < len(trail):
            lit = trail[self.qhead]
            self.qhead += 1
            falsified = lit ^ 1
            watch_list = watches[falsified]
            i = 0
            while i < len(watch_list):
                c = watch_list[i]
                lits = c.lits
                if lits[0] == falsified:
                    lits[0], lits[1] = lits[1], lits[0]
                first = lits[0]
                v0 = first >> 1
                val = values[v0]
                fv = -val if (first & 1) else val
                if fv > 0:
                    i += 1
                    continue
                moved = False
                for j in range(2, len(lits)):
                    lj = lits[j]
                    vj = values[lj >> 1]
                    if (-vj if (lj & 1) else vj) >= 0:
                        lits[1], lits[j] = lj, lits[1]
                        watch_list[i] = watch_list[-1]
                        watch_list.pop()
                        watches[lj].append(c)
                        moved = True
                        break
                if moved:
                    continue
                if fv < 0:
                    return c
                values[v0] = -1 if (first & 1) else 1
                levels[v0] = level
                reasons[v0] = c
                trail.append(first)
                if heap_pos[v0] >= 0:
                    heap.remove(v0)
                ctr.propagations += 1
                bucket.propagations += 1
                i += 1
        return None

    # ---- branching -------------------------------------------------------

    def decide(self) -> int:
        """Open a new level on the best unassigned variable.

        Picks the maximum-activity variable (ties to the lowest index)
        with its saved phase, and reports the decision's glue class to
        the metrics collector.
        """
        v = self.activities.heap.pop_max()
        is_glue = self.glue.is_glue_var(v) if self.glue is not None else False
        self.metrics.record_decision(v, is_glue)
        self.counters.decisions += 1
        self.trail_lim.append(len(self.trail))
        lit = 2 * v + (0 if self.phases[v] else 1)
        self._enqueue(lit, None)
        return lit

    def backtrack(self, level: int) -> None:
        """Unassign everything above `level`, newest first.

        Each variable's phase is saved, the glue unassignment hook fires,
        and only then does the variable re-enter the branching heap, so
        the heap orders by post-bump activity.
        """
        assert level < self.current_level
        limit = self.trail_lim[level]
        heap = self.activities.heap
        glue = self.glue
        activities = self.activities
        for idx in range(len(self.trail) - 1, limit - 1, -1):
            lit = self.trail[idx]
            v = lit >> 1
            self.phases[v] = (lit & 1) == 0
            self.values[v] = 0
            self.reasons[v] = None
            if glue is not None:
                glue.on_unassigned(v, activities)
            heap.insert(v)
        del self.trail[limit:]
        del self.trail_lim[level:]
        self.qhead = min(self.qhead, limit)
        self.metrics.on_backtrack(level)

    # ---- conflict analysis -----------------------------------------------

    def analyze_conflict(self, confl: Clause) -> tuple[list[int], int, int]:
        """Derive the first-UIP clause from a conflict.

        Returns (learnt literals, assertion level, lbd). The asserting
        literal is at index 0 and a literal from the assertion level at
        index 1 (the two watch slots). Bumps the activity of every
        variable met during resolution.
        """
        self.counters.conflicts += 1
        current = self.current_level
        levels = self.levels
        seen = bytearray(self.num_vars)
        learnt: list[int] = []
        counter = 0
        p = -1  # no literal resolved on yet
        idx = len(self.trail) - 1

        while True:
            if confl.learnt:
                self._bump_clause_activity(confl)
            for q in confl.lits:
                if q == p:
                    continue
                v = q >> 1
                if not seen[v] and levels[v] > 0:
                    seen[v] = 1
                    self.activities.bump(v)
                    if levels[v] >= current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[idx] >> 1]:
                idx -= 1
            p = self.trail[idx]
            pv = p >> 1
            seen[pv] = 0
            counter -= 1
            idx -= 1
            if counter == 0:
                break
            confl = self.reasons[pv]

        learnt.insert(0, p ^ 1)
        if len(learnt) == 1:
            assertion_level = 0
        else:
            max_i = 1
            for i in range(2, len(learnt)):
                if levels[learnt[i] >> 1] > levels[learnt[max_i] >> 1]:
                    max_i = i
            learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
            assertion_level = levels[learnt[1] >> 1]
        lbd = compute_lbd(learnt, levels, self.values)
        return learnt, assertion_level, lbd

    def _attach_learnt(self, lits: list[int], lbd: int) -> Clause:
        if self.glue is not None:
            is_glue = self.glue.is_glue_lbd(lbd)
        else:
            is_glue = 2 <= lbd <= self.config.glue_lbd_max
        c = Clause(list(lits), learnt=True, lbd=lbd, glue=is_glue)
        self._bump_clause_activity(c)
        self.learnts.append(c)
        if len(lits) >= 2:
            self._watch(c)
        if self.proof is not None:
            self.proof.add(c.to_ints())
        return c

    def _bump_clause_activity(self, c: Clause) -> None:
        c.activity += self.cla_inc
        if c.activity > CLAUSE_ACT_LIMIT:
            for lc in self.learnts:
                lc.activity *= CLAUSE_ACT_RESCALE
            self.cla_inc *= CLAUSE_ACT_RESCALE

    # ---- clause database -------------------------------------------------

    def reduce_db(self) -> int:
        """Delete the worse half of the deletable learnt clauses.

        Clauses with LBD <= 2 (glue and unit) and clauses currently
        serving as reasons are never deleted. The rest are ranked by
        (LBD ascending, activity descending) and the bottom half goes,
        each deletion logged to the proof. Grows the reduction limit.
        """
        locked = {
            id(self.reasons[lit >> 1])
            for lit in self.trail
            if self.reasons[lit >> 1] is not None
        }
        candidates = [c for c in self.learnts if c.lbd > 2 and id(c) not in locked]
        candidates.sort(key=lambda c: (c.lbd, -c.activity))
        doomed = candidates[len(candidates) - len(candidates) // 2 :]
        doomed_ids = {id(c) for c in doomed}
        for c in doomed:
            self._unwatch(c)
            if self.proof is not None:
                self.proof.delete(c.to_ints())
        self.learnts = [c for c in self.learnts if id(c) not in doomed_ids]
        self.learnt_limit += self.config.learnt_limit_growth
        return len(doomed)

    # ---- restarts ----------------------------------------------------------

    def should_restart(self) -> bool:
        bound = self.config.restart_base * luby(self.restarts + 1)
        return self.conflicts_since_restart >= bound

    def _restart(self) -> None:
        self.restarts += 1
        self.conflicts_since_restart = 0
        if self.current_level > 0:
            self.backtrack(0)

    # ---- main loop ---------------------------------------------------------

    def solve(self) -> SolveResult:
        t_start = time.perf_counter()
        cfg = self.config
        verdict = Verdict.UNKNOWN
        model: Optional[list[int]] = None

        if self._root_conflict:
            self.counters.conflicts += 1
            self.metrics.record_conflict(None)
            if self.proof is not None:
                self.proof.add([])
            verdict = Verdict.UNSAT
        else:
            while True:
                confl = self.propagate()
                if confl is not None:
                    self.conflicts_since_restart += 1
                    if self.current_level == 0:
                        self.counters.conflicts += 1
                        self.metrics.record_conflict(None)
                        if self.proof is not None:
                            self.proof.add([])
                        verdict = Verdict.UNSAT
                        break
                    lits, assertion_level, lbd = self.analyze_conflict(confl)
                    self.metrics.record_conflict(lbd)
                    self.backtrack(assertion_level)
                    clause = self._attach_learnt(lits, lbd)
                    if clause.glue:
                        self.counters.glue_clauses += 1
                        if self.glue is not None:
                            self.glue.on_glue_clause_learned(clause)
                    self._enqueue(lits[0], clause)
                    self.activities.decay()
                    self.cla_inc /= CLAUSE_DECAY
                    if (
                        self.num_vars > 0
                        and self.counters.conflicts % GF_SAMPLE_INTERVAL == 0
                    ):
                        gvc = self.glue.glue_var_count if self.glue is not None else 0
                        self.metrics.sample_gf(self.counters.conflicts, gvc / self.num_vars)
                    if self.should_restart():
                        self._restart()
                    if (
                        cfg.max_conflicts is not None
                        and self.counters.conflicts >= cfg.max_conflicts
                    ):
                        break
                    if (
                        cfg.time_limit_s is not None
                        and time.perf_counter() - t_start >= cfg.time_limit_s
                    ):
                        break
                else:
                    if len(self.learnts) > self.learnt_limit:
                        self.reduce_db()
                    if len(self.trail) == self.num_vars:
                        verdict = Verdict.SAT
                        model = [
                            (v + 1) if self.values[v] > 0 else -(v + 1)
                            for v in range(self.num_vars)
                        ]
                        break
                    self.decide()

        if self.proof is not None:
            self.proof.flush()
        glue_vars = self.glue.glue_var_count if self.glue is not None else 0
        report = finalize_report(self.metrics, self.counters, glue_vars, self.num_vars)
        return SolveResult(
            verdict,
            model,
            self.counters,
            report,
            self.restarts,
            time.perf_counter() - t_start,
        )

    # ---- consistency checks (used by the test suite) -----------------------

    def watches_consistent(self) -> bool:
        """Watched-literal invariant: every clause of length >= 2 sits in
        the watch lists of its first two literals, and unless satisfied,
        neither watched literal is false."""
        for c in self.clauses + self.learnts:
            if len(c.lits) < 2:
                continue
            if c not in self.watches[c.lits[0]] or c not in self.watches[c.lits[1]]:
                return False
            if any(self.lit_value(l) > 0 for l in c.lits):
                continue
            if self.lit_value(c.lits[0]) < 0 or self.lit_value(c.lits[1]) < 0:
                return False
        return True


def solve(formula: Formula, config: Optional[SolverConfig] = None, proof=None) -> SolveResult:
    """Convenience wrapper: build a Solver and run it."""
    return Solver(formula, config, proof).solve()

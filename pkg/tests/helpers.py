"""Shared test machinery: instrumented solvers, state fabrication, corpora."""

from __future__ import annotations

from gluesat.formula import Formula
from gluesat.gen import (
    parity_chain,
    parity_contradiction,
    pigeonhole,
    random_ksat,
    unit_chain,
)
from gluesat.solver import Solver


def force_decision(solver: Solver, ext_lit: int) -> int:
    """Open a new decision level on a chosen literal (tests drive the
    trail into known shapes this way)."""
    v = abs(ext_lit) - 1
    lit = 2 * v + (0 if ext_lit > 0 else 1)
    is_glue = solver.glue.is_glue_var(v) if solver.glue is not None else False
    solver.metrics.record_decision(v, is_glue)
    solver.counters.decisions += 1
    solver.trail_lim.append(len(solver.trail))
    solver._enqueue(lit, None)
    return lit


class InstrumentedSolver(Solver):
    """Solver that audits its own invariants while running.

    - checks the watched-literal invariant after every clean propagate()
    - checks that every learnt clause has exactly one literal at the
      conflict level
    - independently recounts reason-bearing assignments and
      analyze_conflict calls
    - remembers the decision literal sequence and deleted clauses' LBDs
    """

    def __init__(self, *args, check_watches: bool = True, **kwargs):
        self.check_watches = check_watches
        self.reason_enqueues = 0
        self.analyze_calls = 0
        self.decision_lits: list[int] = []
        self.deleted_lbds: list[int] = []
        self.learn_events: list[tuple] = []
        super().__init__(*args, **kwargs)

    def _enqueue(self, lit, reason):
        if reason is not None:
            self.reason_enqueues += 1
        super()._enqueue(lit, reason)

    def propagate(self):
        before = len(self.trail)
        confl = super().propagate()
        # every assignment made inside propagate carries a reason
        self.reason_enqueues += len(self.trail) - before
        if confl is None and self.check_watches:
            assert self.watches_consistent(), "watched-literal invariant broken"
        return confl

    def decide(self):
        lit = super().decide()
        self.decision_lits.append(lit)
        return lit

    def analyze_conflict(self, confl):
        conflict_level = self.current_level
        lits, assertion_level, lbd = super().analyze_conflict(confl)
        self.analyze_calls += 1
        at_conflict = [l for l in lits if self.levels[l >> 1] == conflict_level]
        assert len(at_conflict) == 1, "learnt clause is not asserting"
        self.learn_events.append((tuple(lits), assertion_level, lbd, conflict_level))
        return lits, assertion_level, lbd

    def reduce_db(self):
        before = {id(c): c.lbd for c in self.learnts}
        n = super().reduce_db()
        alive = {id(c) for c in self.learnts}
        self.deleted_lbds.extend(
            lbd for cid, lbd in before.items() if cid not in alive
        )
        return n


def attach_activity_log(solver: Solver) -> list[tuple]:
    """Record every activity event for offline replay.

    ("bump", v): conflict-side bump by the current increment.
    ("gbump", v, glue_level, total): bump on backtrack-unassignment.
    ("decay",): per-conflict increment growth.
    """
    log: list[tuple] = []
    table = solver.activities
    tracker = solver.glue
    orig_bump, orig_decay = table.bump, table.decay

    def bump(var, amount=None):
        if amount is None:
            log.append(("bump", var))
        else:
            log.append(("gbump", var, tracker.glue_level[var], tracker.total_glue_level))
        orig_bump(var, amount)

    def decay():
        log.append(("decay",))
        orig_decay()

    table.bump = bump
    table.decay = decay
    return log


def attach_classification_log(solver: Solver) -> list[tuple]:
    """Interleaved log of glue-clause learnings and decision classifications."""
    log: list[tuple] = []
    tracker = solver.glue
    orig_learn = tracker.on_glue_clause_learned

    def learn(clause):
        log.append(("glue_clause", tuple(l >> 1 for l in clause.lits)))
        orig_learn(clause)

    tracker.on_glue_clause_learned = learn
    collector = solver.metrics
    orig_decision = collector.record_decision

    def record_decision(var, is_glue):
        log.append(("decision", var, is_glue))
        orig_decision(var, is_glue)

    collector.record_decision = record_decision
    return log


# ---- corpora ----------------------------------------------------------------


def oracle_corpus() -> list[tuple[str, Formula]]:
    """>= 500 instances, every one with at most 20 variables, suitable
    for exhaustive truth-table checking."""
    instances: list[tuple[str, Formula]] = []
    ratios = [3.0, 3.5, 4.0, 4.26, 4.5, 5.0]
    for n in range(5, 21):
        for r_i, ratio in enumerate(ratios):
            for rep in range(5):
                seed = 10_000 + n * 100 + r_i * 10 + rep
                m = max(1, int(round(n * ratio)))
                instances.append(
                    (f"rand3_n{n}_r{ratio}_{rep}", random_ksat(n, m, seed=seed))
                )
    for holes in range(1, 5):  # up to PHP(5,4): 20 variables
        instances.append((f"php{holes + 1}_{holes}", pigeonhole(holes)))
    for n in range(2, 8):
        instances.append((f"parity{n}_odd", parity_chain(n, odd=True)))
        instances.append((f"parity{n}_even", parity_chain(n, odd=False)))
        instances.append((f"parity{n}_contra", parity_contradiction(n)))
    for n in range(1, 11):
        instances.append((f"chain{n}_sat", unit_chain(n, sat=True)))
        instances.append((f"chain{n}_unsat", unit_chain(n, sat=False)))
    return instances


def known_unsat_corpus() -> list[tuple[str, Formula]]:
    """Crafted instances too large to enumerate but unsatisfiable by
    construction."""
    return [
        ("php6_5", pigeonhole(5)),
        ("parity12_contra", parity_contradiction(12)),
    ]


def directional_corpus() -> list[tuple[str, Formula]]:
    """satlib-style instances at n=100-150 around the 3-SAT phase
    transition, plus crafted ones: big enough runs to accumulate 100+
    decisions in both the glue and nonglue classes."""
    out: list[tuple[str, Formula]] = []
    for n in (100, 125, 150):
        for r_i, ratio in enumerate((4.0, 4.26, 4.4)):
            for rep in range(4):
                seed = 5000 + n * 10 + r_i * 100 + rep
                out.append(
                    (
                        f"dir_n{n}_r{ratio}_{rep}",
                        random_ksat(n, int(n * ratio), seed=seed),
                    )
                )
    out.append(("dir_php7_6", pigeonhole(6)))
    out.append(("dir_php8_7", pigeonhole(7)))
    out.append(("dir_parity20", parity_contradiction(20)))
    out.append(("dir_parity30", parity_contradiction(30)))
    return out

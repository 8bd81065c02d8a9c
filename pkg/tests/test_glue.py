import math
import random

import pytest

from gluesat.activity import ActivityTable
from gluesat.formula import Clause, lit_from_int
from gluesat.gen import pigeonhole, random_ksat
from gluesat.glue import CentralityUndefinedError, GlueTracker
from gluesat.solver import Solver, SolverConfig, Verdict
from helpers import InstrumentedSolver, attach_activity_log, oracle_corpus
from oracles import replay_activity_log


def glue_clause(ext_lits):
    return Clause([lit_from_int(x) for x in ext_lits], learnt=True, lbd=2, glue=True)


# ---- raising glue levels (learning-time hook) --------------------------------


def test_first_glue_clause_raises_levels():
    t = GlueTracker(4)
    t.on_glue_clause_learned(glue_clause([1, -2]))
    assert t.glue_level == [1, 1, 0, 0]
    assert t.total_glue_level == 2
    assert t.glue_var_count == 2
    assert t.glue_clause_count == 1


def test_repeat_variable_accumulates():
    t = GlueTracker(3)
    t.on_glue_clause_learned(glue_clause([1, 2]))
    t.on_glue_clause_learned(glue_clause([1, -3]))
    assert t.glue_level[0] == 2
    assert t.glue_var_count == 3
    assert t.glue_clause_count == 2
    assert t.total_glue_level == 4


def test_duplicate_clause_still_counts():
    t = GlueTracker(2)
    t.on_glue_clause_learned(glue_clause([1, 2]))
    t.on_glue_clause_learned(glue_clause([1, 2]))
    assert t.glue_level == [2, 2]
    assert t.glue_clause_count == 2


def test_non_glue_clause_rejected():
    t = GlueTracker(3)
    with pytest.raises(ValueError, match="not a glue clause"):
        t.on_glue_clause_learned(Clause([0, 2], learnt=True, lbd=3))
    with pytest.raises(ValueError, match="not a glue clause"):
        t.on_glue_clause_learned(Clause([0], learnt=True, lbd=1))
    with pytest.raises(ValueError, match="not a glue clause"):
        t.on_glue_clause_learned(Clause([0, 2], learnt=False, lbd=2))


def test_levels_match_occurrence_recount_over_random_sequence():
    rng = random.Random(123)
    n = 30
    t = GlueTracker(n)
    log = []
    for _ in range(100):
        size = rng.randint(2, 6)
        ext = rng.sample(range(1, n + 1), size)
        ext = [v if rng.random() < 0.5 else -v for v in ext]
        t.on_glue_clause_learned(glue_clause(ext))
        log.append(ext)
    # independent recount straight from the clause log
    counts = [0] * n
    for ext in log:
        for x in ext:
            counts[abs(x) - 1] += 1
    assert t.glue_level == counts
    assert t.total_glue_level == sum(counts)
    assert t.glue_var_count == sum(1 for c in counts if c > 0)


def test_glue_lbd_max_widens_the_band():
    t = GlueTracker(4, glue_lbd_max=3)
    assert t.is_glue_lbd(2) and t.is_glue_lbd(3)
    assert not t.is_glue_lbd(1) and not t.is_glue_lbd(4)
    t.on_glue_clause_learned(Clause([0, 2, 4], learnt=True, lbd=3))
    assert t.glue_clause_count == 1
    with pytest.raises(ValueError):
        GlueTracker(2, glue_lbd_max=1)


# ---- bump on unassignment ------------------------------------------------------


def test_bump_example_three_quarters_centrality():
    t = GlueTracker(2)
    t.glue_level = [3, 1]
    t.total_glue_level = 4
    t.glue_var_count = 2
    table = ActivityTable(2)
    table.activity[0] = 2.0
    t.on_unassigned(0, table)
    assert table.activity[0] == 3.5  # 2.0 + 2.0 * 0.75, exactly


def test_bump_zero_activity_is_identity():
    t = GlueTracker(1)
    t.glue_level = [5]
    t.total_glue_level = 5
    table = ActivityTable(1)
    t.on_unassigned(0, table)
    assert table.activity[0] == 0.0


def test_bump_skips_nonglue_and_disabled():
    t = GlueTracker(2)
    t.glue_level = [2, 0]
    t.total_glue_level = 2
    table = ActivityTable(2)
    table.activity[0] = 1.0
    table.activity[1] = 1.0
    t.on_unassigned(1, table)  # nonglue variable
    assert table.activity[1] == 1.0
    off = GlueTracker(2, bump_enabled=False)
    off.glue_level = [2, 0]
    off.total_glue_level = 2
    off.on_unassigned(0, table)
    assert table.activity[0] == 1.0


def test_bump_leaves_tracker_state_unchanged():
    t = GlueTracker(2)
    t.glue_level = [3, 1]
    t.total_glue_level = 4
    t.glue_var_count = 2
    table = ActivityTable(2)
    table.activity[0] = 1.0
    t.on_unassigned(0, table)
    assert t.glue_level == [3, 1]
    assert t.total_glue_level == 4
    assert t.glue_clause_count == 0


def test_single_bump_form():
    # activity after the hook == activity before * (1 + centrality)
    rng = random.Random(9)
    for _ in range(200):
        n = rng.randint(1, 10)
        t = GlueTracker(n)
        t.glue_level = [rng.randint(0, 5) for _ in range(n)]
        t.total_glue_level = sum(t.glue_level)
        if t.total_glue_level == 0:
            continue
        table = ActivityTable(n)
        v = rng.randrange(n)
        before = rng.uniform(0, 50)
        table.activity[v] = before
        t.on_unassigned(v, table)
        if t.glue_level[v] == 0:
            assert table.activity[v] == before
        else:
            gc = t.glue_level[v] / t.total_glue_level
            assert math.isclose(table.activity[v], before * (1 + gc), rel_tol=1e-12)


def test_scale_equivariance_of_bump():
    rng = random.Random(21)
    for _ in range(100):
        n = rng.randint(1, 8)
        levels = [rng.randint(0, 4) for _ in range(n)]
        if sum(levels) == 0:
            levels[0] = 1
        k = 10 ** rng.uniform(-20, 20)
        v = rng.randrange(n)
        base = rng.uniform(0, 10)

        def bumped(start):
            t = GlueTracker(n)
            t.glue_level = list(levels)
            t.total_glue_level = sum(levels)
            table = ActivityTable(n)
            table.activity[v] = start
            t.on_unassigned(v, table)
            return table.activity[v]

        assert math.isclose(bumped(k * base), k * bumped(base), rel_tol=1e-12)


# ---- centrality -----------------------------------------------------------------


def test_centrality_sole_variable():
    t = GlueTracker(3)
    t.on_glue_clause_learned(glue_clause([2, 3]))
    t2 = GlueTracker(1)
    t2.glue_level = [1]
    t2.total_glue_level = 1
    assert t2.centrality(0) == 1.0


def test_centrality_shares():
    t = GlueTracker(2)
    t.glue_level = [3, 1]
    t.total_glue_level = 4
    assert t.centrality(0) == 0.75
    assert t.centrality(1) == 0.25


def test_centrality_undefined_without_glue_clauses():
    t = GlueTracker(2)
    with pytest.raises(CentralityUndefinedError):
        t.centrality(0)


def test_centrality_normalizes_to_one():
    rng = random.Random(17)
    for _ in range(100):
        n = rng.randint(1, 40)
        t = GlueTracker(n)
        t.glue_level = [rng.randint(0, 9) for _ in range(n)]
        t.total_glue_level = sum(t.glue_level)
        if t.total_glue_level == 0:
            continue
        total = sum(t.centrality(v) for v in range(n) if t.glue_level[v] > 0)
        assert abs(total - 1.0) <= 1e-12


# ---- integration with the solver -------------------------------------------------


def test_glue_membership_is_monotone_during_search():
    f = pigeonhole(5)

    class MembershipAudit(InstrumentedSolver):
        def decide(self):
            lit = super().decide()
            v = lit >> 1
            if self.glue.is_glue_var(v):
                ever_glue.add(v)
            else:
                assert v not in ever_glue, "glue status must never revert"
            return lit

    ever_glue: set = set()
    MembershipAudit(f, SolverConfig(glue_bump=True)).solve()
    assert ever_glue  # the audit actually saw glue decisions


def test_tracker_counts_match_solver_counter():
    for seed in (3, 4):
        f = random_ksat(25, 105, seed=seed)
        s = Solver(f, SolverConfig(glue_bump=True))
        s.solve()
        assert s.glue.glue_clause_count == s.counters.glue_clauses
        assert s.glue.glue_var_count == sum(1 for g in s.glue.glue_level if g > 0)
        assert s.glue.total_glue_level == sum(s.glue.glue_level)


def test_trace_replay_recomputes_final_activities():
    # every bump/decay/unassign-bump event, replayed offline, lands on the
    # same final activity table
    for name, f in [("php", pigeonhole(4)), ("rand", random_ksat(20, 88, seed=2))]:
        s = Solver(f, SolverConfig(glue_bump=True))
        log = attach_activity_log(s)
        s.solve()
        replayed = replay_activity_log(f.num_vars, log, decay=0.95)
        for v in range(f.num_vars):
            assert math.isclose(
                s.activities.activity[v], replayed[v], rel_tol=1e-9, abs_tol=1e-300
            ), (name, v)


def test_gb_off_equals_tracker_absent():
    # a disabled tracker must not perturb the search at all
    for seed in range(4):
        f = random_ksat(22, 95, seed=seed + 11)
        plain = InstrumentedSolver(f, SolverConfig(glue_bump=False))
        r_plain = plain.solve()
        absent = InstrumentedSolver(f, SolverConfig(glue_bump=False), glue_tracker=None)
        r_absent = absent.solve()
        assert r_plain.verdict == r_absent.verdict
        assert r_plain.counters == r_absent.counters
        assert plain.decision_lits == absent.decision_lits
        assert r_plain.restarts == r_absent.restarts


def test_gb_on_changes_nothing_until_glue_exists():
    # pure-propagation instances never learn clauses, so GB is inert
    from gluesat.gen import unit_chain

    f = unit_chain(12)
    on = Solver(f, SolverConfig(glue_bump=True)).solve()
    off = Solver(f, SolverConfig(glue_bump=False)).solve()
    assert on.verdict == off.verdict == Verdict.SAT
    assert on.counters == off.counters


def test_gb_on_and_off_verdicts_agree():
    for name, f in oracle_corpus()[60:100]:
        on = Solver(f, SolverConfig(glue_bump=True)).solve()
        off = Solver(f, SolverConfig(glue_bump=False)).solve()
        assert on.verdict == off.verdict, name

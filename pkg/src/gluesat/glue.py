"""Glue-variable tracking and activity bumping.

A learnt clause whose LBD is 2 is a "glue" clause. Every variable that
has appeared in at least one glue clause so far is a glue variable; its
glue level counts those appearances. A glue variable's centrality is its
glue level divided by the combined glue level of all glue variables.

The bumping scheme is deliberately delayed: glue levels are raised the
moment a glue clause is learnt (before its asserting literal is placed),
but a variable's activity is only bumped when backtracking unassigns it,
right before it re-enters the branching heap. The bump is multiplicative:
activity grows by activity * centrality, i.e. by the factor
(1 + centrality), so it commutes with global rescaling.
"""

from __future__ import annotations

from .activity import ActivityTable
from .formula import Clause, lit_var


class CentralityUndefinedError(ValueError):
    """Centrality is undefined until at least one glue clause is learnt."""


class GlueTracker:
    """Per-variable glue levels and the derived bump-on-unassign hook.

    Tracking is always on (the metrics module classifies decisions with
    it); only the activity bumping is gated by `bump_enabled`. All counts
    are cumulative over a solve and never decrease.
    """

    def __init__(self, num_vars: int, glue_lbd_max: int = 2, bump_enabled: bool = True):
        if glue_lbd_max < 2:
            raise ValueError(f"glue_lbd_max must be >= 2, got {glue_lbd_max}")
        self.glue_lbd_max = glue_lbd_max
        self.bump_enabled = bump_enabled
        self.glue_level = [0] * num_vars
        self.total_glue_level = 0
        self.glue_clause_count = 0
        self.glue_var_count = 0

    def is_glue_lbd(self, lbd: int) -> bool:
        """Whether a learnt clause with this LBD counts as glue.

        Exactly lbd == 2 at the default setting; unit clauses (lbd 1)
        never count.
        """
        return 2 <= lbd <= self.glue_lbd_max

    def is_glue_var(self, var: int) -> bool:
        return self.glue_level[var] > 0

    def on_glue_clause_learned(self, clause: Clause) -> None:
        """Raise the glue level of every variable in a new glue clause.

        Called after the clause is learnt and attached but before the
        asserting literal is assigned, so the levels are current by the
        time that assignment is later undone.
        """
        if not (clause.learnt and self.is_glue_lbd(clause.lbd)):
            raise ValueError(
                f"not a glue clause: learnt={clause.learnt} lbd={clause.lbd}"
            )
        for lit in clause.lits:
            v = lit_var(lit)
            if self.glue_level[v] == 0:
                self.glue_var_count += 1
            self.glue_level[v] += 1
        self.total_glue_level += len(clause.lits)
        self.glue_clause_count += 1

    def on_unassigned(self, var: int, activities: ActivityTable) -> None:
        """Bump a glue variable freed by backtracking.

        No-op for nonglue variables or when bumping is disabled.
        Otherwise adds activity(var) * centrality(var), making the new
        activity equal to the old one times (1 + centrality). Fires
        before the variable re-enters the heap, so the heap orders by
        the bumped score.
        """
        if not self.bump_enabled:
            return
        level = self.glue_level[var]
        if level == 0:
            return
        centrality = level / self.total_glue_level
        bump_factor = activities.activity[var] * centrality
        activities.bump(var, bump_factor)

    def centrality(self, var: int) -> float:
        """This variable's share of the combined glue level, in [0, 1]."""
        if self.total_glue_level == 0:
            raise CentralityUndefinedError("no glue clauses learnt yet")
        return self.glue_level[var] / self.total_glue_level

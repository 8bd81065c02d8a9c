"""Instance generators for the desk corpus.

Competition benchmarks are out of reach here, so tests and the harness
build their own: seeded random k-SAT, pigeonhole principle encodings,
xor (parity) chains, and implication chains with known verdicts.
"""

from __future__ import annotations

import random

from .formula import Formula


def random_ksat(num_vars: int, num_clauses: int, k: int = 3, seed: int = 0) -> Formula:
    """Uniform random k-SAT: each clause picks k distinct variables and
    independent signs."""
    if num_vars < k:
        raise ValueError(f"need at least k={k} variables, got {num_vars}")
    rng = random.Random(seed)
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), k)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return Formula.from_ints(num_vars, clauses)


def pigeonhole(holes: int) -> Formula:
    """holes+1 pigeons into `holes` holes: unsatisfiable for holes >= 1.

    Variable (i, j) -> index (i-1)*holes + j for pigeon i, hole j.
    """
    pigeons = holes + 1

    def var(i: int, j: int) -> int:
        return (i - 1) * holes + j

    clauses = [[var(i, j) for j in range(1, holes + 1)] for i in range(1, pigeons + 1)]
    for j in range(1, holes + 1):
        for i in range(1, pigeons + 1):
            for i2 in range(i + 1, pigeons + 1):
                clauses.append([-var(i, j), -var(i2, j)])
    return Formula.from_ints(pigeons * holes, clauses)


def _xor_chain(clauses: list[list[int]], xs: list[int], ts: list[int]) -> None:
    """ts[i] <-> xs[0] ^ ... ^ xs[i], with ts[0] aliased to xs[0]."""
    prev = xs[0]
    for x, t in zip(xs[1:], ts):
        # t <-> prev ^ x
        clauses += [[-t, prev, x], [-t, -prev, -x], [t, -prev, x], [t, prev, -x]]
        prev = t


def parity_chain(n: int, odd: bool = True) -> Formula:
    """x1 ^ ... ^ xn == odd, Tseitin-encoded; always satisfiable.

    Uses n input variables and n-1 chain variables.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    xs = list(range(1, n + 1))
    ts = list(range(n + 1, 2 * n))
    clauses: list[list[int]] = []
    _xor_chain(clauses, xs, ts)
    clauses.append([ts[-1] if odd else -ts[-1]])
    return Formula.from_ints(2 * n - 1, clauses)


def parity_contradiction(n: int) -> Formula:
    """Two chains forcing opposite parities of the same inputs: unsatisfiable.

    n inputs plus two sets of n-1 chain variables.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    xs = list(range(1, n + 1))
    ts = list(range(n + 1, 2 * n))
    us = list(range(2 * n, 3 * n - 1))
    clauses: list[list[int]] = []
    _xor_chain(clauses, xs, ts)
    _xor_chain(clauses, xs, us)
    clauses.append([ts[-1]])
    clauses.append([-us[-1]])
    return Formula.from_ints(3 * n - 1, clauses)


def unit_chain(n: int, sat: bool = True) -> Formula:
    """x1 and a chain of implications x_i -> x_{i+1}; the unsat variant
    also asserts -x_n. Pure unit propagation either way."""
    clauses: list[list[int]] = [[1]]
    for i in range(1, n):
        clauses.append([-i, i + 1])
    if not sat:
        clauses.append([-n])
    return Formula.from_ints(n, clauses)

"""Command-line solver for a single DIMACS instance.

Prints SAT-competition style output ("s SATISFIABLE" plus "v" model
lines, "s UNSATISFIABLE", or "s UNKNOWN") and exits 10 / 20 / 0
respectively; input or parse failures exit 1.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Optional

from .formula import DimacsError, parse_dimacs
from .metrics import STATS_CSV_HEADER
from .proof import ProofWriter
from .solver import Solver, SolverConfig, Verdict

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_UNKNOWN = 0
EXIT_ERROR = 1


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gluesat",
        description="CDCL SAT solver with optional glue-variable activity bumping",
    )
    ap.add_argument("cnf", help="path to a DIMACS CNF file")
    ap.add_argument(
        "--glue-bump",
        choices=["on", "off"],
        default="off",
        help="bump glue-variable activities on backtrack (default: off)",
    )
    ap.add_argument("--timeout", type=float, default=None, metavar="S",
                    help="wall-clock budget in seconds (checked between conflicts)")
    ap.add_argument("--max-conflicts", type=int, default=None, metavar="N",
                    help="conflict budget; exceeding it yields UNKNOWN")
    ap.add_argument("--seed", type=int, default=0, metavar="N",
                    help="recorded in outputs; the solver is deterministic")
    ap.add_argument("--proof", metavar="PATH", default=None,
                    help="write a DRAT proof stream to PATH")
    ap.add_argument("--stats-csv", metavar="PATH", default=None,
                    help="append-free per-instance statistics CSV")
    return ap


def config_from_args(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(
        glue_bump=args.glue_bump == "on",
        seed=args.seed,
        max_conflicts=args.max_conflicts,
        time_limit_s=args.timeout,
    )


def write_stats_csv(path: str, instance: str, verdict: str, wall: float, report) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(STATS_CSV_HEADER)
        w.writerow(report.csv_row(instance, verdict, wall))


def print_model(model: list[int], out=sys.stdout, width: int = 20) -> None:
    lits = model + [0]
    for i in range(0, len(lits), width):
        print("v " + " ".join(str(x) for x in lits[i : i + width]), file=out)


def run_single(argv: Optional[list[str]] = None, out=sys.stdout, err=sys.stderr) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        with open(args.cnf, "rb") as fh:
            formula = parse_dimacs(fh)
    except (OSError, DimacsError) as e:
        print(f"error: {e}", file=err)
        return EXIT_ERROR

    proof_fh = None
    proof = None
    if args.proof:
        try:
            proof_fh = open(args.proof, "w")
        except OSError as e:
            print(f"error: {e}", file=err)
            return EXIT_ERROR
        proof = ProofWriter(proof_fh)

    try:
        result = Solver(formula, config_from_args(args), proof=proof).solve()
    finally:
        if proof_fh is not None:
            proof_fh.close()

    c = result.counters
    print(f"c variables {formula.num_vars} clauses {len(formula.clauses)}", file=out)
    print(
        f"c decisions {c.decisions} propagations {c.propagations} "
        f"conflicts {c.conflicts} glue-clauses {c.glue_clauses} "
        f"restarts {result.restarts}",
        file=out,
    )
    r = result.report
    if r.gf is not None:
        print(f"c glue-vars {r.glue_var_count} gf {r.gf:.4f}", file=out)
    print(f"c time {result.elapsed_s:.3f} s", file=out)
    print(f"s {result.verdict.value}", file=out)
    if result.verdict is Verdict.SAT:
        print_model(result.model, out=out)

    if args.stats_csv:
        write_stats_csv(
            args.stats_csv, args.cnf, result.verdict.value, result.elapsed_s, r
        )

    if result.verdict is Verdict.SAT:
        return EXIT_SAT
    if result.verdict is Verdict.UNSAT:
        return EXIT_UNSAT
    return EXIT_UNKNOWN


def main(argv: Optional[list[str]] = None) -> None:
    sys.exit(run_single(argv))


if __name__ == "__main__":
    main()

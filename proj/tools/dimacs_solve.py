#!/usr/bin/env python3
"""Solve a DIMACS CNF file with a PySAT backend, speaking the usual solver
protocol: an "s" status line, "v" model lines, exit code 10 (SAT) or 20 (UNSAT).

    dimacs_solve.py [--solver NAME] FILE.cnf
"""

import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Solver, SolverNames


def main(argv):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--solver", default="kissat404",
                        help="PySAT backend (default: kissat404)")
    parser.add_argument("cnf", help="DIMACS CNF file")
    args = parser.parse_args(argv)

    if args.solver not in vars(SolverNames):
        parser.error(f"unknown backend {args.solver!r}")

    formula = CNF(from_file=args.cnf)
    with Solver(name=args.solver, bootstrap_with=formula.clauses) as solver:
        sat = solver.solve()
        if not sat:
            print("s UNSATISFIABLE", flush=True)
            return 20
        model = solver.get_model() or []

    print("s SATISFIABLE")
    line = "v"
    for lit in model:
        piece = f" {lit}"
        if len(line) + len(piece) > 78:
            print(line)
            line = "v"
        line += piece
    print(line + " 0", flush=True)
    return 10


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

#!/usr/bin/env python3
"""Solve an LP-format model file with SciPy's HiGHS backend.

Usage:
    highs_solve.py MODEL.lp OUTPUT.sol [--time-limit SECONDS] [--mip-rel-gap G]

Reads the canonical LP subset emitted by the cid tool chain (Minimize /
Subject To / Bounds / Binaries / End) and writes the solution-file grammar it
consumes ("=status=", "=obj=", "=bound=", then one "name value" per line).
Any solver honoring that grammar can replace this script via --solver-cmd.
"""

import argparse
import sys

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp


def parse_lp(path):
    var_index = {}
    var_names = []
    lb, ub, integrality, objective = [], [], [], []
    rows = []  # (terms, sense, rhs)

    def var_of(name):
        if name not in var_index:
            var_index[name] = len(var_names)
            var_names.append(name)
            lb.append(0.0)
            ub.append(0.0)
            integrality.append(0)
            objective.append(0.0)
        return var_index[name]

    def parse_terms(tokens):
        terms = []
        sign = 1.0
        i = 0
        while i < len(tokens):
            if tokens[i] == "+":
                sign = 1.0
                i += 1
            elif tokens[i] == "-":
                sign = -1.0
                i += 1
            coeff = float(tokens[i])
            terms.append((var_of(tokens[i + 1]), sign * coeff))
            sign = 1.0
            i += 2
        return terms

    section = None
    with open(path) as handle:
        for raw in handle:
            tokens = raw.split()
            if not tokens:
                continue
            head = tokens[0]
            if head == "Minimize":
                section = "obj"
                continue
            if head == "Subject" and len(tokens) > 1 and tokens[1] == "To":
                section = "rows"
                continue
            if head in ("Bounds", "Binaries", "End"):
                section = head.lower()
                continue
            if section == "obj":
                for idx, coeff in parse_terms(tokens[1:]):
                    objective[idx] += coeff
            elif section == "rows":
                name = tokens[0].rstrip(":")
                del name  # labels are not needed for solving
                for pos, tok in enumerate(tokens):
                    if tok in ("<=", ">=", "="):
                        sense, rhs = tok, float(tokens[pos + 1])
                        terms = parse_terms(tokens[1:pos])
                        rows.append((terms, sense, rhs))
                        break
            elif section == "bounds":
                # lb <= name <= ub
                idx = var_of(tokens[2])
                lb[idx] = float(tokens[0])
                ub[idx] = float(tokens[4])
            elif section == "binaries":
                for name in tokens:
                    integrality[var_of(name)] = 1

    return var_names, np.array(objective), np.array(lb), np.array(ub), np.array(integrality), rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("model")
    ap.add_argument("output")
    ap.add_argument("--time-limit", type=float, default=600.0)
    ap.add_argument("--mip-rel-gap", type=float, default=0.01)
    args = ap.parse_args()

    names, c, lb, ub, integrality, rows = parse_lp(args.model)
    n = len(names)

    data, ri, ci = [], [], []
    row_lb, row_ub = [], []
    for r, (terms, sense, rhs) in enumerate(rows):
        for idx, coeff in terms:
            ri.append(r)
            ci.append(idx)
            data.append(coeff)
        if sense == "<=":
            row_lb.append(-np.inf)
            row_ub.append(rhs)
        elif sense == ">=":
            row_lb.append(rhs)
            row_ub.append(np.inf)
        else:
            row_lb.append(rhs)
            row_ub.append(rhs)

    a = sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n))
    res = milp(
        c=c,
        constraints=LinearConstraint(a, np.array(row_lb), np.array(row_ub)),
        integrality=integrality,
        bounds=Bounds(lb, ub),
        options={"time_limit": args.time_limit, "mip_rel_gap": args.mip_rel_gap,
                 "disp": False},
    )

    with open(args.output, "w") as out:
        if res.status == 2:
            out.write("=status= infeasible\n")
            return 0
        if res.status == 3:
            out.write("=status= unbounded\n")
            return 0
        if res.x is None:
            out.write("=status= timelimit\n")
            return 0
        if res.status == 0:
            out.write("=status= optimal\n")
        elif res.status == 1:
            out.write("=status= timelimit\n")
        else:
            out.write("=status= feasible\n")
        out.write(f"=obj= {res.fun:.12g}\n")
        bound = getattr(res, "mip_dual_bound", None)
        if bound is not None and np.isfinite(bound):
            out.write(f"=bound= {bound:.12g}\n")
        for name, value in zip(names, res.x):
            out.write(f"{name} {value:.12g}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

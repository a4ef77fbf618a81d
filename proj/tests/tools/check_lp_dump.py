#!/usr/bin/env python3
# Copyright 2026 The treefit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent checker for LP dumps written by `treefit --dump-lp`.

The dump must carry a solution block. The checker

  * evaluates every listed row, bound and the objective at the solution,
  * rebuilds the triangle and level-monotonicity inequalities from the
    variable names alone and checks them too, so a dump that silently drops
    rows is still caught,
  * with --solve, re-solves the listed program with scipy's HiGHS backend and
    compares optimal values.

Exit status is 0 when every check passes and 1 otherwise.
"""

import argparse
import itertools
import re
import sys

TERM = re.compile(r"([+-]?)\s*(\d[\d.eE+-]*)?\s*(x_\d+_\d+_\d+)")
VAR = re.compile(r"x_(\d+)_(\d+)_(\d+)$")


def parse_linear(text):
    """Parses 'c + 2 x_1_0_1 - x_1_0_2' into (constant, {var: coef})."""
    coefs = {}
    const = 0.0
    text = text.strip()
    # A leading bare number is the constant of the objective.
    m = re.match(r"^(-?\d[\d.eE+-]*)(?=\s|$)", text)
    if m:
        const = float(m.group(1))
        text = text[m.end():]
    pos = 0
    for t in TERM.finditer(text):
        if text[pos:t.start()].strip():
            raise ValueError("unparsed text: %r" % text[pos:t.start()])
        sign = -1.0 if t.group(1) == "-" else 1.0
        c = float(t.group(2)) if t.group(2) else 1.0
        coefs[t.group(3)] = coefs.get(t.group(3), 0.0) + sign * c
        pos = t.end()
    if text[pos:].strip():
        raise ValueError("unparsed text: %r" % text[pos:])
    return const, coefs


def parse_dump(path):
    section = None
    obj = None
    rows = []
    bounds = {}
    solution = {}
    stated = None
    with open(path, encoding="utf-8") as f:
        for raw in f:
            line = raw.rstrip("\n")
            if line.startswith("\\"):
                continue
            head = line.strip()
            if head in ("minimize", "subject to", "bounds", "solution"):
                section = head
                continue
            if head == "end":
                section = None
                continue
            if not head:
                continue
            if section == "minimize":
                name, expr = head.split(":", 1)
                obj = parse_linear(expr)
            elif section == "subject to":
                name, expr = head.split(":", 1)
                lhs, rhs = expr.split("<=")
                const, coefs = parse_linear(lhs)
                if const:
                    raise ValueError("row %s has a constant on the left" % name)
                rows.append((name.strip(), coefs, float(rhs)))
            elif section == "bounds":
                lo, var, hi = [p.strip() for p in head.split("<=")]
                bounds[var] = (float(lo), float(hi))
            elif section == "solution":
                key, value = [p.strip() for p in head.split("=")]
                if key == "objective":
                    stated = float(value)
                else:
                    solution[key] = float(value)
            else:
                raise ValueError("line outside any section: %r" % line)
    if obj is None:
        raise ValueError("no objective")
    return obj, rows, bounds, solution, stated


def structural_rows(variables):
    """Triangle and monotone rows implied by the variable names."""
    idx = {}
    for v in variables:
        m = VAR.match(v)
        if not m:
            raise ValueError("unexpected variable name %r" % v)
        t, i, j = map(int, m.groups())
        idx[(t, i, j)] = v
    levels = sorted({k[0] for k in idx})
    points = sorted({k[1] for k in idx} | {k[2] for k in idx})

    def name(t, a, b):
        return idx[(t, min(a, b), max(a, b))]

    out = []
    for t in levels:
        for a, b, c in itertools.combinations(points, 3):
            for far, p, q in ((name(t, a, c), name(t, a, b), name(t, b, c)),
                              (name(t, a, b), name(t, a, c), name(t, b, c)),
                              (name(t, b, c), name(t, a, b), name(t, a, c))):
                out.append({far: 1.0, p: -1.0, q: -1.0})
    for t in levels[:-1]:
        for a, b in itertools.combinations(points, 2):
            # x at level t+1 never exceeds x at level t.
            out.append({name(t + 1, a, b): 1.0, name(t, a, b): -1.0})
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dump")
    ap.add_argument("--tol", type=float, default=1e-7)
    ap.add_argument("--solve", action="store_true",
                    help="re-solve with scipy and compare optimal values")
    args = ap.parse_args()

    (const, cost), rows, bounds, x, stated = parse_dump(args.dump)
    variables = sorted(bounds)
    problems = []
    if not x:
        problems.append("dump has no solution block")
    if set(x) != set(bounds):
        problems.append("solution and bounds list different variables")
    if set(cost) - set(bounds):
        problems.append("objective uses undeclared variables")

    def lhs(coefs):
        return sum(c * x.get(v, 0.0) for v, c in coefs.items())

    worst = 0.0
    for name, coefs, rhs in rows:
        worst = max(worst, lhs(coefs) - rhs)
    for v, (lo, hi) in bounds.items():
        worst = max(worst, lo - x.get(v, 0.0), x.get(v, 0.0) - hi)
    structural = 0.0
    for coefs in structural_rows(variables):
        structural = max(structural, lhs(coefs))
    if worst > args.tol:
        problems.append("listed rows violated by %.3g" % worst)
    if structural > args.tol:
        problems.append("triangle/monotone rows violated by %.3g" % structural)

    value = const + lhs(cost)
    if stated is None or abs(value - stated) > 1e-6 * max(1.0, abs(value)):
        problems.append("objective mismatch: stated %s, recomputed %.12g" %
                        (stated, value))

    n_struct = len(structural_rows(variables))
    if len(rows) != n_struct:
        problems.append("dump lists %d rows, structure implies %d" %
                        (len(rows), n_struct))

    if args.solve and not problems:
        import numpy as np
        from scipy.optimize import linprog

        pos = {v: k for k, v in enumerate(variables)}
        c = np.zeros(len(variables))
        for v, a in cost.items():
            c[pos[v]] = a
        a_ub = np.zeros((len(rows), len(variables)))
        b_ub = np.zeros(len(rows))
        for r, (_, coefs, rhs) in enumerate(rows):
            for v, a in coefs.items():
                a_ub[r, pos[v]] = a
            b_ub[r] = rhs
        res = linprog(c, A_ub=a_ub if len(rows) else None,
                      b_ub=b_ub if len(rows) else None,
                      bounds=[bounds[v] for v in variables], method="highs")
        if res.status != 0:
            problems.append("reference solver failed: %s" % res.message)
        elif abs(res.fun + const - value) > 1e-6 * max(1.0, abs(value)):
            problems.append("not optimal: reference %.12g, dump %.12g" %
                            (res.fun + const, value))

    if problems:
        for p in problems:
            print("FAIL: " + p)
        return 1
    print("OK: %d variables, %d rows, objective %.12g, max violation %.3g" %
          (len(variables), len(rows), value, max(worst, structural)))
    return 0


if __name__ == "__main__":
    sys.exit(main())

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
"""End-to-end checks of the treefit command line.

usage: cli_checks.py TREEFIT_BINARY DATA_DIR CHECK_LP_DUMP_SCRIPT
"""

import json
import os
import subprocess
import sys
import tempfile

BIN, DATA, CHECKER = sys.argv[1:4]
failures = []


def run(*args, expect=0):
    p = subprocess.run([BIN, *args], capture_output=True, text=True)
    if p.returncode != expect:
        failures.append("%s: exit %d, expected %d\n%s" %
                        (" ".join(args), p.returncode, expect, p.stderr))
    return p


def check(cond, what):
    print(("PASS " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def data(name):
    return os.path.join(DATA, name)


with tempfile.TemporaryDirectory() as tmp:
    def out(name):
        return os.path.join(tmp, name)

    # Report schema and the LP sandwich on the 1-2-3 triangle.
    run("fit", "ultrametric", data("fixture123.csv"), "--json-out", out("r.json"))
    with open(out("r.json")) as f:
        r = json.load(f)
    check(list(r) == ["n", "mode", "l1_error", "lp_lower_bound", "num_levels",
                      "ratio_to_lp", "tree_newick", "wall_ms"],
          "report keys in schema order")
    check(r["l1_error"] >= r["lp_lower_bound"], "l1_error >= lp_lower_bound")
    check(r["n"] == 3 and r["mode"] == "ultrametric", "report n and mode")

    # Byte-identical reports for fixed seeds.
    for mode in ("ultrametric", "tree"):
        blobs = []
        for k in range(2):
            path = out("det_%s_%d.json" % (mode, k))
            run("--seed", "7", "--omit-timing", "fit", mode, data("noisy8.csv"),
                "--json-out", path, "-q")
            with open(path, "rb") as f:
                blobs.append(f.read())
        check(blobs[0] == blobs[1], "byte-identical %s report" % mode)

    # Golden Newick.
    run("fit", "ultrametric", data("abc.csv"), "--newick-out", out("abc.nwk"), "-q")
    with open(out("abc.nwk")) as f, open(data("abc.golden.nwk")) as g:
        check(f.read().strip() == g.read().strip(), "golden Newick for abc")

    # eval reproduces the reported error.
    for mode in ("ultrametric", "tree"):
        nwk, rep = out("e_%s.nwk" % mode), out("e_%s.json" % mode)
        run("fit", mode, data("noisy8.csv"), "--newick-out", nwk,
            "--json-out", rep, "-q")
        run("eval", nwk, data("noisy8.csv"), "--json-out", out("ev.json"), "-q")
        with open(rep) as f, open(out("ev.json")) as g:
            fitted, ev = json.load(f), json.load(g)
        check(abs(fitted["l1_error"] - ev["l1_error"]) <= 1e-9,
              "eval matches %s l1_error" % mode)

    # PHYLIP and CSV inputs give the same report.
    a = run("--omit-timing", "fit", "ultrametric", data("fixture123.csv"),
            "--json-out", "-", "-q").stdout
    b = run("--omit-timing", "fit", "ultrametric", data("fixture123.phy"),
            "--json-out", "-", "-q").stdout
    check(a == b and a != "", "CSV and PHYLIP reports agree")

    # LP dumps pass the independent checker, with a re-solve.
    run("fit", "ultrametric", data("noisy8.csv"), "--dump-lp", out("lp.txt"), "-q")
    p = subprocess.run([sys.executable, CHECKER, "--solve", out("lp.txt")],
                       capture_output=True, text=True)
    print(p.stdout.strip())
    check(p.returncode == 0, "LP dump accepted by checker")

    # Other subcommands.
    c = json.loads(run("corrclust", data("noisy8.csv"), "--exact",
                       "--json-out", "-", "-q").stdout)
    o = json.loads(run("oracle", "corrclust", data("noisy8.csv"),
                       "--json-out", "-", "-q").stdout)
    check(c["cost"] == o["cost"], "corrclust --exact equals oracle corrclust")
    s = json.loads(run("corrclust", data("noisy8.csv"),
                       "--json-out", "-", "-q").stdout)
    check(s["cost"] >= o["cost"], "pivot sweep cost >= exact optimum")
    u = json.loads(run("oracle", "ultrametric", data("noisy8.csv"),
                       "--json-out", "-", "-q", expect=2).stdout or "null")
    check(u is None, "oracle ultrametric refuses 8 labels")
    h = json.loads(run("oracle", "hca", data("fixture123.csv"),
                       "--json-out", "-", "-q").stdout)
    check(h["lp_lower_bound"] <= h["exact_cost"] + 1e-9 <= h["algorithm_cost"] + 2e-9,
          "oracle hca sandwich")

    # Exit codes.
    for expect, args in (
            (1, []),
            (1, ["fit", "tree", data("abc.csv"), "--pivot", "a", "--all-pivots"]),
            (1, ["fit", "tree", data("abc.csv"), "--pivot", "zz"]),
            (1, ["--lp-tol", "abc", "fit", "ultrametric", data("abc.csv")]),
            (2, ["fit", "ultrametric", data("zero_offdiag.csv")]),
            (2, ["fit", "ultrametric", data("missing.csv")]),
            (0, ["fit", "tree", data("abc.csv"), "--pivot", "b", "-q"])):
        got = subprocess.run([BIN, *args], capture_output=True).returncode
        check(got == expect, "exit %d for: %s" % (expect, " ".join(args[:2]) +
                                                  (" ..." if len(args) > 2 else "")))

if failures:
    print("\n".join(["", "failures:"] + failures))
    sys.exit(1)
print("all CLI checks passed")

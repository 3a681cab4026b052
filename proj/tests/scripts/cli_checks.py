#!/usr/bin/env python3
"""End-to-end checks of the monoea command line.

Usage: cli_checks.py MONOEA_BINARY WORK_DIR
"""

import json
import os
import shutil
import subprocess
import sys

BIN = sys.argv[1]
WORK = sys.argv[2]
failures = []


def run(*args, expect=0):
    p = subprocess.run([BIN, *args], capture_output=True, text=True)
    if p.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {p.returncode}, expected {expect}\n{p.stderr}")
    return p


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def write_config(name, cfg):
    path = os.path.join(WORK, name)
    with open(path, "w") as f:
        json.dump(cfg, f)
    return path


shutil.rmtree(WORK, ignore_errors=True)
os.makedirs(WORK)

# constants
a = run("constants")
b = run("constants")
c = json.loads(a.stdout)
check(abs(c["alpha0"] - 0.237134) <= 1e-4 and abs(c["c0"] - 2.136924) <= 1e-4, "constants within 1e-4")
check(a.stdout == b.stdout, "constants output is identical across invocations")
check(a.stdout.strip() == '{"alpha0": %.6f, "c0": %.6f}' % (c["alpha0"], c["c0"]), "constants printed to 6 decimals")
csv = run("--format", "csv", "constants").stdout.splitlines()
check(csv[0] == "alpha0,c0" and len(csv) == 2, "constants CSV")

# predict
check(json.loads(run("predict", "--dist", "point:k=1").stdout)["classification"] == "Efficient", "point:k=1 is Efficient")
r = json.loads(run("predict", "--dist", "poisson:c=4").stdout)
check(r["classification"] == "Hard" and r["witness_alpha"] is not None and r["sup_phi"] >= 1, "poisson:c=4 is Hard with witness")
r = json.loads(run("predict", "--dist", "zipf:kappa=1.5").stdout)
check(r["flags"]["power_law_exponent_in_1_2"], "zipf:kappa=1.5 sets the power-law flag")
run("predict", "--dist", "poisson", expect=2)
run("predict", "--dist", "poisson:c=-1", expect=2)
run("predict", "--dist", "nosuch:c=1", expect=2)
out = os.path.join(WORK, "predict")
p = run("--out", out, "predict", "--dist", "poisson:c=1", "--grid-step", "0.01")
with open(os.path.join(out, "phi.csv")) as f:
    lines = f.read().splitlines()
check(lines[0] == "alpha,phi" and len(lines) == 100, "phi.csv schema and uniform grid size")
check(p.stdout.strip() == "Efficient", "poisson:c=1 is Efficient")

# run
base = {
    "function": {"type": "onemax", "n": 64},
    "algorithm": {"variant": "MuPlusOneEA", "mu": 3},
    "budget": 3,
    "runs": 1,
    "seed": 9,
}
cfg = write_config("budget_mu.json", base)
lines = run("--format", "csv", "run", "--config", cfg).stdout.splitlines()
check(bool(lines) and lines[0] == "run,evaluations,fitness,ones_fraction,level", "trajectory header")
check(len(lines) == 2, f"runs=1, budget=mu gives one data row (got {len(lines) - 1})")

ht = {
    "function": {"type": "hottopic", "n": 500, "seed": 3, "alpha": 0.25, "beta": 0.05, "eps": 0.05, "levels": 10},
    "algorithm": {"variant": "OnePlusLambdaEA", "c": 1.0},
    "budget": 20000,
    "runs": 6,
    "seed": 4,
    "sample_every": 500,
}
cfg = write_config("hottopic.json", ht)
d1, d2, d3 = (os.path.join(WORK, f"run{i}") for i in (1, 2, 3))
run("--out", d1, "run", "--config", cfg)
run("--out", d2, "run", "--config", cfg)
run("--out", d3, "--threads", "3", "run", "--config", cfg)
read = lambda d, f: open(os.path.join(d, f), "rb").read()
check(read(d1, "trajectories.csv") == read(d2, "trajectories.csv"), "same config twice gives byte-identical CSV")
check(read(d1, "trajectories.csv") == read(d3, "trajectories.csv"), "thread count does not change the CSV")
s1 = json.loads(read(d1, "summary.json"))
for key in ("config_echo", "checkpoints", "max_level_per_run", "runs_reaching_max_level", "mean_runtime"):
    check(key in s1, f"summary has key {key}")
s_seed = json.loads(run("--seed", "5", "run", "--config", cfg).stdout)
check(s_seed["config_echo"]["seed"] == 5, "--seed overrides the base seed")

# config and I/O errors
run("run", "--config", write_config("unknown.json", {**base, "colour": 1}), expect=2)
bad = dict(base, algorithm={"variant": "OnePlusLambdaEA", "c": 0})
run("run", "--config", write_config("bad_c.json", bad), expect=2)
run("run", "--config", write_config("no_runs.json", dict(base, runs=0)), expect=2)
with open(os.path.join(WORK, "malformed.json"), "w") as f:
    f.write("{ not json")
run("run", "--config", os.path.join(WORK, "malformed.json"), expect=2)
run("run", "--config", os.path.join(WORK, "missing.json"), expect=3)
blocker = os.path.join(WORK, "blocker")
open(blocker, "w").close()
p = run("--out", os.path.join(blocker, "sub"), "run", "--config", cfg, expect=3)
check("blocker" in p.stderr, "I/O error names the path")
run("--format", "xml", "constants", expect=2)
run("nosuchcommand", expect=2)

# footnote preset
s = json.loads(run("footnote", "--c", "0.9", "--runs", "2").stdout)
check([c["evaluations"] for c in s["checkpoints"]] == [100000, 200000, 500000], "footnote checkpoints")
check(all(c["ones_mean"] > 0.9 for c in s["checkpoints"]) and len(s["max_level_per_run"]) == 2, "footnote summary populated")

# scaling
tmpl = write_config("scaling.json", {"function": {"type": "onemax", "n": 2}, "algorithm": {"variant": "RLS"},
                                     "budget": 1, "runs": 10, "seed": 1})
p = run("--format", "csv", "scaling", "--config", tmpl, "--n", "64,128", "--budget-factor", "20")
rows = p.stdout.splitlines()
check(rows[0] == "n,runs,terminated,mean_runtime,ratio" and len(rows) == 3, "scaling CSV")
check(all(r.split(",")[2] == "10" for r in rows[1:]), "scaling runs terminate")
p = run("scaling", "--config", tmpl, "--n", "256", "--budget-factor", "0.1")
check("warning" in p.stderr, "scaling warns on non-termination")
run("scaling", "--config", tmpl, "--n", "64,x", expect=2)

if failures:
    print(f"\n{len(failures)} failure(s):")
    for f in failures:
        print(" -", f)
    sys.exit(1)
print("all CLI checks passed")

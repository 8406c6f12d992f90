#!/usr/bin/env python3
"""End-to-end checks of the siegel command line tool."""
import json
import os
import subprocess
import sys
import tempfile
from fractions import Fraction

BIN = sys.argv[1]
WORKED = "[[2,1,1,0,1,2],[1,4,2,2,0,1],[1,2,4,2,0,0],[0,2,2,4,2,2],[1,0,0,2,4,2],[2,1,0,2,2,8]]"
WORKED_A = "9780154654408147370255260881715200/13912726954911229324966739363569"
A3 = "[[2,1,1],[1,2,1],[1,1,2]]"

failures = []


def run(*args, stdin=None, env=None):
    p = subprocess.run([BIN, *args], input=stdin, capture_output=True, text=True, env=env)
    return p.returncode, p.stdout, p.stderr


def check(cond, what):
    print(("ok    " if cond else "FAIL  ") + what)
    if not cond:
        failures.append(what)


def exact(s):
    """Exact rational text must parse and print back identically."""
    return str(Fraction(s)) == s


code, out, _ = run("genus", "--matrix", WORKED)
g = json.loads(out)
check(code == 0 and g["symbol"] == "4^{-2}_4 3^{-1}" and g["det2t"] == "48", "genus of the worked example")

with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as f:
    f.write(WORKED + "\n")
    path = f.name
code, out, _ = run("fp", "--matrix", path)
fp = {e["p"]: e["coefficients"] for e in json.loads(out)["F"]}
check(code == 0 and fp == {2: ["1", "24", "256", "3072", "16384"], 3: ["1"]}, "fp from a matrix file")
os.unlink(path)

code, out, _ = run("eiscoef", "--k", "16", "--matrix", "-", stdin=WORKED)
v = json.loads(out)["value"]
check(code == 0 and v == WORKED_A and exact(v), "eiscoef from stdin, exact round trip")

code, out, _ = run("eiscoef", "--k", "16", "--symbol", "4^{-2}_4 3^{-1}", "--det", "48", "--rank", "6", "--format", "text")
check(code == 0 and out.strip() == WORKED_A, "eiscoef from a symbol")

with tempfile.TemporaryDirectory() as cache:
    r1 = run("pullback", "--k", "12", "--matrix", A3, "--matrix", A3, "--cache", cache)
    r2 = run("pullback", "--k", "12", "--matrix", A3, "--matrix", A3, "--cache", cache, "--workers", "2")
    r3 = run("pullback", "--k", "12", "--matrix", A3, "--matrix", A3)
    vals = [json.loads(r[1]) for r in (r1, r2, r3)]
    check(all(r[0] == 0 for r in (r1, r2, r3)), "pullback runs")
    check(vals[0] == vals[1] == vals[2] and exact(vals[0]["value"]), "pullback identical with cache, workers and no cache")
    check("0 misses" in r2[2], "second pullback run is served from the cache")
    part = run("pullback", "--k", "12", "--matrix", A3, "--matrix", A3, "--cache", cache,
               "--checkpoint", "a3", "--slices", "4", "--max-slices", "1")
    check(json.loads(part[1])["complete"] is False, "checkpointed run stops early")
    rest = run("pullback", "--k", "12", "--matrix", A3, "--matrix", A3, "--cache", cache,
               "--checkpoint", "a3", "--slices", "4", "--workers", "2")
    done = json.loads(rest[1])
    check(done["complete"] and done["value"] == vals[0]["value"] and done["count"] == vals[0]["count"],
          "resumed run matches the direct sum")
    env = dict(os.environ, SIEGEL_CACHE=cache)
    code, out, err = run("eiscoef", "--k", "12", "--matrix", A3, env=env)
    check(code == 0 and cache in err, "cache directory from the environment")

code, out, _ = run("basis", "--n", "1", "--k", "24")
b = json.loads(out)
check(code == 0 and b["dim_M"] == 3 and b["dim_S"] == 2, "basis in degree one")
check(all(exact(x) for f in b["cusp_basis"] for vals in f["values"] for x in vals), "basis values are exact")

code, out, _ = run("eigen", "--n", "2", "--k", "10")
e = json.loads(out)
check(code == 0 and e["eigenforms"][0]["lambda_T"] == ["240"] and e["eigenforms"][0]["field"] is None, "chi_10 eigenvalue")

code, out, _ = run("euler", "--n", "2", "--k", "10", "--kind", "standard")
coeffs = json.loads(out)["factors"][0]["coefficients"]
check(code == 0 and len(coeffs) == 6 and coeffs[0] == ["1"] and coeffs[5] == ["-1"], "standard factor of chi_10")

code, out, _ = run("congruence", "--n", "1", "--k", "12")
c = json.loads(out)
check(code == 0 and 691 in [h["p"] for h in c["primes"]] and len(c["eigenforms"]) == 2, "congruence report in weight 12")

for args, want, what in [
    (("eiscoef", "--k", "5", "--matrix", "[[2]]"), 2, "odd weight"),
    (("genus", "--matrix", "[[1]]"), 2, "odd diagonal"),
    (("genus", "--matrix", "[[2,3],[3,2]]"), 2, "indefinite matrix"),
    (("basis", "--n", "4", "--k", "12"), 2, "degree out of range"),
    (("eigen", "--n", "3", "--k", "12", "--p", "4"), 2, "composite p"),
    (("euler", "--n", "2", "--k", "10", "--kind", "spinor"), 2, "spinor outside degree 3"),
    (("pullback", "--k", "12", "--matrix", A3), 2, "pullback with one index"),
    (("frobnicate",), 2, "unknown subcommand"),
]:
    code, _, err = run(*args)
    ok = code == want
    if ok and code != 0:
        ok = json.loads(err.strip().splitlines()[-1])["error"] == "usage"
    check(ok, "usage error: " + what)

with tempfile.TemporaryDirectory() as cache:
    with open(os.path.join(cache, "store.log"), "w") as f:
        f.write("#siegel-store\t1\n")
    code, _, _ = run("eiscoef", "--k", "12", "--matrix", A3, "--cache", cache)
    with open(os.path.join(cache, "store.log"), "a") as f:
        f.write("V\teis\tbogus\t1\t\nV\teis\tbogus\t2\t\n")
    code, _, err = run("eiscoef", "--k", "12", "--matrix", A3, "--cache", cache)
    check(code == 3 and json.loads(err.strip().splitlines()[-1])["error"] == "consistency", "corrupt cache exits with 3")

print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)

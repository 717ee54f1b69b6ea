"""End-to-end checks of the command line tool.

usage: cli_test.py BINARY SOURCE_DIR
"""

import csv
import io
import json
import os
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

BINARY, ROOT = sys.argv[1], sys.argv[2]
DATA = os.path.join(ROOT, "data")
failures = []


def check(cond, what):
    if not cond:
        failures.append(what)
        print("FAIL:", what)


def run(*args):
    return subprocess.run([BINARY, *args], capture_output=True, text=True, timeout=600)


def load_schemas():
    schemas = {}
    for name in ("matrix_sequence", "problem", "report"):
        with open(os.path.join(ROOT, "schemas", name + ".schema.json")) as f:
            schemas[name] = json.load(f)
    registry = Registry().with_resources(
        (s["$id"], Resource.from_contents(s)) for s in schemas.values())
    return {k: jsonschema.Draft7Validator(v, registry=registry) for k, v in schemas.items()}


validators = load_schemas()


def valid(kind, doc, what):
    errors = list(validators[kind].iter_errors(doc))
    check(not errors, what + ": " + "; ".join(e.message for e in errors[:3]))


# inputs shipped with the project conform to their schemas
for name, kind in (("two_factor.json", "matrix_sequence"), ("single_node.json", "problem"),
                   ("bad_guard.json", "matrix_sequence")):
    with open(os.path.join(DATA, name)) as f:
        valid(kind, json.load(f), "input " + name)

two = os.path.join(DATA, "two_factor.json")
single = os.path.join(DATA, "single_node.json")
cases = [
    ("separation", ["--input", two], 0, "re,im,value"),
    ("construct", ["--delta", "0.5", "--nu", "1.5", "--n", "5", "--m", "1,2,3,1,2"], 0,
     "k,point,multiplicity,target,achieved,scan_value,scan_lower"),
    ("counterexample", ["--nu", "0.5", "--n", "6"], 0,
     "n,t,t^m,s,s^m,leaveoneout_at_xi,ratio,strong_separation"),
    ("modelspace", ["--input", two], 0, None),
    ("interpolate", ["--input", single], 0, "theta,re,im,modulus"),
    ("beurling", ["--input", two, "--slack", "0.1", "--trials", "4"], 0, "re,im,value"),
    ("framebounds", [], 0, "parameter,lower,upper"),
    ("framebounds", ["--input", two], 0, None),
]

with tempfile.TemporaryDirectory() as tmp:
    for command, args, code, header in cases:
        label = " ".join([command, *args])
        first = run(command, *args)
        check(first.returncode == code, f"{label}: exit {first.returncode}, stderr {first.stderr!r}")
        second = run(command, *args)
        check(first.stdout == second.stdout, f"{label}: output differs between runs")
        try:
            report = json.loads(first.stdout)
        except json.JSONDecodeError as e:
            check(False, f"{label}: stdout is not JSON ({e})")
            continue
        check(report.get("command") == command, f"{label}: command field")
        valid("report", report, label)
        # dumping the parsed report again gives the same document
        check(json.loads(json.dumps(report)) == report, f"{label}: JSON round trip")

        out = os.path.join(tmp, command + ".json")
        r = run(command, *args, "--out", out)
        check(r.returncode == code and r.stdout == "", f"{label}: --out leaves stdout empty")
        with open(out) as f:
            check(json.load(f) == report, f"{label}: --out matches stdout")

        if header is not None:
            r = run(command, *args, "--csv", "-")
            check(r.returncode == code, f"{label} --csv -: exit {r.returncode}")
            rows = list(csv.reader(io.StringIO(r.stdout)))
            check(rows and ",".join(rows[0]) == header, f"{label}: csv header {rows[:1]}")
            check(len(rows) > 1 and all(len(x) == len(rows[0]) for x in rows),
                  f"{label}: csv rows are rectangular")

    # the counterexample diagnostics are monotone in the CSV as well
    r = run("counterexample", "--nu", "0.5", "--n", "6", "--csv", "-")
    rows = list(csv.DictReader(io.StringIO(r.stdout)))
    smp = [float(x["s^m"]) for x in rows]
    check(all(a > b for a, b in zip(smp, smp[1:])), "counterexample: s^m decreasing")

    # input and numerical failures
    r = run("separation", "--input", os.path.join(DATA, "bad_guard.json"))
    check(r.returncode == 1, "bad guard: exit 1")
    check("line 5" in r.stderr and "'edge'" in r.stderr, f"bad guard message {r.stderr!r}")

    broken = os.path.join(tmp, "broken.json")
    with open(broken, "w") as f:
        f.write('{"matrices": [\n  {"eigenvalues": [0.1,]}\n]}\n')
    r = run("separation", "--input", broken)
    check(r.returncode == 1 and "line 2" in r.stderr, f"malformed JSON: {r.returncode} {r.stderr!r}")

    missing = os.path.join(tmp, "missing.json")
    with open(missing, "w") as f:
        f.write('{"matrices": [\n  {"label": "x"}\n]}\n')
    r = run("separation", "--input", missing)
    check(r.returncode == 1 and "line 2" in r.stderr, f"schema violation: {r.returncode} {r.stderr!r}")

    r = run("separation", "--input", os.path.join(tmp, "absent.json"))
    check(r.returncode == 1, "absent input file: exit 1")
    r = run("separation", "--input", two, "--tol", "0.5")
    check(r.returncode == 1, "out-of-range tolerance: exit 1")
    r = run("nothing")
    check(r.returncode == 1, "unknown subcommand: exit 1")
    r = run("construct", "--delta", "0.3", "--nu", "1.2", "--n", "12", "--m", "1")
    check(r.returncode == 2 and "step 11" in r.stderr, f"construction failure: {r.returncode} {r.stderr!r}")
    r = run("--help")
    check(r.returncode == 0 and "Exit status" in r.stdout, "help")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)

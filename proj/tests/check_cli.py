#!/usr/bin/env python3
"""Runs the CLI binary end to end: JSON validates against the shipped schema,
outputs are byte-identical across runs, exit codes follow the contract."""
import json
import subprocess
import sys
import tempfile
import os

import jsonschema

BIN, SCHEMA = sys.argv[1], sys.argv[2]

RUNS = [
    (["construct-t2", "--alpha", "1", "--r", "3"], 0),
    (["construct-t2", "--alpha", "1", "--r", "4"], 0),
    (["construct-t3", "--alpha", "0.5", "--r", "4"], 0),
    (["construct-balanced", "--r", "3"], 0),
    (["construct-balanced", "--r", "4", "--no-certify"], 0),
    (["construct-t2", "--alpha", "1", "--r", "4", "--rho-iterations", "1", "--rho-attempts", "1",
      "--trial-bound", "100"], 3),
    (["fermat-factor", "--k", "105"], 0),
    (["fermat-factor", "--k", "63", "--minus"], 0),
    (["psi", "--exact", "--x", "100", "--y", "3"], 0),
    (["psi", "--ratio", "--x", "1073741824", "--c", "2", "--A", "2"], 0),
    (["psi", "--trend", "--xs", "1048576", "1073741824", "--A", "2"], 0),
    (["survey", "--n", "16", "--A", "2", "--theta", "0.05"], 0),
    (["survey", "--n", "20", "--A", "2"], 0),
    (["chars-scan", "--n0", "10", "--m", "3"], 0),
    (["chars-count", "--n", "20", "--A", "2", "--n0", "8", "--m", "3"], 0),
    (["lemmas", "--seed", "3"], 0),
    (["entropy", "--gamma", "0.25"], 0),
    (["entropy", "--theta0", "--A", "2"], 0),
]


def run(args, text=True):
    return subprocess.run([BIN] + args, capture_output=True, text=text, timeout=600)


def main():
    with open(SCHEMA) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0

    def fail(msg):
        nonlocal failures
        failures += 1
        print("FAIL", msg)

    for args, want in RUNS:
        a = run(args + ["--format", "json"])
        b = run(args + ["--format", "json"])
        label = " ".join(args)
        if a.returncode != want:
            fail(f"{label}: exit {a.returncode}, expected {want}: {a.stderr}")
            continue
        if a.stdout != b.stdout:
            fail(f"{label}: output differs between runs")
        doc = json.loads(a.stdout)
        errors = sorted(validator.iter_errors(doc), key=str)
        if errors:
            fail(f"{label}: schema: {errors[0].message}")
        if doc["meta"]["subcommand"] != args[0]:
            fail(f"{label}: meta.subcommand")
        cert = doc["result"].get("certificate")
        incomplete = (isinstance(cert, dict) and not cert["smoothness_complete"]) or \
            doc["result"].get("smoothness_complete") is False
        if incomplete != (a.returncode == 3):
            fail(f"{label}: exit 3 must coincide with an incomplete certificate")
        csv = run(args + ["--format", "csv"], text=False)
        lines = csv.stdout.split(b"\r\n")
        if csv.returncode != want or len(lines) < 3 or lines[-1] != b"" or any(b"\n" in l for l in lines):
            fail(f"{label}: csv output")
        else:
            print("ok  ", label)

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "out.json")
        r = run(["construct-balanced", "--r", "3", "--format", "json", "--output", path])
        with open(path) as f:
            doc = json.load(f)
        if r.returncode != 0 or r.stdout or doc["result"]["n_bits"] != 20 or doc["result"]["ones"] != 10:
            fail("--output file")

    for args in (["bogus"], [], ["psi", "--x", "3"], ["survey", "--n", "40", "--A", "2"], ["--format", "yaml", "lemmas"]):
        r = run(args)
        if r.returncode != 2 or not r.stderr:
            fail(f"{args}: expected exit 2 with a message on stderr, got {r.returncode}")
    if "Usage" not in run(["bogus"]).stderr:
        fail("unknown subcommand must print usage")
    if run(["psi", "--exact", "--x", "100", "--y", "3"]).stdout != "20\n":
        fail("psi text output")

    print("failures:", failures)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

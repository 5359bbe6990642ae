# Copyright 2026 The BellForge Authors
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

"""End-to-end checks of the bellforge command line; every JSON output is schema-validated."""

import argparse
import filecmp
import json
import os
import pathlib
import subprocess
import sys

import jsonschema

ARGS = None


def fail(msg):
    print(f"FAIL: {msg}")
    sys.exit(1)


def run(*argv, expect=0, env=None):
    p = subprocess.run([ARGS.bin, *map(str, argv)], capture_output=True, text=True, env=env)
    if p.returncode != expect:
        fail(f"{' '.join(map(str, argv))}: exit {p.returncode}, wanted {expect}\n{p.stdout}\n{p.stderr}")
    return p


def validate(path_or_text, schema):
    text = pathlib.Path(path_or_text).read_text() if isinstance(path_or_text, pathlib.Path) else path_or_text
    doc = json.loads(text)
    schema_doc = json.loads((pathlib.Path(ARGS.schemas) / f"{schema}.schema.json").read_text())
    try:
        jsonschema.validate(doc, schema_doc, cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as e:
        fail(f"{schema}: {e.message} at {list(e.absolute_path)}")
    return doc


def data(name):
    return pathlib.Path(ARGS.data) / name


def case_rate(work):
    doc = validate(run("rate", "--xi2", "1e-4", "--rep-rate", "1e8", "--pairs", "3").stdout, "rate")
    if "2.78 hours/event" not in doc["summary"]:
        fail(f"summary {doc['summary']!r}")
    if abs(doc["events_per_second"] - 1e-4) > 1e-18:
        fail(f"rate {doc['events_per_second']}")
    doc = validate(run("rate", "--xi2", "1e-4", "--rep-rate", "1e8", "--pairs", "1").stdout, "rate")
    if abs(doc["events_per_second"] - 1e4) > 1e-8:
        fail("single pair rate")


def case_certify(work):
    for circuit in ("tapped_pdc.json",):
        state = work / "state.json"
        run("simulate", "--circuit", data(circuit), "--out", state)
        validate(state, "state")
        cert = work / "cert.json"
        run("certify", "--state", state, "--detect", "4,5", "--out", cert)
        doc = validate(cert, "certificate")
        if doc["verdict"] != "TwoPhotonNoGo":
            fail(f"verdict {doc['verdict']}")
        if doc["quadratic_fidelity"] > doc["max_fidelity_bound"] + 1e-9:
            fail("bilinear fidelity above the bound")


def case_oracle_diff(work):
    out = work / "diff.json"
    p = run("oracle-diff", "--circuit", data("pdc.json"), "--cutoff", "6", "--out", out)
    doc = validate(out, "oracle_diff")
    if not (doc["max_abs_diff"] <= 1e-9 and doc["within_tolerance"]):
        fail(f"max_abs_diff {doc['max_abs_diff']}")
    if "max amplitude diff" not in p.stderr:
        fail("no human-readable diff line")
    run("oracle-diff", "--circuit", data("tapped_pdc.json"), "--cutoff", "6", "--detect", "4,5", "--out", out)
    if validate(out, "oracle_diff")["max_abs_diff"] > 1e-9:
        fail("tapped oracle diff")


def case_pipeline(work):
    state, cond, rep, four = work / "s.json", work / "c.json", work / "r.json", work / "f.json"
    run("simulate", "--circuit", data("pdc.json"), "--out", state)
    s = validate(state, "state")
    run("postselect", "--state", state, "--out", cond)
    validate(cond, "conditional")
    run("entangle", "--conditional", cond, "--target", "psi-minus", "--report", rep)
    r = validate(rep, "report")
    # vacuum-dominated source: |0> + xi |psi-> + ...
    if not (r["vacuum_weight"] > 0.95 and r["sector_fidelity"] > 0.999):
        fail(f"pdc report {r}")
    m = s["manifest"]
    if m["command"] != "simulate" or str(data("pdc.json")) not in m["input_hashes"]:
        fail("manifest does not record the input")
    # four detections on an 8-mode state built from two tapped sources
    circuit = json.loads(data("tapped_pdc.json").read_text())
    circuit["n_modes"] = 8
    circuit["elements"].append({"kind": "two_mode_squeezer", "modes": [6, 7], "params": {"r": 0.2, "phi": 0.0}})
    (work / "c8.json").write_text(json.dumps(circuit))
    run("simulate", "--circuit", work / "c8.json", "--out", state)
    run("four-terms", "--state", state, "--detect", "4,5,6,7", "--out", four)
    validate(four, "four_terms")
    run("postselect", "--state", state, "--detect", "4,5,6,7", "--out", cond)
    validate(cond, "conditional")
    run("entangle", "--conditional", cond, "--report", rep)
    validate(rep, "report")


def case_search_determinism(work):
    validate(data("search_two.json").read_text(), "search_config")
    validate(data("search_four.json").read_text(), "search_config")
    env = dict(os.environ, SOURCE_DATE_EPOCH="1700000000")
    outs = []
    for threads in (1, 8):
        out = work / f"search_{threads}.json"
        run("--reproducible", "--threads", threads, "search", "--config", data("search_two.json"), "--out", out,
            "--trace", work / f"trace_{threads}.csv", env=env)
        doc = validate(out, "search_result")
        if doc["manifest"]["seed"] != 7 or "wall_time" in doc:
            fail("reproducible manifest")
        outs.append(out)
    if not filecmp.cmp(*outs, shallow=False):
        fail("search output differs between --threads 1 and --threads 8")
    if not filecmp.cmp(work / "trace_1.csv", work / "trace_8.csv", shallow=False):
        fail("trace differs between thread counts")
    if doc["best_report"]["bell_fidelity"] > 0.5 + 1e-6:
        fail("two-detection search above the bound")
    # thread count from the environment
    run("--reproducible", "search", "--config", data("search_two.json"), "--out", work / "env.json",
        env=dict(env, BELLFORGE_THREADS="3"))
    if not filecmp.cmp(outs[0], work / "env.json", shallow=False):
        fail("BELLFORGE_THREADS run differs")


def case_exit_codes(work):
    run("rate", "--xi2", "1e-4", expect=2)
    run("rate", "--bogus", expect=2)
    run("rate", "--xi2", "2", "--rep-rate", "1e8", "--pairs", "3", expect=2)
    p = run("simulate", "--circuit", work / "missing.json", expect=2)
    if "not found" not in p.stderr or p.stderr.count("\n") != 1:
        fail(f"missing-file message {p.stderr!r}")
    bad = work / "bad.json"
    bad.write_text('{"n_modes": 2, "elements": [{"kind": "mirror", "modes": [0], "params": {}}]}')
    p = run("simulate", "--circuit", bad, expect=2)
    if "SchemaViolation" not in p.stderr:
        fail(f"schema message {p.stderr!r}")
    cfg = work / "odd.json"
    cfg.write_text('{"n_modes": 8, "n_detected": 3, "xi_cap": 0.3, "budget": 10, "seed": 1}')
    run("search", "--config", cfg, expect=2)
    # |xi| >= 1: not normalizable, a numeric failure
    z = {"re": 0.0, "im": 0.0}
    big = {"re": 0.6, "im": 0.0}
    state = work / "big.json"
    state.write_text(json.dumps({"B": [[z, big], [big, z]]}))
    run("postselect", "--state", state, expect=3)


def case_derive_bound(work):
    p = subprocess.run([ARGS.derive, "60"], capture_output=True, text=True)
    if p.returncode != 0:
        fail(p.stderr)
    print(p.stdout, end="")


def main():
    global ARGS
    ap = argparse.ArgumentParser()
    for flag in ("--bin", "--derive", "--schemas", "--data", "--work", "--case"):
        ap.add_argument(flag, required=True)
    ARGS = ap.parse_args()
    work = pathlib.Path(ARGS.work)
    work.mkdir(parents=True, exist_ok=True)
    globals()[f"case_{ARGS.case}"](work)
    print(f"ok {ARGS.case}")


if __name__ == "__main__":
    main()

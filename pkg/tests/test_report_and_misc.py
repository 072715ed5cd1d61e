"""Report plumbing, env-var fuel default, and resource-cap behavior."""

import json

from whilecc.report import Report
from whilecc.algebra import rat_value, NatV
from whilecc.interp import Enumerate, comp_tree_stage, State
from whilecc.programs import load


def test_report_lines_and_summary():
    rep = Report("demo")
    rep.add(True, "check-a", "sample-1", "fine")
    rep.add(False, "check-b", "sample-2", "broke")
    lines = rep.lines()
    assert lines[0].startswith("PASS check-a sample-1")
    assert lines[1].startswith("FAIL check-b sample-2")
    assert not rep.ok and len(rep.failures) == 1
    doc = json.loads(rep.to_json())
    assert doc["total"] == 2 and doc["failed"] == 1
    # reports speak of sampled verification, never of proof
    assert doc["scope"] == "verified on samples"


def test_fuel_env_default(monkeypatch, capsys):
    from whilecc import cli
    monkeypatch.setenv(cli.FUEL_ENV, "1234")
    ap = cli.build_parser()
    ns = ap.parse_args(["run", "--program", "pivot3", "--input", "(1,1,1)"])
    assert ns.fuel == 1234


def test_comp_tree_node_cap_truncates_not_crashes():
    p, alg = load("pivot3")
    sigma = State({"x1": rat_value(1), "x2": rat_value(1), "x3": rat_value(1),
                   "i": NatV(0)})
    tree = comp_tree_stage(p.body, sigma, 4, alg, Enumerate(8, max_depth=1))
    def any_truncated(t):
        return t.truncated or any(any_truncated(c) for c in t.children)
    assert any_truncated(tree)

import json
from fractions import Fraction as F

import pytest

from conftest import cycle
from sngames.cli import main
from sngames.fileformat import parse_network, serialize_network
from sngames.gadgets import gen_fig1, gen_fig3, gen_pos_witness


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def fields(out):
    return dict(line.split(": ", 1) for line in out.splitlines())


@pytest.fixture
def nets(tmp_path):
    paths = {}
    for name, net in [("fig1", gen_fig1()), ("fig3", gen_fig3()), ("pos", gen_pos_witness()),
                      ("cyc", cycle(4, F(1, 2), F(1, 4)))]:
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(serialize_network(net))
    return paths


def profile(tmp_path, mapping):
    p = tmp_path / "profile.json"
    p.write_text(json.dumps(mapping))
    return p


class TestExamples:
    def test_fig1_nontrivial(self, capsys, nets):
        code, out, _ = run(capsys, "ne", "solve", nets["fig1"], "--kind", "nontrivial")
        assert code == 1 and fields(out)["exists"] == "false"

    def test_sourcefree_cycle(self, capsys, nets):
        code, out, _ = run(capsys, "ne", "solve", nets["cyc"], "--kind", "nontrivial", "--method", "sourcefree")
        assert code == 0
        assert fields(out)["witness"] == "1=t,2=t,3=t,4=t"

    def test_fig3_fip(self, capsys, nets):
        code, out, _ = run(capsys, "igraph", nets["fig3"], "--check", "fip")
        assert code == 1 and fields(out)["fip"] == "false"


class TestSubcommands:
    def test_validate(self, capsys, nets):
        code, out, _ = run(capsys, "validate", nets["fig1"])
        assert code == 0 and fields(out) == {"valid": "true", "nodes": "6", "edges": "6", "products": "3"}

    def test_classify(self, capsys, nets):
        code, out, _ = run(capsys, "classify", nets["fig3"])
        f = fields(out)
        assert code == 0 and f["is-simple-cycle"] == "true" and f["is-dag"] == "false"

    def test_payoff(self, capsys, nets, tmp_path):
        p = profile(tmp_path, {"1": "t1", "2": "t1", "3": None})
        code, out, _ = run(capsys, "payoff", nets["fig3"], "--profile", p)
        f = fields(out)
        assert code == 0
        assert f["payoff[1]"] == "-1/4" and f["payoff[2]"] == "1/4" and f["payoff[3]"] == "0"
        assert f["social-welfare"] == "0"

    def test_ne_check(self, capsys, nets, tmp_path):
        code, out, _ = run(capsys, "ne", "check", nets["fig3"], "--profile",
                           profile(tmp_path, {"1": "t1", "2": "t1", "3": "t1"}))
        assert code == 0 and fields(out)["classification"] == "determined"
        code, out, _ = run(capsys, "ne", "check", nets["fig3"], "--profile",
                           profile(tmp_path, {"1": "t2", "2": "t2", "3": "t1"}))
        assert code == 1 and fields(out)["deviation"] == "node=1 strategy=t1"

    def test_ne_enumerate(self, capsys, nets):
        code, out, _ = run(capsys, "ne", "enumerate", nets["fig3"])
        assert code == 0
        assert out.splitlines()[0] == "ne: 3"
        code, out, _ = run(capsys, "ne", "enumerate", nets["fig1"])
        assert code == 1 and out == "ne: 0\n"

    def test_json_mode(self, capsys, nets):
        code, out, _ = run(capsys, "ne", "enumerate", nets["fig3"], "--json")
        assert json.loads(out)["ne"][0] == "1=t1,2=t1,3=t1"

    def test_guard_exceeded(self, capsys, nets):
        code, _, err = run(capsys, "ne", "enumerate", nets["fig1"], "--guard", "10")
        assert code == 4 and "guard-exceeded" in err

    def test_determined(self, capsys, nets):
        code, out, _ = run(capsys, "ne", "solve", nets["pos"], "--kind", "determined")
        assert code == 1 and fields(out)["method"] == "cycle"
        code, out, _ = run(capsys, "ne", "solve", nets["fig1"], "--kind", "determined")
        assert code == 1 and fields(out)["method"] == "brute" and "note" in fields(out)

    def test_method_mismatch_is_usage(self, capsys, nets):
        code, _, _ = run(capsys, "ne", "solve", nets["fig1"], "--kind", "nontrivial", "--method", "cycle")
        assert code == 2

    def test_dynamics(self, capsys, nets, tmp_path):
        start = profile(tmp_path, {"1": "t2", "2": "t2", "3": "t1"})
        trace = tmp_path / "trace.txt"
        code, out, _ = run(capsys, "dynamics", nets["fig3"], "--start", start,
                           "--max-steps", 10, "--trace", trace)
        assert code == 0 and fields(out)["outcome"] == "reached-ne"
        assert trace.read_text() == ("step 1: node=1 t2 -> t1 delta=1/2\n"
                                     "step 2: node=2 t2 -> t1 delta=1/2\n")

    def test_dynamics_budget(self, capsys, nets, tmp_path):
        start = profile(tmp_path, {"1": "t2", "2": "t2", "3": "t1"})
        code, out, _ = run(capsys, "dynamics", nets["fig3"], "--start", start,
                           "--scheduler", "fixed:1,3,2", "--max-steps", 12)
        assert code == 4 and fields(out)["outcome"] == "step-budget-exhausted"

    def test_dynamics_random(self, capsys, nets):
        code, out, _ = run(capsys, "dynamics", nets["fig3"], "--start", "random:3",
                           "--scheduler", "random:5", "--max-steps", 50)
        assert code == 0

    def test_bad_scheduler_seed(self, capsys, nets):
        code, _, err = run(capsys, "dynamics", nets["fig3"], "--scheduler", "random:x", "--max-steps", 5)
        assert code == 2 and "invalid-scheduler-seed" in err

    def test_igraph_dot(self, capsys, nets, tmp_path):
        dot = tmp_path / "g.dot"
        code, out, _ = run(capsys, "igraph", nets["fig3"], "--dot", dot, "--check", "weak")
        assert code == 0 and fields(out)["weakly-acyclic"] == "true"
        assert fields(out)["states"] == "27"
        assert dot.read_text().startswith("digraph")

    def test_metrics(self, capsys, nets):
        code, out, _ = run(capsys, "metrics", nets["pos"])
        f = fields(out)
        assert code == 0 and f["pos"] == "inf" and f["poa"] == "inf"
        assert f["optimum"] == "3/10"

    def test_metrics_no_ne(self, capsys, nets):
        code, out, _ = run(capsys, "metrics", nets["fig1"])
        assert code == 1 and fields(out)["error"] == "no-nash-equilibrium"

    def test_plots(self, capsys, nets, tmp_path):
        a, b = tmp_path / "dyn.png", tmp_path / "eff.png"
        assert run(capsys, "dynamics", nets["fig3"], "--max-steps", 5, "--plot", a)[0] == 0
        assert run(capsys, "metrics", nets["fig3"], "--plot", b)[0] == 0
        for p in (a, b):
            assert p.read_bytes()[:4] == b"\x89PNG"


class TestGen:
    @pytest.mark.parametrize("argv", [
        ["fig1"], ["fig3"], ["pos-witness"], ["dag-inefficiency", "--k", "2"],
        ["partition", "--a", "1/2,1/4,1/4"], ["random", "--class", "cycle", "--seed", "4"],
    ])
    def test_outputs_valid_network(self, capsys, argv):
        code, out, _ = run(capsys, "gen", *argv)
        assert code == 0
        assert serialize_network(parse_network(out)) == out

    def test_random_echoes_seed(self, capsys):
        _, _, err = run(capsys, "gen", "random", "--seed", "9")
        assert "seed: 9" in err

    def test_equitable(self, capsys, nets):
        code, out, _ = run(capsys, "gen", "equitable", "--from", nets["fig1"])
        assert code == 0 and parse_network(out)

    def test_constraint_violation(self, capsys):
        code, _, err = run(capsys, "gen", "fig1", "--theta", "1/2")
        assert code == 3 and "constraint-violated" in err

    def test_out_file(self, capsys, tmp_path):
        p = tmp_path / "n.json"
        run(capsys, "gen", "fig3", "--out", p)
        assert parse_network(p.read_text()) == gen_fig3()


class TestErrors:
    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "validate", tmp_path / "nope.json")[0] == 2

    def test_bad_document(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"c0": "0.5"}')
        code, _, err = run(capsys, "validate", p)
        assert code == 3 and "syntax-error" in err

    def test_semantic(self, capsys, tmp_path):
        doc = json.loads(serialize_network(gen_fig3()))
        doc["edges"][0]["weight"] = "2"
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(doc))
        code, _, err = run(capsys, "validate", p)
        assert code == 3 and "weight-out-of-range" in err

    def test_bad_profile(self, capsys, nets, tmp_path):
        code, _, _ = run(capsys, "payoff", nets["fig3"], "--profile", profile(tmp_path, {"1": "zz"}))
        assert code == 3

    def test_usage(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2
        assert run(capsys, "ne", "solve", "x.json")[0] == 2

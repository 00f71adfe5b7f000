import csv
import io
import json
import math

import numpy as np
import pytest

from spinorent import cli
from spinorent.clifford import build_rep
from spinorent.jsonio import matrix_to_json
from spinorent.schmidt import sample_decomposable

from conftest import S0, S1, S2, S3


def write_spinor(path, comps):
    path.write_text(json.dumps({"components": [[complex(z).real, complex(z).imag] for z in comps]}))
    return str(path)


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def bell(tmp_path):
    r = 1 / math.sqrt(2)
    return write_spinor(tmp_path / "bell.json", [r, 0, 0, 1j * r])


def rep_payload(rep):
    return {
        "gamma": [matrix_to_json(g) for g in rep.gamma],
        "kappaA": matrix_to_json(rep.kappa_a),
        "kappaB": matrix_to_json(rep.kappa_b),
    }


@pytest.mark.parametrize("rep", ["A", "B"])
@pytest.mark.parametrize("branch", ["upper", "lower"])
def test_verify_builtin(rep, branch, capsys):
    code, out, _ = run(["verify", "--rep", rep, "--branch", branch], capsys)
    assert code == 0
    assert "all checks passed" in out
    assert "FAIL " not in out


def test_verify_custom_ok(tmp_path, capsys):
    f = tmp_path / "rep.json"
    f.write_text(json.dumps(rep_payload(build_rep("B"))))
    code, out, _ = run(["verify", "--rep", "custom", "--file", f], capsys)
    assert code == 0


def test_verify_custom_bad(tmp_path, capsys):
    payload = rep_payload(build_rep("A"))
    payload["gamma"][0] = matrix_to_json(np.kron(S3, S1))
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(payload))
    code, out, err = run(["verify", "--rep", "custom", "--file", f], capsys)
    assert code == 1
    assert "FAILED: {g1,g1}" in out
    assert "{g1,g1}" in err


def test_custom_bad_rejected_by_other_commands(tmp_path, bell, capsys):
    payload = rep_payload(build_rep("A"))
    payload["gamma"][0] = matrix_to_json(np.kron(S3, S1))
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(payload))
    code, _, err = run(["decompose", bell, "--rep", "custom", "--file", f], capsys)
    assert code == 1 and "{g1,g1}" in err


def test_custom_without_file_is_usage(capsys):
    code, _, _ = run(["verify", "--rep", "custom"], capsys)
    assert code == 64


def test_decompose_text_and_json(bell, tmp_path, capsys):
    code, out, _ = run(["decompose", bell], capsys)
    assert code == 0
    assert out.startswith("P          0.5\n")
    code, out, _ = run(["decompose", bell, "--format", "json"], capsys)
    data = json.loads(out)
    assert code == 0 and abs(data["P"] - 0.5) < 1e-12
    p = write_spinor(tmp_path / "p.json", [0.8, 0, 0, 0.6])
    code, out, _ = run(["decompose", p, "--format", "json"], capsys)
    assert abs(json.loads(out)["P"] - 0.64) < 1e-12


def test_decompose_not_decomposable(tmp_path, capsys):
    # reduced operator has complex eigenvalues
    f = write_spinor(tmp_path / "c.json", [0, 1, 1, 1])
    code, _, err = run(["decompose", f], capsys)
    assert code == 2
    assert "complex-spectrum" in err


def test_decompose_null(tmp_path, capsys):
    f = write_spinor(tmp_path / "n.json", [1, 1, 0, 0])
    code, _, err = run(["decompose", f], capsys)
    assert code == 3


def test_decompose_unsupported_tps(tmp_path, bell, capsys):
    g = [1j * np.kron(S1, s) for s in (S1, S2, S3)] + [np.kron(S3, S0)]
    payload = {"gamma": [matrix_to_json(m) for m in g], "kappaA": matrix_to_json(S3), "kappaB": matrix_to_json(S0)}
    f = tmp_path / "tps.json"
    f.write_text(json.dumps(payload))
    code, _, _ = run(["verify", "--rep", "custom", "--file", f], capsys)
    assert code == 0
    code, _, err = run(["decompose", bell, "--rep", "custom", "--file", f], capsys)
    assert code == 2
    assert "unsupported-tps" in err


def test_usage_errors(bell, tmp_path, capsys):
    assert run([], capsys)[0] == 64
    assert run(["frobnicate"], capsys)[0] == 64
    assert run(["verify", "--rep", "C"], capsys)[0] == 64
    assert run(["capability", bell], capsys)[0] == 64
    assert run(["capability", bell, "--generator", "M21"], capsys)[0] == 64
    assert run(["capability", bell, "--generator", "M13", "--method", "fd", "--step", "1"], capsys)[0] == 64
    assert run(["classify", "--samples", "10"], capsys)[0] == 64
    assert run(["decompose", tmp_path / "missing.json"], capsys)[0] == 64
    bad = tmp_path / "junk.json"
    bad.write_text("{not json")
    assert run(["decompose", bad], capsys)[0] == 64
    assert run(["evolve", bell, "--generator", "D", "--tau-max", "1", "--steps", "1"], capsys)[0] == 64


def test_capability_methods(bell, capsys):
    code, out, _ = run(["capability", bell, "--generator", "M13", "--method", "all", "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert abs(data["pdot"]["analytic"] + 0.5) < 1e-12
    assert abs(data["pdot"]["density"] + 0.5) < 1e-12
    assert abs(data["pdot"]["fd"] + 0.5) < 1e-7
    assert set(data["residuals"]) == {"analytic-density", "analytic-fd", "density-fd"}
    code, out, _ = run(["capability", bell, "--generator", "D"], capsys)
    assert code == 0 and "pdot_analytic  0\n" in out


def test_capability_rescaled_input(tmp_path, capsys):
    r = 3 / math.sqrt(2)
    f = write_spinor(tmp_path / "b3.json", [r, 0, 0, 1j * r])
    code, out, _ = run(["capability", f, "--generator", "M13", "--format", "json"], capsys)
    assert code == 0 and abs(json.loads(out)["pdot"]["analytic"] + 0.5) < 1e-12


@pytest.mark.parametrize("rep", ["A", "B"])
def test_classify_expect_paper(rep, capsys):
    code, out, err = run(["classify", "--rep", rep, "--expect-paper"], capsys)
    assert code == 0
    assert "matches" in err


def test_classify_mismatch(monkeypatch, capsys):
    from spinorent import capability

    monkeypatch.setitem(capability.REFERENCE_VANISHING, "RepA", frozenset({"D"}))
    code, _, err = run(["classify", "--rep", "A", "--samples", "50", "--expect-paper"], capsys)
    assert code == 4
    assert "mismatch" in err


@pytest.mark.parametrize("fmt", ["text", "json", "csv", "md"])
def test_classify_deterministic(fmt, tmp_path, capsys):
    outs = []
    for i in range(2):
        target = tmp_path / f"t{i}.{fmt}"
        code, _, _ = run(["classify", "--rep", "B", "--samples", "60", "--seed", "7", "--format", fmt, "--out", target], capsys)
        assert code == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0]


def test_out_file(bell, tmp_path, capsys):
    target = tmp_path / "d.json"
    code, out, _ = run(["decompose", bell, "--format", "json", "--out", target], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["P"] == 0.5


def evolve(spinor, gen, capsys, tau_max=1.0, steps=11):
    code, out, _ = run(["evolve", spinor, "--generator", gen, "--tau-max", tau_max, "--steps", steps], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert out.splitlines()[0] == "tau,P,norm,decomposable"
    return rows


@pytest.fixture
def sampled(tmp_path):
    return write_spinor(tmp_path / "s.json", sample_decomposable(0.75, 11, build_rep("A")))


def test_evolve_dilatation_constant(sampled, capsys):
    f = sampled
    rows = evolve(f, "D", capsys)
    assert len(rows) == 11
    P0 = float(rows[0]["P"])
    n0 = float(rows[0]["norm"])
    for r in rows:
        assert abs(float(r["P"]) - P0) < 1e-10
        assert abs(float(r["norm"]) - n0) < 1e-10
        assert r["decomposable"] == "1"


def test_evolve_m13_bell(bell, capsys):
    rows = evolve(bell, "M13", capsys, tau_max=1.0, steps=21)
    for r in rows:
        tau = float(r["tau"])
        assert abs(float(r["P"]) - 0.5 * (1 - math.sin(tau))) < 1e-9
        assert abs(float(r["norm"]) - 1.0) < 1e-10
    slope = (float(rows[1]["P"]) - float(rows[0]["P"])) / float(rows[1]["tau"])
    assert abs(slope + 0.5) < 0.01


def test_evolve_norm_constant_boost(sampled, capsys):
    f = sampled
    for gen in ("M14", "P4", "K2"):
        rows = evolve(f, gen, capsys, tau_max=0.5)
        n0 = float(rows[0]["norm"])
        for r in rows:
            assert abs(float(r["norm"]) - n0) < 1e-10 * max(1.0, abs(n0))

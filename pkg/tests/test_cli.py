import json

import pytest

from hhnn.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_verify_octonions(capsys):
    code, out = run_cli(capsys, "verify", "--algebra", "O", "--involution", "natural")
    report = json.loads(out)
    assert code == EXIT_OK and report["reahn"]["holds"] and report["psd"]["holds"]


def test_verify_complex_identity_not_psd(capsys):
    code, out = run_cli(capsys, "verify", "--algebra", "C", "--involution", "identity")
    report = json.loads(out)
    assert code == EXIT_FAIL and report["reahn"]["holds"] and not report["psd"]["holds"]


def test_verify_sedenions(capsys):
    code, out = run_cli(capsys, "verify", "--algebra", "cd:4", "--involution", "natural")
    assert code == EXIT_OK and json.loads(out)["reahn"]["holds"]


def test_verify_witness(capsys):
    code, out = run_cli(capsys, "verify", "--algebra", "Q", "--involution", "identity")
    assert code == EXIT_FAIL and json.loads(out)["reverse_involution"]["witness"] == [1, 2]


@pytest.mark.parametrize("argv", [
    ["verify", "--algebra", "H"],
    ["verify", "--algebra", "C", "--involution", "bogus"],
    ["run", "--algebra", "C"],
    ["run", "--config", "example5:zz"],
    ["run", "--config", "/nonexistent.json"],
    ["graph", "--algebra", "O", "--activation", "sigma", "--N", "2"],
    ["octonion-exp", "--N", "1"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE


def test_table(capsys):
    code, out = run_cli(capsys, "table", "--algebra", "Q")
    assert code == EXIT_OK
    rows = [[c.strip() for c in line.split("|")] for line in out.splitlines()]
    assert rows[1] == ["i", "-1", "k", "-j"]


def test_graph_examples(capsys, tmp_path):
    code, out = run_cli(capsys, "graph", "--config", "example5:u-split", "--out", str(tmp_path / "u.dot"))
    doc = json.loads(out)
    assert code == EXIT_OK and doc["counts"]["fixed_points"] == 4 and doc["counts"]["cyclic_nodes"] == 0
    assert (tmp_path / "u.dot").read_text().startswith("digraph")
    assert json.loads((tmp_path / "u.json").read_text()) == doc
    _, out = run_cli(capsys, "graph", "--config", "example5:c-split")
    assert json.loads(out)["counts"]["cyclic_nodes"] > 0
    counts = [json.loads(run_cli(capsys, "graph", "--config", f"example5:{v}")[1])["counts"]["fixed_points"]
              for v in ("d-split", "d-conj")]
    assert counts[0] == counts[1]


def test_run_exit_codes(capsys, tmp_path):
    code, out = run_cli(capsys, "run", "--config", "example5:u-split", "--out", str(tmp_path / "t.csv"))
    assert code == EXIT_OK and json.loads(out)["trace"]["converged"]
    assert (tmp_path / "t.csv").read_text().startswith("update_index,neuron,changed,energy")
    code, _ = run_cli(capsys, "run", "--config", "example5:c-split", "--sweeps", "20")
    assert code == EXIT_FAIL


def test_run_random_network(capsys):
    code, out = run_cli(capsys, "run", "--algebra", "T", "--activation", "tsgn", "--K", "4",
                        "--N", "6", "--seed", "3")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["meta"]["seed"] == 3 and doc["conditions"]["hermitian"]


def test_realify(capsys, tmp_path):
    code, out = run_cli(capsys, "realify", "--config", "example5:u-split", "--out", str(tmp_path / "m.csv"))
    doc = json.loads(out)
    assert code == EXIT_OK and doc["symmetric"] and doc["zero_diagonal"]
    assert (tmp_path / "m.csv").read_text().splitlines()[0] == "0,0,1,3"
    real_cfg = json.loads((tmp_path / "m.json").read_text())
    assert real_cfg["algebra"] == "R" and real_cfg["N"] == 4


def test_octonion_small(capsys, tmp_path):
    code, out = run_cli(capsys, "octonion-exp", "--N", "6", "--seed", "2", "--seeds", "2",
                        "--out", str(tmp_path))
    doc = json.loads(out)
    assert code == EXIT_OK and [r["seed"] for r in doc["runs"]] == [2, 3]
    assert (tmp_path / "octonion_seed3.csv").exists() and (tmp_path / "realified_seed2.csv").exists()


def test_outputs_are_deterministic(capsys, tmp_path):
    for k in (1, 2):
        d = tmp_path / str(k)
        run_cli(capsys, "graph", "--config", "example5:c-conj", "--out", str(d / "g.dot"))
        run_cli(capsys, "run", "--algebra", "Q", "--activation", "split", "--N", "5", "--seed", "9",
                "--out", str(d / "r.csv"))
    for name in ("g.dot", "g.json", "r.csv", "r.json"):
        assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "2" / name).read_bytes()

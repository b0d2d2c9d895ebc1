import json
import subprocess
import sys


from birkhoff import cli
from birkhoff.cohomology import strand_cochain

from conftest import acyclic, bundled, eulerian


def bits(eta):
    return "".join(map(str, eta.bits))


def run(capsys, *argv):
    code = cli.run(list(argv))
    return code, capsys.readouterr().out


def test_validate_t6(capsys):
    code, out = run(capsys, "validate", "T6", "--json")
    assert code == 0
    assert json.loads(out)["map"] == {"name": "T6", "V": 6, "E": 12, "F": 6, "genus": 1, "strands": 5}


def test_validate_with_coorientation(capsys, tmp_path):
    eta = acyclic("T6")[0]
    f = tmp_path / "eta.json"
    f.write_text(json.dumps(eta.to_dict(bundled("T6"))))
    code, out = run(capsys, "validate", "T6", str(f), "--json")
    rep = json.loads(out)["coorientation"]
    assert code == 0 and rep["acyclic"] and rep["sinks"]


def test_validate_cyclic_reports_witness(capsys):
    code, out = run(capsys, "validate", "T1", bits(eulerian("T1")[0]), "--json")
    assert code == 0 and json.loads(out)["coorientation"]["witness"] == [0]


def test_word_has_twelve_lines(capsys):
    code, out = run(capsys, "word", "T6", bits(acyclic("T6")[0]), "--representation", "first")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 12
    assert lines[0].startswith("0: T^-1[gamma_")


def test_matrix_json(capsys):
    code, out = run(capsys, "matrix", "T6", bits(acyclic("T6")[1]), "--representation", "3")
    data = json.loads(out)
    assert code == 0 and len(data["rows"]) == 13 and data["charpoly"][0] == 1


def test_construct_certificate_is_success(capsys, tmp_path):
    m = bundled("T6")
    f = tmp_path / "w.json"
    f.write_text(json.dumps({"weights": list(strand_cochain(m, 2).scaled(5).weights)}))
    code, out = run(capsys, "construct", "T6", "--class", str(f), "--json")
    data = json.loads(out)
    assert code == 0 and data["length"] < data["omega"] and data["cycle"]


def test_construct_writes_coorientation(capsys, tmp_path):
    m = bundled("T6")
    w = tmp_path / "w.json"
    out_file = tmp_path / "eta.json"
    w.write_text(json.dumps({"weights": [1 if b else -1 for b in acyclic("T6")[2].bits]}))
    code, _ = run(capsys, "construct", "T6", "--class", str(w), "--out", str(out_file))
    data = json.loads(out_file.read_text())
    assert code == 0 and len(data["bits"]) == m.num_edges


def test_domain_error_exit_one(capsys):
    code, out = run(capsys, "word", "T1", bits(eulerian("T1")[0]))
    assert code == 1 and json.loads(out)["error"] == "not_acyclic"
    code, out = run(capsys, "validate", "T6", "0" * 11 + "1")
    assert code == 1 and json.loads(out)["error"] == "not_eulerian"


def test_io_error_exit_two(capsys, tmp_path):
    code, _ = run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run(capsys, "validate", str(bad))
    assert code == 2
    code, _ = run(capsys, "validate", "T6", "0101")
    assert code == 2


def test_bad_map_exit_one(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"vertices": [{"id": 0, "darts": [0, 1, 2]}], "edges": [[0, 1]]}))
    code, out = run(capsys, "validate", str(f))
    assert code == 1 and json.loads(out)["error"] == "non_quadrivalent"


def test_flip_run_and_surface(capsys):
    eta = bits(acyclic("T6")[0])
    code, out = run(capsys, "flip-run", "T6", eta, "--json")
    assert code == 0 and json.loads(out)["returned"]
    code, out = run(capsys, "surface", "T6", eta, "--json")
    data = json.loads(out)
    assert (data["euler_characteristic"], data["boundary_components"], data["genus"]) == (-12, 10, 2)
    assert len(data["curves"]) == 12 and len(data["pairing"]) == 13


def test_compare_and_connectivity(capsys):
    pool = acyclic("T6")
    code, out = run(capsys, "compare", "T6", bits(pool[0]), bits(pool[0]), "--common-model")
    data = json.loads(out)
    assert code == 0 and data["charpoly_equal"] and data["common_model"]["found"]
    code, out = run(capsys, "connectivity", "T6", "--coorientation", bits(pool[0]))
    assert code == 0 and json.loads(out)["acyclic_components"] == 1


def test_oracle_report(capsys):
    code, out = run(capsys, "oracle", "--grid", "2", "3", "--coorientation", bits(acyclic("T6")[0]),
                    "--samples", "100", "--factorization")
    data = json.loads(out)
    assert code == 0 and data["agrees"] and data["within_bound"] and data["factorization"]["ok"]


def test_json_round_trip_is_stable(capsys):
    eta = bits(acyclic("T6")[4])
    _, a = run(capsys, "matrix", "T6", eta)
    _, b = run(capsys, "matrix", "T6", eta)
    assert a == b and json.loads(json.dumps(json.loads(a))) == json.loads(a)


def test_usage_error_exit_two(capsys):
    assert cli.run(["nonsense"]) == 2


def test_console_script_jobs():
    out = subprocess.run(
        [sys.executable, "-m", "birkhoff.cli", "enumerate", "T6", "--jobs", "2", "--json"],
        capture_output=True, text=True, check=True,
    ).stdout
    data = json.loads(out)
    assert (data["eulerian"], data["acyclic"]) == (44, 24)

import json
import subprocess
import sys

import pytest

from pegembed.cli import main
from pegembed.embedder import Embedding


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_embed_then_validate(tmp_path, capsys):
    path = tmp_path / "e.json"
    code, out, _ = run(capsys, "embed", "--visible", "8", "--hidden", "16", "--out", str(path))
    assert code == 0 and json.loads(out)["valid"]
    e = Embedding.from_json(path.read_text())
    assert e.visible[0] == [180, 181]
    code, out, _ = run(capsys, "validate", "--embedding", str(path))
    assert code == 0 and json.loads(out)["is_valid"]


def test_embed_to_stdout(capsys):
    code, out, _ = run(capsys, "embed", "--visible", "4", "--hidden", "8", "--M", "4")
    assert code == 0
    assert Embedding.from_json(out).H == 8


def test_capacity_is_usage_error(capsys):
    code, _, err = run(capsys, "embed", "--visible", "8", "--hidden", "121")
    assert code == 2
    assert "capacity" in err and "120" in err


def test_validate_corrupted(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"visible": [[180, 181]')
    code, out, _ = run(capsys, "validate", "--embedding", str(bad))
    assert code == 1
    # well-formed JSON but a broken chain
    run(capsys, "embed", "--visible", "8", "--hidden", "16", "--out", str(bad))
    d = json.loads(bad.read_text())
    d["hidden"][0] = [2970, 2972]
    bad.write_text(json.dumps(d))
    code, out, _ = run(capsys, "validate", "--embedding", str(bad))
    assert code == 1
    assert json.loads(out)["checks"]["connectivity"]["offenders"] == ["hidden[0]"]


def test_validate_against_edge_list(tmp_path, capsys):
    edges = tmp_path / "g.txt"
    dead = tmp_path / "dead.txt"
    dead.write_text("# broken qubit\n2970\n")
    assert run(capsys, "lattice", "export", "--M", "16", "--disable-file", str(dead),
               "--out", str(edges))[0] == 0
    emb = tmp_path / "e.json"
    run(capsys, "embed", "--visible", "8", "--hidden", "16", "--out", str(emb))
    code, out, _ = run(capsys, "validate", "--embedding", str(emb), "--edges", str(edges))
    assert code == 1
    assert json.loads(out)["checks"]["existence"]["offenders"] == [2970]


def test_embed_blocked_by_disabled_qubit(tmp_path, capsys):
    dead = tmp_path / "dead.txt"
    dead.write_text("181\n")
    code, _, err = run(capsys, "embed", "--visible", "8", "--hidden", "16", "--disable-file", str(dead))
    assert code == 1 and "181" in err
    code, _, _ = run(capsys, "embed", "--visible", "8", "--hidden", "16", "--disable-file", str(dead),
                     "--visible-start", "24")
    assert code == 0


def test_heuristic_embed(tmp_path, capsys):
    out = tmp_path / "h.json"
    code, _, _ = run(capsys, "embed", "--visible", "4", "--hidden", "4", "--M", "4",
                     "--algorithm", "heuristic", "--seed", "1", "--out", str(out))
    assert code == 0
    assert Embedding.from_json(out.read_text()).provenance == "heuristic"
    code, _, err = run(capsys, "embed", "--visible", "24", "--hidden", "24", "--M", "4",
                       "--algorithm", "heuristic", "--max-tries", "1")
    assert code == 1 and "overlap" in err


def test_lattice_commands(tmp_path, capsys):
    code, out, _ = run(capsys, "lattice", "gen", "--M", "16")
    assert code == 0
    assert json.loads(out)["qubits"] == 5760
    path = tmp_path / "l.txt"
    assert run(capsys, "lattice", "export", "--M", "3", "--alpha", "2", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "lattice", "import", "--in", str(path))
    assert code == 0 and json.loads(out)["couplers"] == len(path.read_text().splitlines())
    path.write_text("0 1\nx y\n")
    code, _, err = run(capsys, "lattice", "import", "--in", str(path))
    assert code == 2 and "line 2" in err
    assert run(capsys, "lattice", "export", "--M", "3")[0] == 2


def test_bench(tmp_path, capsys):
    path = tmp_path / "b.csv"
    code, out, _ = run(capsys, "bench", "--sizes", "40,20x30", "--trials", "2",
                       "--algorithms", "structured", "--csv", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "config,algorithm,trials,avg_time_s,std_time_s,avg_chains_ge_6,std_chains_ge_6"
    assert [l.split(",")[0] for l in lines[1:]] == ["20x30", "40x40"]
    assert out.splitlines() == lines
    assert run(capsys, "bench", "--sizes", "abc", "--trials", "1")[0] == 2
    assert run(capsys, "bench", "--sizes", "200", "--trials", "1", "--algorithms", "structured")[0] == 2


def test_render(tmp_path, capsys):
    emb, svg = tmp_path / "e.json", tmp_path / "e.svg"
    run(capsys, "embed", "--visible", "8", "--hidden", "16", "--out", str(emb))
    assert run(capsys, "render", "--embedding", str(emb), "--svg", str(svg))[0] == 0
    first = svg.read_bytes()
    assert b'id="q180" class="qubit visible"' in first
    run(capsys, "render", "--embedding", str(emb), "--svg", str(svg))
    assert svg.read_bytes() == first


def test_oracle(tmp_path, capsys):
    model = tmp_path / "m.json"
    model.write_text(json.dumps({"V": 2, "H": 3, "h": [0.5, -1, 1, 0, -0.5],
                                 "J": [[0, 0, 1], [0, 1, -1], [1, 2, 1], [1, 0, -1]]}))
    code, out, _ = run(capsys, "oracle", "--ising", str(model))
    assert code == 0 and "energy" in json.loads(out)
    emb = tmp_path / "e.json"
    run(capsys, "embed", "--visible", "2", "--hidden", "3", "--M", "4", "--n", "1", "--m", "1",
        "--visible-start", "20", "--out", str(emb))
    code, out, _ = run(capsys, "oracle", "--ising", str(model), "--check-embedding", str(emb))
    assert code == 0 and json.loads(out)["match"]
    model.write_text("{}")
    assert run(capsys, "oracle", "--ising", str(model))[0] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["embed", "--visible", "4", "--hidden", "4", "--bogus"])
    assert info.value.code == 2
    assert "usage" in capsys.readouterr().err
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
    assert run(capsys, "validate", "--embedding", "/nonexistent/e.json")[0] == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "e.json"
    proc = subprocess.run([sys.executable, "-m", "pegembed", "embed", "--visible", "8",
                           "--hidden", "16", "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.read_bytes().endswith(b"\n") and b"\r" not in out.read_bytes()

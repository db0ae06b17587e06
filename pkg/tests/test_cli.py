import csv
import json

import pytest

from lcllab.cli import main


def gen(tmp_path, name="g.json", *args):
    path = tmp_path / name
    assert main(["gen", *args, "-o", str(path)]) == 0
    return path


def test_gen_and_check_family(tmp_path, capsys):
    path = gen(tmp_path, "g.json", "--ell", "2", "--w", "3", "--input-bits", "0:1")
    data = json.loads(path.read_text())
    assert data["nodes"]
    assert main(["check", str(path), "--checker", "badGraph"]) == 0
    assert main(["check", str(path), "--projection", "tree", "--checker", "tree"]) == 0
    assert main(["check", str(path), "--projection", "grid", "--checker", "vgrid"]) == 0


def test_corrupted_instance_fails_structure_check(tmp_path, capsys):
    path = gen(tmp_path, "c.json", "--kind", "tree", "--ell", "3", "--corrupt", "delete-edge")
    assert main(["--json", "check", str(path), "--checker", "tree"]) == 1
    report = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert not report["ok"] and report["violations"]


def test_run_writes_result_and_csv(tmp_path, capsys):
    path = gen(tmp_path, "g.json", "--ell", "2", "--w", "2", "--random-inputs")
    out, table = tmp_path / "r.json", tmp_path / "r.csv"
    code = main(["--seed", "4", "run", str(path), "--alg", "pi-shared", "--trials", "5", "-o", str(out),
                 "--csv", str(table)])
    assert code == 0
    result = json.loads(out.read_text())
    assert result["aggregate"]["rate"] == 1.0
    rows = list(csv.DictReader(table.open()))
    assert rows[0]["trials"] == "5"
    assert main(["check", str(path), "--checker", "pi", "--outputs", str(out)]) == 0


def test_run_with_sequential_models(tmp_path):
    path = gen(tmp_path, "g.json", "--ell", "2", "--w", "4")
    ids = sorted(node["id"] for node in json.loads(path.read_text())["nodes"])
    s_out = tmp_path / "s.json"
    assert main(["run", str(path), "--alg", "slocal-row-greedy", "--model", "slocal-private",
                 "--order", "leftmost-first", "-o", str(s_out)]) in (0, 1)
    assert sorted(int(u) for u in json.loads(s_out.read_text())["outputs"]) == ids
    order = tmp_path / "order.json"
    order.write_text(json.dumps(ids[::-1]))
    # all right-end inputs are 0, which is what the row copier guesses before seeing them
    assert main(["run", str(path), "--alg", "online-row-copy", "--model", "online-local-det",
                 "--order", "file", "--order-file", str(order), "-o", str(tmp_path / "o.json")]) == 0


@pytest.mark.parametrize("argv", [
    ["run", "{bad}", "--alg", "pi-shared"],
    ["run", "{good}", "--alg", "no-such-alg"],
    ["check", "{good}", "--checker", "pi"],
    ["run", "{tree}", "--alg", "pi-shared", "--model", "slocal-private", "--order", "leftmost-first"],
    ["gen", "--ell", "1", "--w", "3"],
    ["check", "{missing}", "--checker", "tree"],
])
def test_bad_input_exits_2(tmp_path, argv):
    files = {"bad": tmp_path / "bad.json", "good": gen(tmp_path, "good.json"),
             "tree": gen(tmp_path, "tree.json", "--kind", "tree"), "missing": tmp_path / "none.json"}
    files["bad"].write_text('{"nodes": [1,\n')
    argv = [a.format(**{k: str(v) for k, v in files.items()}) for a in argv]
    assert main(argv) == 2


def test_experiment_command(tmp_path):
    out, summ = tmp_path / "e.csv", tmp_path / "e.txt"
    code = main(["experiment", "shared-upper", "--sizes", "2x4,3x8", "--trials", "20", "-o", str(out),
                 "--summary", str(summ)])
    assert code == 0
    assert len(list(csv.DictReader(out.open()))) == 2
    assert "rows meeting their target: 2/2" in summ.read_text()


def test_environment_defaults(tmp_path, monkeypatch):
    path = gen(tmp_path, "g.json", "--ell", "1", "--w", "2")
    monkeypatch.setenv("LCLLAB_TRIALS", "3")
    out = tmp_path / "r.json"
    assert main(["run", str(path), "--alg", "pi-shared", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["aggregate"]["trials"] == 3

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from confcube import __version__
from confcube.cli import main


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def gen(capsys, tmp_path, name: str, *argv: str) -> str:
    path = str(tmp_path / name)
    code, _, _ = run(capsys, "gen", *argv, "-o", path)
    assert code == 0
    return path


def analyze_json(capsys, *argv: str) -> tuple[int, dict]:
    code, out, _ = run(capsys, "analyze", *argv, "--json")
    return code, json.loads(out)


def test_gen_theta(capsys, tmp_path):
    path = gen(capsys, tmp_path, "t4.json", "theta", "--m", "4", "--subdivide")
    data = json.loads(open(path).read())
    assert len(data["vertices"]) == 6 and len(data["edges"]) == 8


def test_gen_six_petal_sun(capsys):
    code, out, _ = run(capsys, "gen", "sun", "--rays", "3,1,3,2,0,2", "--subdivide")
    data = json.loads(out)
    assert code == 0 and len(data["vertices"]) == 34
    assert data["family"]["params"] == [3, 1, 3, 2, 0, 2]


def test_gen_is_deterministic(capsys):
    _, a, _ = run(capsys, "gen", "pulsar", "--m", "3", "--n1", "1", "--n2", "2", "--subdivide")
    _, b, _ = run(capsys, "gen", "pulsar", "--m", "3", "--n1", "1", "--n2", "2", "--subdivide")
    assert a == b


def test_gen_cycle3_then_analyze_warns(capsys, tmp_path):
    path = gen(capsys, tmp_path, "c3.json", "cycle", "--k", "3")
    code, rep = analyze_json(capsys, path, "--n", "3")
    assert code == 0
    adm = rep["report"]["admissibility"]
    assert adm["ok"] is False and "warning" in adm
    assert adm["violations"][0]["kind"] == "short_cycle"


def test_analyze_theta4(capsys, tmp_path):
    path = gen(capsys, tmp_path, "t4.json", "theta", "--m", "4", "--subdivide")
    code, data = analyze_json(capsys, path, "--n", "3")
    rep = data["report"]
    assert code == 0
    assert rep["euler"] == -4 and rep["f_vector"] == [20, 48, 24]
    assert rep["surface"]["genus"] == 3 and rep["surface"]["orientable"]
    assert rep["homology"]["betti"] == [1, 6, 1]
    assert rep["engine_version"] == __version__
    assert set(data["timings"]) >= {"build", "homology"}


def test_analyze_report_is_reproducible(capsys, tmp_path):
    path = gen(capsys, tmp_path, "p.json", "pulsar", "--m", "3", "--n1", "1", "--subdivide")
    _, a = analyze_json(capsys, path, "--morse", "pulsar", "--cut", "8", "--emit", "complex")
    _, b = analyze_json(capsys, path, "--morse", "pulsar", "--cut", "8", "--emit", "complex")
    assert a["report"] == b["report"]
    assert a["report"]["complex"]["f_vector"] == a["report"]["f_vector"]


def test_analyze_cycle4(capsys, tmp_path):
    path = gen(capsys, tmp_path, "c4.json", "cycle", "--k", "4")
    code, data = analyze_json(capsys, path, "--n", "3")
    assert code == 0 and data["report"]["f_vector"] == [4, 4]


def test_analyze_pulsar_split(capsys, tmp_path):
    path = gen(capsys, tmp_path, "p.json", "pulsar", "--m", "4", "--n1", "1", "--subdivide")
    code, data = analyze_json(capsys, path, "--n", "3", "--morse", "pulsar", "--cut", "8")
    split = data["report"]["morse"]["split"]
    assert code == 0 and split["ok"] and split["rank_F"] == 6
    assert split["sublevel_f_vector"] == [20, 48, 24]


def test_analyze_failed_certificate_exits_one(capsys, tmp_path):
    path = gen(capsys, tmp_path, "t4.json", "theta", "--m", "4", "--subdivide")
    code, data = analyze_json(capsys, path, "--morse", "pulsar")
    assert code == 1
    assert data["report"]["morse"]["wedge"]["failure"]["code"] == "not_contractible"


def test_analyze_sun_uses_induction(capsys, tmp_path):
    path = gen(capsys, tmp_path, "s.json", "sun", "--rays", "1,0,1", "--subdivide")
    code, data = analyze_json(capsys, path, "--morse", "sun")
    m = data["report"]["morse"]
    assert code == 0 and m["sun_induction"]["ok"]
    assert m["sun_induction"]["free_rank"] == 1 - data["report"]["euler"]


def test_analyze_custom_heights_from_graph(capsys, tmp_path):
    path = tmp_path / "c6.json"
    verts = [{"id": i, "label": f"a{i + 1}", "height2": h}
             for i, h in enumerate((0, 2, 4, 6, 4, 2))]
    path.write_text(json.dumps({"vertices": verts, "edges": [[i, (i + 1) % 6] for i in range(6)]}))
    code, data = analyze_json(capsys, str(path), "--morse", "heights")
    assert code == 1  # a 4-cycle descending link
    assert data["report"]["morse"]["wedge"]["link_kinds"]["not_contractible_union"] == 1


def test_analyze_heights_from_other_file(capsys, tmp_path):
    path = gen(capsys, tmp_path, "c4.json", "cycle", "--k", "4")
    hpath = tmp_path / "h.json"
    g = json.loads(open(path).read())
    for v, h in zip(g["vertices"], (0, 2, 4, 6)):
        v["height2"] = h
    hpath.write_text(json.dumps(g))
    code, data = analyze_json(capsys, path, "--morse", str(hpath))
    assert code == 0 and data["report"]["morse"]["wedge"]["free_rank"] == 1


def test_analyze_dot_input(capsys, tmp_path):
    path = tmp_path / "c4.dot"
    path.write_text("graph g { a -- b -- c -- d -- a }")
    code, data = analyze_json(capsys, str(path))
    assert code == 0 and data["report"]["f_vector"] == [4, 4]


def test_text_output(capsys, tmp_path):
    path = gen(capsys, tmp_path, "t4.json", "theta", "--m", "4", "--subdivide")
    code, out, _ = run(capsys, "analyze", path)
    assert code == 0
    assert "orientable genus 3" in out and "20 48 24" in out


@pytest.mark.parametrize("argv", [
    ["analyze", "/does/not/exist.json"],
    ["gen", "theta"],
    ["gen", "sun", "--rays", "1,x"],
    ["reproduce", "euler-table", "--m-max", "99"],
])
def test_input_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_bad_heights_exit_two(capsys, tmp_path):
    path = gen(capsys, tmp_path, "c4.json", "cycle", "--k", "4")
    code, _, err = run(capsys, "analyze", path, "--morse", "heights")
    assert code == 2 and "height2" in err
    code, _, _ = run(capsys, "analyze", path, "--morse", "sun")
    assert code == 2


def test_usage_error_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


@pytest.mark.parametrize("target", ["c6-example", "theta4-surface", "pulsar-split"])
def test_reproduce_targets(capsys, target):
    code, out, _ = run(capsys, "reproduce", target)
    assert code == 0 and "FAIL" not in out


def test_reproduce_euler_table_json(capsys):
    code, out, _ = run(capsys, "reproduce", "euler-table", "--m-max", "12", "--json")
    data = json.loads(out)
    chi = [c for c in data["report"]["checks"] if c["name"].startswith("chi")]
    assert code == 0 and len(chi) == 11 and all(c["ok"] for c in chi)
    assert "total" in data["timings"]


def test_reproduce_small_sun_family(capsys):
    code, out, _ = run(capsys, "reproduce", "sun-freeness", "--n-max", "2", "--ray-max", "1")
    assert code == 0 and "S(1,0)" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "confcube", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == __version__

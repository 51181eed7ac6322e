import json
import subprocess
import sys
from fractions import Fraction

import pytest

from chainfix import cli, complexes, index
from chainfix.index import SimplicialMap, Tower


def run_cli(capsys, tmp_path, command, cfg=None, *extra):
    argv = [command, *extra]
    if cfg is not None:
        path = tmp_path / f"{command}.json"
        path.write_text(json.dumps(cfg))
        argv += ["--config", str(path)]
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def report(capsys, tmp_path, command, cfg=None, *extra):
    code, out = run_cli(capsys, tmp_path, command, cfg, *extra)
    return code, json.loads(out)


def test_verify_complex_builtin(capsys, tmp_path):
    code, rep = report(capsys, tmp_path, "verify-complex", {"complex": "octahedron"})
    assert code == 0 and rep["ok"] and rep["cells"] == len(complexes.octahedron())


@pytest.mark.parametrize("name, ring", [("hollow-triangle", "Z"), ("octahedron", "Q"), ("hexagon-disk", "Zp:3")])
def test_homology_agrees_with_rank_oracle(capsys, tmp_path, name, ring):
    code, rep = report(capsys, tmp_path, "homology", {"complex": name}, "--ring", ring)
    assert code == 0 and rep["oracle"]["agree"]
    assert rep["betti"] == rep["oracle"]["rank_betti"]


def test_lefschetz_expectation(capsys, tmp_path):
    octa = complexes.octahedron()
    want = index.lefschetz_of_map(SimplicialMap(Tower(octa), {v: v ^ 1 for v in range(6)}))
    code, rep = report(capsys, tmp_path, "lefschetz", {"map": "octahedron-antipode", "expect": str(want)})
    assert code == 0 and rep["lambda"] == str(want)
    code, rep = report(capsys, tmp_path, "lefschetz", {"map": "octahedron-antipode", "expect": str(want + 1)})
    assert code == 1 and not rep["ok"]


def test_lefschetz_inline_map(capsys, tmp_path):
    cfg = {"complex": "path3", "map": {"0": 2, "1": 1, "2": 0}}
    code, rep = report(capsys, tmp_path, "lefschetz", cfg)
    assert code == 0 and rep["hopf_trace"]


def test_index_on_region_with_invariance(capsys, tmp_path):
    cfg = {"map": "path-reflection", "region": [[1]], "invariance": True}
    code, rep = report(capsys, tmp_path, "index", cfg)
    assert code == 0 and rep["admissible"]
    assert len(set(rep["invariance"].values())) == 1


def test_index_on_whole_complex_matches_lefschetz(capsys, tmp_path):
    code, rep = report(capsys, tmp_path, "index", {"map": "hexagon-rotation"})
    assert code == 0 and rep["index"] == rep["lefschetz"]


def test_index_without_separation_is_a_check_failure(capsys, tmp_path):
    cfg = {"complex": "path3", "map": {"0": 0, "1": 1, "2": 2}, "region": [[1]]}
    code, rep = report(capsys, tmp_path, "index", cfg)
    assert code == 1 and rep["admissible"] is False


def test_modp(capsys, tmp_path):
    code, rep = report(capsys, tmp_path, "modp", {"map": "octahedron-antipode", "p": 2})
    assert code == 0 and rep["ok"]
    code, rep = report(capsys, tmp_path, "modp", {"map": "path-reflection", "region": [[1]], "p": 2})
    assert code == 1 and "invariant" in rep["error"]


def test_axiom_subset(capsys, tmp_path):
    code, rep = report(capsys, tmp_path, "axioms", {"axioms": ["normalization"]})
    assert code == 0 and set(rep["counts"]) == {"normalization"}


def test_multi_default_instance(capsys, tmp_path):
    code, rep = report(capsys, tmp_path, "multi", {"schedule": [[0, "1/4"]]})
    assert code == 0
    assert rep["usc"] and rep["continuous"]
    assert all(a["verified"] for a in rep["approximations"].values())


def test_realize_is_deterministic(capsys, tmp_path):
    first = run_cli(capsys, tmp_path, "realize", {"epsilon": "1/2"})
    second = run_cli(capsys, tmp_path, "realize", {"epsilon": "1/2"})
    assert first == second and first[0] == 0


def test_out_file_matches_stdout(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, text = run_cli(capsys, tmp_path, "homology", {"complex": "segment"}, "--out", str(out))
    assert code == 0 and out.read_text() == text


def test_text_summary(capsys, tmp_path):
    code, text = run_cli(capsys, tmp_path, "verify-complex", {"complex": "segment"}, "--text")
    assert code == 0 and text.startswith("verify-complex: PASS")


@pytest.mark.parametrize("command, cfg, extra", [
    ("homology", {"complex": "klein-bottle"}, ()),
    ("homology", {"complex": "segment"}, ("--ring", "Zp:4")),
    ("lefschetz", {"map": "no-such-map"}, ()),
    ("lefschetz", {"complex": "path3", "map": {"0": 0, "1": 1}}, ()),
    ("modp", {"map": "path-reflection", "p": 6}, ()),
    ("realize", {"epsilon": "2"}, ()),
    ("realize", {"epsilon": "a quarter"}, ()),
    ("axioms", {"axioms": ["symmetry"]}, ()),
    ("index", {"map": "path-reflection", "region": [[7]]}, ()),
    ("multi", {"multimap": "nonexistent"}, ()),
])
def test_bad_input_exits_two(capsys, tmp_path, command, cfg, extra):
    code, rep = report(capsys, tmp_path, command, cfg, *extra)
    assert code == 2
    assert rep["ok"] is False and rep["error"]["type"] == "input" and rep["command"] == command


def test_unreadable_config(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["homology", "--config", str(bad)]) == 2
    bad.write_text("[1, 2]")
    assert cli.main(["homology", "--config", str(bad)]) == 2
    assert cli.main(["homology", "--config", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


@pytest.fixture
def battery(capsys, tmp_path):
    out = tmp_path / "instances"
    assert cli.main(["battery", "--out", str(out)]) == 0
    listing = json.loads(capsys.readouterr().out)
    return out, listing


def test_battery_files(battery):
    out, listing = battery
    names = sorted(p.name for p in out.iterdir())
    assert names == ["antipodal_multimap.json", "hexagon_disk.json", "hollow_triangle.json", "octahedron.json",
                     "point.json", "segment.json", "triangle_body.json"]
    assert len(listing["files"]) == len(names)
    octa = complexes.SimplicialComplex.from_json(json.loads((out / "octahedron.json").read_text()))
    assert len(octa.vertices) == 6 and len(octa.cells(2)) == 8


def test_battery_body_is_dyadic(battery):
    out, _ = battery
    body = json.loads((out / "triangle_body.json").read_text())
    assert body["kind"] == "convex-body"
    for pt in body["sample"]:
        for c in pt:
            d = Fraction(c).denominator
            assert d & (d - 1) == 0, c


def test_battery_is_seed_independent(capsys, tmp_path):
    for seed in ("0", "7"):
        assert cli.main(["battery", "--out", str(tmp_path / seed), "--seed", seed]) == 0
    capsys.readouterr()
    for f in (tmp_path / "0").iterdir():
        assert f.read_text() == (tmp_path / "7" / f.name).read_text()


def test_battery_files_load_back(battery, capsys, tmp_path):
    out, _ = battery
    code, rep = report(capsys, tmp_path, "verify-complex", {"complex": str(out / "hexagon_disk.json")})
    assert code == 0
    # paths are resolved against the config directory
    cfg = tmp_path / "instances" / "job.json"
    cfg.write_text(json.dumps({"complex": "octahedron.json"}))
    assert cli.main(["homology", "--config", str(cfg)]) == 0
    capsys.readouterr()
    code, rep = report(capsys, tmp_path, "verify-complex", {"complex": str(out / "triangle_body.json")})
    assert code == 2 and "convex body" in rep["error"]["message"]


def test_module_entry_point(tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"complex": "hollow-triangle"}))
    proc = subprocess.run([sys.executable, "-m", "chainfix", "homology", "--config", str(cfg)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["betti"] == [1, 1]

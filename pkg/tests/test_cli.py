import json

import pytest

from affinv.cli import EXIT_FAIL, EXIT_INVALID, EXIT_OK, EXIT_USAGE, main
from affinv.corpus import ASYMMETRIC_QUAD, SQUARE


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_body(path, K):
    path.write_text(json.dumps(K.to_dict()))
    return str(path)


def test_compute_centroid(capsys, tmp_path):
    body = write_body(tmp_path / "sq.json", SQUARE)
    code, out, _ = run(capsys, "compute", "--point", "centroid", "--body", body)
    assert code == EXIT_OK and json.loads(out)["point"] == [0.0, 0.0]


def test_compute_loewner_prints_ellipsoid(capsys):
    code, out, _ = run(capsys, "compute", "--point", "loewner-center", "--body", "corpus:square")
    data = json.loads(out)
    assert code == EXIT_OK and set(data["ellipsoid"]) == {"center", "shape"}


def test_reader_canonicalizes(capsys, tmp_path):
    path = tmp_path / "b.json"
    path.write_text(json.dumps({"dim": 2, "vertices": [[1, 1], [0, 0], [1, 0], [0, 1], [0.5, 0.5]]}))
    code, out, _ = run(capsys, "symmetry", "--body", str(path))
    assert code == EXIT_OK and json.loads(out)["order"] == 8


def test_fixed_set(capsys):
    code, out, _ = run(capsys, "fixed-set", "--body", "corpus:trapezoid")
    data = json.loads(out)
    assert code == EXIT_OK and data["dim"] == 1 and len(data["directions"]) == 1


def test_dist_modes(capsys, tmp_path):
    a = write_body(tmp_path / "a.json", ASYMMETRIC_QUAD)
    code, out, _ = run(capsys, "dist", "--mode", "orbit", "--body", a, "--base", "corpus:asymmetric_quad")
    assert code == EXIT_OK and set(json.loads(out)) == {"objective", "best_map", "converged", "restarts_used"}
    code, out, _ = run(capsys, "dist", "--mode", "hausdorff", "--body", a, "--base", "corpus:asymmetric_quad")
    assert json.loads(out)["hausdorff"] == 0.0


def test_construct_evaluate_round_trip(capsys, tmp_path):
    desc = tmp_path / "d.json"
    code, out, _ = run(capsys, "construct", "--body", "corpus:asymmetric_quad", "--target", "1", "1",
                       "--out", str(desc))
    assert code == EXIT_OK and json.loads(desc.read_text()) == json.loads(out)
    code, out, _ = run(capsys, "evaluate", "--descriptor", str(desc), "--body", "corpus:asymmetric_quad")
    data = json.loads(out)
    assert code == EXIT_OK and data["weight"] == 1.0
    assert data["point"] == pytest.approx([1.0, 1.0], abs=1e-9)


def test_construct_proper(capsys):
    code, out, err = run(capsys, "construct", "--body", "corpus:square", "--target", "0", "0", "--proper")
    assert code == EXIT_OK and json.loads(out)["proper"] is True and "calibration" in err


def test_construct_not_fixed(capsys):
    code, out, _ = run(capsys, "construct", "--body", "corpus:square", "--target", "1", "1")
    assert code == EXIT_INVALID and json.loads(out)["error"] == "TargetNotFixed"


def test_verify_default_passes(capsys, tmp_path):
    code, out, err = run(capsys, "verify", "--trials", "6", "--seed", "3", "--figures", str(tmp_path / "f"))
    data = json.loads(out)
    assert code == EXIT_OK and data["pass"] and data["failures"] == []
    assert sorted(data["figures"]) == ["descriptor.png", "descriptor.svg", "equivariance.png"]
    assert "equivariance" in err


def test_verify_deterministic(capsys, tmp_path):
    _, first, _ = run(capsys, "verify", "--trials", "6", "--seed", "4", "--figures", str(tmp_path / "a"))
    _, second, _ = run(capsys, "verify", "--trials", "6", "--seed", "4", "--figures", str(tmp_path / "b"))
    assert first == second
    for name in ("descriptor.svg", "equivariance.png"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_verify_seed_from_env(capsys, monkeypatch):
    monkeypatch.setenv("AFFINV_SEED", "17")
    _, out, _ = run(capsys, "verify", "--trials", "3")
    assert json.loads(out)["seed"] == 17


def test_verify_proper_descriptor(capsys, tmp_path):
    desc = tmp_path / "p.json"
    run(capsys, "construct", "--body", "corpus:square", "--target", "0", "0", "--proper", "--out", str(desc))
    code, out, _ = run(capsys, "verify", "--descriptor", str(desc), "--trials", "3", "--properness-trials", "8")
    data = json.loads(out)
    assert code == EXIT_OK and data["checks"]["properness"]["violations"] == 0


def test_verify_failure_exit(capsys, tmp_path, monkeypatch):
    import affinv.cli as cli
    monkeypatch.setattr(cli, "REALIZE_TOL", -1.0)
    code, out, _ = run(capsys, "verify", "--trials", "3")
    assert code == EXIT_FAIL and json.loads(out)["failures"] == ["realization"]


def test_corrupted_descriptor(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "--body", "corpus:square", "--target", "0", "0")
    data = json.loads(out)
    data["target"] = [1.0, 1.0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--descriptor", str(bad), "--trials", "3")
    assert code == EXIT_INVALID and json.loads(out)["error"] == "TargetNotFixed"


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "evaluate", "--descriptor", str(tmp_path / "nope.json"), "--body", "corpus:square")
    assert code == EXIT_USAGE and "IoError" in err


def test_invalid_json(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    code, _, _ = run(capsys, "symmetry", "--body", str(path))
    assert code == EXIT_INVALID


def test_degenerate_body(capsys, tmp_path):
    path = tmp_path / "line.json"
    path.write_text(json.dumps({"dim": 2, "vertices": [[0, 0], [1, 0], [2, 0]]}))
    code, out, _ = run(capsys, "symmetry", "--body", str(path))
    assert code == EXIT_INVALID and json.loads(out)["error"] == "DegenerateBody"


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == EXIT_USAGE


def test_plot(capsys, tmp_path):
    svg, png = tmp_path / "f.svg", tmp_path / "f.png"
    code, out, _ = run(capsys, "plot", "--body", "corpus:square", "--point", "0", "0",
                       "--out", str(svg), "--png", str(png))
    assert code == EXIT_OK and svg.exists() and png.exists()
    assert json.loads(out)["bodies"] == 1


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "affinv", "symmetry", "--body", "corpus:right_triangle"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["order"] == 6

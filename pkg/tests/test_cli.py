import json
import subprocess
import sys

import pytest

from motif_forge import cli


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    (d / "synth.json").write_text(json.dumps({
        "n": 800, "seed": 5, "noise_sigma": 0.05,
        "patterns": [{"template_length": 50, "occurrences": 3, "amplitude": 3.0},
                     {"template_length": 80, "occurrences": 3, "amplitude": 3.0}]}))
    (d / "config.json").write_text(json.dumps({
        "kappa": 2, "rho": 0.9, "nu": 0.25, "l_min": 30, "l_max": 120, "warping": True, "constraints": []}))
    assert cli.main(["synth", "-s", str(d / "synth.json"), "-o", str(d / "x.csv"), "-g", str(d / "gt.json")]) == 0
    return d


def run(d, *args):
    return cli.main([a if not a.startswith("@") else str(d / a[1:]) for a in args])


def test_discover_and_eval(workdir, capsys):
    assert run(workdir, "discover", "-i", "@x.csv", "-c", "@config.json", "-o", "@r.json",
               "--spans", "@s.tsv") == 0
    doc = json.loads((workdir / "r.json").read_text())
    assert doc["meta"]["kappa"] == 2
    assert (workdir / "s.tsv").read_text().startswith("start\tend\tset\trank\n")
    capsys.readouterr()
    assert run(workdir, "eval", "-r", "@r.json", "-g", "@gt.json") == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report) == {"precision", "recall", "f1", "per_set_assignment", "ignored_sets"}
    assert report["f1"] >= 0.8


def test_byte_identical_across_threads_and_runs(workdir):
    outs = []
    for k, threads in enumerate(["1", "4", "1", "4"]):
        assert run(workdir, "discover", "-i", "@x.csv", "-c", "@config.json", "-o", f"@t{k}.json",
                   "--threads", threads) == 0
        outs.append((workdir / f"t{k}.json").read_bytes())
    assert len(set(outs)) == 1


def test_config_error_exit(workdir, capsys):
    (workdir / "bad.json").write_text(json.dumps({"kappa": 3, "constraints": [
        {"kind": "length_range", "applies_to": 5, "params": {"l_min": 1, "l_max": 2}}]}))
    assert run(workdir, "discover", "-i", "@x.csv", "-c", "@bad.json", "-o", "@o.json") == 2
    assert "applies_to" in capsys.readouterr().err
    assert run(workdir, "discover", "-i", "@x.csv", "-c", "@config.json", "-o", "@o.json", "--threads", "0") == 2


def test_data_error_exit(workdir, capsys):
    (workdir / "nan.csv").write_text("1\n2\nnan\n")
    assert run(workdir, "discover", "-i", "@nan.csv", "-c", "@config.json", "-o", "@o.json") == 3
    assert "line 3" in capsys.readouterr().err
    assert run(workdir, "discover", "-i", "@missing.csv", "-c", "@config.json", "-o", "@o.json") == 3


def test_max_n_exit(workdir, monkeypatch):
    monkeypatch.setenv("MOTIF_FORGE_MAX_N", "100")
    assert run(workdir, "discover", "-i", "@x.csv", "-c", "@config.json", "-o", "@o.json") == 3


def test_internal_error_exit(workdir, monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("boom")
    monkeypatch.setattr(cli, "discover", boom)
    assert run(workdir, "discover", "-i", "@x.csv", "-c", "@config.json", "-o", "@o.json") == 4


def test_synth_infeasible_exit(workdir):
    (workdir / "inf.json").write_text(json.dumps({"n": 50, "patterns": [{"template_length": 40, "occurrences": 3}]}))
    assert run(workdir, "synth", "-s", "@inf.json", "-o", "@y.csv", "-g", "@g.json") == 2


def test_synth_deterministic(workdir):
    assert run(workdir, "synth", "-s", "@synth.json", "-o", "@x2.csv", "-g", "@gt2.json") == 0
    assert (workdir / "x2.csv").read_bytes() == (workdir / "x.csv").read_bytes()
    assert (workdir / "gt2.json").read_bytes() == (workdir / "gt.json").read_bytes()


def test_eval_threshold_error(workdir):
    run(workdir, "discover", "-i", "@x.csv", "-c", "@config.json", "-o", "@r.json")
    assert run(workdir, "eval", "-r", "@r.json", "-g", "@gt.json", "--threshold", "0") == 2
    assert run(workdir, "eval", "-r", "@r.json", "-g", "@missing.json") == 3


def test_selfcheck_subprocess():
    p = subprocess.run([sys.executable, "-m", "motif_forge.cli", "selfcheck"], capture_output=True, text=True)
    assert p.returncode == 0, p.stdout + p.stderr
    assert "FAIL" not in p.stdout and p.stdout.count("PASS") >= 1

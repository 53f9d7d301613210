import json
import subprocess
import sys
from pathlib import Path

import pytest

from torsorlab.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv,golden", [
    ("gamma --group z6 --x 0,3 --a 0,2,4 --y 0,3 --b 0,2,4 --z 0,3", "gamma_z6.txt"),
    ("sigma --group z4 --b 0,2 --x 0,1 --y 0,1 --z 2,3", "sigma_z4.txt"),
    ("enumerate grassmannian --group z4", "grassmannian_z4.txt"),
    ("enumerate carrier --group k4 --a 0,1 --b 0,2 --kind uab", "carrier_k4.txt"),
    ("enumerate transversals --group z4 --b 0,2", "transversals_z4.txt"),
    ("signtable --group s3 --errata", "signtable_s3.txt"),
    ("suite --group z2 --format text", "suite_z2.txt"),
    ("suite --group z2 --format csv", "suite_z2.csv"),
    ("suite --group z2 --format json", "suite_z2.json"),
])
def test_golden(argv, golden, capsys):
    code, out, _ = run(argv.split(), capsys)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_gamma_values(capsys):
    assert run("gamma --group z6 --x 0,3 --a 0,2,4 --y 0 --b 0,2,4 --z 0,3".split(), capsys)[1] == "0\n"
    code, out, _ = run("gamma --group s3 --x 1 --a 0 --y 1 --b 0 --z 1 --opposite".split(), capsys)
    assert (code, out) == (0, "1\n")


def test_out_of_range_element(capsys):
    code, _, err = run("gamma --group z6 --x 0,9 --a 0 --y 0 --b 0 --z 0".split(), capsys)
    assert code == 2 and "out of range" in err


def test_bad_group_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"table": [[0, 1], [1, 1]]}))
    code, _, err = run(["suite", "--group", f"file:{bad}"], capsys)
    assert code == 2 and "inverse" in err
    code, _, err = run(["suite", "--group", "nonsense"], capsys)
    assert code == 2


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 2
    assert run("enumerate transversals --group z4".split(), capsys)[0] == 2
    assert run("enumerate carrier --group z4 --b 0,1".split(), capsys)[0] == 2
    assert run("suite --group z2 --seed -1".split(), capsys)[0] == 2


def test_signtable_without_errata_fails(capsys):
    code, out, _ = run("signtable --group s3".split(), capsys)
    assert code == 1 and "mismatch" in out and "23/24" in out


def test_suite_writes_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, err = run(["suite", "--group", "z2", "--out", str(out)], capsys)
    assert code == 0 and "0 failed" in err
    assert json.loads(out.read_text())["summary"]["fail"] == 0


def test_seed_env_fallback(monkeypatch, capsys):
    monkeypatch.setenv("TORSORLAB_SEED", "9")
    _, out, _ = run("suite --group z2 --select structure.batch".split(), capsys)
    assert json.loads(out)["seed"] == 9
    monkeypatch.setenv("TORSORLAB_SEED", "x")
    assert run("suite --group z2".split(), capsys)[0] == 2


def test_failing_suite_exit_code(monkeypatch, capsys, flipped_gamma):
    code, _, _ = run("suite --group s3 --select lattice --format csv".split(), capsys)
    assert code == 1


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "torsorlab", "enumerate", "grassmannian", "--group", "z4"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.endswith("3 subgroups\n")

import subprocess
import sys

import pytest

from blackboard.cli import main
from blackboard.persistence import load_network, network_digest

PARAMS = """
[base]
fact count = 30
rule count = 20
link count = 24
container count = 12
common property count = 10
properties per rule = 3
"""


@pytest.fixture
def params_file(tmp_path):
    path = tmp_path / "params.ini"
    path.write_text(PARAMS)
    return path


def test_single_then_validate_and_replay(tmp_path, params_file, capsys):
    out = tmp_path / "out"
    assert main(["single", "--params", str(params_file), "--seed", "4", "--out", str(out)]) == 0
    assert "Path Length:" in capsys.readouterr().out
    save = out / "saves" / "0.txt"
    assert main(["validate", str(save)]) == 0
    assert capsys.readouterr().out.startswith("ok:")

    assert main(["replay", str(save), str(out / "changes")]) == 0
    digest = capsys.readouterr().out.strip().splitlines()[-1]
    assert digest != network_digest(load_network(save))
    assert len(digest) == 64


def test_run_sweep(tmp_path, params_file):
    config = tmp_path / "sweep.ini"
    config.write_text(PARAMS + "[sweep]\nrule count = 5, 10\n[run]\ntests per combination = 2\n")
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--out", str(out), "--master-seed", "3",
                 "--tick-ns", "50"]) == 0
    assert (out / "results.csv").exists()
    assert len(list((out / "comboResults").iterdir())) == 4


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[base]\ncontainer count = 1\n")
    assert main(["run", "--config", str(bad)]) == 1
    assert main(["run", "--config", str(tmp_path / "missing.ini")]) == 2
    hopeless = tmp_path / "hopeless.ini"
    hopeless.write_text("[base]\nlink count = 10\n")
    assert main(["single", "--params", str(hopeless), "--seed", "0", "--out", str(tmp_path)]) == 3
    garbled = tmp_path / "garbled.txt"
    garbled.write_text("fact,addition,0,4,True\n")
    assert main(["validate", str(garbled)]) == 1
    assert "line 1" in capsys.readouterr().err


def test_module_entry_point(tmp_path, params_file):
    proc = subprocess.run(
        [sys.executable, "-m", "blackboard", "single", "--params", str(params_file),
         "--seed", "1", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr

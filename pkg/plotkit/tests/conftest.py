import json
import subprocess
import sys

import pytest


def run_cli(*args):
    """Invoke the simulation CLI as an external process."""
    proc = subprocess.run([sys.executable, "-m", "omarray.cli", *args],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def golden_dir(tmp_path_factory):
    """CSV artifacts for every figure id, produced through the CLI."""
    root = tmp_path_factory.mktemp("golden")
    out = root / "artifacts"

    run_cli("modes", "--out", str(out), "--seed", "1")

    walk_cfg = root / "walk.json"
    walk_cfg.write_text(json.dumps({"walk": {"realizations": 200}}))
    run_cli("walk", "--config", str(walk_cfg), "--out", str(out), "--seed", "2")

    heat_cfg = root / "heat.json"
    heat_cfg.write_text(json.dumps({
        "params": {"N": 6},
        "heat": {"hot_element": 2, "samples": 24, "t_max": 20000.0}}))
    run_cli("heat", "--config", str(heat_cfg), "--out", str(out), "--seed", "3")

    shuttle_cfg = root / "shuttle.json"
    shuttle_cfg.write_text(json.dumps({"shuttle": {"samples": 80}}))
    run_cli("shuttle", "--config", str(shuttle_cfg), "--out", str(out), "--seed", "4")

    return str(out)

import json

import numpy as np
import pytest

from bomp.adversarial import AdversarialParams, build_adversarial_instance
from bomp.cli import main
from bomp.core import BlockedMatrix, BlockLayout, BlockSignal
from bomp.io import save_matrix, save_vector


@pytest.fixture
def instance_files(tmp_path):
    """Well-conditioned 12x8 system with truth on blocks (2, 4)."""
    rng = np.random.default_rng(50)
    layout = BlockLayout(4, 2)
    A = BlockedMatrix(layout, rng.normal(size=(12, 8)) / np.sqrt(12))
    x = BlockSignal.from_blocks(layout, {2: [2.0, -1.0], 4: [1.5, 0.5]})
    y = A.entries @ x.values
    save_matrix(tmp_path / "A.csv", A, tmp_path / "A.json")
    save_vector(tmp_path / "y.csv", y)
    return tmp_path


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_run_with_epsilon(instance_files, capsys):
    code = main([
        "run",
        "--matrix", str(instance_files / "A.csv"),
        "--layout", str(instance_files / "A.json"),
        "--obs", str(instance_files / "y.csv"),
        "--epsilon", "1e-10",
    ])
    assert code == 0
    payload = _json_out(capsys)
    assert sorted(payload["chosen_indices"]) == [2, 4]
    assert payload["status"] == "converged"
    assert payload["residual_norms"][-1] <= 1e-10


def test_run_writes_trace_file(instance_files, capsys, tmp_path):
    trace_path = tmp_path / "trace.json"
    code = main([
        "run",
        "--matrix", str(instance_files / "A.csv"),
        "--layout", str(instance_files / "A.json"),
        "--obs", str(instance_files / "y.csv"),
        "--max-iter", "2",
        "--trace", str(trace_path),
    ])
    assert code == 0
    on_disk = json.loads(trace_path.read_text())
    assert on_disk == _json_out(capsys)
    assert on_disk["iterations_run"] == 2


def test_run_requires_a_stopping_flag(instance_files, capsys):
    code = main([
        "run",
        "--matrix", str(instance_files / "A.csv"),
        "--layout", str(instance_files / "A.json"),
        "--obs", str(instance_files / "y.csv"),
    ])
    assert code == 2
    assert "stopping" in capsys.readouterr().err


def test_rip_exact_and_sampled(instance_files, capsys):
    args = [
        "rip",
        "--matrix", str(instance_files / "A.csv"),
        "--layout", str(instance_files / "A.json"),
        "--order", "2",
    ]
    assert main(args) == 0
    exact = _json_out(capsys)
    assert exact["order"] == 2
    assert exact["delta"] > 0.0
    assert exact["rip_holds"] == (exact["delta"] < 1.0)
    assert len(exact["arg_support"]) == 2

    assert main(args + ["--sample", "50", "--seed", "4"]) == 0
    sampled = _json_out(capsys)
    assert sampled["delta_lower_bound"] <= exact["delta"] + 1e-14
    assert sampled["trials"] == 50


def test_rip_budget_exit_code(instance_files, capsys):
    code = main([
        "rip",
        "--matrix", str(instance_files / "A.csv"),
        "--layout", str(instance_files / "A.json"),
        "--order", "2",
        "--budget", "1",
    ])
    assert code == 3
    assert "budget" in capsys.readouterr().err


def test_bounds_json(capsys):
    assert main(["bounds", "--K", "10", "--delta", "0.04", "--epsilon", "1"]) == 0
    payload = _json_out(capsys)
    assert payload["z1"] == pytest.approx(2.1964, abs=1e-3)
    assert payload["necessary"] == pytest.approx(1.1468, abs=1e-3)
    assert payload["verdict"] is None

    assert main([
        "bounds", "--K", "10", "--delta", "0.04", "--min-block-norm", "2.5",
    ]) == 0
    verdict = _json_out(capsys)["verdict"]
    assert verdict["guaranteed"] is True


def test_bounds_infeasible_exit_code(capsys):
    assert main(["bounds", "--K", "10", "--delta", "0.5"]) == 3
    assert "not below" in capsys.readouterr().err


def test_figure1_stdout_and_file(tmp_path, capsys):
    assert main(["figure1", "--K", "10,20", "--points", "4"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "K,delta,z1,z2,diff"
    assert len(lines) == 1 + 8
    first = lines[1].split(",")
    assert first[0] == "10"
    assert float(first[4]) < 0.0

    out = tmp_path / "fig1.csv"
    assert main(["figure1", "--K", "10", "--points", "5", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "K,delta,z1,z2,diff"
    assert len(out.read_text().splitlines()) == 6


def test_figure1_rejects_bad_k_list(capsys):
    assert main(["figure1", "--K", "10,x"]) == 2
    assert "comma-separated" in capsys.readouterr().err


def test_adversarial_writes_all_artifacts(tmp_path, capsys):
    out_dir = tmp_path / "adv"
    code = main([
        "adversarial", "--d", "2", "--K", "3", "--delta", "0.2",
        "--epsilon", "1", "--out-dir", str(out_dir),
    ])
    assert code == 0
    for name in ("A.csv", "layout.json", "y.csv", "truth.csv", "report.json"):
        assert (out_dir / name).exists(), name
    report = json.loads((out_dir / "report.json").read_text())
    assert report == _json_out(capsys)
    assert report["failed"] is True
    assert report["first_selected_index"] == 1
    assert report["t0"] < report["t0_failure_threshold"]
    assert json.loads((out_dir / "layout.json").read_text()) == {"m": 8, "M": 4, "d": 2}


def test_adversarial_rejects_bad_delta(tmp_path, capsys):
    # delta outside (0,1) is a usage error
    code = main([
        "adversarial", "--d", "1", "--K", "3", "--delta", "1.5",
        "--epsilon", "1", "--out-dir", str(tmp_path / "x"),
    ])
    assert code == 2
    assert "delta" in capsys.readouterr().err
    # delta in (0,1) but outside the failure regime: no default t0 exists
    code = main([
        "adversarial", "--d", "1", "--K", "3", "--delta", "0.6",
        "--epsilon", "1", "--out-dir", str(tmp_path / "x"),
    ])
    assert code == 3
    assert "not below" in capsys.readouterr().err


def test_verify_proofs_json(capsys):
    assert main(["verify-proofs", "--trials", "10", "--seed", "2"]) == 0
    payload = _json_out(capsys)
    assert payload["trials"] == 10
    assert payload["identity_passes"] == 10
    assert payload["lemma_failures"] == 0
    assert payload["worst_identity_residual"] < 1e-9


def test_experiment_roundtrip(tmp_path, capsys):
    cfg = {
        "m": 24, "M": 6, "d": 2, "K": 2, "noise_norm": 0.0,
        "min_block_norm": 1.0, "trials": 6, "seed": 3,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out_path = tmp_path / "result.json"
    assert main([
        "experiment", "--config", str(cfg_path), "--out", str(out_path),
    ]) == 0
    summary = _json_out(capsys)
    assert summary["recovery_rate"] == 1.0
    result = json.loads(out_path.read_text())
    assert result["config"]["trials"] == 6
    assert len(result["records"]) == 6

    # flag overrides beat the file
    assert main([
        "experiment", "--config", str(cfg_path), "--trials", "2",
    ]) == 0
    assert len(_json_out(capsys)["records"]) == 2


def test_experiment_config_errors(tmp_path, capsys):
    assert main(["experiment", "--config", str(tmp_path / "nope.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"m": 4}')
    assert main(["experiment", "--config", str(bad)]) == 2
    capsys.readouterr()


def test_experiment_from_file_failure_demo(tmp_path, capsys):
    params = AdversarialParams(d=1, K=2, delta=0.3, epsilon=1.0)
    problem, truth, _ = build_adversarial_instance(params)
    save_matrix(tmp_path / "A.csv", problem.matrix, tmp_path / "layout.json")
    save_vector(tmp_path / "y.csv", problem.observation)
    save_vector(tmp_path / "truth.csv", truth.values)
    cfg = {
        "m": 3, "M": 3, "d": 1, "K": 2, "noise_norm": 1.0, "trials": 3,
        "seed": 0, "matrix_ensemble": "from_file",
        "matrix_path": str(tmp_path / "A.csv"),
        "layout_path": str(tmp_path / "layout.json"),
        "observation_path": str(tmp_path / "y.csv"),
        "truth_path": str(tmp_path / "truth.csv"),
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    assert main(["experiment", "--config", str(cfg_path)]) == 0
    assert _json_out(capsys)["recovery_rate"] == 0.0


def test_usage_errors_exit_2(capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "adversarial" in capsys.readouterr().out

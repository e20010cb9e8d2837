from pathlib import Path

import orjson
import pytest

from conftest import CONFIGS
from lognls_lab.cli import build_parser, main


def _main(*argv):
    main([str(a) for a in argv])


def _root(capsys) -> Path:
    return Path(capsys.readouterr().out.strip().splitlines()[-1])


def _exit_code(argv, capsys) -> tuple[int, str]:
    with pytest.raises(SystemExit) as exc:
        _main(*argv)
    return exc.value.code, capsys.readouterr().err


def test_parser_lists_every_command():
    parser = build_parser()
    args = parser.parse_args(["acceptance", "--only", "rigidity", "--only", "weighted_norm"])
    assert args.only == ["rigidity", "weighted_norm"]
    with pytest.raises(SystemExit):
        parser.parse_args(["matrix-ode"])


def test_matrix_ode_run_writes_artifacts(tmp_path, capsys):
    _main("matrix-ode", "--config", CONFIGS / "matrix_ode.toml", "--out-dir", tmp_path)
    root = _root(capsys)
    assert (root / "matrix_ode.csv").exists()
    summary = orjson.loads((root / "summary.json").read_bytes())
    assert summary["distance_to_gausson"] < 1e-12
    manifest = orjson.loads((root / "manifest.json").read_bytes())
    assert manifest["command"] == "matrix-ode"
    assert set(manifest["outputs"]) == {"matrix_ode.csv", "summary.json"}


def test_missing_field_exits_with_config_code(tmp_path, write_toml, capsys):
    cfg = write_toml("no_lambda.toml", "a_in = [[[2.0, 0.0]]]\n")
    code, err = _exit_code(["matrix-ode", "--config", cfg, "--out-dir", tmp_path], capsys)
    assert code == 2
    assert "ConfigInvalid" in err and "lambda" in err


def test_crossing_window_exits_with_gate_code(tmp_path, capsys):
    cfg = CONFIGS / "overlapping_members.toml"
    code, err = _exit_code(["build-multisoliton", "--config", cfg, "--out-dir", tmp_path], capsys)
    assert code == 3
    assert "SeparationViolated" in err


def test_overlapping_partition_exits_with_gate_code(tmp_path, capsys):
    cfg = CONFIGS / "localized_overlap.toml"
    code, err = _exit_code(["localized", "--config", cfg, "--out-dir", tmp_path], capsys)
    assert code == 3
    assert "SupportsOverlap" in err


def test_single_member_reports_the_floor(tmp_path, write_toml, capsys):
    cfg = write_toml(
        "floor.toml",
        "lambda = 1.0\nt_n = [2.0]\n\n[[members]]\nx0 = 0.0\nv = 0.5\n\n[solver]\ndt = 1e-2\n",
    )
    _main("build-multisoliton", "--config", cfg, "--out-dir", tmp_path)
    root = _root(capsys)
    floor = orjson.loads((root / "floor.json").read_bytes())
    assert floor["t_n"] == [2.0]
    assert 0.0 <= floor["floor"] < 1e-2
    assert not list(root.glob("errors_T*.csv"))


def test_inequality_sweeps_are_reproducible(tmp_path, capsys):
    roots = []
    for name in ("a", "b"):
        _main("verify-inequalities", "--samples", 1000, "--seed", 5, "--out-dir", tmp_path / name)
        roots.append(_root(capsys))
    first, second = (r / "log_pair.json" for r in roots)
    assert first.read_bytes() == second.read_bytes()
    report = orjson.loads(first.read_bytes())
    assert report["samples"] == 1000 and report["violations"] == 0
    assert (roots[0] / "pointwise_majorant.json").exists()


def test_resting_gausson_localized_action(tmp_path, write_toml, capsys):
    cfg = write_toml(
        "rest.toml",
        "lambda = 1.0\nt_n = 0.5\nt_end = 0.4\ndt = 0.1\nv_star = 0.0\n\n"
        "[[members]]\nx0 = 0.0\nv = 0.0\n\n[solver]\ndt = 1e-3\n",
    )
    _main("localized", "--config", cfg, "--out-dir", tmp_path)
    root = _root(capsys)
    slow = orjson.loads((root / "slow_variation.json").read_bytes())
    assert slow["max_abs_derivative"] < 1e-3
    assert slow["partition_derivative_ok"]
    assert (root / "action_defect.csv").exists()


def test_acceptance_single_criterion(tmp_path, capsys):
    _main("acceptance", "--only", "gausson_fixed_point", "--out-dir", tmp_path)
    root = _root(capsys)
    summary = orjson.loads((root / "summary.json").read_bytes())
    assert summary["passed"]
    assert [c["name"] for c in summary["criteria"]] == ["gausson_fixed_point"]


def test_zero_tolerance_forces_failure(tmp_path, write_toml, capsys):
    cfg = write_toml("strict.toml", "[tolerances]\ngausson_fixed_point = 0.0\n")
    argv = ["acceptance", "--config", cfg, "--only", "gausson_fixed_point", "--out-dir", tmp_path]
    code, err = _exit_code(argv, capsys)
    assert code == 1
    assert "gausson_fixed_point" in err


def test_unknown_criterion_is_a_config_error(tmp_path, capsys):
    code, err = _exit_code(["acceptance", "--only", "nope", "--out-dir", tmp_path], capsys)
    assert code == 2
    assert "nope" in err


@pytest.mark.slow
def test_localized_pair_run(tmp_path, capsys):
    _main("localized", "--config", CONFIGS / "localized.toml", "--out-dir", tmp_path)
    root = _root(capsys)
    slow = orjson.loads((root / "slow_variation.json").read_bytes())
    assert slow["partition_derivative_ok"]
    assert slow["energy_drift"] < 1e-3
    assert slow["v_star"] == 2.0
    for name in ("localized.csv", "action_defect.csv", "tails.csv", "orthogonality.csv"):
        assert (root / name).exists()


def test_sample_and_seed_overrides_get_their_own_runs(tmp_path, capsys):
    roots = []
    for samples, seed in ((1000, 5), (2000, 5), (1000, 6)):
        _main(
            "verify-inequalities", "--samples", samples, "--seed", seed, "--out-dir", tmp_path
        )
        roots.append(_root(capsys))
    assert len(set(roots)) == 3
    for root, (samples, seed) in zip(roots, ((1000, 5), (2000, 5), (1000, 6))):
        manifest = orjson.loads((root / "manifest.json").read_bytes())
        assert manifest["config"]["samples"] == samples
        assert manifest["seed"] == seed

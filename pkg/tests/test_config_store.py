import numpy as np
import orjson
import pytest

from conftest import CONFIGS
from lognls_lab.experiments import (
    InequalityRunConfig,
    LocalizedRunConfig,
    MatrixOdeRunConfig,
    MemberSpec,
    MultiRunConfig,
    load_config,
)
from lognls_lab.infra.errors import ConfigInvalid
from lognls_lab.infra.store import RunDir, config_hash, read_csv, write_csv


def test_bundled_two_gausson_config_loads():
    cfg = load_config(CONFIGS / "two_gaussons_1d.toml", MultiRunConfig)
    members = cfg.params()
    assert cfg.t_n == [10.0, 12.0, 14.0, 16.0]
    assert all(p.is_gausson for p in members)
    assert [float(p.v[0]) for p in members] == [1.0, -1.0]


def test_breather_members_from_alpha():
    cfg = load_config(CONFIGS / "two_breathers_1d.toml", MultiRunConfig)
    members = cfg.params()
    assert not any(p.is_gausson for p in members)
    assert members[0].a_in[0, 0] == pytest.approx(1.0)


def test_missing_lambda_names_the_field(write_toml):
    path = write_toml("bad.toml", "a_in = [[[2.0, 0.0]]]\n")
    with pytest.raises(ConfigInvalid) as err:
        load_config(path, MatrixOdeRunConfig)
    assert "lambda" in str(err.value)


def test_syntax_error_reports_position(write_toml):
    path = write_toml("broken.toml", "lambda = = 1.0\nt_end = 3.0\n")
    with pytest.raises(ConfigInvalid) as err:
        load_config(path, MatrixOdeRunConfig)
    assert "line" in str(err.value)


def test_unknown_keys_are_rejected(write_toml):
    path = write_toml("typo.toml", "lambda = 1.0\na_in = [[[2.0, 0.0]]]\nt_ned = 3.0\n")
    with pytest.raises(ConfigInvalid) as err:
        load_config(path, MatrixOdeRunConfig)
    assert "t_ned" in str(err.value)


def test_member_takes_a_in_or_alpha_not_both():
    with pytest.raises(ValueError):
        MemberSpec(a_in=[[(2.0, 0.0)]], alpha=(1.0, 0.0))


def test_localized_window_must_fit_before_t_n():
    with pytest.raises(ValueError):
        LocalizedRunConfig(lam=1.0, members=[MemberSpec()], t_n=2.0, t_offset=1.5, t_end=1.0)


def test_localized_sample_times():
    cfg = load_config(CONFIGS / "localized.toml", LocalizedRunConfig)
    times = cfg.times()
    assert times[0] == 0.0 and times[-1] == pytest.approx(2.0)
    assert len(times) == 41


def test_config_hash_is_content_addressed():
    a = InequalityRunConfig(samples=10)
    assert config_hash(a) == config_hash(InequalityRunConfig(samples=10))
    assert config_hash(a) != config_hash(InequalityRunConfig(samples=11))
    assert len(config_hash(a)) == 16


def test_seed_is_part_of_the_run_id(tmp_path):
    cfg = InequalityRunConfig(samples=10)
    assert config_hash(cfg, 5) != config_hash(cfg, 6)
    assert config_hash(cfg, 5) != config_hash(cfg)
    roots = {RunDir(tmp_path, "demo", cfg, seed=s).root for s in (5, 6)}
    assert len(roots) == 2


def test_csv_keeps_full_precision(tmp_path):
    rows = np.array([[0.1, 1.0 / 3.0], [2.0, np.pi]])
    write_csv(tmp_path / "t.csv", ["a", "b"], rows)
    cols, back = read_csv(tmp_path / "t.csv")
    assert cols == ["a", "b"]
    assert np.array_equal(back, rows)


def test_manifest_lists_every_output(tmp_path):
    run = RunDir(tmp_path, "demo", InequalityRunConfig(samples=3), seed=7)
    run.json("a.json", {"x": np.float64(1.5), "arr": np.arange(3)})
    run.csv("b.csv", ["t"], np.array([[1.0]]))
    manifest = orjson.loads(run.finish().read_bytes())
    assert sorted(manifest["outputs"]) == ["a.json", "b.csv"]
    assert manifest["seed"] == 7 and manifest["status"] == "ok"
    assert all((run.root / p).exists() for p in manifest["outputs"])

import os
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if SRC.exists():
    sys.path.insert(0, str(SRC))

# no rotating log files from test runs
os.environ.setdefault("LOGNLS_LOG_DIR", "")

import pytest  # noqa: E402

from lognls_lab.dynamics import GaussianParams, eval_gausson  # noqa: E402
from lognls_lab.experiments import RunContext  # noqa: E402
from lognls_lab.solver import Grid, SolverConfig, sample  # noqa: E402

CONFIGS = ROOT / "configs"


@pytest.fixture
def grid1d():
    return Grid(dim=1, extent=40.0, n=256)


@pytest.fixture
def solver_cfg():
    return SolverConfig(lam=1.0, dt=1e-3)


@pytest.fixture
def gausson():
    return GaussianParams.gausson(1.0)


@pytest.fixture
def gausson_field(grid1d, gausson):
    p = gausson
    return sample(lambda x: eval_gausson(p.omega, p.x0, p.v, p.theta, p.lam, 0.0, x), grid1d)


@pytest.fixture
def crossing_pair():
    """Gaussons at x0 = -8, +8 moving toward each other with v = +1, -1."""
    return [
        GaussianParams.gausson(1.0, x0=[-8.0], v=[1.0]),
        GaussianParams.gausson(1.0, x0=[8.0], v=[-1.0]),
    ]


@pytest.fixture
def ctx(tmp_path):
    return RunContext(out_dir=tmp_path / "runs", seed=42, jobs=1)


@pytest.fixture
def write_toml(tmp_path):
    def _write(name: str, text: str) -> pathlib.Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write

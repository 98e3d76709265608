import math

import numpy as np
import pytest

from kerrjcm.model import ModelParams
from kerrjcm.state import BlockEnsemble

FIGURE_GRID = [(0.0, 0.0), (0.0, 5.0), (0.4, 0.0), (0.4, 5.0)]


def scenario(chi, delta, beta=0.0, **kw):
    return ModelParams(beta=beta, **kw).with_scaled(chi, delta)


_ENSEMBLES = {}


def ensemble_for(chi, delta, beta=0.0, weighting="projected"):
    key = (chi, delta, beta, weighting)
    if key not in _ENSEMBLES:
        _ENSEMBLES[key] = BlockEnsemble(scenario(chi, delta, beta), weighting)
    return _ENSEMBLES[key]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def write_config(tmp_path):
    def _write(text, name="run.cfg"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


BETAS = [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi]

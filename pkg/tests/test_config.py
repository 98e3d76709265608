import math

import pytest

from kerrjcm.config import FIGURE_GRID, RunConfig, parse_config
from kerrjcm.exceptions import ConfigError
from kerrjcm.model import ModelParams


def test_empty_gives_defaults():
    cfg = parse_config("")
    assert cfg.params == ModelParams()
    assert (cfg.tau_start, cfg.tau_end, cfg.tau_steps) == (0.0, 30.0, 600)
    assert cfg.taus.size == 601 and cfg.taus[-1] == 30.0
    assert cfg.sweep is None and cfg.scenarios == FIGURE_GRID
    assert cfg.params.require_identical() == pytest.approx(5.0)
    assert abs(cfg.params.alpha1) ** 2 == pytest.approx(10.0)


def test_partial_config():
    cfg = parse_config("chi=0.4\ntau_end=30")
    assert cfg.params.chi == 0.4
    assert cfg.tau_end == 30.0
    assert cfg.params.beta == 0.0 and cfg.params.n_max == 40


def test_comments_and_whitespace():
    cfg = parse_config("# header\n\n  beta = 1.5   # atoms mixed\nn_max=45\n")
    assert cfg.params.beta == 1.5
    assert cfg.params.n_max == 45


def test_beta_above_pi():
    with pytest.raises(ConfigError) as err:
        parse_config("chi=0.1\nbeta=4.0")
    assert err.value.line == 2


@pytest.mark.parametrize("text,line", [
    ("chi=0.1\ngamma=2", 2),
    ("chi=abc", 1),
    ("n_max=4.5", 1),
    ("chi=0.1\nchi=0.2", 2),
    ("just words", 1),
    ("tau_start=5\ntau_end=3", 2),
    ("tau_steps=1", 1),
    ("lambda=-1", 1),
    ("alpha1_sq=-2", 1),
    ("delta=3\nomega1=2", 2),
    ("sweep=0.4", 1),
    ("sweep=a:b", 1),
    ("chi=nan", 1),
])
def test_errors_carry_line(text, line):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_scaled_quantities():
    cfg = parse_config("lambda=2\nchi=0.4\ndelta=3")
    p = cfg.params
    assert p.lambda1 == p.lambda2 == 2.0
    assert p.chi == pytest.approx(0.8)
    assert p.require_identical() == pytest.approx(6.0)


def test_explicit_frequencies():
    cfg = parse_config("omega1=3\nomega2=3\nOmega1=2\nOmega2=2\nlambda12=0.25")
    # normal modes at 2.25 and 1.75
    assert cfg.params.require_identical() == pytest.approx(3.5)


def test_sweep():
    cfg = parse_config("sweep = 0:0, 0.4:5 ,1:-2")
    assert cfg.sweep == ((0.0, 0.0), (0.4, 5.0), (1.0, -2.0))


def test_run_config_invariants():
    with pytest.raises(ConfigError):
        RunConfig(tau_start=-1.0)
    with pytest.raises(ConfigError):
        RunConfig(tau_steps=1)
    assert RunConfig(tau_end=math.pi, tau_steps=2).taus[1] == pytest.approx(math.pi / 2)

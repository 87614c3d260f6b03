import pytest

from config import Config, config


def test_defaults():
    assert config.BREAKDOWN_TOL > 0
    assert Config().RECOVERY_GRID_POINTS == 512
    assert Config().DEFAULT_MOMENT_COUNT == 20


def test_validate_accepts_defaults():
    assert Config().validate()


@pytest.mark.parametrize("name, value", [
    ("PD_TOL", 0.0),
    ("POLE_TOL", -1e-9),
    ("QUADRATURE_POINTS", 1),
    ("RECOVERY_GRID_POINTS", 8),
    ("MASS_TOL", 0.0),
    ("ATOM_TRUNCATION_STEPS", 1),
    ("MASS_MAX_POINTS", 16),
])
def test_validate_rejects(name, value):
    cfg = Config()
    setattr(cfg, name, value)
    with pytest.raises(ValueError, match=name):
        cfg.validate()

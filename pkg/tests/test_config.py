import pytest

from axishock.config import RunConfig, config_from_dict, load_config
from axishock.errors import ConfigError


def test_defaults_are_reference_case():
    cfg = RunConfig()
    assert (cfg.gamma, cfg.L1, cfg.L2, cfg.exit_pressure) == (1.4, 0.0, 2.0, 5.89)
    assert cfg.force == {"kind": "constant", "g0": 0.5}
    assert (cfg.n1, cfg.n2) == (128, 64) and cfg.march_grid == (256, 64)


def test_toml_sections(tmp_path):
    (tmp_path / "g.csv").write_text("x,g\n0,0.4\n1,0.5\n2,0.6\n")
    (tmp_path / "run.toml").write_text("""
[gas]
gamma = 1.3
[force]
kind = "tabulated"
csv = "g.csv"
[background]
exit_pressure = 5.5
[perturbation]
sigma = 0.002
[grid]
n1 = 64
n2 = 32
[solver]
backend = "modes"
[verify]
h2_factor = 4.0
limits = { rh_1 = 1e-3 }
""")
    cfg = load_config(tmp_path / "run.toml")
    assert cfg.gamma == 1.3 and cfg.exit_pressure == 5.5 and cfg.sigma == 0.002
    assert (cfg.n1, cfg.n2, cfg.backend) == (64, 32, "modes")
    assert cfg.force_profile().g(1.5) == pytest.approx(0.55)
    th = cfg.thresholds(0.1, ["euler_mass", "euler_mass_full", "entropy_min", "rh_1"])
    assert th == {"euler_mass": pytest.approx(0.04), "entropy_min": 0.0, "rh_1": 1e-3}


@pytest.mark.parametrize("doc", [{"mystery": {}}, {"grid": {"n3": 4}}, {"grid": {"n1": 8}},
                                 {"solver": {"backend": "spectral"}}, {"gas": {"gamma": 1.0}},
                                 {"force": {"kind": "quadratic"}}])
def test_bad_configs_rejected(doc):
    with pytest.raises(ConfigError) as exc:
        config_from_dict(doc).force_profile()
    assert exc.value.exit_code == 5


def test_missing_or_broken_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.toml")
    (tmp_path / "bad.toml").write_text("[gas\n")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "bad.toml")


def test_replace_and_sigma_override():
    cfg = RunConfig().replace(n1=64, sigma=0.0, backend=None)
    assert cfg.n1 == 64 and cfg.sigma == 0.0 and cfg.backend == "fd"
    assert RunConfig().sigma == 0.005
    assert cfg.perturbation_data(0.01).sigma == 0.01
    assert RunConfig(perturbation={"preset": "none", "sigma": 0.1}).perturbation_data().wall_slope(1.0) == 0.0

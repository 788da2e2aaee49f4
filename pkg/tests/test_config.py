"""Tests for src/config.py: parsing, coercion, validation and derived objects."""

import math
from pathlib import Path

import pytest

from src.config import ConfigError, RunConfig, load_config, parse_config, validate_config
from src.integrator import Scheme

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


class TestParseConfig:
    def test_empty_text_gives_defaults(self):
        assert parse_config("") == RunConfig()

    def test_values_and_comments(self):
        config = parse_config(
            "# Orszag-Tang on the critical line\n"
            "n = 32          # grid\n"
            "\n"
            "nu = 0.5\n"
            "scheme = IFRK3\n"
            "write_snapshots = yes\n"
        )
        assert config.n == 32 and isinstance(config.n, int)
        assert config.nu == 0.5
        assert config.scheme == "IFRK3"
        assert config.write_snapshots is True

    @pytest.mark.parametrize("raw, expected", [("true", True), ("On", True), ("0", False), ("no", False)])
    def test_booleans(self, raw, expected):
        assert parse_config(f"write_snapshots = {raw}").write_snapshots is expected

    def test_float_keys_accept_integer_literals(self):
        assert parse_config("t_end = 2").t_end == 2.0

    def test_critical_line_fills_r2(self):
        config = parse_config("enforce_critical_line = true\nr1 = 0.3\n")
        assert config.r2 == pytest.approx(0.7)

    def test_critical_line_fills_r1(self):
        config = parse_config("enforce_critical_line = true\nr2 = 0.25\n")
        assert config.r1 == pytest.approx(0.75)

    @pytest.mark.parametrize("text, line, match", [
        ("n = 32\nthis line has no equals\n", 2, "key = value"),
        ("colour = blue\n", 1, "unknown key"),
        ("n = 32\n\nn = 64\n", 3, "duplicate key 'n'"),
        ("nu =\n", 1, "missing value"),
        ("n = 3.5\n", 1, "not an integer"),
        ("nu = fast\n", 1, "not a number"),
        ("nu = inf\n", 1, "finite"),
        ("write_snapshots = maybe\n", 1, "not a boolean"),
    ])
    def test_syntax_errors_carry_line(self, text, line, match):
        with pytest.raises(ConfigError, match=match) as info:
            parse_config(text)
        assert info.value.line == line
        assert str(info.value).startswith(f"line {line}: ")

    @pytest.mark.parametrize("text, line, match", [
        ("nu = 1\nr1 = 1.5\n", 2, r"r1 = 1.5 must lie in \[0, 1\]"),
        ("alpha = 0\n", 1, "alpha"),
        ("n = 7\n", 1, "even integer"),
        ("scheme = RK45\n", 1, "scheme"),
        ("ic = vortex\n", 1, "ic"),
        ("cfl = 2\n", 1, "cfl"),
        ("rng = mt19937\n", 1, "rng"),
    ])
    def test_domain_errors_carry_line(self, text, line, match):
        with pytest.raises(ConfigError, match=match) as info:
            parse_config(text)
        assert info.value.line == line

    def test_dt_min_not_below_dt_max(self):
        with pytest.raises(ConfigError, match="dt_min") as info:
            parse_config("dt_max = 1e-3\ndt_min = 1e-2\n")
        assert info.value.line == 2

    def test_inconsistent_critical_line(self):
        with pytest.raises(ConfigError, match="enforce_critical_line"):
            parse_config("enforce_critical_line = true\nr1 = 0.3\nr2 = 0.3\n")

    def test_random_k_range(self):
        with pytest.raises(ConfigError, match="k_min = 5 must not exceed k_max = 4"):
            parse_config("ic = random\nk_min = 5\nk_max = 4\n")

    def test_random_k_max_beyond_dealiased_band(self):
        with pytest.raises(ConfigError, match="largest dealiased wavenumber 10") as info:
            parse_config("ic = random\nn = 32\nk_max = 11\n")
        assert info.value.line == 3

    def test_k_max_ignored_for_other_ics(self):
        assert parse_config("ic = orszag_tang\nn = 32\nk_max = 11\n").k_max == 11


class TestValidateConfig:
    def test_default_is_valid(self):
        config = RunConfig()
        assert validate_config(config) is config

    def test_defaulted_key_reports_line_zero(self):
        with pytest.raises(ConfigError) as info:
            validate_config(RunConfig(eta=-1.0))
        assert info.value.line == 0


class TestDerivedObjects:
    def test_physical_params(self):
        params = RunConfig(nu=0.1, eta=0.2, alpha=0.3, r1=0.4, r2=0.6).physical_params
        assert (params.nu, params.eta, params.alpha, params.r1, params.r2) == (0.1, 0.2, 0.3, 0.4, 0.6)
        assert params.critical_line

    def test_integrator_config(self):
        integrator = RunConfig(scheme="IFRK3", t_end=3.0, observe_every=5).integrator_config
        assert integrator.scheme is Scheme.IFRK3
        assert integrator.t_end == 3.0 and integrator.observe_every == 5

    def test_grid(self):
        grid = RunConfig(n=16).grid
        assert grid.n == 16 and grid.length == pytest.approx(2.0 * math.pi)

    def test_to_dict_round_trips(self):
        config = RunConfig(n=16, ic="zero")
        assert RunConfig(**config.to_dict()) == config


class TestLoadConfig:
    @pytest.mark.parametrize("name", [
        "orszag_tang.cfg", "critical_line_random.cfg", "single_mode_decay.cfg", "zero.cfg",
    ])
    def test_shipped_configs_parse(self, name):
        config = load_config(DATA_DIR / name)
        assert isinstance(config, RunConfig)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_config(tmp_path / "absent.cfg")

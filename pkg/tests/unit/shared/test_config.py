"""
Unit tests for shared/config.py
"""

import pytest
import yaml
from pydantic import ValidationError

from shared.config import (
    CONFIG_ENV_VAR,
    CatalogConfig,
    LoggingConfig,
    RootsConfig,
    Settings,
    TritangentConfig,
    find_config_file,
    get_settings,
    reset_settings,
)


@pytest.fixture(autouse=True)
def reset_settings_cache():
    """Reset settings cache before each test."""
    reset_settings()
    yield
    reset_settings()


class TestRootsConfig:
    """Tests for RootsConfig model."""

    def test_default_values(self):
        """Test default positivity functional and enumeration bound."""
        config = RootsConfig()
        assert config.positivity_base == 100
        assert config.coordinate_bound == 3

    def test_bound_below_three_rejected(self):
        """Test that a bound missing some roots is rejected."""
        with pytest.raises(ValidationError):
            RootsConfig(coordinate_bound=2)


class TestCatalogConfig:
    """Tests for CatalogConfig model."""

    def test_default_values(self):
        """Test default catalog settings."""
        config = CatalogConfig()
        assert config.version == "1.0.0"
        assert config.validate_on_build is True


class TestTritangentConfig:
    """Tests for TritangentConfig model."""

    def test_default_values(self):
        """Test default randomized check settings."""
        config = TritangentConfig()
        assert config.seed == 20240601
        assert config.random_instances == 120
        assert config.substitution_trials == 10
        assert config.coefficient_bound == 5

    def test_too_few_instances_rejected(self):
        """Test that fewer than 100 random instances is rejected."""
        with pytest.raises(ValidationError):
            TritangentConfig(random_instances=50)


class TestLoggingConfig:
    """Tests for LoggingConfig model."""

    def test_level_normalized(self):
        """Test that log levels are upper-cased."""
        assert LoggingConfig(level="debug").level == "DEBUG"

    def test_invalid_level(self):
        """Test that unknown levels are rejected."""
        with pytest.raises(ValidationError):
            LoggingConfig(level="verbose")

    def test_invalid_format(self):
        """Test that unknown renderers are rejected."""
        with pytest.raises(ValidationError):
            LoggingConfig(format="xml")


class TestSettings:
    """Tests for main Settings class."""

    def test_environment_from_env(self, monkeypatch):
        """Test environment variable takes effect."""
        monkeypatch.setenv("ENVIRONMENT", "production")
        settings = Settings()
        assert settings.environment == "production"
        assert settings.is_production is True
        assert settings.is_test is False

    def test_invalid_environment(self, monkeypatch):
        """Test that unknown environments are rejected."""
        monkeypatch.setenv("ENVIRONMENT", "moon")
        with pytest.raises(ValidationError):
            Settings()

    def test_nested_override(self, monkeypatch):
        """Test nested keys through the __ delimiter."""
        monkeypatch.setenv("TRITANGENT__SEED", "7")
        monkeypatch.setenv("ROOTS__POSITIVITY_BASE", "1000")
        settings = Settings()
        assert settings.tritangent.seed == 7
        assert settings.roots.positivity_base == 1000

    def test_test_environment(self):
        """Test that the suite runs in the test environment."""
        assert Settings().is_test is True


class TestConfigFile:
    """Tests for locating and layering the YAML file."""

    def write(self, path, data):
        path.write_text(yaml.safe_dump(data))
        return path

    def test_first_existing_candidate(self, tmp_path, monkeypatch):
        """Test candidate order when DELPEZZO_CONFIG is unset."""
        monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)
        second = self.write(tmp_path / "second.yaml", {})
        assert find_config_file([tmp_path / "missing.yaml", second]) == second

    def test_no_candidate(self, tmp_path, monkeypatch):
        monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)
        assert find_config_file([tmp_path / "missing.yaml"]) is None

    def test_explicit_path(self, tmp_path, monkeypatch):
        """Test that DELPEZZO_CONFIG is used as given."""
        path = tmp_path / "elsewhere.yaml"
        monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
        assert find_config_file([]) == path

    def test_yaml_values_loaded(self, tmp_path, monkeypatch):
        """Test that YAML overrides field defaults."""
        path = self.write(tmp_path / "config.yaml", {"tritangent": {"seed": 3, "coefficient_bound": 4}})
        monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
        settings = Settings()
        assert settings.tritangent.seed == 3
        assert settings.tritangent.coefficient_bound == 4

    def test_environment_wins_over_yaml(self, tmp_path, monkeypatch):
        """Test that env vars override YAML key by key."""
        path = self.write(tmp_path / "config.yaml", {"tritangent": {"seed": 3, "coefficient_bound": 4}})
        monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
        monkeypatch.setenv("TRITANGENT__SEED", "7")
        settings = Settings()
        assert settings.tritangent.seed == 7
        assert settings.tritangent.coefficient_bound == 4

    def test_empty_or_missing_file(self, tmp_path, monkeypatch):
        """Test that an empty or absent file leaves the defaults."""
        empty = tmp_path / "empty.yaml"
        empty.write_text("")
        for path in (empty, tmp_path / "missing.yaml"):
            monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
            assert Settings().tritangent.seed == 20240601

    def test_invalid_yaml_value(self, tmp_path, monkeypatch):
        path = self.write(tmp_path / "config.yaml", {"tritangent": {"random_instances": 10}})
        monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
        with pytest.raises(ValidationError):
            Settings()


class TestGetSettings:
    """Tests for the cached settings accessor."""

    def test_cached(self):
        """Test that the same instance is returned until reset."""
        first = get_settings()
        assert get_settings() is first
        reset_settings()
        assert get_settings() is not first

    def test_reads_environment(self, monkeypatch):
        """Test that the cached instance sees exported variables."""
        monkeypatch.setenv("TRITANGENT__COEFFICIENT_BOUND", "9")
        assert get_settings().tritangent.coefficient_bound == 9

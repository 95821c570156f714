"""Unit tests for runtime settings and run configuration files."""

import pytest
from pydantic import ValidationError

from poissondepth.core.settings import get_settings, load_config_file, resolve


@pytest.fixture
def config_file(tmp_path):
    """Run configuration mixing dashes, underscores and case."""
    path = tmp_path / "run.conf"
    path.write_text("# solver\nlambda=2.5\nCG-TOL=1e-10\ncg_max_iter = 300\nmethod=lwlr\n")
    return path


def test_keys_are_normalized(config_file):
    """Test that keys are lowercased with dashes mapped to underscores."""
    assert load_config_file(config_file) == {
        "lambda": "2.5",
        "cg_tol": "1e-10",
        "cg_max_iter": "300",
        "method": "lwlr",
    }


def test_missing_file(tmp_path):
    """Test that a missing configuration file is reported."""
    with pytest.raises(FileNotFoundError):
        load_config_file(tmp_path / "absent.conf")


def test_key_without_value(tmp_path):
    """Test that a bare key is rejected."""
    path = tmp_path / "bare.conf"
    path.write_text("lambda\n")
    with pytest.raises(ValueError, match="no value"):
        load_config_file(path)


def test_resolve_precedence(config_file):
    """Test flag over config file over default."""
    config = load_config_file(config_file)

    assert resolve(7.0, config, "lambda", 1.0) == 7.0
    assert resolve(None, config, "lambda", 1.0) == 2.5
    assert resolve(None, config, "cg_max_iter", None, cast=int) == 300
    assert resolve(None, config, "eps_pos", 1e-6) == 1e-6


def test_threads_from_environment(monkeypatch):
    """Test that THREADS and the log level come from the environment."""
    monkeypatch.setenv("THREADS", "3")
    monkeypatch.setenv("POISSONDEPTH_LOG_LEVEL", "debug")

    settings = get_settings()

    assert settings.threads == 3
    assert settings.log_level == "debug"


def test_threads_default_and_bounds(monkeypatch):
    """Test the CPU-count default and rejection of zero threads."""
    monkeypatch.delenv("THREADS", raising=False)
    assert get_settings().threads >= 1

    monkeypatch.setenv("THREADS", "0")
    with pytest.raises(ValidationError):
        get_settings()

"""Tests for settings functionality."""

import json
import os

import pytest

from src.sis_rdhei.settings import DEFAULT_SETTINGS, Settings


@pytest.fixture
def settings_filename(tmp_path):
    """Create a temporary settings file path for testing."""
    settings_file = tmp_path / "test_settings.json"
    return str(settings_file)


@pytest.fixture
def settings_object(settings_filename):
    """Create a settings object backed by a temporary file."""
    return Settings(settings_filename)


def test_load_settings_new_file(settings_filename):
    """Test loading settings when file doesn't exist."""
    settings = Settings(settings_filename)
    assert settings.as_dict() == DEFAULT_SETTINGS
    assert not os.path.exists(settings_filename)


def test_load_settings_existing_file(settings_filename):
    """Test loading settings from existing file."""
    with open(settings_filename, "w") as f:
        json.dump({"scheme": {"block": 4}}, f)

    settings = Settings(settings_filename)
    assert settings.get("scheme.block") == 4
    assert settings.get("scheme.r") == DEFAULT_SETTINGS["scheme"]["r"]
    assert settings.get("output") == DEFAULT_SETTINGS["output"]


def test_load_settings_broken_file(settings_filename):
    """Test a malformed file falls back to defaults."""
    with open(settings_filename, "w") as f:
        f.write("{not json")
    assert Settings(settings_filename).as_dict() == DEFAULT_SETTINGS
    with open(settings_filename, "w") as f:
        f.write("[1, 2]")
    assert Settings(settings_filename).as_dict() == DEFAULT_SETTINGS


def test_get_setting(settings_object):
    """Test getting settings using dot notation."""
    assert settings_object.get("scheme") == DEFAULT_SETTINGS["scheme"]
    assert settings_object.get("logging.level") == "INFO"

    with pytest.raises(ValueError):
        settings_object.get("badPath")

    with pytest.raises(ValueError):
        settings_object.get("scheme.block.deeper")

    with pytest.raises(ValueError):
        settings_object.get("missing.block")


def test_update_settings_value(settings_filename, settings_object):
    """Test updating a setting value and reloading from file."""
    settings_object.update("scheme.n", 6)  # will save to file too

    settings2 = Settings(settings_filename)
    assert settings2.get("scheme.n") == 6

    settings_object.update("output.share_name", "s{id}.pgm")
    settings3 = Settings(settings_filename)
    assert settings3.get("output.share_name") == "s{id}.pgm"
    assert settings3.get("scheme.n") == 6


def test_update_settings_dict(settings_filename, settings_object):
    """Test replacing a nested section and reloading from file."""
    test_value = {"block": 2, "r": 3, "n": 5}
    settings_object.update("scheme", test_value)

    settings2 = Settings(settings_filename)
    assert settings2.get("scheme") == test_value


def test_defaults_are_not_shared(settings_object):
    """Test changing loaded settings leaves the defaults untouched."""
    settings_object.update("scheme.block", 2)
    assert DEFAULT_SETTINGS["scheme"]["block"] == 8


def test_update_dict_recursively():
    """Test recursive dictionary updating."""
    target = {"a": 10, "b": {"c": 2}}
    source = {"a": 1, "b": {"c": 2, "d": 3}, "e": 4}

    result, updated = Settings._update_recursively(target, source)
    assert updated is True
    assert result["a"] == 10
    assert result["b"]["d"] == 3
    assert result["e"] == 4
    assert result["b"]["c"] == 2

    _, updated = Settings._update_recursively(result, source)
    assert updated is False

"""Settings management for the command-line front end."""

import copy
import json
import os
from typing import Any, Dict, Tuple

from loguru import logger

from .utils import LOG_FORMAT, atomic_write_bytes

DEFAULT_SETTINGS: Dict[str, Any] = {
    "scheme": {
        "block": 8,
        "r": 4,
        "n": 4,
    },
    "output": {
        "share_name": "share_{id}.pgm",
    },
    "logging": {
        "level": "INFO",
        "format": LOG_FORMAT,
    },
}


class Settings:
    """JSON-backed settings with dot-notation access and default back-filling."""

    def __init__(self, settings_file: str = "settings.json"):
        """Initialize settings manager.

        Args:
            settings_file: Path to the settings JSON file; it is only written by
                ``update``/``save``.
        """
        self._settings_file = settings_file
        self._settings: Dict[str, Any] = {}
        self.load()

    @property
    def path(self) -> str:
        return self._settings_file

    def load(self) -> None:
        """Load settings from file, falling back to defaults for anything missing."""
        if not os.path.exists(self._settings_file):
            self._settings = copy.deepcopy(DEFAULT_SETTINGS)
            return

        try:
            with open(self._settings_file, "r") as f:
                loaded = json.load(f)
            if not isinstance(loaded, dict):
                raise ValueError(f"top level of {self._settings_file} must be an object")
        except (OSError, ValueError) as e:
            logger.warning(
                "Error loading settings from {}: {}; using defaults", self._settings_file, e
            )
            self._settings = copy.deepcopy(DEFAULT_SETTINGS)
            return

        self._settings, updated = self._update_recursively(loaded, DEFAULT_SETTINGS)
        if updated:
            logger.debug("filled missing settings from defaults")

    def save(self) -> None:
        """Save current settings to file."""
        atomic_write_bytes(self._settings_file, json.dumps(self._settings, indent=2).encode())

    def _walk(self, key: str) -> Tuple[Dict[str, Any], str]:
        keys = key.split(".")
        current = self._settings
        for k in keys[:-1]:
            if k not in current:
                raise ValueError(f"Can't find {key}, because along that path {k} does not exist")
            if not isinstance(current[k], dict):
                raise ValueError(
                    f"Can't find {key}, because along that path {k} is not a dictionary"
                )
            current = current[k]
        return current, keys[-1]

    def get(self, key: str) -> Any:
        """Get a setting value using dot notation.

        Examples:
            >>> Settings("missing.json").get("scheme.block")
            8
        """
        current, final_key = self._walk(key)
        if final_key not in current:
            raise ValueError(f"Final key {final_key} in {key} does not exist")
        return current[final_key]

    def update(self, key: str, value: Any) -> None:
        """Update a setting value using dot notation and save the file."""
        current, final_key = self._walk(key)
        current[final_key] = value
        self.save()

    def as_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self._settings)

    @staticmethod
    def _update_recursively(
        target: Dict[str, Any], source: Dict[str, Any]
    ) -> Tuple[Dict[str, Any], bool]:
        """Update target dict with missing values from source dict.

        Returns:
            Tuple of (updated dict, whether any values were updated)
        """
        updated = False
        for key, value in source.items():
            if key not in target:
                target[key] = copy.deepcopy(value)
                updated = True
            elif isinstance(value, dict) and isinstance(target[key], dict):
                _, sub_updated = Settings._update_recursively(target[key], value)
                updated = updated or sub_updated
        return target, updated

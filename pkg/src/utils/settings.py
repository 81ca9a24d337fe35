"""
Settings management for the watchtower solvers
"""

import copy
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

BUDGET_ENV_VAR = "WATCHTOWER_BUDGET"


class Settings:
    def __init__(self, settings_dir: Optional[Path] = None):
        self.app_name = "watchtower"
        self.settings_dir = settings_dir or self._get_settings_directory()
        self.settings_file = self.settings_dir / "settings.json"

        # Default settings
        self.defaults = {
            "oracle": {
                "budget": 1_000_000,
                "samples": 3,
            },
            "solver": {
                "workers": 1,
                "height_search": "linear",  # or "binary"
                "max_cap_doublings": 64,
            },
            "svg": {
                "width": 800,
                "height": 500,
                "margin": 40,
                "decimals": 3,
                "interval_color": "#7a7a7a",
                "terrain_color": "#1f4e79",
                "region_fill": "#f4d58d",
                "region_stroke": "#c28f00",
                "tower_color": "#b22222",
            },
            "logging": {
                "level": "WARNING",
            },
        }

        self._settings = copy.deepcopy(self.defaults)
        self.load_settings()

    def _get_settings_directory(self) -> Path:
        """Get platform-specific settings directory"""
        if os.name == "nt":  # Windows
            base = Path(os.environ.get("APPDATA", Path.home() / "AppData" / "Roaming"))
        elif os.name == "posix":
            if "darwin" in sys.platform.lower():  # macOS
                base = Path.home() / "Library" / "Application Support"
            else:  # Linux
                base = Path(os.environ.get("XDG_CONFIG_HOME", Path.home() / ".config"))
        else:
            base = Path.home()

        return base / self.app_name

    def load_settings(self):
        """Load settings from file"""
        try:
            if self.settings_file.exists():
                with open(self.settings_file, "r", encoding="utf-8") as f:
                    loaded_settings = json.load(f)
                    self._merge_settings(loaded_settings)
        except (json.JSONDecodeError, OSError) as e:
            logger.warning("Failed to load settings from %s: %s", self.settings_file, e)

    def save_settings(self):
        """Save settings to file"""
        try:
            self.settings_dir.mkdir(parents=True, exist_ok=True)
            with open(self.settings_file, "w", encoding="utf-8") as f:
                json.dump(self._settings, f, indent=2, ensure_ascii=False)
        except OSError as e:
            logger.warning("Failed to save settings: %s", e)

    def _merge_settings(self, loaded_settings: Dict):
        """Merge loaded settings with defaults"""

        def merge_dict(default: Dict, loaded: Dict) -> Dict:
            result = copy.deepcopy(default)
            for key, value in loaded.items():
                if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                    result[key] = merge_dict(result[key], value)
                else:
                    result[key] = value
            return result

        if not isinstance(loaded_settings, dict):
            logger.warning("Ignoring settings file: top level is not an object")
            return
        self._settings = merge_dict(self.defaults, loaded_settings)

    def get(self, key: str, default: Any = None) -> Any:
        """Get setting value using dot notation (e.g., 'oracle.budget')"""
        keys = key.split(".")
        value = self._settings

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any):
        """Set setting value using dot notation"""
        keys = key.split(".")
        setting = self._settings

        # Navigate to the parent dictionary
        for k in keys[:-1]:
            if k not in setting:
                setting[k] = {}
            setting = setting[k]

        setting[keys[-1]] = value

    def oracle_budget(self) -> int:
        """Enumeration cap for the brute-force oracle; WATCHTOWER_BUDGET wins"""
        raw = os.environ.get(BUDGET_ENV_VAR)
        if raw is not None:
            try:
                budget = int(raw)
                if budget > 0:
                    return budget
            except ValueError:
                pass
            logger.warning("Ignoring %s=%r: not a positive integer", BUDGET_ENV_VAR, raw)
        return int(self.get("oracle.budget", self.defaults["oracle"]["budget"]))

    def get_all_settings(self) -> Dict:
        """Get all settings"""
        return copy.deepcopy(self._settings)

    def reset_to_defaults(self):
        """Reset all settings to defaults"""
        self._settings = copy.deepcopy(self.defaults)
        self.save_settings()

    def export_settings(self, file_path: str):
        """Export settings to file"""
        try:
            with open(file_path, "w", encoding="utf-8") as f:
                json.dump(self._settings, f, indent=2, ensure_ascii=False)
        except OSError as e:
            logger.warning("Failed to export settings: %s", e)

    def import_settings(self, file_path: str):
        """Import settings from file"""
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                imported_settings = json.load(f)
                self._merge_settings(imported_settings)
                self.save_settings()
        except (json.JSONDecodeError, OSError) as e:
            logger.warning("Failed to import settings: %s", e)


# Global settings instance
settings = Settings()

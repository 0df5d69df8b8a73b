"""
Configuration Manager - Handles workbench settings (resource guards, logging).

Config directory: ~/.velocilogic/  (override with $VELOCILOGIC_CONFIG or --config)
Files:
  - settings.yaml     # Limits and log level
"""

import logging
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import yaml

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────────────────────────────────────
# Data Classes
# ─────────────────────────────────────────────────────────────────────────────

@dataclass
class AppSettings:
    """Workbench settings."""
    # Semantics
    max_table_atoms: int = 24
    max_interpretations: int = 1 << 24
    default_max_domain: int = 2

    # Normal forms
    max_cnf_nodes: int = 1_000_000

    # Resolution prover
    max_steps: int = 50_000
    max_clause_length: int = 12
    max_term_depth: int = 8

    # Applications
    syllogism_max_domain: int = 8
    model_limit: int = 10

    # Logging
    log_level: str = "WARNING"


# ─────────────────────────────────────────────────────────────────────────────
# Config Manager
# ─────────────────────────────────────────────────────────────────────────────

class ConfigManager:
    """
    Manages workbench configuration.

    Usage:
        config = ConfigManager()
        config.load()

        limit = config.settings.max_steps
    """

    DEFAULT_CONFIG_DIR = "~/.velocilogic"
    ENV_VAR = "VELOCILOGIC_CONFIG"

    def __init__(self, config_dir: str = None):
        """
        Initialize config manager.

        Args:
            config_dir: Config directory path (default: $VELOCILOGIC_CONFIG or ~/.velocilogic)
        """
        if config_dir:
            self.config_dir = Path(config_dir).expanduser()
        elif os.environ.get(self.ENV_VAR):
            self.config_dir = Path(os.environ[self.ENV_VAR]).expanduser()
        else:
            self.config_dir = Path(self.DEFAULT_CONFIG_DIR).expanduser()

        self.settings_file = self.config_dir / "settings.yaml"
        self.settings = AppSettings()

    def _ensure_config_dir(self):
        """Create config directory if it doesn't exist."""
        if not self.config_dir.exists():
            self.config_dir.mkdir(parents=True, mode=0o700)
            logger.info("Created config directory: %s", self.config_dir)

    # ─────────────────────────────────────────────────────────────
    # Load/Save
    # ─────────────────────────────────────────────────────────────

    def load(self):
        """Load all configuration files."""
        self.load_settings()

    def load_settings(self):
        """Load settings from settings.yaml; unknown keys are ignored."""
        if not self.settings_file.exists():
            self.settings = AppSettings()
            return

        try:
            with open(self.settings_file, 'r') as f:
                data = yaml.safe_load(f) or {}

            self.settings = AppSettings(**{
                k: v for k, v in data.items()
                if k in AppSettings.__dataclass_fields__
            })
        except Exception as e:
            logger.warning("Could not load settings from %s: %s", self.settings_file, e)
            self.settings = AppSettings()

    def save_settings(self):
        """Save settings to settings.yaml."""
        try:
            self._ensure_config_dir()
            with open(self.settings_file, 'w') as f:
                yaml.dump(asdict(self.settings), f, default_flow_style=False)
        except Exception as e:
            logger.warning("Could not save settings to %s: %s", self.settings_file, e)


# ─────────────────────────────────────────────────────────────────────────────
# Global instance
# ─────────────────────────────────────────────────────────────────────────────

_config_instance: Optional[ConfigManager] = None


def get_config() -> ConfigManager:
    """Get global config manager instance."""
    global _config_instance
    if _config_instance is None:
        _config_instance = ConfigManager()
        _config_instance.load()
    return _config_instance


def set_config(config: ConfigManager):
    """Install a config manager as the global instance (CLI --config, tests)."""
    global _config_instance
    _config_instance = config


def reload_config():
    """Reload configuration from disk."""
    global _config_instance
    if _config_instance:
        _config_instance.load()
    else:
        get_config()


def settings() -> AppSettings:
    """Shortcut for the active settings."""
    return get_config().settings


# ─────────────────────────────────────────────────────────────────────────────
# CLI for testing
# ─────────────────────────────────────────────────────────────────────────────

if __name__ == "__main__":
    config = get_config()

    print(f"Config directory: {config.config_dir}")
    print(f"Settings file: {config.settings_file}")
    print()

    print("Settings:")
    for key, value in asdict(config.settings).items():
        print(f"  {key}: {value}")

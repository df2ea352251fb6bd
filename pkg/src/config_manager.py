#!/usr/bin/env python3
"""
Configuration Manager for seqlab
Loads, validates, and manages YAML configuration

Every value has a built-in default, so a configuration file only needs the
sections it changes. Command-line flags override configuration values.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from src.utils import SeqlabError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG: Dict[str, Any] = {
    "numeration": {
        "probe_depth": 64,
        "enumeration_limit": 12,
        "max_words": 2**22,
    },
    "beta": {
        "ratio_tolerance": 1e-9,
    },
    "morphic": {
        "max_letters": 2**26,
    },
    "measures": {
        "budget": 10**9,
        "max_prefix": 2**22,
        "threads": None,
        "samples": 20000,
        "seed": 0,
    },
    "output": {
        "directory": ".",
        "format": "csv",
    },
}

VALID_FORMATS = ["csv", "json"]


class ConfigValidationError(SeqlabError):
    """
    Raised when configuration validation fails.

    This exception is raised when the configuration file is malformed,
    contains unknown sections, or contains invalid values.
    """

    pass


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    """
    Manages seqlab configuration from an optional YAML file.

    Features:
    - Built-in defaults for every key
    - Load and validate YAML overrides
    - Environment variable and tilde expansion in string values
    - Dot-notation access to nested values

    Example:
        >>> config = ConfigManager('~/.config/seqlab.yaml')
        >>> budget = config.get('measures.budget')
        >>> defaults = ConfigManager()  # no file, defaults only

    Attributes:
        config_path (Path | None): Path to the configuration file
        config (dict): Effective configuration (defaults merged with file)
    """

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize config manager and load configuration.

        Args:
            config_path: Path to YAML config file (None = defaults only)

        Raises:
            FileNotFoundError: If config file doesn't exist
            yaml.YAMLError: If YAML syntax is invalid
            ConfigValidationError: If validation fails
        """
        self.config_path = Path(config_path).expanduser() if config_path else None
        self.config: Dict[str, Any] = copy.deepcopy(DEFAULT_CONFIG)
        self.load_config()

    def load_config(self) -> Dict[str, Any]:
        """Load and validate configuration from YAML file."""
        if self.config_path is None:
            self.validate_config(self.config)
            logger.debug("Using built-in configuration defaults")
            return self.config

        if not self.config_path.exists():
            raise FileNotFoundError(f"Config file not found: {self.config_path}")

        with open(self.config_path, "r") as f:
            loaded = yaml.safe_load(f)

        if loaded is None:
            raise ConfigValidationError("Config file is empty or contains only whitespace")

        if not isinstance(loaded, dict):
            raise ConfigValidationError("Config file must contain a mapping of sections")

        loaded = self._expand_env_vars(loaded)
        merged = _merge(DEFAULT_CONFIG, loaded)

        self.validate_config(merged)
        self.config = merged
        logger.info(f"Loaded config from {self.config_path}")
        return self.config

    def _expand_env_vars(self, config: Any) -> Any:
        """
        Recursively expand environment variables in configuration values.

        Supports ${VAR_NAME}, $VAR and ~ expansion in strings.
        """
        if isinstance(config, dict):
            return {key: self._expand_env_vars(value) for key, value in config.items()}
        elif isinstance(config, list):
            return [self._expand_env_vars(item) for item in config]
        elif isinstance(config, str):
            return os.path.expandvars(os.path.expanduser(config))
        else:
            return config

    def validate_config(self, config: Dict[str, Any]) -> bool:
        """Validate configuration schema and values."""
        unknown = sorted(set(config) - set(DEFAULT_CONFIG))
        if unknown:
            raise ConfigValidationError(f"Unknown config section(s): {', '.join(unknown)}")

        for section, defaults in DEFAULT_CONFIG.items():
            if not isinstance(config.get(section), dict):
                raise ConfigValidationError(f"{section} must be a mapping")
            extra = sorted(set(config[section]) - set(defaults))
            if extra:
                raise ConfigValidationError(
                    f"Unknown key(s) in {section}: {', '.join(extra)}"
                )

        self._require_positive_int(config, "numeration.probe_depth")
        self._require_int(config, "numeration.enumeration_limit", minimum=0)
        self._require_positive_int(config, "numeration.max_words")
        self._require_positive_int(config, "morphic.max_letters")
        self._require_positive_int(config, "measures.budget")
        self._require_positive_int(config, "measures.max_prefix")
        self._require_positive_int(config, "measures.samples")
        self._require_int(config, "measures.seed", minimum=0)

        tolerance = config["beta"]["ratio_tolerance"]
        if isinstance(tolerance, bool) or not isinstance(tolerance, (int, float)):
            raise ConfigValidationError("beta.ratio_tolerance must be a number")
        if tolerance <= 0:
            raise ConfigValidationError("beta.ratio_tolerance must be positive")

        threads = config["measures"]["threads"]
        if threads is not None:
            self._require_positive_int(config, "measures.threads")

        if config["output"]["format"] not in VALID_FORMATS:
            raise ConfigValidationError(
                f"output.format must be one of {VALID_FORMATS}, got: {config['output']['format']}"
            )

        if not isinstance(config["output"]["directory"], str) or not config["output"]["directory"]:
            raise ConfigValidationError("output.directory must be a non-empty string")

        logger.debug("Configuration validated successfully")
        return True

    def _require_int(self, config: Dict[str, Any], key: str, minimum: int) -> None:
        section, name = key.split(".")
        value = config[section][name]
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigValidationError(f"{key} must be an integer, got: {value!r}")
        if value < minimum:
            raise ConfigValidationError(f"{key} must be >= {minimum}, got: {value}")

    def _require_positive_int(self, config: Dict[str, Any], key: str) -> None:
        self._require_int(config, key, minimum=1)

    def get(self, key: str, default=None) -> Any:
        """
        Get configuration value by dot-separated key path.

        Args:
            key: Dot-separated key path (e.g., 'measures.budget')
            default: Default value if key not found

        Returns:
            Configuration value or default if not found

        Examples:
            >>> config.get('measures.budget')  # 1000000000
            >>> config.get('missing.key', 'default')  # 'default'
        """
        keys = key.split(".")
        value = self.config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def override(self, key: str, value: Any) -> None:
        """Override a single value (used for command-line flags), then revalidate."""
        if value is None:
            return
        section, name = key.split(".")
        candidate = copy.deepcopy(self.config)
        candidate[section][name] = value
        self.validate_config(candidate)
        self.config = candidate
        logger.debug(f"Config override: {key}={value!r}")

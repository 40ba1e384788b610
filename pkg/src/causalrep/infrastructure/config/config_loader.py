"""Configuration loader with support for YAML files and environment variables."""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .config_models import CausalRepConfig

ENV_PREFIX = "CAUSALREP_"


class ConfigLoader:
    """
    Load and manage causalrep configuration.

    Configuration is loaded in the following order (later sources override earlier):
    1. Default configuration (embedded in code)
    2. Global configuration (~/.causalrep/config.yaml)
    3. Project configuration (./causalrep.yaml)
    4. User-specified configuration file
    5. Environment variables (CAUSALREP_<SECTION>_<KEY>)
    """

    DEFAULT_CONFIG_PATHS = [
        Path.home() / ".causalrep" / "config.yaml",
        Path("./causalrep.yaml"),
    ]

    @classmethod
    def load(cls, config_path: Optional[str] = None) -> CausalRepConfig:
        """
        Load configuration from multiple sources.

        Raises:
            FileNotFoundError: If ``config_path`` is given but missing
            ValueError: On invalid YAML
            pydantic.ValidationError: On values outside their ranges
        """
        config_dict: Dict[str, Any] = {}

        for path in cls.DEFAULT_CONFIG_PATHS:
            if path.exists():
                config_dict = cls._merge_dicts(config_dict, cls._load_yaml_file(path))

        if config_path:
            user_path = Path(config_path)
            if not user_path.exists():
                raise FileNotFoundError(f"Configuration file not found: {config_path}")
            config_dict = cls._merge_dicts(config_dict, cls._load_yaml_file(user_path))

        config_dict = cls._merge_dicts(config_dict, cls._load_from_env())

        return CausalRepConfig(**config_dict)

    @staticmethod
    def _load_yaml_file(path: Path) -> Dict[str, Any]:
        try:
            with open(path, 'r') as f:
                data = yaml.safe_load(f)
                return data if data else {}
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML in {path}: {e}")

    @staticmethod
    def _merge_dicts(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Recursively merge ``override`` into a copy of ``base``."""
        result = base.copy()

        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = ConfigLoader._merge_dicts(result[key], value)
            else:
                result[key] = value

        return result

    @staticmethod
    def _load_from_env() -> Dict[str, Any]:
        """
        Load configuration from environment variables.

        The first underscore-separated part after the prefix names the
        section, the rest is the key, so multi-word keys survive:
        - CAUSALREP_EXPERIMENT_BASE_SEED -> experiment.base_seed
        - CAUSALREP_NETWORK_HIDDEN_SIZES=64,16 -> network.hidden_sizes
        """
        sections = set(CausalRepConfig.model_fields)
        config: Dict[str, Any] = {}

        for key, value in os.environ.items():
            if not key.startswith(ENV_PREFIX):
                continue
            section, _, field = key[len(ENV_PREFIX):].lower().partition('_')
            # CAUSALREP_MNIST_DIR and friends are not config keys
            if section not in sections or not field:
                continue
            config.setdefault(section, {})[field] = ConfigLoader._convert_env_value(value)

        return config

    @staticmethod
    def _convert_env_value(value: str) -> Any:
        """Convert an environment string to bool, int, float, list or null."""
        lowered = value.lower()
        if lowered in ('true', 'yes'):
            return True
        if lowered in ('false', 'no'):
            return False
        if lowered in ('null', 'none'):
            return None

        if ',' in value:
            return [ConfigLoader._convert_env_value(item.strip()) for item in value.split(',')]

        try:
            return int(value)
        except ValueError:
            pass

        try:
            return float(value)
        except ValueError:
            pass

        return value

    @staticmethod
    def create_default_config(path: Optional[str] = None) -> Path:
        """
        Write the default configuration as YAML.

        Args:
            path: Target file; defaults to ~/.causalrep/config.yaml
        """
        if path:
            config_path = Path(path)
            config_path.parent.mkdir(parents=True, exist_ok=True)
        else:
            config_dir = Path.home() / ".causalrep"
            config_dir.mkdir(parents=True, exist_ok=True)
            config_path = config_dir / "config.yaml"

        yaml_content = CausalRepConfig().to_yaml()
        yaml_with_comments = f"""# causalrep configuration
#
# Override any value with an environment variable CAUSALREP_<SECTION>_<KEY>
# or a command-line flag.

{yaml_content}"""

        config_path.write_text(yaml_with_comments)
        return config_path

    @staticmethod
    def get_config_info() -> Dict[str, Any]:
        """Which configuration files exist and which env overrides are set."""
        info = {
            "default_paths": [str(p) for p in ConfigLoader.DEFAULT_CONFIG_PATHS],
            "existing_configs": [
                str(p) for p in ConfigLoader.DEFAULT_CONFIG_PATHS if p.exists()
            ],
            "env_overrides": sorted(k for k in os.environ if k.startswith(ENV_PREFIX)),
        }
        return info

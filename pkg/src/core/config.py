"""
Configuration loader for graphsift.

Loads and validates .graphsift.yaml configuration files with support for:
- Index build parameters (threshold, workers, node budget)
- Lower-bound cascade selection for GED verification
- Logging level
"""

import os
from pathlib import Path
from typing import Dict, Any, List, Optional

CONFIG_FILENAME = '.graphsift.yaml'

KNOWN_FILTERS = ('label', 'branch', 'partition')


class ConfigError(Exception):
    """Configuration loading/validation error."""
    pass


class ConfigLoader:
    """
    Loads and validates .graphsift.yaml configuration files.

    Features:
    - Load from the working directory or one of its parents
    - YAML validation against schema
    - Fall back to defaults if file doesn't exist
    - CLI override support (flags win over file values)

    Example config:
        index:
          tau_max: 6
          slack: 2
          threads: 4
          node_budget: 200000

        ged:
          filters: [label, branch, partition]
          partition_size: 6
    """

    DEFAULT_CONFIG = {
        'index': {
            'tau_index': None,
            'tau_max': 6,
            'slack': 2,
            'threads': 4,
            'node_budget': None,
            'governor_interval_ms': 1,
        },
        'ged': {
            'filters': list(KNOWN_FILTERS),
            'partition_size': 6,
        },
        'logging': {
            'level': 'INFO',
        },
    }

    # key -> (expected type(s), nullable)
    SCHEMA = {
        'index.tau_index': (int, True),
        'index.tau_max': (int, False),
        'index.slack': (int, False),
        'index.threads': (int, False),
        'index.node_budget': (int, True),
        'index.governor_interval_ms': ((int, float), False),
        'ged.filters': (list, False),
        'ged.partition_size': (int, False),
        'logging.level': (str, False),
    }

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize config loader.

        Args:
            config_path: Path to .graphsift.yaml file. If None, searches upwards from cwd.
        """
        self.config_path = config_path or self._find_config_file()
        self.config: Dict[str, Any] = {}

    def _find_config_file(self) -> Optional[str]:
        """Find .graphsift.yaml in current directory or parent directories."""
        current = Path.cwd()

        for _ in range(5):
            config_file = current / CONFIG_FILENAME
            if config_file.exists():
                return str(config_file)
            if current.parent == current:
                break
            current = current.parent

        return None

    def load(self) -> Dict[str, Any]:
        """
        Load configuration from file or defaults.

        Returns:
            Configuration dictionary

        Raises:
            ConfigError: If YAML is invalid or a value has the wrong type
        """
        if not self.config_path or not os.path.exists(self.config_path):
            self.config = self._merge_config(self.DEFAULT_CONFIG, {})
            return self.config

        try:
            import yaml
        except ImportError:
            raise ConfigError(
                "PyYAML not installed. Install with: pip install pyyaml\n"
                f"Or remove {CONFIG_FILENAME} to use defaults."
            )

        try:
            with open(self.config_path, 'r') as f:
                file_config = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML in {self.config_path}: {e}")
        except IOError as e:
            raise ConfigError(f"Cannot read {self.config_path}: {e}")

        if not isinstance(file_config, dict):
            raise ConfigError(f"{self.config_path}: top level must be a mapping")

        self.config = self._merge_config(self.DEFAULT_CONFIG, file_config)
        self._validate_config(self.config)
        return self.config

    def _merge_config(self, default: Dict, user: Dict) -> Dict:
        """Recursively merge user config into defaults."""
        result = {}
        for key, value in default.items():
            if isinstance(value, dict):
                result[key] = self._merge_config(value, {})
            elif isinstance(value, list):
                result[key] = list(value)
            else:
                result[key] = value

        for key, value in user.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._merge_config(result[key], value)
            else:
                result[key] = value

        return result

    def _validate_config(self, config: Dict[str, Any]) -> None:
        """
        Validate configuration against schema.

        Raises:
            ConfigError: If validation fails
        """
        errors = []

        for key, (expected_type, nullable) in self.SCHEMA.items():
            value = self._lookup(config, key)
            if value is None:
                if not nullable:
                    errors.append(f"{key}: value required")
                continue
            # bool is an int subclass; reject it for numeric fields
            if isinstance(value, bool) or not isinstance(value, expected_type):
                names = (expected_type.__name__ if isinstance(expected_type, type)
                         else '/'.join(t.__name__ for t in expected_type))
                errors.append(f"{key}: expected {names}, got {type(value).__name__}")

        filters = self._lookup(config, 'ged.filters')
        if isinstance(filters, list):
            unknown = [f for f in filters if f not in KNOWN_FILTERS]
            if unknown:
                errors.append(f"ged.filters: unknown filter(s) {unknown}")

        if errors:
            error_msg = "Configuration validation failed:\n"
            error_msg += "\n".join(f"  - {e}" for e in errors)
            raise ConfigError(error_msg)

    @staticmethod
    def _lookup(config: Dict[str, Any], key: str) -> Any:
        value: Any = config
        for part in key.split('.'):
            if not isinstance(value, dict):
                return None
            value = value.get(part)
        return value

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value.

        Args:
            key: Configuration key (supports dot notation: 'index.threads')
            default: Default value if key not found

        Returns:
            Configuration value
        """
        if not self.config:
            self.load()
        value = self._lookup(self.config, key)
        return value if value is not None else default

    def tau_index(self) -> int:
        """Indexing threshold: explicit value, else tau_max plus slack."""
        explicit = self.get('index.tau_index')
        if explicit is not None:
            return explicit
        return self.get('index.tau_max') + self.get('index.slack')

    def enabled_filters(self) -> List[str]:
        return list(self.get('ged.filters', []))

    def export_example_yaml(self, output_path: str) -> None:
        """
        Export example .graphsift.yaml file.

        Args:
            output_path: Path where to write the example file
        """
        try:
            import yaml
        except ImportError:
            raise ConfigError("PyYAML not installed. Install with: pip install pyyaml")

        example_config = {
            'index': {
                'tau_max': 6,
                'slack': 2,
                'threads': 4,
                'node_budget': 200000,
            },
            'ged': {
                'filters': list(KNOWN_FILTERS),
                'partition_size': 6,
            },
            'logging': {'level': 'INFO'},
        }

        with open(output_path, 'w') as f:
            f.write("# graphsift configuration\n")
            f.write(f"# Copy this file to {CONFIG_FILENAME} in your working directory\n")
            f.write("# All fields are optional and have sensible defaults\n\n")
            yaml.dump(example_config, f, default_flow_style=False, sort_keys=False)


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Convenience function to load configuration.

    Args:
        config_path: Optional path to .graphsift.yaml

    Returns:
        Configuration dictionary
    """
    loader = ConfigLoader(config_path)
    return loader.load()

"""Configuration file handling for sullivanloops."""

from __future__ import annotations

import configparser
import logging
import os
from dataclasses import dataclass
from pathlib import Path

from sullivanloops.errors import ConfigError

log = logging.getLogger(__name__)

CONFIG_ENV = "SULLIVANLOOPS_CONFIG"

DEFAULTS = {
    "general": {
        "output_format": "table",
        "max_degree": "",
        "orientation": "1",
    },
    "output": {
        "directory": "",
    },
}

OUTPUT_FORMATS = ("table", "structured")


def config_path() -> Path:
    """The configuration file, ~/.sullivanloops.conf unless overridden by the environment."""
    override = os.environ.get(CONFIG_ENV)
    if override:
        return Path(override)
    return Path.home() / ".sullivanloops.conf"


def load_config() -> configparser.ConfigParser:
    """Load the configuration, creating a file with defaults if needed."""
    config = configparser.ConfigParser()

    for section, values in DEFAULTS.items():
        config[section] = values

    path = config_path()
    if path.exists():
        try:
            config.read(path)
        except (configparser.MissingSectionHeaderError, configparser.ParsingError) as exc:
            raise ConfigError(f"cannot read configuration {path}: {exc}") from None
    else:
        try:
            save_config(config)
        except OSError as exc:
            log.warning("could not write default configuration to %s: %s", path, exc)
        else:
            log.info("created default configuration at %s", path)

    return config


def save_config(config: configparser.ConfigParser) -> None:
    """Write the configuration file."""
    with open(config_path(), "w") as fh:
        config.write(fh)


def update_config(section: str, key: str, value: str) -> None:
    """Update a single configuration value and save."""
    config = load_config()
    if section not in config:
        config[section] = {}
    config[section][key] = value
    save_config(config)


@dataclass(frozen=True)
class RunConfig:
    """Settings of one command run, after merging flags over the file."""

    model_path: Path
    max_degree: int
    output_format: str = "table"
    orientation: int = 1
    output_dir: Path | None = None


def default_max_degree(dimension: int) -> int:
    return 4 * dimension + 6


def _parse_int(value: str, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{what} must be an integer, got {value!r}") from None


def resolve_run_config(
    model_path: str | Path,
    dimension: int,
    max_degree: int | None = None,
    output_format: str | None = None,
    negate_orientation: bool = False,
    output_dir: str | Path | None = None,
) -> RunConfig:
    """Merge command-line values over the configuration file.

    ``dimension`` is the manifold dimension m of the model; the default
    max degree is 4·m + 6 and anything below m + 2 is refused.
    """
    config = load_config()
    general = config["general"]

    if max_degree is None:
        stored = general.get("max_degree", "").strip()
        max_degree = _parse_int(stored, "max_degree") if stored else default_max_degree(dimension)
    if max_degree < dimension + 2:
        raise ConfigError(
            f"max degree {max_degree} is below dimension + 2 = {dimension + 2}"
        )

    output_format = output_format or general.get("output_format", "table").strip()
    if output_format not in OUTPUT_FORMATS:
        raise ConfigError(
            f"output format must be one of {', '.join(OUTPUT_FORMATS)}, got {output_format!r}"
        )

    orientation = _parse_int(general.get("orientation", "1").strip(), "orientation")
    if orientation not in (1, -1):
        raise ConfigError(f"orientation must be 1 or -1, got {orientation}")
    if negate_orientation:
        orientation = -orientation

    if output_dir is None:
        stored = config["output"].get("directory", "").strip()
        output_dir = stored or None

    return RunConfig(
        model_path=Path(model_path),
        max_degree=max_degree,
        output_format=output_format,
        orientation=orientation,
        output_dir=Path(output_dir) if output_dir else None,
    )

# majorana/utilities/settings.py

from dataclasses import dataclass, field
from os import path
from typing import Optional, Tuple

import yaml
from loguru import logger

CONFIG_FILE: str = "config.yml"
LOG_LEVEL: str = "LogLevel"
TABLE_PMAX: str = "TablePmax"
BOX_SIDE: str = "BoxSide"
VERIFY: str = "Verify"
SEED: str = "Seed"
RANDOM_POINTS: str = "RandomPoints"
GAUGE_POINTS: str = "GaugePoints"
CLOSURE_CHI0: str = "ClosureChi0"
QUADRATURE: str = "Quadrature"
RADIAL_CUTOFF: str = "RadialCutoff"
GRID_POINTS: str = "GridPoints"
TOLERANCE: str = "Tolerance"


@dataclass(frozen=True)
class VerifySettings:
    seed: int = 20240611
    random_points: int = 100
    gauge_points: int = 50
    closure_chi0: Tuple[float, ...] = (1.0e-2, 3.0e-3, 1.0e-3)
    radial_cutoff: float = 8.0
    grid_points: int = 256
    tolerance: float = 1.0e-8


@dataclass(frozen=True)
class Settings:
    """Tool level settings read from `config.yml`."""

    log_level: str = "INFO"
    table_pmax: int = 8
    box_side: float = 1.0e-2  # m
    verify: VerifySettings = field(default_factory=VerifySettings)


def _verify_settings(section: dict) -> VerifySettings:
    defaults = VerifySettings()
    quadrature: dict = section.get(QUADRATURE) or {}
    closure = section.get(CLOSURE_CHI0, defaults.closure_chi0)
    return VerifySettings(
        seed=int(section.get(SEED, defaults.seed)),
        random_points=int(section.get(RANDOM_POINTS, defaults.random_points)),
        gauge_points=int(section.get(GAUGE_POINTS, defaults.gauge_points)),
        closure_chi0=tuple(float(value) for value in closure),
        radial_cutoff=float(quadrature.get(RADIAL_CUTOFF, defaults.radial_cutoff)),
        grid_points=int(quadrature.get(GRID_POINTS, defaults.grid_points)),
        tolerance=float(quadrature.get(TOLERANCE, defaults.tolerance)),
    )


def load_settings(config_path: Optional[str] = None) -> Settings:
    """
    Read tool settings, falling back to defaults for anything missing.

    Args:
        config_path: settings file, `config.yml` in the working directory by default

    Returns:
        Settings: parsed settings
    """
    if config_path is None:
        config_path = path.join(path.abspath("."), CONFIG_FILE)
    if not path.isfile(config_path):
        logger.debug(f"No settings file at {config_path}, using defaults")
        return Settings()

    with open(config_path) as config_file:
        config: dict = yaml.safe_load(config_file) or {}

    defaults = Settings()
    return Settings(
        log_level=str(config.get(LOG_LEVEL, defaults.log_level)).upper(),
        table_pmax=int(config.get(TABLE_PMAX, defaults.table_pmax)),
        box_side=float(config.get(BOX_SIDE, defaults.box_side)),
        verify=_verify_settings(config.get(VERIFY) or {}),
    )

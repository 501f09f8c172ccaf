"""Configuration loading and logging setup."""

import copy
import logging
from pathlib import Path
from typing import Dict, Optional

import yaml

from src.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "config.yaml"

DEFAULTS: Dict = {
    "verification": {
        "orders": {
            "classical": 25,
            "prodK": 30,
            "ki": 30,
            "theorem3": 10,
            "theorem3_fit": 6,
            "eisenstein": 60,
        },
        "ring_hint": "auto",
        "cache_size": 256,
    },
    "numeric": {
        "precision_digits": 40,
        "samples": [[0.1, 0.7], [0.05, 1.1], [0.2, 0.3]],
        "theta1_random_samples": 20,
        "seed": 20,
        "cf": {"depth": 30, "series_order": 40, "points": [0.05, 0.1, 0.2], "tolerance": 1e-8},
        "tm_q": 0.1,
        "atable_range": [0, 120],
    },
    "verify_all": {"profile": "full", "jobs": 1, "deterministic_timing": True},
    "reports": {
        "directory": "./outputs",
        "pdf": {
            "page_size": "letter",
            "margins": {"top": 60, "bottom": 60, "left": 60, "right": 60},
            "fonts": {"title": "Helvetica-Bold", "header": "Helvetica-Bold", "body": "Helvetica"},
        },
        "csv": {"delimiter": ",", "encoding": "utf-8"},
    },
    "logging": {
        "level": "INFO",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        "file": None,
    },
}

# Orders used by the quick profile; anything not listed keeps its full value.
QUICK_ORDERS = {"theorem3": 6, "theorem3_fit": 4, "eisenstein": 30, "prodK": 20, "ki": 20}


def _deep_merge(base: Dict, override: Dict) -> Dict:
    out = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = value
    return out


def load_config(path: Optional[str] = None) -> Dict:
    """Load the YAML configuration merged over the built-in defaults."""
    cfg_path = Path(path) if path else DEFAULT_CONFIG_PATH
    if not cfg_path.exists():
        if path:
            raise ConfigError(f"config file not found: {cfg_path}")
        logger.warning("No config file at %s, using defaults", cfg_path)
        return copy.deepcopy(DEFAULTS)
    try:
        with open(cfg_path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"malformed config file {cfg_path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config file {cfg_path} must contain a mapping")
    return _deep_merge(DEFAULTS, data)


def apply_profile(config: Dict, profile: str) -> Dict:
    """Return a copy of config with the orders of the given profile."""
    if profile not in ("quick", "full"):
        raise ConfigError(f"unknown profile {profile!r} (expected quick or full)")
    out = copy.deepcopy(config)
    if profile == "quick":
        out["verification"]["orders"].update(QUICK_ORDERS)
    out["verify_all"]["profile"] = profile
    return out


def setup_logging(config: Dict, verbose: bool = False) -> None:
    log_cfg = config.get("logging", {})
    level = logging.DEBUG if verbose else getattr(logging, str(log_cfg.get("level", "INFO")).upper(), logging.INFO)
    handlers = [logging.StreamHandler()]
    if log_cfg.get("file"):
        handlers.append(logging.FileHandler(log_cfg["file"], encoding="utf-8"))
    logging.basicConfig(level=level, format=log_cfg.get("format", DEFAULTS["logging"]["format"]),
                        handlers=handlers, force=True)

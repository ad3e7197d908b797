"""Run configuration: a single documented JSON format plus validation.

Example config (all keys optional; defaults shown):

    {
      "alpha": 0.0,
      "grid": {
        "x_max": 12.0, "t_max": 12.0, "lambda_max": 12.0,
        "m_max": 512, "panels": 8, "nodes_per_panel": 16,
        "graded_tail": false
      },
      "test_family": ["gauss", "gauss-mod3"],
      "sweeps": {"s": [1.0], "a": [1.0], "b": [1.0], "r": [0.5, 2.0],
                 "E": {"lambda_lo": 0.0, "lambda_hi": 1.0, "m_set": [0, 1]}},
      "output": "report.json",
      "format": "json",
      "tolerances": {}
    }

Unknown keys are rejected with the list of valid keys; range violations
name the violated precondition.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .measure import SpectralSet
from .testfamily import default_family


class ConfigError(ValueError):
    """Invalid configuration; maps to exit code 2."""


_TOP_KEYS = {"alpha", "grid", "test_family", "sweeps", "output", "format", "tolerances"}
_GRID_KEYS = {"x_max", "t_max", "lambda_max", "m_max", "panels", "nodes_per_panel",
              "graded_tail"}
_SWEEP_KEYS = {"s", "a", "b", "r", "E"}

_GRID_DEFAULTS = {"x_max": 12.0, "t_max": 12.0, "lambda_max": 12.0, "m_max": 512,
                  "panels": 8, "nodes_per_panel": 16, "graded_tail": False}

_TOL_DEFAULTS = {
    "extremal_ratio": 1e-4,
    "dilation_invariance": 1e-3,
    "baseline_fraction": 0.99,
    "mass": 1e-3,
    "plancherel": 1e-3,
    "roundtrip": 1e-2,
}


@dataclass
class RunConfig:
    alpha: float = 0.0
    grid: dict = field(default_factory=lambda: dict(_GRID_DEFAULTS))
    test_family: list = field(default_factory=list)
    sweeps: dict = field(default_factory=dict)
    output: str = "lbharm_report.json"
    format: str = "json"
    tolerances: dict = field(default_factory=lambda: dict(_TOL_DEFAULTS))

    def spectral_set(self) -> SpectralSet | None:
        e = self.sweeps.get("E")
        if e is None:
            return None
        try:
            return SpectralSet(e["lambda_lo"], e["lambda_hi"], tuple(e["m_set"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid E specification: {exc}") from exc

    def resolved(self) -> dict:
        return {
            "alpha": self.alpha,
            "grid": dict(self.grid),
            "test_family": list(self.test_family),
            "sweeps": {k: v for k, v in self.sweeps.items()},
            "output": self.output,
            "format": self.format,
            "tolerances": dict(self.tolerances),
        }


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON config; defaults fill omitted keys."""
    if not text.strip():
        raw = {}
    else:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}; valid keys: {sorted(_TOP_KEYS)}")
    cfg = RunConfig()
    if "alpha" in raw:
        cfg.alpha = float(raw["alpha"])
        if cfg.alpha < 0:
            raise ConfigError("alpha must satisfy alpha >= 0")
    if "grid" in raw:
        g = raw["grid"]
        if not isinstance(g, dict):
            raise ConfigError("grid must be an object")
        unknown = set(g) - _GRID_KEYS
        if unknown:
            raise ConfigError(f"unknown grid keys {sorted(unknown)}; valid keys: {sorted(_GRID_KEYS)}")
        cfg.grid.update(g)
        if min(cfg.grid["x_max"], cfg.grid["t_max"], cfg.grid["lambda_max"]) <= 0:
            raise ConfigError("grid limits must be positive")
        if min(cfg.grid["panels"], cfg.grid["nodes_per_panel"]) < 1 or cfg.grid["m_max"] < 0:
            raise ConfigError("grid sizes must be positive integers")
    if "test_family" in raw:
        names = raw["test_family"]
        if not isinstance(names, list):
            raise ConfigError("test_family must be a list of names")
        known = {m.name for m in default_family(cfg.alpha)}
        bad = [n for n in names if n not in known]
        if bad:
            raise ConfigError(f"unknown test functions {bad}; known: {sorted(known)}")
        cfg.test_family = list(names)
    if "sweeps" in raw:
        s = raw["sweeps"]
        if not isinstance(s, dict):
            raise ConfigError("sweeps must be an object")
        unknown = set(s) - _SWEEP_KEYS
        if unknown:
            raise ConfigError(f"unknown sweep keys {sorted(unknown)}; valid keys: {sorted(_SWEEP_KEYS)}")
        cfg.sweeps.update(s)
    if "output" in raw:
        cfg.output = str(raw["output"])
    if "format" in raw:
        if raw["format"] not in ("json", "csv"):
            raise ConfigError("format must be 'json' or 'csv'")
        cfg.format = raw["format"]
    if "tolerances" in raw:
        t = raw["tolerances"]
        if not isinstance(t, dict):
            raise ConfigError("tolerances must be an object")
        unknown = set(t) - set(_TOL_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown tolerance keys {sorted(unknown)}; "
                              f"valid keys: {sorted(_TOL_DEFAULTS)}")
        cfg.tolerances.update(t)
    return cfg


def validate_verify_params(cfg: RunConfig, check: str, s: float | None) -> None:
    """Range checks that depend on the verification being run."""
    d = 3 * cfg.alpha + 2
    if check == "local-small":
        if s is None or not (0 < s < d):
            raise ConfigError(f"local-small requires 0 < s < 3*alpha + 2 = {d}")
        if cfg.spectral_set() is None:
            raise ConfigError("local-small requires a nonempty spectral set E")
    elif check in ("local-large", "lemma-extremal"):
        if s is None or s <= d:
            raise ConfigError(f"{check} requires s > 3*alpha + 2 = {d}")
        if check == "local-large" and cfg.spectral_set() is None:
            raise ConfigError("local-large requires a nonempty spectral set E")
    elif check == "local-critical":
        if cfg.spectral_set() is None:
            raise ConfigError("local-critical requires a nonempty spectral set E")
    elif check == "interpolation":
        if s is None or s <= 1:
            raise ConfigError("interpolation requires s > 1")

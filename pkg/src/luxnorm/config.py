"""Run configuration: defaults, JSON config files, CLI overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from luxnorm.errors import ConfigError

DEFAULT_SEED = 42
DEFAULT_WEIGHTS = (0.4, 0.2, 0.2, 0.2)

# config keys that name input files and must exist once validated
_PATH_KEYS = ("dictionary", "lexicon", "eval_original", "eval_gold", "suite", "predictions")


@dataclass
class RunConfig:
    """Everything a full experiment run needs, recorded into its report."""

    seed: int = DEFAULT_SEED
    dictionary: Path | None = None
    lexicon: Path | None = None
    eval_original: Path | None = None
    eval_gold: Path | None = None
    suite: Path | None = None
    predictions: Path | None = None
    output_dir: Path = Path("luxnorm-out")
    normalizer: str = "pipeline"  # pipeline | identity | cmd:<command line>
    weights: tuple[float, float, float, float] = DEFAULT_WEIGHTS
    match_bonus: float = 1.0
    mismatch_penalty: float = -1.0
    gap_penalty: float = -0.5
    ngram_n: int = 3
    topk: int = 10
    max_edit_distance: int = 2
    workers: int = 1

    def to_dict(self) -> dict:
        snapshot = {}
        for spec in fields(self):
            value = getattr(self, spec.name)
            if isinstance(value, Path):
                value = str(value)
            elif isinstance(value, tuple):
                value = list(value)
            snapshot[spec.name] = value
        return snapshot


def load_config_file(path: str | Path) -> dict:
    """Read a JSON config file, rejecting unknown keys."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    known = {spec.name for spec in fields(RunConfig)}
    for key in raw:
        if key not in known:
            raise ConfigError(f"unknown config key {key!r} in {path}")
    return raw


def build_config(
    overrides: dict, config_file: str | Path | None = None, require: tuple[str, ...] = ()
) -> RunConfig:
    """Merge defaults, config-file values, and CLI overrides (flags win).

    Validation errors name the offending key. `require` lists keys that
    must end up set (e.g. the synth command requires a dictionary).
    """
    values: dict = {}
    if config_file is not None:
        values.update(load_config_file(config_file))
    for key, value in overrides.items():
        if value is not None:
            values.update({key: value})
    known = {spec.name for spec in fields(RunConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config key {sorted(unknown)[0]!r}")
    for key in _PATH_KEYS:
        if values.get(key) is not None:
            values[key] = Path(values[key])
    if "output_dir" in values:
        values["output_dir"] = Path(values["output_dir"])
    if "weights" in values:
        weights = tuple(float(w) for w in values["weights"])
        if len(weights) != 4 or any(w < 0 for w in weights):
            raise ConfigError("weights: expected four non-negative numbers")
        values["weights"] = weights
    config = RunConfig(**values)
    for key in require:
        if getattr(config, key) is None:
            raise ConfigError(f"missing required option {key!r}")
    for key in _PATH_KEYS:
        value = getattr(config, key)
        if value is not None and not value.exists():
            raise ConfigError(f"{key}: no such file: {value}")
    if config.workers < 1:
        raise ConfigError("workers must be >= 1")
    if config.seed < 0 or config.seed > 2**64 - 1:
        raise ConfigError("seed must fit in 64 bits")
    if not config.gap_penalty < config.match_bonus:
        raise ConfigError("gap_penalty must be smaller than match_bonus")
    return config


def effective_workers(requested: int) -> int:
    """Apply the LUXNORM_THREADS cap to a requested worker count."""
    cap = os.environ.get("LUXNORM_THREADS")
    if cap is None:
        return max(1, requested)
    try:
        cap_value = int(cap)
    except ValueError:
        raise ConfigError(f"LUXNORM_THREADS is not an integer: {cap!r}") from None
    return max(1, min(requested, cap_value))

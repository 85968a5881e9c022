"""Generation/training configuration, loadable from YAML or TOML."""

from __future__ import annotations

import sys
from dataclasses import dataclass, fields
from pathlib import Path

import yaml

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import GenBridgeError

# Checkpoint id meaning "build the in-package tiny model from scratch".
TINY_RANDOM = "tiny-random"


@dataclass(frozen=True)
class GenConfig:
    base_checkpoint: str = TINY_RANDOM
    epochs: int = 10
    learning_rate: float = 2e-5
    patience: int = 3
    selection_metric: str = "rouge2"  # rouge2 | loss
    max_input_tokens: int = 16_000
    beam_widths: tuple[int, ...] = (1, 2, 3, 4, 5)
    max_new_tokens: int = 128
    batch_size: int = 1
    seed: int = 0
    device: str = "cpu"

    def __post_init__(self):
        if self.selection_metric not in ("rouge2", "loss"):
            raise GenBridgeError(f"unknown selection_metric {self.selection_metric!r}")
        if not self.beam_widths or any(w < 1 for w in self.beam_widths):
            raise GenBridgeError("beam_widths must be a non-empty list of integers >= 1")
        if self.epochs < 1 or self.patience < 0 or self.batch_size < 1:
            raise GenBridgeError("epochs/batch_size must be >= 1 and patience >= 0")

    def as_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["beam_widths"] = list(self.beam_widths)
        return out


_KNOWN = {f.name for f in fields(GenConfig)}


def load_config(path: str | Path | None = None, **overrides) -> GenConfig:
    """Defaults < config file (by suffix: .yaml/.yml or .toml) < overrides."""
    values: dict = {}
    if path is not None:
        path = Path(path)
        if path.suffix in (".yaml", ".yml"):
            with path.open("r", encoding="utf-8") as fh:
                raw = yaml.safe_load(fh) or {}
        elif path.suffix == ".toml":
            with path.open("rb") as fh:
                raw = tomllib.load(fh)
        else:
            raise GenBridgeError(f"config file must be .yaml/.yml/.toml, got {path.name}")
        if not isinstance(raw, dict):
            raise GenBridgeError(f"config file {path} is not a mapping")
        values.update(raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    unknown = set(values) - _KNOWN
    if unknown:
        raise GenBridgeError(f"unknown config keys: {sorted(unknown)}")
    if "beam_widths" in values:
        values["beam_widths"] = tuple(values["beam_widths"])
    return GenConfig(**values)

"""Run configuration: defaults < TOML config file < explicit flags.

Every entry point logs the fully resolved configuration so runs are
reproducible from their logs alone.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .argscore import RankingMetric
from .corpus import DEFAULT_MAX_BEAM_WIDTH, InputFormat
from .errors import DataError
from .pipeline import PoolPolicy


@dataclass(frozen=True)
class RunConfig:
    formats: tuple[str, ...] = ("raw", "binary", "finegrained")
    beams: tuple[int, ...] = (1, 2, 3, 4, 5)
    dedupe: bool = False
    all_beams: bool = False
    metric: str = "R1"
    seed: int = 0
    trials: int = 10_000
    stemmer: bool = False
    sentence_separator: str = " "
    jobs: int = 1

    def policy(self) -> PoolPolicy:
        return PoolPolicy(
            formats=tuple(InputFormat(f) for f in self.formats),
            beam_widths=tuple(self.beams),
            dedupe=self.dedupe,
            all_beams=self.all_beams,
        )

    def ranking_metric(self) -> RankingMetric:
        return RankingMetric(self.metric)

    def max_beam_width(self) -> int:
        return max(DEFAULT_MAX_BEAM_WIDTH, max(self.beams))

    def as_dict(self) -> dict:
        return {
            "formats": list(self.formats),
            "beams": list(self.beams),
            "dedupe": self.dedupe,
            "all_beams": self.all_beams,
            "metric": self.metric,
            "seed": self.seed,
            "trials": self.trials,
            "stemmer": self.stemmer,
            "sentence_separator": self.sentence_separator,
            "jobs": self.jobs,
        }


_KNOWN_KEYS = {f.name for f in fields(RunConfig)}

_LIST_KEYS = {"formats", "beams"}


def _validate(values: dict, source: str) -> dict:
    out = {}
    for key, value in values.items():
        if key not in _KNOWN_KEYS:
            raise DataError(f"unknown config key {key!r} in {source}")
        if key in _LIST_KEYS:
            value = tuple(value)
            if not value:
                raise DataError(f"config key {key!r} must be non-empty in {source}")
        if key == "formats":
            for fmt in value:
                try:
                    InputFormat(fmt)
                except ValueError:
                    raise DataError(f"invalid input format {fmt!r} in {source}")
        if key == "beams":
            if any(not isinstance(w, int) or w < 1 for w in value):
                raise DataError(f"beam widths must be integers >= 1 in {source}")
        if key == "metric":
            try:
                RankingMetric(value)
            except ValueError:
                raise DataError(f"invalid ranking metric {value!r} in {source}")
        out[key] = value
    return out


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise DataError(f"invalid config file {path}: {exc}")
    return _validate(raw, str(path))


def resolve_config(config_path: str | Path | None = None, **overrides) -> RunConfig:
    """Merge defaults, config file and non-None overrides, in that order."""
    values: dict = {}
    if config_path is not None:
        values.update(load_config_file(config_path))
    explicit = {k: v for k, v in overrides.items() if v is not None}
    values.update(_validate(explicit, "command line"))
    return RunConfig(**values)

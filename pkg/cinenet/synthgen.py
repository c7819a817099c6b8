"""
Synthetic movie corpora with a known globalization shock.

Generator algorithm (deterministic for a seed with a given numpy version):

1. ``rng = numpy.random.default_rng(seed)``; countries are ``C01 .. Cnn``.
2. For every year in order, for every home country in order, draw a
   ``base_volume x n_countries`` block of uniforms. A movie carries its home
   country plus every other country whose uniform is below the pair
   probability.
3. The pair probability is ``cross_prob``; from ``shock_year`` onward it is
   multiplied by ``shock_factor`` (clamped to 1) for every pair involving the
   shock country, both as home and as added region. The shock is a step.
"""

import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, TextIO, Tuple, Union

import numpy as np

from ._compat import Self, tomllib
from .errors import ArgumentError
from .ingest import MovieRecord, write_canonical

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SynthConfig:
    n_countries: int = 5
    years: Tuple[int, int] = (1980, 2019)
    base_volume: int = 200
    cross_prob: float = 0.05
    shock_year: Optional[int] = None
    shock_country: Optional[str] = None
    shock_factor: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_countries < 2:
            raise ArgumentError(f"n_countries must be >= 2, got {self.n_countries}")
        if self.base_volume < 1:
            raise ArgumentError(f"base_volume must be >= 1, got {self.base_volume}")
        if len(self.years) != 2 or self.years[0] > self.years[1]:
            raise ArgumentError(f"years must be an increasing pair, got {self.years}")
        if not 0 <= self.cross_prob <= 1:
            raise ArgumentError(f"cross_prob must lie in [0, 1], got {self.cross_prob}")
        if self.shock_factor < 1:
            raise ArgumentError(f"shock_factor must be >= 1, got {self.shock_factor}")
        if self.shock_year is not None and not self.years[0] <= self.shock_year <= self.years[1]:
            raise ArgumentError(f"shock_year {self.shock_year} outside {self.years}")
        if self.shock_country is not None and self.shock_country not in self.country_codes():
            raise ArgumentError(f"unknown shock_country {self.shock_country}")

    def country_codes(self) -> Tuple[str, ...]:
        width = max(2, len(str(self.n_countries)))
        return tuple(f"C{i:0{width}d}" for i in range(1, self.n_countries + 1))

    @property
    def shocked_country(self) -> Optional[str]:
        """The shock country; defaults to the first one when only a year is set."""
        if self.shock_year is None:
            return None
        return self.shock_country or self.country_codes()[0]

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["years"] = list(self.years)
        return data

    def replace(self, **overrides: Any) -> Self:
        return dataclasses.replace(self, **overrides)

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> Self:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ArgumentError(f"unknown synth config keys: {', '.join(unknown)}")
        values = dict(values)
        if "years" in values:
            values["years"] = tuple(int(year) for year in values["years"])
        return cls(**values)

    @classmethod
    def from_toml(cls, path: Union[str, Path]) -> Self:
        """Load a flat TOML file whose keys are the field names."""
        with open(path, "rb") as f:
            try:
                values = tomllib.load(f)
            except tomllib.TOMLDecodeError as exc:
                raise ArgumentError(f"{path}: {exc}") from exc
        return cls.from_mapping(values)


def _pair_probabilities(config: SynthConfig, shocked: bool) -> np.ndarray:
    probs = np.full((config.n_countries, config.n_countries), config.cross_prob)
    if shocked and config.shocked_country is not None:
        index = config.country_codes().index(config.shocked_country)
        probs[index, :] *= config.shock_factor
        probs[:, index] *= config.shock_factor
    np.clip(probs, 0.0, 1.0, out=probs)
    np.fill_diagonal(probs, 0.0)
    return probs


def generate(config: SynthConfig) -> List[MovieRecord]:
    """Draw a corpus; same config and seed give the same corpus."""
    rng = np.random.default_rng(config.seed)
    codes = config.country_codes()
    region_sets: Dict[bytes, FrozenSet[str]] = {}
    baseline = _pair_probabilities(config, shocked=False)
    after_shock = _pair_probabilities(config, shocked=True)

    records: List[MovieRecord] = []
    first, last = config.years
    for year in range(first, last + 1):
        shocked = config.shock_year is not None and year >= config.shock_year
        probs = after_shock if shocked else baseline
        for home, home_code in enumerate(codes):
            draws = rng.random((config.base_volume, config.n_countries)) < probs[home]
            draws[:, home] = True
            for number, row in enumerate(draws):
                key = row.tobytes()
                regions = region_sets.get(key)
                if regions is None:
                    regions = frozenset(codes[i] for i in np.flatnonzero(row))
                    region_sets[key] = regions
                records.append(MovieRecord(f"syn{year}{home_code}{number:05d}", year, regions))

    logger.info(
        "generated %d movies over %d-%d for %d countries (seed %d)",
        len(records),
        first,
        last,
        config.n_countries,
        config.seed,
    )
    return records


def generate_to_stream(config: SynthConfig, stream: TextIO) -> int:
    """Write a generated corpus in the canonical format; returns the movie count."""
    records = generate(config)
    write_canonical(records, stream)
    return len(records)

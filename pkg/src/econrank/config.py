"""Run configuration and the shared numerical tolerance record.

A run is configured by a single YAML document (all keys optional, all
defaults materialized on load) plus command-line overrides.  Unknown keys
are rejected so that typos fail loudly instead of silently running with
defaults.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import RangeError, UsageError

CONFIG_ENV_VAR = "ECONRANK_CONFIG"


@dataclass(frozen=True)
class Tolerances:
    """All numerical tolerance constants in one place.

    column_sum:        max deviation of a stochastic-matrix column sum from 1
    normalization:     max deviation for per-column normalization checks
    rank_tol:          L1 convergence threshold for rank power iteration
    rank_max_iter:     iteration ceiling for rank power iteration
    eig_tol:           L1 residual threshold for the complement leading mode
    eig_max_iter:      iteration ceiling for the leading-mode power iteration
    series_tol:        L1 threshold on an added term for series truncation
    series_max_terms:  term ceiling for the indirect-component series
    reduced_column_sum: max deviation of a reduced-matrix column sum from 1
    decomposition:     max elementwise deviation in the component-sum identity
    weight_identity:   max deviation of the component weight sum from 1
    """

    column_sum: float = 1e-12
    normalization: float = 1e-14
    rank_tol: float = 1e-12
    rank_max_iter: int = 10_000
    eig_tol: float = 1e-13
    eig_max_iter: int = 500_000
    series_tol: float = 1e-12
    series_max_terms: int = 10_000
    reduced_column_sum: float = 1e-8
    decomposition: float = 1e-10
    weight_identity: float = 1e-8


DEFAULT_TOLERANCES = Tolerances()


@dataclass
class RunConfig:
    """Everything a CLI command needs, with defaults already materialized."""

    alpha: float = 0.5
    input_path: str | None = None
    input_format: str = "native_csv"  # native_csv | icio_csv
    countries_file: str | None = None  # None = bundled registry
    sectors_file: str | None = None
    output_dir: str = "runs"
    workers: int = 1
    year: int | None = None
    # selection of the reduced node set: one country plus a sector index range
    country: str | None = None
    sectors: str = "1-21"
    # shock specification for sensitivity runs
    shock_mode: str = "sector_map"  # sector_map | country_map
    source_sector: str | None = None
    source_country: str | None = None
    target_countries: list[str] = field(default_factory=list)
    step: float = 0.01
    # reduced-network extraction
    k: int = 4
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise RangeError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.input_format not in ("native_csv", "icio_csv"):
            raise UsageError(f"unknown input format {self.input_format!r}")
        if self.workers < 1:
            raise RangeError(f"workers must be >= 1, got {self.workers}")


_CONFIG_KEYS = {f.name for f in dataclasses.fields(RunConfig)}
_TOL_KEYS = {f.name for f in dataclasses.fields(Tolerances)}


def load_config(path: str | Path | None = None) -> RunConfig:
    """Load a RunConfig from a YAML file, or return pure defaults.

    Resolution order: explicit path argument, then the ECONRANK_CONFIG
    environment variable, then built-in defaults.  Unknown keys anywhere
    in the document raise UsageError.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return RunConfig()
    raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    if not isinstance(raw, dict):
        raise UsageError(f"config file {path} must contain a mapping")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    tol_raw = raw.pop("tolerances", None)
    kwargs = dict(raw)
    if tol_raw is not None:
        if not isinstance(tol_raw, dict):
            raise UsageError("config key 'tolerances' must be a mapping")
        unknown = set(tol_raw) - _TOL_KEYS
        if unknown:
            raise UsageError(f"unknown tolerance keys: {', '.join(sorted(unknown))}")
        kwargs["tolerances"] = Tolerances(**tol_raw)
    return RunConfig(**kwargs)


def config_as_dict(config: RunConfig) -> dict:
    """Flatten a RunConfig (tolerances included) for the run manifest."""
    out = dataclasses.asdict(config)
    return out

"""Run configuration from a TOML file, overridable by command-line flags."""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .classifiers import ALGORITHMS, ClassifierSpec

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_param", "default_specs"]


class ConfigError(ValueError):
    pass


def default_specs(seed: int) -> list[ClassifierSpec]:
    return [ClassifierSpec(name, {}, seed) for name in ("knn", "bayes", "reptree", "random_forest")]


def parse_param(text: str) -> tuple[str, Any]:
    """``key=value`` with int, float or ``none`` values."""
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise ConfigError(f"parameter {text!r} is not key=value")
    raw = raw.strip()
    if raw.lower() in ("none", "null"):
        return key.strip(), None
    for conv in (int, float):
        try:
            return key.strip(), conv(raw)
        except ValueError:
            pass
    return key.strip(), raw


@dataclass
class RunConfig:
    seed: int
    dataset: Path | None = None
    lexicon: Path | None = None
    classifiers: list[ClassifierSpec] = field(default_factory=list)
    k_folds: int = 10
    include_emoji: bool = True
    output: Path = Path("out")
    relieff_k: int = 10
    relieff_m: int | None = None
    top: int | None = None

    def require(self, *names: str) -> None:
        for name in names:
            value = getattr(self, name)
            if value is None:
                raise ConfigError(f"{name} is required")
            if isinstance(value, Path) and not value.exists():
                raise ConfigError(f"{name} not found: {value}")

    def specs(self) -> list[ClassifierSpec]:
        return self.classifiers or default_specs(self.seed)


def _spec_from_table(table: Mapping[str, Any], seed: int) -> ClassifierSpec:
    if "algorithm" not in table:
        raise ConfigError("classifier entry without 'algorithm'")
    if table["algorithm"] not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {table['algorithm']!r}")
    try:
        return ClassifierSpec(table["algorithm"], dict(table.get("params", {})), int(table.get("seed", seed)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(
    path: str | os.PathLike | None,
    overrides: Mapping[str, Any] | None = None,
    require_seed: bool = True,
) -> RunConfig:
    """Merge a TOML config file with flag overrides (``None`` values ignored).

    Relative paths inside the file resolve against the file's directory. The
    seed has no default and must come from one of the two sources.
    """
    doc: dict[str, Any] = {}
    base = Path.cwd()
    if path is not None:
        path = Path(path)
        try:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config not found: {path}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        base = path.parent
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}

    known = {"dataset", "lexicon", "seed", "k_folds", "include_emoji", "output", "classifier", "relieff"}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")

    seed = overrides.get("seed", doc.get("seed"))
    if seed is None and not require_seed:
        seed = 0
    if seed is None:
        raise ConfigError("seed is required (set 'seed' in the config or pass --seed)")
    seed = int(seed)

    def resolve(key):
        if key in overrides:
            return Path(overrides[key])
        if key in doc:
            return base / doc[key]
        return None

    relieff = doc.get("relieff", {})
    cfg = RunConfig(
        seed=seed,
        dataset=resolve("dataset"),
        lexicon=resolve("lexicon"),
        k_folds=int(overrides.get("k_folds", doc.get("k_folds", 10))),
        include_emoji=bool(overrides.get("include_emoji", doc.get("include_emoji", True))),
        output=resolve("output") or Path("out"),
        relieff_k=int(overrides.get("relieff_k", relieff.get("k", 10))),
        relieff_m=overrides.get("relieff_m", relieff.get("m")),
        top=overrides.get("top", relieff.get("top")),
    )
    if "classifiers" in overrides:
        cfg.classifiers = list(overrides["classifiers"])
    else:
        cfg.classifiers = [_spec_from_table(t, seed) for t in doc.get("classifier", [])]
    return cfg

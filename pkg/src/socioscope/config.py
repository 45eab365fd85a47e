"""Run configuration: every tunable of the pipeline in one validated object.

The JSON form of RunConfig is both the config-file format and the audit
record embedded in every analysis report, so a report can be reproduced by
feeding its own "config" section back in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .characterization import (
    CATEGORIES,
    DEFAULT_TIE_ORDER,
    PRESETS,
    ThresholdConfig,
    WeightConfig,
    default_thresholds,
)
from .ingestion import AttentionConfig, ProximityConfig
from .metrics import DEFAULT_KATZ_ALPHA_FACTOR, DEFAULT_KATZ_BETA, DEFAULT_PAGERANK_DAMPING


@dataclass(frozen=True)
class RunConfig:
    proximity: ProximityConfig
    attention: AttentionConfig
    thresholds: ThresholdConfig
    weights: WeightConfig
    tie_order: tuple[str, ...] = DEFAULT_TIE_ORDER
    katz_alpha_factor: float = DEFAULT_KATZ_ALPHA_FACTOR
    katz_beta: float = DEFAULT_KATZ_BETA
    pagerank_damping: float = DEFAULT_PAGERANK_DAMPING

    def __post_init__(self) -> None:
        if sorted(self.tie_order) != sorted(CATEGORIES):
            raise ValueError(f"tie_order must be a permutation of {CATEGORIES}, got {self.tie_order}")
        if not 0 < self.katz_alpha_factor < 1:
            raise ValueError(f"katz_alpha_factor must be in (0, 1), got {self.katz_alpha_factor}")
        if not 0 < self.pagerank_damping < 1:
            raise ValueError(f"pagerank_damping must be in (0, 1), got {self.pagerank_damping}")

    def to_dict(self) -> dict:
        return {
            "proximity": {"threshold": self.proximity.threshold,
                          "bin": self.proximity.bin,
                          "trim": self.proximity.trim},
            "attention": {"min_overlap": self.attention.min_overlap},
            "thresholds": self.thresholds.to_dict(),
            "weights": self.weights.to_dict(),
            "tie_order": list(self.tie_order),
            "katz_alpha_factor": self.katz_alpha_factor,
            "katz_beta": self.katz_beta,
            "pagerank_damping": self.pagerank_damping,
        }


def default_config() -> RunConfig:
    return RunConfig(
        proximity=ProximityConfig(),
        attention=AttentionConfig(),
        thresholds=default_thresholds(),
        weights=PRESETS["equal"],
    )


def _reject_unknown(section: dict, allowed, where: str) -> None:
    unknown = set(section) - set(allowed)
    if unknown:
        raise ValueError(f"unknown config keys in {where}: {sorted(unknown)}")


def weights_from(value) -> WeightConfig:
    """Accept a preset name or a full weight mapping."""
    if isinstance(value, str):
        if value not in PRESETS:
            raise ValueError(f"unknown weight preset {value!r}; known: {sorted(PRESETS)}")
        return PRESETS[value]
    if isinstance(value, dict):
        _reject_unknown(value, ("name", "conversation", "proximity", "attention"), "weights")
        return WeightConfig(
            name=value.get("name", "custom"),
            conversation=value.get("conversation", 0.0),
            proximity=value.get("proximity", 0.0),
            attention=value.get("attention", 0.0),
        )
    raise ValueError(f"weights must be a preset name or a mapping, got {value!r}")


def config_from_dict(data: dict) -> RunConfig:
    """Build a RunConfig from its JSON form; unknown keys are rejected."""
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    _reject_unknown(data, ("proximity", "attention", "thresholds", "weights",
                           "tie_order", "katz_alpha_factor", "katz_beta", "pagerank_damping"),
                    "config")
    defaults = default_config()

    prox_raw = data.get("proximity", {})
    _reject_unknown(prox_raw, ("threshold", "bin", "trim"), "proximity")
    proximity = ProximityConfig(
        threshold=prox_raw.get("threshold", defaults.proximity.threshold),
        bin=prox_raw.get("bin", defaults.proximity.bin),
        trim=prox_raw.get("trim", defaults.proximity.trim),
    )

    att_raw = data.get("attention", {})
    _reject_unknown(att_raw, ("min_overlap",), "attention")
    attention = AttentionConfig(min_overlap=att_raw.get("min_overlap", defaults.attention.min_overlap))

    thr_raw = data.get("thresholds", {})
    thr_fields = list(defaults.thresholds.to_dict())
    _reject_unknown(thr_raw, thr_fields, "thresholds")
    thresholds = ThresholdConfig(**{**defaults.thresholds.to_dict(), **thr_raw})

    weights = weights_from(data.get("weights", "equal"))
    tie_order = tuple(data.get("tie_order", DEFAULT_TIE_ORDER))

    return RunConfig(
        proximity=proximity,
        attention=attention,
        thresholds=thresholds,
        weights=weights,
        tie_order=tie_order,
        katz_alpha_factor=data.get("katz_alpha_factor", DEFAULT_KATZ_ALPHA_FACTOR),
        katz_beta=data.get("katz_beta", DEFAULT_KATZ_BETA),
        pagerank_damping=data.get("pagerank_damping", DEFAULT_PAGERANK_DAMPING),
    )


def load_config(path: str | Path) -> RunConfig:
    return config_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

"""Threshold characterization of metric reports and weighted group scoring.

One sociogram's metrics become a five-dimension categorical profile
(cohesion, influence, connectivity, centralization, clustering); the three
profiles of a session are then aggregated into per-category scores and a
final group label (cohesive, fragmented, or competitive) using per-sociogram
weights.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .metrics import MetricsReport

KINDS = ("conversation", "proximity", "attention")

COHESION_VALUES = ("high", "moderate", "low")
INFLUENCE_VALUES = ("high", "moderate", "low")
CONNECTIVITY_VALUES = ("resilient", "moderate", "fragile")
CENTRALIZATION_VALUES = ("centralized", "distributed")
CLUSTERING_VALUES = ("tight-knit", "loose-knit")

#: Score routing: every profile value lands in exactly one category.
COHESIVE_VALUES = frozenset({"high", "distributed", "tight-knit"})
FRAGMENTED_VALUES = frozenset({"low", "fragile", "loose-knit"})
COMPETITIVE_VALUES = frozenset({"resilient", "moderate", "centralized"})

CATEGORIES = ("cohesive", "fragmented", "competitive")
DEFAULT_TIE_ORDER = ("fragmented", "cohesive", "competitive")

_SCORE_TIE_TOL = 1e-9


def _category_of(value: str) -> str:
    if value in COHESIVE_VALUES:
        return "cohesive"
    if value in FRAGMENTED_VALUES:
        return "fragmented"
    if value in COMPETITIVE_VALUES:
        return "competitive"
    raise ValueError(f"profile value {value!r} maps to no score category")


def _check_exhaustive_mapping() -> None:
    vocab = set(COHESION_VALUES) | set(INFLUENCE_VALUES) | set(CONNECTIVITY_VALUES) \
        | set(CENTRALIZATION_VALUES) | set(CLUSTERING_VALUES)
    routed = COHESIVE_VALUES | FRAGMENTED_VALUES | COMPETITIVE_VALUES
    assert vocab <= routed, f"unrouted profile values: {vocab - routed}"
    assert not (COHESIVE_VALUES & FRAGMENTED_VALUES)
    assert not (COHESIVE_VALUES & COMPETITIVE_VALUES)
    assert not (FRAGMENTED_VALUES & COMPETITIVE_VALUES)


_check_exhaustive_mapping()


class MissingSociogram(ValueError):
    """The scorer needs all three sociogram kinds."""


class UnreachableBranchWarning(UserWarning):
    """A threshold configuration makes one of the ordered rule branches dead."""


@dataclass(frozen=True)
class ThresholdConfig:
    """The characterization rule constants.

    Defaults are the empirically determined values the rules were published
    with; they may need re-tuning for tasks whose interaction durations live
    on a different scale (path-length thresholds in particular assume a
    specific distance unit).
    """

    cohesion_high_sigma_c: float = 0.05
    cohesion_high_sigma_x: float = 0.08
    cohesion_moderate_sigma_c: float = 0.02
    cohesion_moderate_sigma_x: float = 0.04
    influence_high_mu_x: float = 0.47
    influence_high_sigma_p: float = 0.02
    influence_high_mu_katz: float = 0.465
    influence_moderate_mu_x: float = 0.49
    influence_moderate_sigma_p: float = 0.065
    connectivity_resilient_kappa: int = 2
    connectivity_resilient_sigma_pl: float = 24.0
    connectivity_moderate_kappa: int = 1
    connectivity_moderate_sigma_pl: float = 50.0
    centralization_sigma_g: float = 0.35
    clustering_sigma_c: float = 0.05

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not math.isfinite(value):
                raise ValueError(f"threshold {name} must be finite")
        # The rules test high before moderate; warn when the moderate branch
        # is a strict subset of the high branch and therefore dead.
        if (self.cohesion_moderate_sigma_c <= self.cohesion_high_sigma_c
                and self.cohesion_moderate_sigma_x <= self.cohesion_high_sigma_x):
            warnings.warn("cohesion 'moderate' branch is unreachable with these thresholds",
                          UnreachableBranchWarning, stacklevel=2)
        if (self.influence_moderate_mu_x >= self.influence_high_mu_x
                and self.influence_moderate_sigma_p <= self.influence_high_sigma_p):
            warnings.warn("influence 'moderate' branch is unreachable with these thresholds",
                          UnreachableBranchWarning, stacklevel=2)
        if (self.connectivity_moderate_kappa >= self.connectivity_resilient_kappa
                and self.connectivity_moderate_sigma_pl <= self.connectivity_resilient_sigma_pl):
            warnings.warn("connectivity 'moderate' branch is unreachable with these thresholds",
                          UnreachableBranchWarning, stacklevel=2)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class CharacteristicProfile:
    """The five categorical dimensions assigned to one sociogram."""

    cohesion: str
    influence: str
    connectivity: str
    centralization: str
    clustering: str
    disconnected: bool = False

    def __post_init__(self) -> None:
        for name, value, vocab in (
            ("cohesion", self.cohesion, COHESION_VALUES),
            ("influence", self.influence, INFLUENCE_VALUES),
            ("connectivity", self.connectivity, CONNECTIVITY_VALUES),
            ("centralization", self.centralization, CENTRALIZATION_VALUES),
            ("clustering", self.clustering, CLUSTERING_VALUES),
        ):
            if value not in vocab:
                raise ValueError(f"invalid {name} value {value!r}; expected one of {vocab}")

    def values(self) -> tuple[str, str, str, str, str]:
        return (self.cohesion, self.influence, self.connectivity, self.centralization, self.clustering)

    def to_dict(self) -> dict:
        return {
            "cohesion": self.cohesion,
            "influence": self.influence,
            "connectivity": self.connectivity,
            "centralization": self.centralization,
            "clustering": self.clustering,
            "disconnected": self.disconnected,
        }


#: Profile emitted for a disconnected sociogram: the strongest possible
#: fragmentation signal, so the pipeline always produces a label.
DISCONNECTED_PROFILE = CharacteristicProfile(
    cohesion="low", influence="low", connectivity="fragile",
    centralization="distributed", clustering="loose-knit", disconnected=True,
)


def characterize(metrics: MetricsReport, cfg: ThresholdConfig | None = None) -> CharacteristicProfile:
    """Apply the ordered threshold rules to one metric report.

    Branches are evaluated exactly in the published order (high, then
    moderate, then the catch-all), even where the default constants make the
    moderate branch unreachable; retuned thresholds regain it.
    """
    cfg = cfg or default_thresholds()
    if not metrics.connected:
        return DISCONNECTED_PROFILE

    sigma_c = metrics.clustering_variability
    sigma_x = metrics.eigenvector_variability
    mu_x = metrics.mean_eigenvector
    sigma_p = metrics.pagerank_variability
    mu_katz = metrics.mean_katz
    kappa = metrics.edge_connectivity
    sigma_pl = metrics.path_length_variability
    sigma_g = metrics.betweenness_variability

    if sigma_c < cfg.cohesion_high_sigma_c and sigma_x < cfg.cohesion_high_sigma_x:
        cohesion = "high"
    elif sigma_c < cfg.cohesion_moderate_sigma_c and sigma_x < cfg.cohesion_moderate_sigma_x:
        cohesion = "moderate"
    else:
        cohesion = "low"

    if mu_x > cfg.influence_high_mu_x and sigma_p < cfg.influence_high_sigma_p \
            and mu_katz > cfg.influence_high_mu_katz:
        influence = "high"
    elif mu_x > cfg.influence_moderate_mu_x and sigma_p < cfg.influence_moderate_sigma_p:
        influence = "moderate"
    else:
        influence = "low"

    if kappa > cfg.connectivity_resilient_kappa and sigma_pl < cfg.connectivity_resilient_sigma_pl:
        connectivity = "resilient"
    elif kappa > cfg.connectivity_moderate_kappa and sigma_pl < cfg.connectivity_moderate_sigma_pl:
        connectivity = "moderate"
    else:
        connectivity = "fragile"

    centralization = "centralized" if sigma_g > cfg.centralization_sigma_g else "distributed"
    clustering = "tight-knit" if sigma_c < cfg.clustering_sigma_c else "loose-knit"

    return CharacteristicProfile(cohesion, influence, connectivity, centralization, clustering)


def default_thresholds() -> ThresholdConfig:
    """Default thresholds without the unreachable-branch warning noise."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnreachableBranchWarning)
        return ThresholdConfig()


@dataclass(frozen=True)
class WeightConfig:
    """Per-sociogram weights for the scorer; must be a convex combination."""

    name: str
    conversation: float
    proximity: float
    attention: float

    def __post_init__(self) -> None:
        total = self.conversation + self.proximity + self.attention
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {total}")
        if min(self.conversation, self.proximity, self.attention) < 0:
            raise ValueError("weights must be >= 0")

    def as_mapping(self) -> dict[str, float]:
        return {"conversation": self.conversation, "proximity": self.proximity,
                "attention": self.attention}

    def to_dict(self) -> dict:
        return {"name": self.name, **self.as_mapping()}


PRESETS: dict[str, WeightConfig] = {
    "equal": WeightConfig("equal", 1 / 3, 1 / 3, 1 / 3),
    "conversation-focused": WeightConfig("conversation-focused", 0.5, 0.25, 0.25),
    "proximity-focused": WeightConfig("proximity-focused", 0.25, 0.5, 0.25),
    "attention-focused": WeightConfig("attention-focused", 0.25, 0.25, 0.5),
    "conv-prox": WeightConfig("conv-prox", 0.4, 0.4, 0.2),
    "conv-att": WeightConfig("conv-att", 0.4, 0.2, 0.4),
    "prox-att": WeightConfig("prox-att", 0.2, 0.4, 0.4),
}


@dataclass(frozen=True)
class GroupScorecard:
    """Per-category scores plus the final label for one group."""

    score_cohesive: float
    score_fragmented: float
    score_competitive: float
    label: str
    tie_break_applied: bool
    config: dict = field(default_factory=dict)

    def scores(self) -> dict[str, float]:
        return {"cohesive": self.score_cohesive, "fragmented": self.score_fragmented,
                "competitive": self.score_competitive}

    def to_dict(self) -> dict:
        return {
            "scores": self.scores(),
            "label": self.label,
            "tie_break_applied": self.tie_break_applied,
            "config": self.config,
        }


def score(
    profiles: dict[str, CharacteristicProfile],
    weights: WeightConfig | dict[str, float],
    tie_order: tuple[str, ...] = DEFAULT_TIE_ORDER,
) -> GroupScorecard:
    """Aggregate the three profiles into category scores and a group label.

    Each of the fifteen profile values routes to exactly one category and
    adds that sociogram's weight to it; the label is the argmax. Ties (within
    1e-9, since weights are floats) are resolved by tie_order.

    ``weights`` may be a WeightConfig preset or a raw non-negative mapping,
    which need not sum to 1 (the argmax is scale-invariant).
    """
    if isinstance(weights, WeightConfig):
        weight_map = weights.as_mapping()
        config = weights.to_dict()
    else:
        weight_map = dict(weights)
        missing = [k for k in KINDS if k not in weight_map]
        if missing:
            raise ValueError(f"weights missing kinds: {missing}")
        if min(weight_map[k] for k in KINDS) < 0:
            raise ValueError("weights must be >= 0")
        config = {"name": "custom", **{k: weight_map[k] for k in KINDS}}
    if sorted(tie_order) != sorted(CATEGORIES):
        raise ValueError(f"tie_order must be a permutation of {CATEGORIES}, got {tie_order}")
    for kind in KINDS:
        if kind not in profiles:
            raise MissingSociogram(f"profiles missing sociogram kind {kind!r}")

    counts = {kind: {c: 0 for c in CATEGORIES} for kind in KINDS}
    for kind in KINDS:
        for value in profiles[kind].values():
            counts[kind][_category_of(value)] += 1
    totals = {c: sum(counts[kind][c] * weight_map[kind] for kind in KINDS) for c in CATEGORIES}

    top = max(totals.values())
    tied = [c for c in tie_order if totals[c] >= top - _SCORE_TIE_TOL]
    return GroupScorecard(
        score_cohesive=totals["cohesive"],
        score_fragmented=totals["fragmented"],
        score_competitive=totals["competitive"],
        label=tied[0],
        tie_break_applied=len(tied) > 1,
        config=config,
    )


def sweep_configurations(
    profiles: dict[str, CharacteristicProfile],
    presets: list[WeightConfig],
    tie_order: tuple[str, ...] = DEFAULT_TIE_ORDER,
) -> list[GroupScorecard]:
    """Score the same profiles under each weight preset."""
    return [score(profiles, preset, tie_order) for preset in presets]

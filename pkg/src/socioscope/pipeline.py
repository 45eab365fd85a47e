"""End-to-end session analysis: log -> sociograms -> metrics -> profiles -> scores."""

from __future__ import annotations

from .characterization import WeightConfig, characterize, score
from .config import RunConfig, default_config
from .ingestion import (
    build_attention_sociogram,
    build_conversation_sociogram,
    build_proximity_sociogram,
)
from .metrics import compute_metrics
from .model import SessionLog, Sociogram
from .taskmetrics import GroundTruth, compute_task_report


def build_sociograms(log: SessionLog, config: RunConfig | None = None) -> dict[str, Sociogram]:
    config = config or default_config()
    return {
        "conversation": build_conversation_sociogram(log.speech, log.roster),
        "proximity": build_proximity_sociogram(log.positions, log.roster, config.proximity),
        "attention": build_attention_sociogram(log.gaze, log.roster, config.attention),
    }


def _sociogram_dict(sociogram: Sociogram) -> dict:
    return {
        "kind": sociogram.kind,
        "directed": sociogram.directed,
        "roster": list(sociogram.roster),
        "edges": [{"source": a, "target": b, "weight": w} for a, b, w in sociogram.sorted_edges()],
    }


def analyze_log(
    log: SessionLog,
    config: RunConfig | None = None,
    presets: list[WeightConfig] | None = None,
    truth: GroundTruth | None = None,
) -> dict:
    """Run the full pipeline on one session and assemble the report document.

    The report is self-contained: it embeds the fully resolved config, the
    three sociograms as edge lists, their metric reports and profiles, one
    scorecard per requested weight configuration, and the task report.
    Everything is ordered deterministically, so identical inputs produce
    byte-identical serialized reports.
    """
    config = config or default_config()
    presets = presets if presets is not None else [config.weights]

    sociograms = build_sociograms(log, config)
    metrics = {
        kind: compute_metrics(
            s,
            damping=config.pagerank_damping,
            katz_alpha_factor=config.katz_alpha_factor,
            katz_beta=config.katz_beta,
        )
        for kind, s in sociograms.items()
    }
    profiles = {kind: characterize(m, config.thresholds) for kind, m in metrics.items()}
    scorecards = [score(profiles, preset, config.tie_order) for preset in presets]
    task = compute_task_report(log.interactions, truth)

    return {
        "config": config.to_dict(),
        "sociograms": {kind: _sociogram_dict(sociograms[kind]) for kind in sociograms},
        "metrics": {kind: metrics[kind].to_dict() for kind in metrics},
        "profiles": {kind: profiles[kind].to_dict() for kind in profiles},
        "scorecards": [card.to_dict() for card in scorecards],
        "task": task.to_dict(),
    }

"""Command-line front end.

Commands:
    analyze       full pipeline on a session log directory -> JSON report
    score         score characteristic-profile files directly (no sensor data)
    export        write one sociogram as Graphviz dot or a plain edge list
    synth         generate a seeded synthetic session log directory
    task-metrics  task/performance measures only

Exit codes: 0 success, 1 input or config error, 2 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .characterization import (
    PRESETS,
    CharacteristicProfile,
    MissingSociogram,
    WeightConfig,
    score,
)
from .config import RunConfig, default_config, load_config
from .export import FORMATS, UnsupportedFormat, export_sociogram
from .ingestion import SchemaError, parse_session_log, write_session_log
from .metrics import NotConverged, SingularSystem
from .model import KINDS, ModelError
from .pipeline import analyze_log, build_sociograms
from .synth import SCENARIOS, InvalidSpec, generate
from .taskmetrics import EmptyLog, UnbalancedGrabRelease, compute_task_report, load_ground_truth

_INPUT_ERRORS = (
    FileNotFoundError,
    IsADirectoryError,
    SchemaError,
    ModelError,
    MissingSociogram,
    UnsupportedFormat,
    InvalidSpec,
    UnbalancedGrabRelease,
    EmptyLog,
    ValueError,
    json.JSONDecodeError,
)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(document: dict, out: str | None) -> None:
    _emit(json.dumps(document, indent=2) + "\n", out)


def _load_runconfig(path: str | None) -> RunConfig:
    return load_config(path) if path else default_config()


def _resolve_presets(preset: str | None, config: RunConfig) -> list[WeightConfig]:
    if preset is None:
        return [config.weights]
    if preset == "all":
        return list(PRESETS.values())
    if preset not in PRESETS:
        raise ValueError(f"unknown weight preset {preset!r}; known: {sorted(PRESETS)} or 'all'")
    return [PRESETS[preset]]


def _load_profiles_file(path: str) -> dict[str, dict[str, CharacteristicProfile]]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    groups = data.get("groups")
    if not isinstance(groups, dict) or not groups:
        raise ValueError(f"{path}: expected a top-level 'groups' object")
    parsed: dict[str, dict[str, CharacteristicProfile]] = {}
    for group_id, per_kind in groups.items():
        if not isinstance(per_kind, dict):
            raise ValueError(f"{path}: group {group_id!r} must map sociogram kinds to profiles")
        profiles = {}
        for kind, raw in per_kind.items():
            if kind not in KINDS:
                raise ValueError(f"{path}: group {group_id!r}: unknown sociogram kind {kind!r}")
            extra = set(raw) - {"cohesion", "influence", "connectivity",
                                "centralization", "clustering", "disconnected"}
            if extra:
                raise ValueError(f"{path}: group {group_id!r} {kind}: unknown fields {sorted(extra)}")
            try:
                profiles[kind] = CharacteristicProfile(
                    cohesion=raw.get("cohesion", ""),
                    influence=raw.get("influence", ""),
                    connectivity=raw.get("connectivity", ""),
                    centralization=raw.get("centralization", ""),
                    clustering=raw.get("clustering", ""),
                    disconnected=bool(raw.get("disconnected", False)),
                )
            except ValueError as exc:
                raise ValueError(f"{path}: group {group_id!r} {kind}: {exc}") from None
        parsed[group_id] = profiles
    return parsed


def cmd_analyze(args: argparse.Namespace) -> int:
    config = _load_runconfig(args.config)
    presets = _resolve_presets(args.preset, config)
    truth = load_ground_truth(args.truth) if args.truth else None
    log = parse_session_log(args.log_dir)
    report = analyze_log(log, config, presets, truth)
    _dump(report, args.out)  # assembled fully before writing; no partial reports
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    config = _load_runconfig(args.config)
    presets = _resolve_presets(args.preset, config)
    groups = _load_profiles_file(args.profiles)
    document = {
        "config": config.to_dict(),
        "groups": {
            group_id: [score(profiles, preset, config.tie_order).to_dict() for preset in presets]
            for group_id, profiles in groups.items()
        },
    }
    _dump(document, args.out)
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    config = _load_runconfig(args.config)
    log = parse_session_log(args.log_dir)
    sociogram = build_sociograms(log, config)[args.kind]
    _emit(export_sociogram(sociogram, args.format), args.out)
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    spec = SCENARIOS[args.scenario](size=args.size, duration=args.duration, seed=args.seed)
    write_session_log(generate(spec), args.out)
    return 0


def cmd_task_metrics(args: argparse.Namespace) -> int:
    log = parse_session_log(args.log_dir)
    truth = load_ground_truth(args.truth) if args.truth else None
    report = compute_task_report(log.interactions, truth, args.override_mode)
    _dump(report.to_dict(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="socioscope",
                                     description="Sociograms and group-behavior labels from MR session logs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full pipeline on a session directory")
    p.add_argument("log_dir")
    p.add_argument("--config", help="JSON run-config file")
    p.add_argument("--preset", help="weight preset name, or 'all' for the full sweep")
    p.add_argument("--truth", help="ground-truth label map for the accuracy measure")
    p.add_argument("--out", help="report path (stdout if omitted)")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("score", help="score characteristic-profile files directly")
    p.add_argument("profiles")
    p.add_argument("--config", help="JSON run-config file")
    p.add_argument("--preset", help="weight preset name, or 'all'")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_score)

    p = sub.add_parser("export", help="export one sociogram for external rendering")
    p.add_argument("log_dir")
    p.add_argument("--kind", choices=KINDS, default="conversation")
    p.add_argument("--format", choices=FORMATS, default="dot")
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("synth", help="generate a synthetic session log")
    p.add_argument("scenario", choices=sorted(SCENARIOS))
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--duration", type=float, default=300.0)
    p.add_argument("--size", type=int, default=4)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("task-metrics", help="task/performance measures only")
    p.add_argument("log_dir")
    p.add_argument("--truth")
    p.add_argument("--override-mode", choices=("different-participant", "any-relabel"),
                   default="different-participant")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_task_metrics)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (NotConverged, SingularSystem) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Socioscope: weighted sociograms and group-behavior labels from MR session logs.

The pipeline has four stages: ingest per-stream event logs into a
SessionLog, build the conversation/proximity/attention sociograms, compute
the weighted graph-metric suite, then characterize and score the group as
cohesive, fragmented, or competitive.
"""

from .characterization import (
    CharacteristicProfile,
    GroupScorecard,
    MissingSociogram,
    PRESETS,
    ThresholdConfig,
    UnreachableBranchWarning,
    WeightConfig,
    characterize,
    default_thresholds,
    score,
    sweep_configurations,
)
from .config import RunConfig, config_from_dict, default_config, load_config
from .export import UnsupportedFormat, export_sociogram, to_dot, to_edge_list
from .ingestion import (
    AttentionConfig,
    NoSamplesInWindow,
    ProximityConfig,
    SchemaError,
    attribute_speaker,
    build_attention_sociogram,
    build_conversation_sociogram,
    build_proximity_sociogram,
    parse_session_log,
    write_session_log,
)
from .metrics import (
    DisconnectedGraph,
    MetricsReport,
    NotConverged,
    SingularSystem,
    betweenness,
    clustering_coefficients,
    compute_metrics,
    edge_connectivity,
    eigenvector_centrality,
    katz_centrality,
    katz_mean,
    pagerank,
    path_length_variability,
)
from .model import (
    GazeEvent,
    KindDirectionMismatch,
    LoudnessSample,
    ModelError,
    NonPositiveWeight,
    ObjectInteractionEvent,
    PositionSample,
    Roster,
    SelfLoop,
    SessionLog,
    Sociogram,
    SpeechSegment,
    UnknownParticipant,
    adjacency,
    build_sociogram,
    is_connected,
)
from .pipeline import analyze_log, build_sociograms
from .synth import ScenarioSpec, InvalidSpec, cohesive_spec, dominant_speaker_spec, fragmented_spec, generate
from .taskmetrics import EmptyLog, TaskReport, UnbalancedGrabRelease, compute_task_report, load_ground_truth

__version__ = "0.1.0"

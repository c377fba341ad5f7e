"""Log template extraction with MinHash LSH merging and DTW templates."""

from ._core import (
    PipelineError,
    RunConfig,
    candidate_probability,
    common_skeleton,
    dtw_cost,
    estimate_jaccard,
    evaluate,
    event_id_for,
    exact_jaccard,
    generate_synthetic,
    grouping_accuracy,
    merge_placeholders,
    minhash,
    normalize_template,
    optimize_bands,
    parsing_accuracy,
    preset_threshold,
    run_pipeline,
    shingles_of,
    sweep_strategies,
    sweep_thresholds,
)

__all__ = [
    "PipelineError",
    "RunConfig",
    "candidate_probability",
    "common_skeleton",
    "dtw_cost",
    "estimate_jaccard",
    "evaluate",
    "event_id_for",
    "exact_jaccard",
    "generate_synthetic",
    "grouping_accuracy",
    "merge_placeholders",
    "minhash",
    "normalize_template",
    "optimize_bands",
    "parsing_accuracy",
    "preset_threshold",
    "run_pipeline",
    "shingles_of",
    "sweep_strategies",
    "sweep_thresholds",
]

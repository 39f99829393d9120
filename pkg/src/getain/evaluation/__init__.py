"""采样器与评估指标"""

from .metrics import (
    OosEstimate,
    coverage,
    frechet_from_moments,
    frechet_gaussian,
    gaussian_fit,
    inversion_errors,
    inversion_mse,
    knn_precision_recall,
    knn_radii,
    out_of_support_mass,
    points_oos_mass,
)
from .plot import write_scatter_svg
from .report import (
    METRIC_COLUMNS,
    METRIC_NAMES,
    EvalSettings,
    MetricReport,
    evaluate_checkpoint,
    evaluate_model,
    metrics_frame,
    read_metrics,
    write_metrics,
)
from .samplers import (
    TruncatedSample,
    dataset_resampler,
    model_sampler,
    sample_mixture,
    truncated_sample,
)

__all__ = [
    "sample_mixture",
    "model_sampler",
    "dataset_resampler",
    "truncated_sample",
    "TruncatedSample",
    "OosEstimate",
    "out_of_support_mass",
    "points_oos_mass",
    "frechet_gaussian",
    "frechet_from_moments",
    "gaussian_fit",
    "knn_precision_recall",
    "knn_radii",
    "coverage",
    "inversion_mse",
    "inversion_errors",
    "EvalSettings",
    "MetricReport",
    "METRIC_COLUMNS",
    "METRIC_NAMES",
    "evaluate_model",
    "evaluate_checkpoint",
    "metrics_frame",
    "write_metrics",
    "read_metrics",
    "write_scatter_svg",
]

"""Quality-model assessment engine.

Load modular quality models (factors, impacts, measures, instruments,
evaluations), calibrate utility thresholds on baseline systems, weigh
siblings by rank-order centroid, assess measurement bundles with interval
arithmetic for missing data, and grade the result on a 1 (best) to 6
(worst) scale.
"""

from importlib import resources
from pathlib import Path

from .assessment import (
    AssessmentResult,
    Grade,
    MeasurementBundle,
    MeasureValue,
    UtilityInterval,
    assess,
    assess_factor,
    evaluate_measure,
    interpret,
    read_bundle,
    read_manual_csv,
    utility,
)
from .calibration import CalibrationSample, calibrate, quartile
from .model import (
    Diagnostic,
    ModelError,
    ModuleDef,
    QualityModel,
    UtilityFunction,
    check,
    resolve,
    trace,
    validate,
)
from .modelformat import ModelFormatError, load_modules, parse_module, serialize_module
from .report import to_html, to_json
from .stats import average_ranks, improvement_percent, spearman
from .weighting import roc_weights, weights_from_ranking

__version__ = "0.1.0"


def data_path(*parts: str) -> Path:
    """Path of a file shipped under ``qassess/data`` (demo model, bundles, baselines)."""
    return Path(str(resources.files(__name__).joinpath("data", *parts)))


def load_demo_model() -> QualityModel:
    model, diags = check(load_modules([data_path("demo")]))
    if model is None:
        raise ModelError(diags)
    return model

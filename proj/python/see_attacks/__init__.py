"""Python front end for the seed-explore-exploit attack simulator."""

import json as _json

from . import _see
from ._see import (
    BudgetExhausted,
    ConfigError,
    DimensionMismatch,
    Error,
    Model,
    ParseError,
    SeedFailure,
    TrainingError,
    deviation,
    is_blocked,
    knn_dist,
    mst_dist,
    orthonormal_probe,
    perturb,
)

__all__ = [
    "BudgetExhausted", "ConfigError", "DimensionMismatch", "Error", "Model",
    "ParseError", "SeedFailure", "TrainingError", "deviation", "is_blocked",
    "knn_dist", "make_synthetic", "mst_dist", "orthonormal_probe", "perturb",
    "run_experiment", "run_sweep", "train",
]


def train(spec, x, y):
    """Train a defender. `spec` is a dict such as {"kind": "knn", "k": 3}."""
    return Model.train(_json.dumps(spec), x, y)


def make_synthetic(seed=0, **spec):
    """Returns (samples, labels) in [0,1]^d; labels are 0 (legitimate) / 1."""
    return _see.make_synthetic(_json.dumps(spec), seed)


def run_experiment(config):
    """Run an experiment from a config dict and return the report as a dict."""
    return _json.loads(_see.run_experiment(_json.dumps(config)))


def run_sweep(config):
    """Returns a list of {"value", "report"} dicts, one per sweep value."""
    return _json.loads(_see.run_sweep(_json.dumps(config)))

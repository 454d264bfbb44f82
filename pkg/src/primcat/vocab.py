"""Controlled vocabularies and lexical rules for annotation documents.

Condition flags, algorithm types and primitive families are *open*
vocabularies: any name matching the flag lexical rule is accepted, but
names outside the seed sets surface as warnings during validation so that
typos are visible at ingest time. Modalities, task types, metrics,
hyperparameter kinds and value types are closed sets.
"""

from __future__ import annotations

import re

FLAG_RE = re.compile(r"[A-Z][A-Z0-9_]*\Z")
DOC_ID_RE = re.compile(r"[a-z0-9_]+(\.[a-z0-9_]+)*\Z")
VERSION_RE = re.compile(r"\d+\.\d+\.\d+\Z")

SEED_CONDITION_FLAGS = frozenset(
    {
        "NO_MISSING_VALUES",
        "NO_CATEGORICAL_VALUES",
        "NO_CONTINUOUS_VALUES",
        "NO_JAGGED_VALUES",
    }
)

SEED_ALGORITHM_TYPES = frozenset(
    {
        "ADABOOST",
        "BAYESIAN_LINEAR_REGRESSION",
        "DECISION_TREE",
    }
)

SEED_PRIMITIVE_FAMILIES = frozenset(
    {
        "CLASSIFICATION",
        "REGRESSION",
        "CLUSTERING",
        "FEATURE_SELECTION",
        "DATA_TRANSFORMATION",
        "DATA_CLEANING",
        "TIMESERIES_FORECASTING",
        "RANKING",
    }
)

MODALITIES = frozenset(
    {"TABULAR", "TEXT", "IMAGE", "VIDEO", "TIMESERIES", "GRAPH", "AUDIO"}
)

TASK_TYPES = frozenset(
    {"CLASSIFICATION", "REGRESSION", "CLUSTERING", "TIMESERIES_FORECASTING", "RANKING"}
)

METRICS = frozenset({"ACCURACY", "F1", "RMSE", "MAE", "NDCG"})

HYPERPARAMETER_KINDS = frozenset({"TUNABLE", "RESOURCE", "METAFEATURE"})

VALUE_TYPES = frozenset({"INT", "FLOAT", "BOOL", "ENUM", "STRING"})


def version_key(version: str) -> tuple[int, int, int]:
    """Numeric sort key for an ``X.Y.Z`` version string."""
    major, minor, patch = version.split(".")
    return int(major), int(minor), int(patch)

"""Fixture documents: a small hand-written demo catalog and a seeded
synthetic corpus at the scale the registry is meant to hold.

The demo catalog backs unit tests, golden artifacts and the end-to-end
demo script; the synthetic generator produces a few hundred valid,
deterministic documents for scale and search-oracle testing.
"""

from __future__ import annotations

import random

from .planner import Pipeline, PipelineStep
from .schema import (
    DatasetProfile,
    Hyperparameter,
    PrimitiveAnnotation,
    Problem,
)


def _annotation(doc_id, name, family, *, version="1.0.0", description="",
                languages=("python",), algorithm_types=("DECISION_TREE",),
                hyperparameters=(), preconditions=(), effects=(),
                invalidates=(), modalities=()):
    return PrimitiveAnnotation(
        id=doc_id, name=name, version=version, description=description,
        languages=tuple(languages), algorithm_types=tuple(algorithm_types),
        primitive_family=family, hyperparameters=tuple(hyperparameters),
        preconditions=frozenset(preconditions), effects=frozenset(effects),
        invalidates=frozenset(invalidates), modalities=frozenset(modalities),
    )


def demo_annotations() -> list[PrimitiveAnnotation]:
    return [
        _annotation(
            "d3m.sklearn.mean_imputer", "Mean Imputer", "DATA_CLEANING",
            description="Replaces missing cells with per-column means.",
            algorithm_types=("IMPUTATION",),
            hyperparameters=(
                Hyperparameter("strategy", "TUNABLE", "ENUM", "mean",
                               choices=("mean", "median")),
            ),
            effects=("NO_MISSING_VALUES",),
        ),
        _annotation(
            "d3m.sklearn.one_hot_encoder", "One Hot Encoder", "DATA_TRANSFORMATION",
            description="Expands categorical columns into indicator columns.",
            algorithm_types=("ONE_HOT_ENCODING",),
            hyperparameters=(
                Hyperparameter("max_categories", "RESOURCE", "INT", 100, range=(2, 10000)),
            ),
            preconditions=("NO_MISSING_VALUES",),
            effects=("NO_CATEGORICAL_VALUES",),
        ),
        _annotation(
            "d3m.sklearn.variance_selector", "Variance Feature Selector",
            "FEATURE_SELECTION",
            description="Drops features whose variance falls below a threshold.",
            algorithm_types=("VARIANCE_THRESHOLD",),
            hyperparameters=(
                Hyperparameter("threshold", "TUNABLE", "FLOAT", 0.0, range=(0.0, 1.0)),
            ),
            preconditions=("NO_MISSING_VALUES", "NO_CATEGORICAL_VALUES"),
        ),
        _annotation(
            "d3m.sklearn.decision_tree", "Decision Tree Classifier", "CLASSIFICATION",
            description="Classifies rows with a single decision tree.",
            algorithm_types=("DECISION_TREE",),
            hyperparameters=(
                Hyperparameter("max_depth", "TUNABLE", "INT", 8, range=(1, 64)),
                Hyperparameter("n_jobs", "RESOURCE", "INT", 1, range=(1, 128)),
            ),
            preconditions=("NO_MISSING_VALUES",),
            modalities=("TABULAR",),
        ),
        _annotation(
            "d3m.sklearn.adaboost", "AdaBoost Classifier", "CLASSIFICATION",
            description="Boosted ensemble of shallow trees.",
            algorithm_types=("ADABOOST", "DECISION_TREE"),
            hyperparameters=(
                Hyperparameter("n_estimators", "TUNABLE", "INT", 50, range=(1, 500)),
            ),
            preconditions=("NO_MISSING_VALUES", "NO_CATEGORICAL_VALUES"),
            modalities=("TABULAR",),
        ),
        _annotation(
            "d3m.sklearn.bayesian_linear_regression", "Bayesian Linear Regression",
            "REGRESSION",
            description="Linear regression with a Bayesian prior over weights.",
            algorithm_types=("BAYESIAN_LINEAR_REGRESSION",),
            preconditions=("NO_MISSING_VALUES", "NO_CATEGORICAL_VALUES"),
            modalities=("TABULAR",),
        ),
        _annotation(
            "d3m.nlp.whitespace_normalizer", "Whitespace Normalizer", "DATA_CLEANING",
            description="Collapses ragged whitespace so records align.",
            languages=("python", "java"),
            algorithm_types=("TEXT_NORMALIZATION",),
            effects=("NO_JAGGED_VALUES",),
            modalities=("TEXT",),
        ),
        _annotation(
            "d3m.nlp.sentiment_classifier", "Sentiment Classifier", "CLASSIFICATION",
            description="Labels text polarity with a bag-of-words model.",
            algorithm_types=("NAIVE_BAYES",),
            preconditions=("NO_JAGGED_VALUES",),
            modalities=("TEXT",),
        ),
        _annotation(
            "d3m.vision.frame_sampler", "Frame Sampler", "DATA_TRANSFORMATION",
            description="Samples frames from clips at a fixed rate.",
            algorithm_types=("FRAME_SAMPLING",),
            hyperparameters=(
                Hyperparameter("rate", "RESOURCE", "FLOAT", 1.0, range=(0.1, 60.0)),
            ),
            effects=("NO_JAGGED_VALUES",),
            modalities=("IMAGE", "VIDEO"),
        ),
        _annotation(
            "d3m.vision.image_classifier", "Image Classifier", "CLASSIFICATION",
            description="Convolutional classifier over fixed-size frames.",
            algorithm_types=("CONVOLUTIONAL_NEURAL_NETWORK",),
            preconditions=("NO_JAGGED_VALUES",),
            modalities=("IMAGE", "VIDEO"),
        ),
        _annotation(
            "d3m.common.multi_featurizer", "Multi-Modal Featurizer",
            "DATA_TRANSFORMATION",
            description="Hashes text or tabular records into dense features.",
            algorithm_types=("FEATURE_HASHING",),
            effects=("NO_CATEGORICAL_VALUES", "NO_JAGGED_VALUES"),
            modalities=("TEXT", "TABULAR"),
        ),
        _annotation(
            "d3m.timeseries.lag_forecaster", "Lag Forecaster",
            "TIMESERIES_FORECASTING",
            description="Autoregressive forecaster over lagged windows.",
            algorithm_types=("AUTOREGRESSION",),
            hyperparameters=(
                Hyperparameter("window", "METAFEATURE", "INT", 12, range=(1, 365)),
            ),
            preconditions=("NO_MISSING_VALUES",),
            modalities=("TIMESERIES",),
        ),
    ]


def demo_datasets() -> list[DatasetProfile]:
    return [
        DatasetProfile(id="d3m.datasets.census_income", name="Census Income",
                       modality="TABULAR", holds=frozenset(), rows=32561, columns=15),
        DatasetProfile(id="d3m.datasets.product_reviews", name="Product Reviews",
                       modality="TEXT", holds=frozenset(), rows=50000, columns=2),
        DatasetProfile(id="d3m.datasets.traffic_clips", name="Traffic Camera Clips",
                       modality="VIDEO", holds=frozenset(), rows=1200),
        DatasetProfile(id="d3m.datasets.sensor_readings", name="Sensor Readings",
                       modality="TIMESERIES",
                       holds=frozenset({"NO_CATEGORICAL_VALUES"}), rows=86400),
        DatasetProfile(id="d3m.datasets.clean_measurements", name="Clean Measurements",
                       modality="TABULAR",
                       holds=frozenset({"NO_MISSING_VALUES", "NO_CATEGORICAL_VALUES"}),
                       rows=900, columns=12),
    ]


def demo_problems() -> list[Problem]:
    return [
        Problem(id="d3m.problems.income_classification", task_type="CLASSIFICATION",
                dataset_id="d3m.datasets.census_income", metric="ACCURACY"),
        Problem(id="d3m.problems.review_sentiment", task_type="CLASSIFICATION",
                dataset_id="d3m.datasets.product_reviews", metric="F1"),
        Problem(id="d3m.problems.traffic_labeling", task_type="CLASSIFICATION",
                dataset_id="d3m.datasets.traffic_clips", metric="ACCURACY"),
        Problem(id="d3m.problems.measurement_regression", task_type="REGRESSION",
                dataset_id="d3m.datasets.clean_measurements", metric="RMSE"),
        Problem(id="d3m.problems.demand_forecast", task_type="TIMESERIES_FORECASTING",
                dataset_id="d3m.datasets.sensor_readings", metric="MAE"),
    ]


def fixture_pipelines() -> dict[str, Pipeline]:
    """Three validating pipelines, one per base-image kind."""
    return {
        "nlp": Pipeline(
            id="d3m.pipelines.review_sentiment_nlp",
            dataset_id="d3m.datasets.product_reviews",
            problem_id="d3m.problems.review_sentiment",
            steps=(
                PipelineStep("d3m.nlp.whitespace_normalizer", "1.0.0", {}),
                PipelineStep("d3m.nlp.sentiment_classifier", "1.0.0", {}),
            ),
        ),
        "vision": Pipeline(
            id="d3m.pipelines.traffic_labeling_vision",
            dataset_id="d3m.datasets.traffic_clips",
            problem_id="d3m.problems.traffic_labeling",
            steps=(
                PipelineStep("d3m.vision.frame_sampler", "1.0.0", {}),
                PipelineStep("d3m.vision.image_classifier", "1.0.0", {}),
            ),
        ),
        "mixed": Pipeline(
            id="d3m.pipelines.review_sentiment_full",
            dataset_id="d3m.datasets.product_reviews",
            problem_id="d3m.problems.review_sentiment",
            steps=(
                PipelineStep("d3m.common.multi_featurizer", "1.0.0", {}),
                PipelineStep("d3m.nlp.sentiment_classifier", "1.0.0", {}),
            ),
        ),
    }


# -- synthetic corpus -------------------------------------------------------

_LIBRARIES = ("sklearn", "keras", "dl4j", "torch", "xgboost", "spacy", "statsmodel")
_FAMILY_VERBS = {
    "CLASSIFICATION": ("classifier",),
    "REGRESSION": ("regressor",),
    "CLUSTERING": ("clusterer",),
    "TIMESERIES_FORECASTING": ("forecaster",),
    "RANKING": ("ranker",),
    "DATA_TRANSFORMATION": ("encoder", "scaler", "sampler", "binner"),
    "DATA_CLEANING": ("cleaner", "imputer"),
    "FEATURE_SELECTION": ("selector",),
}
_WORDS = ("gradient", "kernel", "sparse", "robust", "deep", "linear", "random",
          "spectral", "greedy", "adaptive", "batch", "online", "dense", "hashed")
_EXTRA_FLAGS = ("NO_NEGATIVE_VALUES", "NO_DUPLICATE_ROWS", "NO_OUTLIERS",
                "NO_EMPTY_STRINGS", "NO_CONSTANT_COLUMNS")
_SEED_FLAGS = ("NO_MISSING_VALUES", "NO_CATEGORICAL_VALUES",
               "NO_CONTINUOUS_VALUES", "NO_JAGGED_VALUES")
_ALGORITHMS = ("ADABOOST", "BAYESIAN_LINEAR_REGRESSION", "DECISION_TREE",
               "RANDOM_FOREST", "SUPPORT_VECTOR_MACHINE", "K_MEANS",
               "GRADIENT_BOOSTING", "NAIVE_BAYES", "LOGISTIC_REGRESSION")
_LANGUAGES = ("python", "java", "scala", "r")
_MODALITIES = ("TABULAR", "TEXT", "IMAGE", "VIDEO", "TIMESERIES", "GRAPH", "AUDIO")
_ESTIMATOR_FAMILIES = ("CLASSIFICATION", "REGRESSION", "CLUSTERING",
                       "TIMESERIES_FORECASTING", "RANKING")
_INTERIOR_FAMILIES = ("DATA_TRANSFORMATION", "DATA_CLEANING", "FEATURE_SELECTION")
_FAMILY_TASKS = {"CLASSIFICATION": "ACCURACY", "REGRESSION": "RMSE",
                 "CLUSTERING": "F1", "TIMESERIES_FORECASTING": "MAE",
                 "RANKING": "NDCG"}


def _random_hyperparameters(rng: random.Random) -> tuple[Hyperparameter, ...]:
    out = []
    for i in range(rng.randint(0, 3)):
        kind = rng.choice(("TUNABLE", "RESOURCE", "METAFEATURE"))
        value_type = rng.choice(("INT", "FLOAT", "BOOL", "ENUM", "STRING"))
        name = f"{rng.choice(_WORDS)}_{i}"
        if value_type == "INT":
            lower = rng.randint(0, 10)
            upper = lower + rng.randint(1, 100)
            out.append(Hyperparameter(name, kind, "INT", rng.randint(lower, upper),
                                      range=(lower, upper)))
        elif value_type == "FLOAT":
            lower = round(rng.uniform(0, 1), 3)
            upper = round(lower + rng.uniform(0.1, 10), 3)
            out.append(Hyperparameter(name, kind, "FLOAT",
                                      round(rng.uniform(lower, upper), 3),
                                      range=(lower, upper)))
        elif value_type == "BOOL":
            out.append(Hyperparameter(name, kind, "BOOL", rng.random() < 0.5))
        elif value_type == "ENUM":
            choices = tuple(rng.sample(_WORDS, rng.randint(1, 4)))
            out.append(Hyperparameter(name, kind, "ENUM", rng.choice(choices),
                                      choices=choices))
        else:
            out.append(Hyperparameter(name, kind, "STRING", rng.choice(_WORDS)))
    return tuple(out)


def random_annotation(rng: random.Random, index: int) -> PrimitiveAnnotation:
    """One valid synthetic annotation; unknown vocabulary terms included on
    purpose to exercise the open-vocabulary path."""
    library = rng.choice(_LIBRARIES)
    word = rng.choice(_WORDS)
    flags = _SEED_FLAGS + _EXTRA_FLAGS
    family = rng.choice(_ESTIMATOR_FAMILIES + _INTERIOR_FAMILIES)
    verb = rng.choice(_FAMILY_VERBS[family])
    preconditions = frozenset(rng.sample(flags, rng.randint(0, 2)))
    if family in _INTERIOR_FAMILIES:
        effects = frozenset(rng.sample(flags, rng.randint(0, 2)))
    else:
        effects = frozenset()
    invalidates = frozenset()
    if rng.random() < 0.15:
        invalidates = frozenset(rng.sample(flags, 1)) - effects
    modalities = frozenset(
        rng.sample(_MODALITIES, rng.randint(1, 2)) if rng.random() < 0.6 else ())
    return PrimitiveAnnotation(
        id=f"d3m.gen.{library}.{word}_{verb}_{index}",
        name=f"{word.capitalize()} {verb.capitalize()} {index}",
        version=f"{rng.randint(0, 3)}.{rng.randint(0, 9)}.{rng.randint(0, 9)}",
        description=f"Synthetic {verb} built on {library} for {word} workloads.",
        languages=tuple(rng.sample(_LANGUAGES, rng.randint(1, 3))),
        algorithm_types=tuple(rng.sample(_ALGORITHMS, rng.randint(1, 2))),
        primitive_family=family,
        hyperparameters=_random_hyperparameters(rng),
        preconditions=preconditions,
        effects=effects,
        invalidates=invalidates,
        modalities=modalities,
    )


def random_dataset(rng: random.Random, index: int) -> DatasetProfile:
    flags = _SEED_FLAGS + _EXTRA_FLAGS
    return DatasetProfile(
        id=f"d3m.gen.datasets.{rng.choice(_WORDS)}_{index}",
        name=f"{rng.choice(_WORDS).capitalize()} Dataset {index}",
        modality=rng.choice(_MODALITIES),
        holds=frozenset(rng.sample(flags, rng.randint(0, 3))),
        rows=rng.randint(50, 1_000_000),
        columns=rng.randint(1, 500) if rng.random() < 0.8 else None,
    )


def random_problem(rng: random.Random, index: int,
                   dataset: DatasetProfile) -> Problem:
    task = rng.choice(_ESTIMATOR_FAMILIES)
    return Problem(
        id=f"d3m.gen.problems.{rng.choice(_WORDS)}_{index}",
        task_type=task,
        dataset_id=dataset.id,
        metric=_FAMILY_TASKS[task],
    )


def synthetic_corpus(seed: int = 2024, n_primitives: int = 320,
                     n_datasets: int = 55, n_problems: int = 40):
    """Deterministic corpus of valid documents.

    Returns (annotations, datasets, problems); default sizes add up to over
    400 documents, the scale the registry is built for.
    """
    rng = random.Random(seed)
    annotations = [random_annotation(rng, i) for i in range(n_primitives)]
    datasets = [random_dataset(rng, i) for i in range(n_datasets)]
    problems = [random_problem(rng, i, rng.choice(datasets))
                for i in range(n_problems)]
    return annotations, datasets, problems

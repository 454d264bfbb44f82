"""Registry, faceted search, pipeline planning and container-spec generation
for ML primitive metadata."""

from .catalog import Catalog, CatalogView, SearchQuery, SearchResult
from .containerize import (
    BaseImage,
    ContainerConfig,
    ContainerSpec,
    generate_dockerfile,
    generate_pod_manifest,
    select_base_image,
)
from .errors import PrimcatError, SchemaViolationError
from .planner import (
    Pipeline,
    PipelineState,
    PipelineStep,
    applicable,
    apply,
    plan,
    plan_outcome,
    task_family_map,
    validate_pipeline,
)
from .schema import (
    DatasetProfile,
    Hyperparameter,
    PrimitiveAnnotation,
    Problem,
    canonical_serialize,
    check_binding,
    parse_annotation,
)

__version__ = "0.1.0"

__all__ = [
    "BaseImage",
    "Catalog",
    "CatalogView",
    "ContainerConfig",
    "ContainerSpec",
    "DatasetProfile",
    "Hyperparameter",
    "Pipeline",
    "PipelineState",
    "PipelineStep",
    "PrimcatError",
    "PrimitiveAnnotation",
    "Problem",
    "SchemaViolationError",
    "SearchQuery",
    "SearchResult",
    "applicable",
    "apply",
    "canonical_serialize",
    "check_binding",
    "generate_dockerfile",
    "generate_pod_manifest",
    "parse_annotation",
    "plan",
    "plan_outcome",
    "select_base_image",
    "task_family_map",
    "validate_pipeline",
]

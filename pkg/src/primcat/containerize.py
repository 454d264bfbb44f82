"""Deterministic execution artifacts for a validated pipeline.

Generates a Dockerfile from a fixed template and a minimal Kubernetes pod
manifest wiring the shared data volume. Both generators are pure functions
of the pipeline, the catalog view and the configured tags: same inputs,
identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import CatalogView
from .errors import InvalidImageRefError, NotFoundError, UnknownPrimitiveError
from .planner import Pipeline

NLP_BASE = "NLP_BASE"
IMAGE_BASE = "IMAGE_BASE"
FULL_BASE = "FULL_BASE"

_NLP_MODALITIES = frozenset({"TEXT"})
_IMAGE_MODALITIES = frozenset({"IMAGE", "VIDEO"})


@dataclass(frozen=True)
class BaseImage:
    kind: str
    tag: str


@dataclass(frozen=True)
class ContainerConfig:
    """Configured base-image tags and the shared data mount point."""

    nlp_tag: str = "d3m/base-nlp:1"
    vision_tag: str = "d3m/base-vision:1"
    full_tag: str = "d3m/base-full:1"
    data_mount: str = "/d3m/data"

    def __post_init__(self):
        for tag in (self.nlp_tag, self.vision_tag, self.full_tag):
            if not tag or any(c.isspace() for c in tag):
                raise ValueError(f"base image tag must be non-empty without whitespace: {tag!r}")
        if not self.data_mount.startswith("/"):
            raise ValueError(f"data_mount must be an absolute path: {self.data_mount!r}")


DEFAULT_CONTAINER_CONFIG = ContainerConfig()


@dataclass(frozen=True)
class ContainerSpec:
    pipeline_id: str
    base: BaseImage
    install_lines: tuple[tuple[str, str], ...]  # (id, version) in step order
    data_mount: str


def _resolve_steps(pipeline: Pipeline, view: CatalogView):
    annotations = []
    for index, step in enumerate(pipeline.steps):
        try:
            annotations.append(
                view.resolve_primitive(step.primitive_id, step.primitive_version))
        except NotFoundError as exc:
            raise UnknownPrimitiveError(
                f"step {index}: {exc.detail}", step_index=index) from exc
    return annotations


def select_base_image(pipeline: Pipeline, view: CatalogView,
                      config: ContainerConfig = DEFAULT_CONTAINER_CONFIG) -> BaseImage:
    """Pick the narrowest base covering the union of step modalities.

    Modality-agnostic steps contribute nothing; an empty union falls through
    to the full base.
    """
    union: frozenset[str] = frozenset()
    for annotation in _resolve_steps(pipeline, view):
        union |= annotation.modalities
    if union and union <= _NLP_MODALITIES:
        return BaseImage(NLP_BASE, config.nlp_tag)
    if union and union <= _IMAGE_MODALITIES:
        return BaseImage(IMAGE_BASE, config.vision_tag)
    return BaseImage(FULL_BASE, config.full_tag)


def build_container_spec(pipeline: Pipeline, view: CatalogView,
                         config: ContainerConfig = DEFAULT_CONTAINER_CONFIG) -> ContainerSpec:
    base = select_base_image(pipeline, view, config)
    return ContainerSpec(
        pipeline_id=pipeline.id,
        base=base,
        install_lines=tuple((s.primitive_id, s.primitive_version) for s in pipeline.steps),
        data_mount=config.data_mount,
    )


def generate_dockerfile(pipeline: Pipeline, view: CatalogView,
                        config: ContainerConfig = DEFAULT_CONTAINER_CONFIG) -> str:
    """Bit-exact expansion of the Dockerfile template, one install line per step."""
    spec = build_container_spec(pipeline, view, config)
    lines = [
        f"FROM {spec.base.tag}",
        f'LABEL marvin.pipeline.id="{spec.pipeline_id}"',
        "COPY pipeline.json /d3m/pipeline.json",
    ]
    lines.extend(
        f"RUN primitive-install {pid}=={version}" for pid, version in spec.install_lines
    )
    lines.append(f"VOLUME {spec.data_mount}")
    lines.append('ENTRYPOINT ["primitive-run", "/d3m/pipeline.json"]')
    return "\n".join(lines) + "\n"


def pod_name(pipeline_id: str) -> str:
    """Pipeline id with dots mapped to dashes, truncated to the 63-char limit."""
    return pipeline_id.replace(".", "-")[:63]


def generate_pod_manifest(pipeline: Pipeline, image_ref: str,
                          config: ContainerConfig = DEFAULT_CONTAINER_CONFIG) -> str:
    """Minimal pod document running ``image_ref`` with the shared data volume."""
    if not image_ref or any(c.isspace() for c in image_ref):
        raise InvalidImageRefError(
            f"image reference must be non-empty without whitespace: {image_ref!r}")
    return (
        "apiVersion: v1\n"
        "kind: Pod\n"
        "metadata:\n"
        f"  name: {pod_name(pipeline.id)}\n"
        "spec:\n"
        "  containers:\n"
        "    - name: pipeline\n"
        f"      image: {image_ref}\n"
        "      volumeMounts:\n"
        "        - name: d3m-data\n"
        f"          mountPath: {config.data_mount}\n"
        "  volumes:\n"
        "    - name: d3m-data\n"
        "      persistentVolumeClaim:\n"
        "        claimName: d3m-data\n"
    )

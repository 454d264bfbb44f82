"""Pipeline composition by forward search over condition-flag states.

A primitive is applicable when its preconditions hold and it supports the
data's modality; applying it adds its effects (and removes anything it
invalidates) from the state. Planning is a level-synchronous breadth-first
enumeration of step sequences: interior steps draw only from the
preprocessing families, a sequence completes when a primitive of the
problem's task family becomes applicable, and results come back
shortest-first with lexicographic step-id tie-breaking so the output is a
pure function of its inputs.

Two bounds guarantee termination on any catalog, including cyclic effect
structures: no primitive id may repeat within one sequence and sequence
length never exceeds ``max_depth``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from . import vocab
from .catalog import CatalogView
from .errors import (
    NoPipelineFoundError,
    NotApplicableError,
    NotFoundError,
    QueryError,
    SchemaViolationError,
    UnknownDatasetError,
    UnknownPrimitiveError,
    UnknownTaskError,
)
from .schema import (
    DatasetProfile,
    FieldReader,
    PrimitiveAnnotation,
    Problem,
    Violation,
    _MISSING,
    check_binding,
    load_json_object,
)

# Families permitted as interior (non-final) pipeline steps.
INTERIOR_FAMILIES = frozenset({"DATA_CLEANING", "DATA_TRANSFORMATION", "FEATURE_SELECTION"})

PIPELINE_KEYS = ("id", "dataset_id", "problem_id", "steps")
STEP_KEYS = ("primitive_id", "primitive_version", "bindings")


@dataclass(frozen=True)
class PipelineState:
    """Condition flags currently true of the data; modality never changes."""

    holds: frozenset[str]
    modality: str


@dataclass(frozen=True)
class PipelineStep:
    primitive_id: str
    primitive_version: str
    bindings: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Pipeline:
    id: str
    dataset_id: str
    problem_id: str
    steps: tuple[PipelineStep, ...]


@dataclass(frozen=True)
class PipelineValidation:
    """Outcome of replaying a pipeline against a dataset profile."""

    ok: bool
    step_index: int | None = None
    unmet: frozenset[str] = frozenset()
    reason: str = ""

    def to_doc(self) -> dict:
        doc: dict[str, Any] = {"ok": self.ok}
        if not self.ok:
            doc["step_index"] = self.step_index
            doc["unmet"] = sorted(self.unmet)
            doc["reason"] = self.reason
        return doc


@dataclass(frozen=True)
class PlanOutcome:
    """Planner result plus search telemetry.

    ``blocked_flags`` is the union, over every reached state, of estimator
    preconditions that state failed to satisfy — the diagnostic reported
    when no pipeline exists.
    """

    pipelines: tuple[Pipeline, ...]
    visited_states: int
    blocked_flags: frozenset[str]


def applicable(primitive: PrimitiveAnnotation, state: PipelineState) -> bool:
    """True iff preconditions hold and the primitive supports the modality.

    An empty ``modalities`` set means modality-agnostic.
    """
    if not primitive.preconditions <= state.holds:
        return False
    return not primitive.modalities or state.modality in primitive.modalities


def apply(primitive: PrimitiveAnnotation, state: PipelineState) -> PipelineState:
    """State after the primitive runs: effects added, invalidated flags removed."""
    if not applicable(primitive, state):
        missing = sorted(primitive.preconditions - state.holds)
        raise NotApplicableError(
            f"{primitive.id} not applicable: unmet {missing or 'modality'}")
    return PipelineState(
        holds=(state.holds - primitive.invalidates) | primitive.effects,
        modality=state.modality,
    )


def task_family_map(task_type: str) -> str:
    """Task types map onto the same-named primitive families."""
    if task_type not in vocab.TASK_TYPES:
        raise UnknownTaskError(f"unknown task type {task_type!r}")
    return task_type


def plan_outcome(profile: DatasetProfile, problem: Problem, view: CatalogView,
                 max_depth: int = 5, k: int = 1) -> PlanOutcome:
    """Enumerate up to ``k`` shortest pipelines; never raises on empty results."""
    if max_depth < 1 or k < 1:
        raise QueryError("max_depth and k must be at least 1")
    if problem.dataset_id != profile.id:
        raise UnknownDatasetError(
            f"problem {problem.id!r} refers to dataset {problem.dataset_id!r}, "
            f"not {profile.id!r}")
    goal_family = task_family_map(problem.task_type)

    estimators = [p for p in view.primitives if p.primitive_family == goal_family]
    interiors = [p for p in view.primitives if p.primitive_family in INTERIOR_FAMILIES]

    start = PipelineState(holds=frozenset(profile.holds), modality=profile.modality)
    visited: set[frozenset[str]] = {start.holds}
    blocked: set[str] = set()
    complete: list[tuple[PrimitiveAnnotation, ...]] = []
    frontier: list[tuple[tuple[PrimitiveAnnotation, ...], PipelineState]] = [((), start)]

    for depth in range(max_depth):
        found_here: list[tuple[PrimitiveAnnotation, ...]] = []
        next_frontier: list[tuple[tuple[PrimitiveAnnotation, ...], PipelineState]] = []
        for sequence, state in frontier:
            used = {p.id for p in sequence}
            for estimator in estimators:
                if estimator.id in used:
                    continue
                if applicable(estimator, state):
                    found_here.append(sequence + (estimator,))
                else:
                    blocked |= estimator.preconditions - state.holds
            # Interior extensions need headroom for a final estimator step.
            if depth < max_depth - 1:
                for primitive in interiors:
                    if primitive.id in used or not applicable(primitive, state):
                        continue
                    nxt = apply(primitive, state)
                    visited.add(nxt.holds)
                    next_frontier.append((sequence + (primitive,), nxt))
        found_here.sort(key=lambda seq: tuple(p.id for p in seq))
        complete.extend(found_here)
        if len(complete) >= k:
            break
        frontier = next_frontier
        if not frontier:
            break

    pipelines = tuple(
        Pipeline(
            id=f"{problem.id}.p{rank}",
            dataset_id=profile.id,
            problem_id=problem.id,
            steps=tuple(PipelineStep(p.id, p.version, {}) for p in sequence),
        )
        for rank, sequence in enumerate(complete[:k], start=1)
    )
    return PlanOutcome(pipelines=pipelines, visited_states=len(visited),
                       blocked_flags=frozenset(blocked))


def plan(profile: DatasetProfile, problem: Problem, view: CatalogView,
         max_depth: int = 5, k: int = 1) -> tuple[Pipeline, ...]:
    """Up to ``k`` shortest valid pipelines, or NO_PIPELINE_FOUND with the
    unmet-flag diagnostic."""
    outcome = plan_outcome(profile, problem, view, max_depth=max_depth, k=k)
    if not outcome.pipelines:
        raise NoPipelineFoundError(outcome.blocked_flags)
    return outcome.pipelines


def validate_pipeline(pipeline: Pipeline, profile: DatasetProfile, view: CatalogView,
                      problem: Problem | None = None) -> PipelineValidation:
    """Replay the pipeline from the profile's initial state.

    Checks, in order per step: the primitive resolves (UNKNOWN_PRIMITIVE is
    raised, not returned), preconditions and modality hold, and every binding
    passes ``check_binding``. Afterwards the final step's family must match
    the problem's task; when no problem is supplied and the id does not
    resolve through the view, that last check is skipped.
    """
    if not pipeline.steps:
        return PipelineValidation(ok=False, step_index=None,
                                  reason="pipeline has no steps")
    state = PipelineState(holds=frozenset(profile.holds), modality=profile.modality)
    annotation = None
    for index, step in enumerate(pipeline.steps):
        try:
            annotation = view.resolve_primitive(step.primitive_id, step.primitive_version)
        except NotFoundError as exc:
            raise UnknownPrimitiveError(
                f"step {index}: {exc.detail}", step_index=index) from exc
        if not applicable(annotation, state):
            unmet = annotation.preconditions - state.holds
            reason = ("preconditions unmet" if unmet
                      else f"modality {state.modality} not supported")
            return PipelineValidation(ok=False, step_index=index,
                                      unmet=frozenset(unmet), reason=reason)
        hp_by_name = {hp.name: hp for hp in annotation.hyperparameters}
        for name in sorted(step.bindings):
            hp = hp_by_name.get(name)
            if hp is None:
                return PipelineValidation(
                    ok=False, step_index=index,
                    reason=f"unknown hyperparameter {name!r}")
            violation = check_binding(hp, step.bindings[name])
            if violation is not None:
                return PipelineValidation(
                    ok=False, step_index=index,
                    reason=f"{violation.code} for {name}: {violation.reason}")
        state = apply(annotation, state)

    if problem is None:
        problem = view.problems.get(pipeline.problem_id)
    if problem is not None:
        expected = task_family_map(problem.task_type)
        if annotation.primitive_family != expected:
            return PipelineValidation(
                ok=False, step_index=len(pipeline.steps) - 1,
                reason=f"final step family {annotation.primitive_family} "
                       f"does not match task family {expected}")
    return PipelineValidation(ok=True)


# -- pipeline documents ---------------------------------------------------

def _step_from_dict(raw: Any, prefix: str, violations: list[Violation]) -> PipelineStep | None:
    if not isinstance(raw, dict):
        violations.append(Violation("BAD_VALUE", prefix.rstrip("."), "expected an object"))
        return None
    f = FieldReader(raw, STEP_KEYS, prefix)
    primitive_id = f.string("primitive_id", pattern=vocab.DOC_ID_RE,
                            what="not a valid dotted lowercase id")
    version = f.string("primitive_version", pattern=vocab.VERSION_RE,
                       what="must be a dotted numeric string X.Y.Z")
    bindings: dict[str, Any] = {}
    raw_bindings = f.get("bindings")
    if raw_bindings is not _MISSING:
        if not isinstance(raw_bindings, dict):
            f.bad("bindings", "expected an object of hyperparameter values")
        else:
            bindings = dict(raw_bindings)
    violations.extend(f.violations)
    if f.violations:
        return None
    return PipelineStep(primitive_id=primitive_id, primitive_version=version,
                        bindings=bindings)


def pipeline_from_dict(raw: dict) -> tuple[Pipeline | None, list[Violation]]:
    f = FieldReader(raw, PIPELINE_KEYS)
    pipeline_id = f.string("id", pattern=vocab.DOC_ID_RE,
                           what="not a valid dotted lowercase id")
    dataset_id = f.string("dataset_id", pattern=vocab.DOC_ID_RE,
                          what="not a valid dotted lowercase id")
    problem_id = f.string("problem_id", pattern=vocab.DOC_ID_RE,
                          what="not a valid dotted lowercase id")
    steps: tuple[PipelineStep, ...] | None = None
    raw_steps = f.get("steps")
    if raw_steps is not _MISSING:
        if not isinstance(raw_steps, list):
            f.bad("steps", "expected a list of steps")
        elif not raw_steps:
            f.bad("steps", "must not be empty")
        else:
            parsed = [_step_from_dict(s, f"steps[{i}].", f.violations)
                      for i, s in enumerate(raw_steps)]
            if all(s is not None for s in parsed):
                steps = tuple(parsed)
    violations = sorted(f.violations, key=lambda v: (v.path, v.code, v.reason))
    if violations:
        return None, violations
    return Pipeline(id=pipeline_id, dataset_id=dataset_id,
                    problem_id=problem_id, steps=steps), []


def parse_pipeline(text: str) -> Pipeline:
    pipeline, violations = pipeline_from_dict(load_json_object(text))
    if violations:
        raise SchemaViolationError(violations)
    return pipeline


def pipeline_to_dict(pipeline: Pipeline) -> dict:
    return {
        "id": pipeline.id,
        "dataset_id": pipeline.dataset_id,
        "problem_id": pipeline.problem_id,
        "steps": [
            {
                "primitive_id": s.primitive_id,
                "primitive_version": s.primitive_version,
                "bindings": {k: s.bindings[k] for k in sorted(s.bindings)},
            }
            for s in pipeline.steps
        ],
    }


def serialize_pipeline(pipeline: Pipeline) -> str:
    return json.dumps(pipeline_to_dict(pipeline), indent=2, ensure_ascii=False) + "\n"

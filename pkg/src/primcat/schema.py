"""Annotation data model: parsing, validation and canonical serialization.

Documents are JSON key/value trees. Parsing is strict and total: a document
either yields a fully validated object or the complete list of violations —
nothing is ever partially constructed. Serialization is canonical (fixed key
order, sorted sets, two-space indent, trailing newline) so that semantically
equal objects produce byte-identical text and ``parse(serialize(x)) == x``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from . import vocab
from .errors import SchemaViolationError

_MISSING = object()

# Documented canonical key orders. Optional keys are omitted when absent.
ANNOTATION_KEYS = (
    "id",
    "name",
    "version",
    "description",
    "languages",
    "algorithm_types",
    "primitive_family",
    "hyperparameters",
    "preconditions",
    "effects",
    "invalidates",
    "modalities",
)
HYPERPARAMETER_KEYS = ("name", "kind", "value_type", "range", "choices", "default")
DATASET_KEYS = ("id", "name", "modality", "holds", "rows", "columns")
PROBLEM_KEYS = ("id", "task_type", "dataset_id", "metric")


@dataclass(frozen=True)
class Violation:
    """One validation finding; ``path`` points at the offending field."""

    code: str
    path: str
    reason: str = ""

    def to_doc(self) -> dict:
        return {"code": self.code, "path": self.path, "reason": self.reason}


@dataclass(frozen=True)
class Hyperparameter:
    name: str
    kind: str
    value_type: str
    default: Any
    range: tuple[Any, Any] | None = None
    choices: tuple[str, ...] | None = None


@dataclass(frozen=True)
class PrimitiveAnnotation:
    id: str
    name: str
    version: str
    description: str
    languages: tuple[str, ...]
    algorithm_types: tuple[str, ...]
    primitive_family: str
    hyperparameters: tuple[Hyperparameter, ...]
    preconditions: frozenset[str]
    effects: frozenset[str]
    invalidates: frozenset[str] = frozenset()
    modalities: frozenset[str] = frozenset()


@dataclass(frozen=True)
class DatasetProfile:
    id: str
    name: str
    modality: str
    holds: frozenset[str]
    rows: int | None = None
    columns: int | None = None


@dataclass(frozen=True)
class Problem:
    id: str
    task_type: str
    dataset_id: str
    metric: str


class FieldReader:
    """Pulls typed fields off a raw JSON object, accumulating violations.

    Never raises on bad data; callers check ``violations`` when done. Unknown
    keys are rejected so typos do not silently vanish.
    """

    def __init__(self, raw: dict, allowed: tuple[str, ...], prefix: str = ""):
        self.raw = raw
        self.prefix = prefix
        self.violations: list[Violation] = []
        for key in raw:
            if key not in allowed:
                self.bad(key, "unknown field")

    def _path(self, key: str) -> str:
        return f"{self.prefix}{key}"

    def bad(self, key: str, reason: str) -> None:
        self.violations.append(Violation("BAD_VALUE", self._path(key), reason))

    def missing(self, key: str) -> None:
        self.violations.append(Violation("MISSING_FIELD", self._path(key)))

    def get(self, key: str) -> Any:
        """Required field; records MISSING_FIELD and returns the sentinel."""
        if key not in self.raw:
            self.missing(key)
            return _MISSING
        return self.raw[key]

    def string(self, key: str, pattern=None, what: str = "", allow_empty: bool = True) -> str | None:
        value = self.get(key)
        if value is _MISSING:
            return None
        return self._check_string(key, value, pattern, what, allow_empty)

    def optional_string(self, key: str, pattern=None, what: str = "") -> str | None:
        if key not in self.raw:
            return None
        return self._check_string(key, self.raw[key], pattern, what, True)

    def _check_string(self, key, value, pattern, what, allow_empty) -> str | None:
        if not isinstance(value, str):
            self.bad(key, "expected a string")
            return None
        if not allow_empty and not value:
            self.bad(key, "must not be empty")
            return None
        if pattern is not None and not pattern.match(value):
            self.bad(key, what or f"does not match {pattern.pattern!r}")
            return None
        return value

    def string_list(self, key: str, pattern=None, what: str = "", required: bool = True,
                    non_empty: bool = False) -> tuple[str, ...] | None:
        """A JSON array of strings, each optionally matched against ``pattern``."""
        if key not in self.raw:
            if required:
                self.missing(key)
                return None
            return ()
        value = self.raw[key]
        if not isinstance(value, list):
            self.bad(key, "expected a list of strings")
            return None
        ok = True
        out = []
        for i, item in enumerate(value):
            if not isinstance(item, str) or not item:
                self.bad(f"{key}[{i}]", "expected a non-empty string")
                ok = False
            elif pattern is not None and not pattern.match(item):
                self.bad(f"{key}[{i}]", what or f"does not match {pattern.pattern!r}")
                ok = False
            else:
                out.append(item)
        if non_empty and isinstance(value, list) and not value:
            self.bad(key, "must not be empty")
            return None
        return tuple(out) if ok else None

    def flag_set(self, key: str, required: bool = True) -> frozenset[str] | None:
        items = self.string_list(
            key, pattern=vocab.FLAG_RE, what="not a valid condition-flag name", required=required
        )
        return None if items is None else frozenset(items)

    def optional_count(self, key: str) -> int | None:
        if key not in self.raw:
            return None
        value = self.raw[key]
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            self.bad(key, "expected a non-negative integer")
            return None
        return value


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _hyperparameter_from_dict(raw: Any, prefix: str,
                              violations: list[Violation]) -> Hyperparameter | None:
    if not isinstance(raw, dict):
        violations.append(Violation("BAD_VALUE", prefix.rstrip("."), "expected an object"))
        return None
    f = FieldReader(raw, HYPERPARAMETER_KEYS, prefix)
    name = f.string("name", allow_empty=False)
    kind = f.string("kind")
    if kind is not None and kind not in vocab.HYPERPARAMETER_KINDS:
        f.bad("kind", f"must be one of {sorted(vocab.HYPERPARAMETER_KINDS)}")
        kind = None
    value_type = f.string("value_type")
    if value_type is not None and value_type not in vocab.VALUE_TYPES:
        f.bad("value_type", f"must be one of {sorted(vocab.VALUE_TYPES)}")
        value_type = None

    rng = None
    if "range" in raw:
        if value_type is not None and value_type not in ("INT", "FLOAT"):
            f.bad("range", "only INT and FLOAT hyperparameters may declare a range")
        value = raw["range"]
        if (not isinstance(value, list) or len(value) != 2
                or not all(_is_number(v) for v in value)):
            f.bad("range", "expected [lower, upper] with two numbers")
        elif value_type == "INT" and not all(_is_int(v) for v in value):
            f.bad("range", "INT range bounds must be integers")
        else:
            lower, upper = value
            if value_type == "FLOAT":
                lower, upper = float(lower), float(upper)
            if lower > upper:
                f.bad("range", "lower bound exceeds upper bound")
            else:
                rng = (lower, upper)

    choices = None
    if "choices" in raw:
        if value_type is not None and value_type != "ENUM":
            f.bad("choices", "only ENUM hyperparameters may declare choices")
        value = raw["choices"]
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            f.bad("choices", "expected a list of strings")
        elif not value:
            f.bad("choices", "must not be empty")
        elif len(set(value)) != len(value):
            f.bad("choices", "choices must be unique")
        else:
            choices = tuple(value)
    elif value_type == "ENUM":
        f.missing("choices")

    default = f.get("default")
    if default is not _MISSING and value_type is not None:
        default = _check_value(value_type, rng, choices, default, f, "default")
    else:
        default = None if default is _MISSING else default

    violations.extend(f.violations)
    if f.violations or name is None or kind is None or value_type is None:
        return None
    return Hyperparameter(name=name, kind=kind, value_type=value_type,
                          default=default, range=rng, choices=choices)


def _check_value(value_type: str, rng, choices, value: Any, f: FieldReader,
                 key: str) -> Any:
    """Validate ``value`` against a hyperparameter's type/range/choices,
    recording violations on ``f``. Returns the (possibly coerced) value."""
    if value_type == "INT":
        if not _is_int(value):
            f.bad(key, "expected an integer")
            return None
    elif value_type == "FLOAT":
        if not _is_number(value):
            f.bad(key, "expected a number")
            return None
        value = float(value)
    elif value_type == "BOOL":
        if not isinstance(value, bool):
            f.bad(key, "expected a boolean")
            return None
    elif value_type in ("ENUM", "STRING"):
        if not isinstance(value, str):
            f.bad(key, "expected a string")
            return None
    if rng is not None and value_type in ("INT", "FLOAT"):
        lower, upper = rng
        if not (lower <= value <= upper):
            f.bad(key, f"outside range [{lower}, {upper}]")
            return None
    if choices is not None and value_type == "ENUM":
        if value not in choices:
            f.bad(key, "not one of the declared choices")
            return None
    return value


def annotation_from_dict(raw: dict) -> tuple[PrimitiveAnnotation | None, list[Violation]]:
    """Validate a raw JSON object; returns (annotation, []) or (None, violations)."""
    f = FieldReader(raw, ANNOTATION_KEYS)
    doc_id = f.string("id", pattern=vocab.DOC_ID_RE, what="not a valid dotted lowercase id")
    name = f.string("name", allow_empty=False)
    version = f.string("version", pattern=vocab.VERSION_RE,
                       what="must be a dotted numeric string X.Y.Z")
    description = f.string("description")
    languages = f.string_list("languages")
    algorithm_types = f.string_list(
        "algorithm_types", pattern=vocab.FLAG_RE, what="not a valid algorithm-type name",
        non_empty=True)
    family = f.string("primitive_family", pattern=vocab.FLAG_RE,
                      what="not a valid primitive-family name")

    hyperparameters: tuple[Hyperparameter, ...] | None = ()
    raw_hps = f.get("hyperparameters")
    if raw_hps is _MISSING:
        hyperparameters = None
    elif not isinstance(raw_hps, list):
        f.bad("hyperparameters", "expected a list")
        hyperparameters = None
    else:
        parsed = [
            _hyperparameter_from_dict(h, f"hyperparameters[{i}].", f.violations)
            for i, h in enumerate(raw_hps)
        ]
        if any(h is None for h in parsed):
            hyperparameters = None
        else:
            hyperparameters = tuple(parsed)
            names = [h.name for h in hyperparameters]
            if len(set(names)) != len(names):
                dupes = sorted({n for n in names if names.count(n) > 1})
                f.bad("hyperparameters", f"duplicate hyperparameter names: {dupes}")
                hyperparameters = None

    preconditions = f.flag_set("preconditions")
    effects = f.flag_set("effects")
    invalidates = f.flag_set("invalidates", required=False)
    modalities: frozenset[str] | None = frozenset()
    if "modalities" in raw:
        items = f.string_list("modalities")
        if items is None:
            modalities = None
        else:
            bad = [m for m in items if m not in vocab.MODALITIES]
            if bad:
                f.bad("modalities", f"unknown modalities {sorted(set(bad))}; "
                                    f"allowed: {sorted(vocab.MODALITIES)}")
                modalities = None
            else:
                modalities = frozenset(items)

    if effects is not None and invalidates is not None:
        overlap = effects & invalidates
        if overlap:
            f.violations.append(Violation(
                "CONTRADICTORY_EFFECTS", "effects",
                f"effects and invalidates overlap: {sorted(overlap)}"))

    violations = _sorted_violations(f.violations)
    if violations:
        return None, violations
    return PrimitiveAnnotation(
        id=doc_id, name=name, version=version, description=description,
        languages=languages, algorithm_types=algorithm_types,
        primitive_family=family, hyperparameters=hyperparameters,
        preconditions=preconditions, effects=effects,
        invalidates=invalidates, modalities=modalities,
    ), []


def dataset_from_dict(raw: dict) -> tuple[DatasetProfile | None, list[Violation]]:
    f = FieldReader(raw, DATASET_KEYS)
    doc_id = f.string("id", pattern=vocab.DOC_ID_RE, what="not a valid dotted lowercase id")
    name = f.string("name", allow_empty=False)
    modality = f.string("modality")
    if modality is not None and modality not in vocab.MODALITIES:
        f.bad("modality", f"must be one of {sorted(vocab.MODALITIES)}")
        modality = None
    holds = f.flag_set("holds")
    rows = f.optional_count("rows")
    columns = f.optional_count("columns")
    violations = _sorted_violations(f.violations)
    if violations:
        return None, violations
    return DatasetProfile(id=doc_id, name=name, modality=modality,
                          holds=holds, rows=rows, columns=columns), []


def problem_from_dict(raw: dict) -> tuple[Problem | None, list[Violation]]:
    f = FieldReader(raw, PROBLEM_KEYS)
    doc_id = f.string("id", pattern=vocab.DOC_ID_RE, what="not a valid dotted lowercase id")
    task_type = f.string("task_type")
    if task_type is not None and task_type not in vocab.TASK_TYPES:
        f.bad("task_type", f"must be one of {sorted(vocab.TASK_TYPES)}")
        task_type = None
    dataset_id = f.string("dataset_id", pattern=vocab.DOC_ID_RE,
                          what="not a valid dotted lowercase id")
    metric = f.string("metric")
    if metric is not None and metric not in vocab.METRICS:
        f.bad("metric", f"must be one of {sorted(vocab.METRICS)}")
        metric = None
    violations = _sorted_violations(f.violations)
    if violations:
        return None, violations
    return Problem(id=doc_id, task_type=task_type,
                   dataset_id=dataset_id, metric=metric), []


def _sorted_violations(violations: list[Violation]) -> list[Violation]:
    return sorted(violations, key=lambda v: (v.path, v.code, v.reason))


def load_json_object(text: str) -> dict:
    """Parse ``text`` as a JSON object, raising the MALFORMED_DOCUMENT violation."""
    try:
        raw = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaViolationError(
            [Violation("MALFORMED_DOCUMENT", "", str(exc))]) from exc
    if not isinstance(raw, dict):
        raise SchemaViolationError(
            [Violation("MALFORMED_DOCUMENT", "", "top-level value must be an object")])
    return raw


def parse_annotation(text: str) -> PrimitiveAnnotation:
    """Parse and fully validate an annotation document.

    Raises :class:`SchemaViolationError` carrying *all* violations found.
    """
    ann, violations = annotation_from_dict(load_json_object(text))
    if violations:
        raise SchemaViolationError(violations)
    return ann


def parse_dataset(text: str) -> DatasetProfile:
    profile, violations = dataset_from_dict(load_json_object(text))
    if violations:
        raise SchemaViolationError(violations)
    return profile


def parse_problem(text: str) -> Problem:
    problem, violations = problem_from_dict(load_json_object(text))
    if violations:
        raise SchemaViolationError(violations)
    return problem


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def hyperparameter_to_dict(hp: Hyperparameter) -> dict:
    doc: dict[str, Any] = {"name": hp.name, "kind": hp.kind, "value_type": hp.value_type}
    if hp.range is not None:
        doc["range"] = list(hp.range)
    if hp.choices is not None:
        doc["choices"] = list(hp.choices)
    doc["default"] = hp.default
    return doc


def annotation_to_dict(ann: PrimitiveAnnotation) -> dict:
    return {
        "id": ann.id,
        "name": ann.name,
        "version": ann.version,
        "description": ann.description,
        "languages": list(ann.languages),
        "algorithm_types": list(ann.algorithm_types),
        "primitive_family": ann.primitive_family,
        "hyperparameters": [hyperparameter_to_dict(h) for h in ann.hyperparameters],
        "preconditions": sorted(ann.preconditions),
        "effects": sorted(ann.effects),
        "invalidates": sorted(ann.invalidates),
        "modalities": sorted(ann.modalities),
    }


def dataset_to_dict(profile: DatasetProfile) -> dict:
    doc: dict[str, Any] = {
        "id": profile.id,
        "name": profile.name,
        "modality": profile.modality,
        "holds": sorted(profile.holds),
    }
    if profile.rows is not None:
        doc["rows"] = profile.rows
    if profile.columns is not None:
        doc["columns"] = profile.columns
    return doc


def problem_to_dict(problem: Problem) -> dict:
    return {
        "id": problem.id,
        "task_type": problem.task_type,
        "dataset_id": problem.dataset_id,
        "metric": problem.metric,
    }


def canonical_serialize(ann: PrimitiveAnnotation) -> str:
    """Deterministic text form: fixed key order, sorted sets, stable whitespace."""
    return _dump(annotation_to_dict(ann))


def serialize_dataset(profile: DatasetProfile) -> str:
    return _dump(dataset_to_dict(profile))


def serialize_problem(problem: Problem) -> str:
    return _dump(problem_to_dict(problem))


def check_binding(hp: Hyperparameter, value: Any) -> Violation | None:
    """None when ``value`` is bindable to ``hp``; otherwise the violation.

    Violation codes: TYPE_MISMATCH, OUT_OF_RANGE, NOT_A_CHOICE.
    """
    if hp.value_type == "INT":
        if not _is_int(value):
            return Violation("TYPE_MISMATCH", hp.name, "expected an integer")
    elif hp.value_type == "FLOAT":
        if not _is_number(value):
            return Violation("TYPE_MISMATCH", hp.name, "expected a number")
        value = float(value)
    elif hp.value_type == "BOOL":
        if not isinstance(value, bool):
            return Violation("TYPE_MISMATCH", hp.name, "expected a boolean")
    else:  # ENUM, STRING
        if not isinstance(value, str):
            return Violation("TYPE_MISMATCH", hp.name, "expected a string")
    if hp.range is not None:
        lower, upper = hp.range
        if not (lower <= value <= upper):
            return Violation("OUT_OF_RANGE", hp.name, f"outside range [{lower}, {upper}]")
    if hp.value_type == "ENUM" and value not in hp.choices:
        return Violation("NOT_A_CHOICE", hp.name, "not one of the declared choices")
    return None


def vocabulary_warnings(ann: PrimitiveAnnotation) -> list[str]:
    """Non-fatal findings: names valid under the lexical rules but outside
    the documented seed vocabularies."""
    warnings = []
    if ann.primitive_family not in vocab.SEED_PRIMITIVE_FAMILIES:
        warnings.append(f"primitive_family: {ann.primitive_family} is not a seed value")
    for algo in ann.algorithm_types:
        if algo not in vocab.SEED_ALGORITHM_TYPES:
            warnings.append(f"algorithm_types: {algo} is not a seed value")
    for key, flags in (("preconditions", ann.preconditions),
                       ("effects", ann.effects),
                       ("invalidates", ann.invalidates)):
        for flag in sorted(flags - vocab.SEED_CONDITION_FLAGS):
            warnings.append(f"{key}: {flag} is not a seed condition flag")
    return warnings

"""Document store plus deterministic ranked faceted search.

The filesystem is the source of truth: one canonically serialized JSON file
per document under ``<root>/<kind>/``, named ``<id>-<version>`` for
primitives and ``<id>`` for the unversioned kinds. The in-memory inverted
index is rebuilt from the parsed documents at startup and after every
ingest; queries run against an immutable snapshot, so a reader never
observes a half-applied write.

Only the numerically latest version of each primitive is searchable;
historical versions remain retrievable through :meth:`Catalog.get`.
"""

from __future__ import annotations

import os
import re
import tempfile
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Collection, Iterable, Mapping, Sequence

from . import schema, vocab
from .errors import (
    NotFoundError,
    QueryError,
    StoreCorruptError,
    UnknownFieldError,
    VersionNotFoundError,
)
from .schema import DatasetProfile, PrimitiveAnnotation, Problem

KINDS = ("primitive", "dataset", "problem")

# Facetable fields per document kind. The primitive set is the contract;
# dataset/problem facets mirror their closed descriptor fields.
FACET_FIELDS: dict[str, tuple[str, ...]] = {
    "primitive": ("algorithm_types", "effects", "languages", "modalities",
                  "preconditions", "primitive_family"),
    "dataset": ("holds", "modality"),
    "problem": ("metric", "task_type"),
}

MAX_PAGE_SIZE = 500

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# Scoring weights for distinct query terms matching each text field.
_FIELD_WEIGHTS = (("name", 3), ("id", 2), ("description", 1))


def tokenize(text: str) -> tuple[str, ...]:
    """Lowercase and split on any non-alphanumeric run."""
    return tuple(_TOKEN_RE.findall(text.lower()))


@dataclass(frozen=True)
class SearchQuery:
    doc_kind: str = "primitive"
    text: Sequence[str] = ()
    filters: Mapping[str, Collection[str]] = field(default_factory=dict)
    page: int = 1
    page_size: int = 20


@dataclass(frozen=True)
class SearchHit:
    doc_id: str
    score: int


@dataclass(frozen=True)
class SearchResult:
    total: int
    hits: tuple[SearchHit, ...]
    facets: dict[str, dict[str, int]]

    def to_doc(self) -> dict:
        return {
            "total": self.total,
            "hits": [{"id": h.doc_id, "score": h.score} for h in self.hits],
            "facets": self.facets,
        }


@dataclass(frozen=True)
class IngestReceipt:
    kind: str
    doc_id: str
    version: str | None
    replaced: bool
    warnings: tuple[str, ...] = ()

    def to_doc(self) -> dict:
        doc: dict[str, Any] = {"kind": self.kind, "id": self.doc_id}
        if self.version is not None:
            doc["version"] = self.version
        doc["replaced"] = self.replaced
        doc["warnings"] = list(self.warnings)
        return doc


def parse_document(text: str, kind: str):
    if kind == "primitive":
        return schema.parse_annotation(text)
    if kind == "dataset":
        return schema.parse_dataset(text)
    if kind == "problem":
        return schema.parse_problem(text)
    raise QueryError(f"unknown document kind {kind!r}")


def serialize_document(doc) -> str:
    if isinstance(doc, PrimitiveAnnotation):
        return schema.canonical_serialize(doc)
    if isinstance(doc, DatasetProfile):
        return schema.serialize_dataset(doc)
    if isinstance(doc, Problem):
        return schema.serialize_problem(doc)
    raise TypeError(f"not a storable document: {type(doc).__name__}")


def _text_fields(doc) -> dict[str, str]:
    if isinstance(doc, PrimitiveAnnotation):
        return {"name": doc.name, "id": doc.id, "description": doc.description}
    if isinstance(doc, DatasetProfile):
        return {"name": doc.name, "id": doc.id, "description": ""}
    return {"name": "", "id": doc.id, "description": ""}


def _facet_values(doc, facet: str) -> frozenset[str]:
    value = getattr(doc, facet)
    if isinstance(value, str):
        return frozenset({value})
    return frozenset(value)


@dataclass(frozen=True)
class CatalogView:
    """Immutable snapshot of catalog contents, the planner's working set.

    ``primitives`` holds the latest version of every primitive, sorted by id.
    """

    primitives: tuple[PrimitiveAnnotation, ...]
    versions: Mapping[str, Mapping[str, PrimitiveAnnotation]]
    datasets: Mapping[str, DatasetProfile]
    problems: Mapping[str, Problem]

    @classmethod
    def build(cls, annotations: Iterable[PrimitiveAnnotation] = (),
              datasets: Iterable[DatasetProfile] = (),
              problems: Iterable[Problem] = ()) -> "CatalogView":
        versions: dict[str, dict[str, PrimitiveAnnotation]] = {}
        for ann in annotations:
            versions.setdefault(ann.id, {})[ann.version] = ann
        latest = tuple(
            versions[pid][max(versions[pid], key=vocab.version_key)]
            for pid in sorted(versions)
        )
        return cls(
            primitives=latest,
            versions=versions,
            datasets={d.id: d for d in datasets},
            problems={p.id: p for p in problems},
        )

    def latest_primitive(self, primitive_id: str) -> PrimitiveAnnotation:
        by_version = self.versions.get(primitive_id)
        if not by_version:
            raise NotFoundError(f"unknown primitive {primitive_id!r}")
        return by_version[max(by_version, key=vocab.version_key)]

    def resolve_primitive(self, primitive_id: str,
                          version: str | None = None) -> PrimitiveAnnotation:
        if version is None:
            return self.latest_primitive(primitive_id)
        by_version = self.versions.get(primitive_id)
        if not by_version:
            raise NotFoundError(f"unknown primitive {primitive_id!r}")
        if version not in by_version:
            raise VersionNotFoundError(
                f"primitive {primitive_id!r} has no version {version!r}")
        return by_version[version]

    def get_dataset(self, dataset_id: str) -> DatasetProfile:
        try:
            return self.datasets[dataset_id]
        except KeyError:
            raise NotFoundError(f"unknown dataset {dataset_id!r}") from None

    def get_problem(self, problem_id: str) -> Problem:
        try:
            return self.problems[problem_id]
        except KeyError:
            raise NotFoundError(f"unknown problem {problem_id!r}") from None


@dataclass(frozen=True)
class _KindIndex:
    """Inverted index over the latest documents of one kind."""

    ids: tuple[str, ...]  # sorted
    docs: Mapping[str, Any]
    text: Mapping[str, Mapping[str, frozenset[str]]]  # field -> token -> doc ids
    facets: Mapping[str, Mapping[str, frozenset[str]]]  # facet -> value -> doc ids


def _build_index(docs: Mapping[str, Any], kind: str) -> _KindIndex:
    text: dict[str, dict[str, set[str]]] = {f: {} for f, _ in _FIELD_WEIGHTS}
    facets: dict[str, dict[str, set[str]]] = {f: {} for f in FACET_FIELDS[kind]}
    for doc_id in docs:
        doc = docs[doc_id]
        for fname, value in _text_fields(doc).items():
            postings = text[fname]
            for token in set(tokenize(value)):
                postings.setdefault(token, set()).add(doc_id)
        for facet in FACET_FIELDS[kind]:
            postings = facets[facet]
            for value in _facet_values(doc, facet):
                postings.setdefault(value, set()).add(doc_id)
    freeze = lambda m: {k: frozenset(v) for k, v in m.items()}
    return _KindIndex(
        ids=tuple(sorted(docs)),
        docs=dict(docs),
        text={f: freeze(m) for f, m in text.items()},
        facets={f: freeze(m) for f, m in facets.items()},
    )


@dataclass(frozen=True)
class _Snapshot:
    view: CatalogView
    indexes: Mapping[str, _KindIndex]


def _normalize_terms(text: Sequence[str]) -> tuple[str, ...]:
    terms: set[str] = set()
    for raw in text:
        terms.update(tokenize(raw))
    return tuple(sorted(terms))


class Catalog:
    """Stores annotation/dataset/problem documents and serves search.

    Concurrency: many readers or one writer. ``ingest`` serializes writers
    behind a lock and publishes a fresh immutable snapshot; readers pick up
    whichever snapshot is current when they start.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._lock = threading.Lock()
        self._primitives: dict[str, dict[str, PrimitiveAnnotation]] = {}
        self._datasets: dict[str, DatasetProfile] = {}
        self._problems: dict[str, Problem] = {}
        self._load()
        self._snapshot = self._build_snapshot()

    # -- store ------------------------------------------------------------

    def _load(self) -> None:
        if self.root.exists() and not self.root.is_dir():
            raise StoreCorruptError(self.root, f"store root is not a directory: {self.root}")
        self.root.mkdir(parents=True, exist_ok=True)
        for kind in KINDS:
            kind_dir = self.root / kind
            if not kind_dir.is_dir():
                continue
            for path in sorted(kind_dir.iterdir()):
                if path.name.startswith(".") or not path.is_file():
                    continue
                try:
                    doc = parse_document(path.read_text(encoding="utf-8"), kind)
                except Exception as exc:
                    raise StoreCorruptError(path, f"corrupt store file {path}: {exc}") from exc
                self._put_in_memory(kind, doc)

    def _put_in_memory(self, kind: str, doc) -> bool:
        if kind == "primitive":
            by_version = self._primitives.setdefault(doc.id, {})
            replaced = doc.version in by_version
            by_version[doc.version] = doc
            return replaced
        target = self._datasets if kind == "dataset" else self._problems
        replaced = doc.id in target
        target[doc.id] = doc
        return replaced

    def _filename(self, kind: str, doc) -> str:
        if kind == "primitive":
            return f"{doc.id}-{doc.version}"
        return doc.id

    def _write_file(self, kind: str, doc) -> None:
        kind_dir = self.root / kind
        kind_dir.mkdir(parents=True, exist_ok=True)
        text = serialize_document(doc)
        fd, tmp = tempfile.mkstemp(dir=kind_dir, prefix=".ingest-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
            os.replace(tmp, kind_dir / self._filename(kind, doc))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # -- snapshot ---------------------------------------------------------

    def _build_snapshot(self) -> _Snapshot:
        annotations = [ann for by_version in self._primitives.values()
                       for ann in by_version.values()]
        view = CatalogView.build(annotations, self._datasets.values(),
                                 self._problems.values())
        indexes = {
            "primitive": _build_index({a.id: a for a in view.primitives}, "primitive"),
            "dataset": _build_index(dict(view.datasets), "dataset"),
            "problem": _build_index(dict(view.problems), "problem"),
        }
        return _Snapshot(view=view, indexes=indexes)

    def view(self) -> CatalogView:
        return self._snapshot.view

    # -- operations -------------------------------------------------------

    def ingest(self, text: str, kind: str) -> IngestReceipt:
        """Validate, persist and index one document.

        Atomic: on any validation error the store and index are unchanged.
        Re-ingesting an existing (id, version) replaces the stored document.
        """
        if kind not in KINDS:
            raise QueryError(f"unknown document kind {kind!r}")
        doc = parse_document(text, kind)
        warnings: tuple[str, ...] = ()
        if kind == "primitive":
            warnings = tuple(schema.vocabulary_warnings(doc))
        with self._lock:
            self._write_file(kind, doc)
            replaced = self._put_in_memory(kind, doc)
            self._snapshot = self._build_snapshot()
        return IngestReceipt(
            kind=kind, doc_id=doc.id,
            version=doc.version if kind == "primitive" else None,
            replaced=replaced, warnings=warnings)

    def get(self, kind: str, doc_id: str, version: str | None = None):
        """The stored document; latest version when ``version`` is omitted."""
        if kind not in KINDS:
            raise QueryError(f"unknown document kind {kind!r}")
        view = self._snapshot.view
        if kind == "primitive":
            return view.resolve_primitive(doc_id, version)
        if version is not None:
            raise VersionNotFoundError(f"{kind} documents are unversioned")
        if kind == "dataset":
            return view.get_dataset(doc_id)
        return view.get_problem(doc_id)

    def search(self, query: SearchQuery) -> SearchResult:
        """Deterministic conjunctive-filter search with facet counts.

        A document matches iff it carries *all* required values of every
        filter and, when text terms are present, at least one term matches
        a name/id/description token. Hits are ordered by (score desc,
        id asc); facet counts cover the full filtered result set.
        """
        snapshot = self._snapshot
        if query.doc_kind not in KINDS:
            raise QueryError(f"unknown document kind {query.doc_kind!r}")
        if query.page < 1 or query.page_size < 1:
            raise QueryError("page and page_size must be positive")
        if query.page_size > MAX_PAGE_SIZE:
            raise QueryError(f"page_size exceeds the maximum of {MAX_PAGE_SIZE}")
        index = snapshot.indexes[query.doc_kind]
        facet_fields = FACET_FIELDS[query.doc_kind]

        candidates = set(index.ids)
        for fname in sorted(query.filters):
            if fname not in facet_fields:
                raise UnknownFieldError(
                    f"{fname!r} is not a facetable field of {query.doc_kind!r}")
            postings = index.facets.get(fname, {})
            for value in sorted(query.filters[fname]):
                candidates &= postings.get(value, frozenset())

        terms = _normalize_terms(query.text)
        scores: dict[str, int] = {}
        if terms:
            matched: set[str] = set()
            for doc_id in candidates:
                score = 0
                for fname, weight in _FIELD_WEIGHTS:
                    postings = index.text[fname]
                    score += weight * sum(
                        1 for t in terms if doc_id in postings.get(t, frozenset()))
                if score > 0:
                    matched.add(doc_id)
                    scores[doc_id] = score
            candidates = matched

        matching = sorted(candidates)
        hits = sorted(matching, key=lambda d: (-scores.get(d, 0), d))
        start = (query.page - 1) * query.page_size
        page = hits[start:start + query.page_size]

        facets: dict[str, dict[str, int]] = {}
        for facet in facet_fields:
            counts = {}
            for value in sorted(index.facets.get(facet, {})):
                n = len(index.facets[facet][value] & candidates)
                if n:
                    counts[value] = n
            facets[facet] = counts

        return SearchResult(
            total=len(matching),
            hits=tuple(SearchHit(d, scores.get(d, 0)) for d in page),
            facets=facets,
        )

    def document_count(self, kind: str | None = None) -> int:
        view = self._snapshot.view
        counts = {
            "primitive": len(view.primitives),
            "dataset": len(view.datasets),
            "problem": len(view.problems),
        }
        if kind is not None:
            return counts[kind]
        return sum(counts.values())

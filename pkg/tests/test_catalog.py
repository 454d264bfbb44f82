import dataclasses
import json

import pytest

from primcat.catalog import Catalog, SearchQuery, serialize_document, tokenize
from primcat.corpus import demo_annotations
from primcat.errors import (
    NotFoundError,
    QueryError,
    SchemaViolationError,
    StoreCorruptError,
    UnknownFieldError,
    VersionNotFoundError,
)
from primcat.schema import canonical_serialize


def test_tokenize_splits_on_non_alphanumeric():
    assert tokenize("Bayesian Linear-Regression v2!") == (
        "bayesian", "linear", "regression", "v2")


class TestIngest:
    def test_valid_annotation_becomes_searchable(self, tmp_path):
        catalog = Catalog(tmp_path)
        ann = demo_annotations()[0]
        before = catalog.search(SearchQuery()).total
        catalog.ingest(canonical_serialize(ann), "primitive")
        result = catalog.search(SearchQuery())
        assert result.total == before + 1
        assert any(h.doc_id == ann.id for h in result.hits)

    def test_reingest_same_version_replaces(self, tmp_path):
        catalog = Catalog(tmp_path)
        ann = demo_annotations()[0]
        catalog.ingest(canonical_serialize(ann), "primitive")
        edited = dataclasses.replace(ann, description="rewritten description")
        receipt = catalog.ingest(canonical_serialize(edited), "primitive")
        assert receipt.replaced
        assert catalog.search(SearchQuery()).total == 1
        assert catalog.get("primitive", ann.id).description == "rewritten description"

    def test_new_version_coexists_and_search_sees_latest(self, tmp_path):
        catalog = Catalog(tmp_path)
        ann = demo_annotations()[0]
        catalog.ingest(canonical_serialize(ann), "primitive")
        newer = dataclasses.replace(ann, version="1.10.0", name="Fancy Imputer")
        catalog.ingest(canonical_serialize(newer), "primitive")
        assert catalog.search(SearchQuery()).total == 1
        assert catalog.get("primitive", ann.id).version == "1.10.0"
        assert catalog.get("primitive", ann.id, "1.0.0").version == "1.0.0"
        # numeric, not lexicographic: 1.10.0 > 1.9.0
        catalog.ingest(canonical_serialize(
            dataclasses.replace(ann, version="1.9.0")), "primitive")
        assert catalog.get("primitive", ann.id).version == "1.10.0"

    def test_invalid_document_leaves_catalog_unchanged(self, tmp_path):
        catalog = Catalog(tmp_path)
        ann = demo_annotations()[0]
        catalog.ingest(canonical_serialize(ann), "primitive")
        snapshot_before = catalog.search(SearchQuery()).to_doc()
        files_before = sorted(p.name for p in (tmp_path / "primitive").iterdir())
        with pytest.raises(SchemaViolationError):
            catalog.ingest(json.dumps({"id": "broken"}), "primitive")
        assert catalog.search(SearchQuery()).to_doc() == snapshot_before
        assert sorted(p.name for p in (tmp_path / "primitive").iterdir()) == files_before

    def test_store_files_are_canonical(self, tmp_path):
        catalog = Catalog(tmp_path)
        ann = demo_annotations()[0]
        # scramble key order on the way in; the stored file is canonical
        doc = json.loads(canonical_serialize(ann))
        scrambled = json.dumps({k: doc[k] for k in reversed(list(doc))})
        catalog.ingest(scrambled, "primitive")
        stored = (tmp_path / "primitive" / f"{ann.id}-{ann.version}").read_text()
        assert stored == canonical_serialize(ann)

    def test_unknown_vocabulary_warning_surfaces(self, tmp_path):
        catalog = Catalog(tmp_path)
        ann = dataclasses.replace(
            demo_annotations()[0], preconditions=frozenset({"NO_HAUNTED_COLUMNS"}))
        receipt = catalog.ingest(canonical_serialize(ann), "primitive")
        assert any("NO_HAUNTED_COLUMNS" in w for w in receipt.warnings)


class TestGet:
    def test_unknown_id(self, demo_catalog):
        with pytest.raises(NotFoundError):
            demo_catalog.get("primitive", "d3m.not.there")

    def test_unknown_version(self, demo_catalog):
        with pytest.raises(VersionNotFoundError):
            demo_catalog.get("primitive", "d3m.sklearn.mean_imputer", "9.9.9")

    def test_dataset_and_problem(self, demo_catalog):
        assert demo_catalog.get("dataset", "d3m.datasets.census_income").modality == "TABULAR"
        assert demo_catalog.get("problem", "d3m.problems.review_sentiment").metric == "F1"


class TestSearch:
    def test_filter_requires_all_values(self, demo_catalog):
        result = demo_catalog.search(SearchQuery(
            filters={"preconditions": {"NO_JAGGED_VALUES"}}))
        assert result.total > 0
        view = demo_catalog.view()
        for hit in result.hits:
            ann = view.latest_primitive(hit.doc_id)
            assert "NO_JAGGED_VALUES" in ann.preconditions

    def test_multi_value_filter_is_conjunctive(self, demo_catalog):
        result = demo_catalog.search(SearchQuery(filters={
            "preconditions": {"NO_MISSING_VALUES", "NO_CATEGORICAL_VALUES"}}))
        view = demo_catalog.view()
        for hit in result.hits:
            ann = view.latest_primitive(hit.doc_id)
            assert {"NO_MISSING_VALUES", "NO_CATEGORICAL_VALUES"} <= ann.preconditions
        assert result.total == sum(
            1 for a in view.primitives
            if {"NO_MISSING_VALUES", "NO_CATEGORICAL_VALUES"} <= a.preconditions)

    def test_name_token_match_and_scoring(self, demo_catalog):
        result = demo_catalog.search(SearchQuery(text=["regression"]))
        assert result.hits[0].doc_id == "d3m.sklearn.bayesian_linear_regression"
        # name (3) + id (2) + description (1)
        assert result.hits[0].score == 6

    def test_empty_query_returns_everything_of_kind(self, demo_catalog):
        result = demo_catalog.search(SearchQuery(page_size=100))
        assert result.total == len(demo_catalog.view().primitives)
        assert [h.score for h in result.hits] == [0] * result.total
        assert [h.doc_id for h in result.hits] == sorted(h.doc_id for h in result.hits)

    def test_unknown_filter_field(self, demo_catalog):
        with pytest.raises(UnknownFieldError):
            demo_catalog.search(SearchQuery(filters={"flavor": {"SPICY"}}))

    def test_facets_cover_filtered_set(self, demo_catalog):
        result = demo_catalog.search(SearchQuery(
            filters={"primitive_family": {"CLASSIFICATION"}}, page_size=100))
        assert result.facets["primitive_family"] == {"CLASSIFICATION": result.total}
        assert all(count <= result.total
                   for counts in result.facets.values() for count in counts.values())

    def test_pagination_and_bounds(self, demo_catalog):
        everything = demo_catalog.search(SearchQuery(page_size=500))
        pages = []
        page = 1
        while True:
            chunk = demo_catalog.search(SearchQuery(page=page, page_size=5))
            if not chunk.hits:
                break
            pages.extend(chunk.hits)
            page += 1
        assert pages == list(everything.hits)
        with pytest.raises(QueryError):
            demo_catalog.search(SearchQuery(page=0))
        with pytest.raises(QueryError):
            demo_catalog.search(SearchQuery(page_size=501))

    def test_dataset_kind_search(self, demo_catalog):
        result = demo_catalog.search(SearchQuery(
            doc_kind="dataset", filters={"modality": {"TABULAR"}}))
        assert {h.doc_id for h in result.hits} == {
            "d3m.datasets.census_income", "d3m.datasets.clean_measurements"}

    def test_problem_kind_search(self, demo_catalog):
        result = demo_catalog.search(SearchQuery(
            doc_kind="problem", filters={"task_type": {"CLASSIFICATION"}}))
        assert result.total == 3


class TestStartup:
    def test_rebuild_from_store(self, tmp_path):
        catalog = Catalog(tmp_path)
        for ann in demo_annotations():
            catalog.ingest(serialize_document(ann), "primitive")
        reopened = Catalog(tmp_path)
        q = SearchQuery(text=["classifier"], page_size=100)
        assert reopened.search(q).to_doc() == catalog.search(q).to_doc()

    def test_corrupt_file_fails_fast_and_names_file(self, tmp_path):
        catalog = Catalog(tmp_path)
        catalog.ingest(serialize_document(demo_annotations()[0]), "primitive")
        bad = tmp_path / "primitive" / "bad.file-0.0.1"
        bad.write_text("{ this is not json")
        with pytest.raises(StoreCorruptError) as err:
            Catalog(tmp_path)
        assert "bad.file-0.0.1" in str(err.value)

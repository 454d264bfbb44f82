import hypothesis
import pytest

from primcat.catalog import Catalog, CatalogView, serialize_document
from primcat.corpus import demo_annotations, demo_datasets, demo_problems

hypothesis.settings.register_profile(
    "default", max_examples=60, deadline=None)
hypothesis.settings.register_profile(
    "fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture
def demo_view() -> CatalogView:
    return CatalogView.build(demo_annotations(), demo_datasets(), demo_problems())


@pytest.fixture
def demo_catalog(tmp_path) -> Catalog:
    catalog = Catalog(tmp_path / "store")
    for annotation in demo_annotations():
        catalog.ingest(serialize_document(annotation), "primitive")
    for dataset in demo_datasets():
        catalog.ingest(serialize_document(dataset), "dataset")
    for problem in demo_problems():
        catalog.ingest(serialize_document(problem), "problem")
    return catalog

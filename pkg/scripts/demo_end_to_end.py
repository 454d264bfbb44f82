#!/usr/bin/env python3
"""Walk the whole flow in-process: ingest the demo catalog, run a faceted
search, plan pipelines for a problem, validate them, and print the
generated Dockerfile and pod manifest."""

from __future__ import annotations

import tempfile
from pathlib import Path

from primcat.catalog import Catalog, SearchQuery, serialize_document
from primcat.containerize import generate_dockerfile, generate_pod_manifest, select_base_image
from primcat.corpus import demo_annotations, demo_datasets, demo_problems
from primcat.planner import plan, serialize_pipeline, validate_pipeline


def main() -> int:
    root = Path(tempfile.mkdtemp(prefix="primcat-demo-"))
    catalog = Catalog(root)
    for ann in demo_annotations():
        catalog.ingest(serialize_document(ann), "primitive")
    for dataset in demo_datasets():
        catalog.ingest(serialize_document(dataset), "dataset")
    for problem in demo_problems():
        catalog.ingest(serialize_document(problem), "problem")
    print(f"ingested {catalog.document_count()} documents into {root}\n")

    result = catalog.search(SearchQuery(
        text=["classifier"], filters={"preconditions": {"NO_JAGGED_VALUES"}}))
    print("search 'classifier' with preconditions=NO_JAGGED_VALUES:")
    for hit in result.hits:
        print(f"  score {hit.score}: {hit.doc_id}")
    print(f"  facets[modalities] = {result.facets['modalities']}\n")

    view = catalog.view()
    profile = view.get_dataset("d3m.datasets.census_income")
    problem = view.get_problem("d3m.problems.income_classification")
    pipelines = plan(profile, problem, view, max_depth=3, k=3)
    print(f"planned {len(pipelines)} pipelines for {problem.id}:")
    for pipeline in pipelines:
        steps = " -> ".join(s.primitive_id for s in pipeline.steps)
        verdict = validate_pipeline(pipeline, profile, view, problem)
        print(f"  {pipeline.id}: {steps}  (valid: {verdict.ok})")
    print()

    chosen = pipelines[0]
    base = select_base_image(chosen, view)
    print(f"base image for {chosen.id}: {base.kind} ({base.tag})\n")
    print("--- pipeline document ---")
    print(serialize_pipeline(chosen), end="")
    print("--- Dockerfile ---")
    print(generate_dockerfile(chosen, view), end="")
    print("--- pod manifest ---")
    print(generate_pod_manifest(chosen, base.tag), end="")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

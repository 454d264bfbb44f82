#!/usr/bin/env python3
"""Seed a document store with the demo catalog plus the synthetic corpus.

Writes one canonical file per document under <store>/<kind>/ so the result
can be served directly:

    python3 scripts/generate_corpus.py --store ./store
    primcat serve --store ./store
"""

from __future__ import annotations

import argparse
from pathlib import Path

from primcat.catalog import Catalog, serialize_document
from primcat.corpus import (
    demo_annotations,
    demo_datasets,
    demo_problems,
    synthetic_corpus,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--store", default="store", help="store root to populate")
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--primitives", type=int, default=320)
    parser.add_argument("--datasets", type=int, default=55)
    parser.add_argument("--problems", type=int, default=40)
    parser.add_argument("--skip-demo", action="store_true",
                        help="omit the hand-written demo documents")
    args = parser.parse_args()

    catalog = Catalog(Path(args.store))
    annotations, datasets, problems = synthetic_corpus(
        seed=args.seed, n_primitives=args.primitives,
        n_datasets=args.datasets, n_problems=args.problems)
    if not args.skip_demo:
        annotations = demo_annotations() + annotations
        datasets = demo_datasets() + datasets
        problems = demo_problems() + problems

    for ann in annotations:
        catalog.ingest(serialize_document(ann), "primitive")
    for dataset in datasets:
        catalog.ingest(serialize_document(dataset), "dataset")
    for problem in problems:
        catalog.ingest(serialize_document(problem), "problem")

    print(f"store {args.store}: {catalog.document_count('primitive')} primitives, "
          f"{catalog.document_count('dataset')} datasets, "
          f"{catalog.document_count('problem')} problems")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

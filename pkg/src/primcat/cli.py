"""Command-line front door mirroring the HTTP API.

Exit codes: 0 on success, 1 on validation or lookup failure, 2 on usage
errors. ``--format json`` switches every subcommand to machine-readable
output that matches the corresponding gateway endpoint's response body.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .catalog import Catalog, SearchQuery
from .containerize import generate_dockerfile
from .errors import PrimcatError, SchemaViolationError
from .gateway import ENV_STORE, load_config, serve
from .planner import (
    parse_pipeline,
    pipeline_to_dict,
    plan_outcome,
    validate_pipeline,
)
from .schema import parse_dataset, parse_problem


def _default_store() -> str:
    return os.environ.get(ENV_STORE, "store")


def _add_store(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--store", default=None,
                        help="document store root (default: $PRIMCAT_STORE or ./store)")


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format")


def _open_catalog(args) -> Catalog:
    return Catalog(args.store or _default_store())


def _emit(doc, args) -> None:
    if args.format == "json":
        print(json.dumps(doc, indent=2, ensure_ascii=False))


def _sniff_kind(raw: dict) -> str:
    if "task_type" in raw:
        return "problem"
    if "holds" in raw:
        return "dataset"
    return "primitive"


def _cmd_ingest(args) -> int:
    catalog = _open_catalog(args)
    directory = Path(args.directory)
    if not directory.is_dir():
        print(f"not a directory: {directory}", file=sys.stderr)
        return 1
    reports = []
    failures = 0
    for path in sorted(p for p in directory.rglob("*") if p.is_file()):
        if path.name.startswith("."):
            continue
        text = path.read_text(encoding="utf-8")
        try:
            raw = json.loads(text)
            kind = _sniff_kind(raw) if isinstance(raw, dict) else "primitive"
            receipt = catalog.ingest(text, kind)
        except SchemaViolationError as exc:
            failures += 1
            reports.append({"file": str(path), "ok": False,
                            "violations": [v.to_doc() for v in exc.violations]})
            if args.format == "text":
                print(f"FAIL {path}")
                for violation in exc.violations:
                    print(f"  {violation.code} {violation.path}: {violation.reason}")
            continue
        except json.JSONDecodeError as exc:
            failures += 1
            reports.append({"file": str(path), "ok": False,
                            "violations": [{"code": "MALFORMED_DOCUMENT", "path": "",
                                            "reason": str(exc)}]})
            if args.format == "text":
                print(f"FAIL {path}: malformed document")
            continue
        reports.append({"file": str(path), "ok": True, **receipt.to_doc()})
        if args.format == "text":
            version = f" {receipt.version}" if receipt.version else ""
            print(f"ok {path} ({receipt.kind} {receipt.doc_id}{version})")
            for warning in receipt.warnings:
                print(f"  warning: {warning}")
    _emit({"reports": reports, "failed": failures}, args)
    return 1 if failures else 0


def _cmd_search(args) -> int:
    catalog = _open_catalog(args)
    filters: dict[str, set[str]] = {}
    for item in args.filter or ():
        if "=" not in item:
            print(f"bad --filter (expected field=value): {item}", file=sys.stderr)
            return 2
        name, value = item.split("=", 1)
        filters.setdefault(name, set()).add(value)
    result = catalog.search(SearchQuery(
        doc_kind=args.kind, text=tuple(args.terms), filters=filters,
        page=args.page, page_size=args.page_size))
    if args.format == "text":
        print(f"total {result.total}")
        for hit in result.hits:
            print(f"{hit.score:4d}  {hit.doc_id}")
        for facet, counts in result.facets.items():
            if counts:
                rendered = ", ".join(f"{v}={n}" for v, n in counts.items())
                print(f"[{facet}] {rendered}")
    _emit(result.to_doc(), args)
    return 0


def _cmd_plan(args) -> int:
    catalog = _open_catalog(args)
    profile = parse_dataset(Path(args.dataset).read_text(encoding="utf-8"))
    problem = parse_problem(Path(args.problem).read_text(encoding="utf-8"))
    outcome = plan_outcome(profile, problem, catalog.view(),
                           max_depth=args.max_depth, k=args.k)
    doc: dict = {"pipelines": [pipeline_to_dict(p) for p in outcome.pipelines]}
    if not outcome.pipelines:
        doc["diagnostic"] = {"code": "NO_PIPELINE_FOUND",
                             "unmet": sorted(outcome.blocked_flags)}
        if args.format == "text":
            flags = ", ".join(sorted(outcome.blocked_flags)) or "none"
            print(f"no pipeline found; unmet flags: {flags}")
        _emit(doc, args)
        return 1
    if args.format == "text":
        for pipeline in outcome.pipelines:
            steps = " -> ".join(s.primitive_id for s in pipeline.steps)
            print(f"{pipeline.id}: {steps}")
    _emit(doc, args)
    return 0


def _cmd_validate(args) -> int:
    catalog = _open_catalog(args)
    pipeline = parse_pipeline(Path(args.pipeline).read_text(encoding="utf-8"))
    profile = parse_dataset(Path(args.dataset).read_text(encoding="utf-8"))
    problem = None
    if args.problem:
        problem = parse_problem(Path(args.problem).read_text(encoding="utf-8"))
    result = validate_pipeline(pipeline, profile, catalog.view(), problem)
    _emit(result.to_doc(), args)
    if result.ok:
        if args.format == "text":
            print("ok")
        return 0
    if args.format == "text":
        unmet = ", ".join(sorted(result.unmet)) or "-"
        print(f"invalid at step {result.step_index}: {result.reason} (unmet: {unmet})")
    return 1


def _cmd_dockerize(args) -> int:
    catalog = _open_catalog(args)
    pipeline = parse_pipeline(Path(args.pipeline).read_text(encoding="utf-8"))
    config = load_config(store=args.store or _default_store()).container
    text = generate_dockerfile(pipeline, catalog.view(), config)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        if args.format == "text":
            print(f"wrote {args.output}")
        _emit({"output": args.output}, args)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_serve(args) -> int:
    config = load_config(store=args.store, port=args.port,
                         config_file=args.config, ui_root=args.ui)
    serve(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primcat",
        description="ML primitive metadata registry, planner and containerizer")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="bulk-ingest a directory of documents")
    p_ingest.add_argument("directory")
    _add_store(p_ingest)
    _add_format(p_ingest)
    p_ingest.set_defaults(func=_cmd_ingest)

    p_search = sub.add_parser("search", help="faceted search over the catalog")
    p_search.add_argument("terms", nargs="*")
    p_search.add_argument("--filter", action="append", metavar="FIELD=VALUE")
    p_search.add_argument("--kind", choices=("primitive", "dataset", "problem"),
                          default="primitive")
    p_search.add_argument("--page", type=int, default=1)
    p_search.add_argument("--page-size", type=int, default=20, dest="page_size")
    _add_store(p_search)
    _add_format(p_search)
    p_search.set_defaults(func=_cmd_search)

    p_plan = sub.add_parser("plan", help="compose pipelines for a dataset/problem pair")
    p_plan.add_argument("--dataset", required=True, metavar="FILE")
    p_plan.add_argument("--problem", required=True, metavar="FILE")
    p_plan.add_argument("--k", type=int, default=1)
    p_plan.add_argument("--max-depth", type=int, default=5, dest="max_depth")
    _add_store(p_plan)
    _add_format(p_plan)
    p_plan.set_defaults(func=_cmd_plan)

    p_validate = sub.add_parser("validate", help="replay a pipeline against a dataset")
    p_validate.add_argument("pipeline", metavar="PIPELINE_FILE")
    p_validate.add_argument("--dataset", required=True, metavar="FILE")
    p_validate.add_argument("--problem", metavar="FILE",
                            help="problem document for the final-family check")
    _add_store(p_validate)
    _add_format(p_validate)
    p_validate.set_defaults(func=_cmd_validate)

    p_docker = sub.add_parser("dockerize", help="generate a Dockerfile for a pipeline")
    p_docker.add_argument("pipeline", metavar="PIPELINE_FILE")
    p_docker.add_argument("-o", "--output", metavar="PATH")
    _add_store(p_docker)
    _add_format(p_docker)
    p_docker.set_defaults(func=_cmd_dockerize)

    p_serve = sub.add_parser("serve", help="run the HTTP gateway")
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--config", metavar="FILE")
    p_serve.add_argument("--ui", metavar="DIR", help="static frontend assets to mount at /ui")
    _add_store(p_serve)
    _add_format(p_serve)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaViolationError as exc:
        if args.format == "json":
            print(json.dumps({"code": exc.code,
                              "violations": [v.to_doc() for v in exc.violations]},
                             indent=2))
        else:
            print("invalid document:", file=sys.stderr)
            for violation in exc.violations:
                print(f"  {violation.code} {violation.path}: {violation.reason}",
                      file=sys.stderr)
        return 1
    except PrimcatError as exc:
        if args.format == "json":
            print(json.dumps({"code": exc.code, "detail": exc.detail}, indent=2))
        else:
            print(f"{exc.code}: {exc.detail}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"file not found: {exc.filename}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

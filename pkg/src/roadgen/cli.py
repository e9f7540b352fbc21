"""Command-line frontend.

Subcommands: generate (batch generation), dedup (topology deduplication),
export (xodr/svg/json), stats (uniqueness, catalog coverage, kind
histogram), catalog (inspect the template table). Exit codes: 0 success,
1 environment/IO failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from collections import Counter
from pathlib import Path

from . import __version__
from .components import (
    build_catalog,
    catalog_hash,
    default_catalog,
    default_catalog_config,
    load_catalog_config,
)
from .errors import ParseError, ValidationError
from .export import load_document, to_json, to_opendrive, to_svg
from .export.scenario_json import ScenarioDocument
from .generation import (
    Constraints,
    GenerationBudget,
    generate_batch,
    load_constraints,
)
from .topology import deduplicate, uniqueness_rate

log = logging.getLogger("roadgen")

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2

MANIFEST_NAME = "manifest.json"


def _setup_logging() -> None:
    level = os.environ.get("ROADGEN_LOG", "WARNING").upper()
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    log.setLevel(level if level in ("DEBUG", "INFO", "WARNING", "ERROR") else "WARNING")


def _file_sha256(path: Path | None) -> str:
    if path is None:
        return "default"
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load_catalog(path: str | None):
    if path is None:
        return list(default_catalog())
    return build_catalog(load_catalog_config(Path(path)))


def _scenario_files(directory: Path) -> list[Path]:
    return sorted(p for p in directory.glob("scenario_*.json"))


def _read_documents(directory: Path, catalog) -> list[ScenarioDocument]:
    docs = []
    for path in _scenario_files(directory):
        docs.append(load_document(path.read_text(), catalog=catalog))
    return docs


# --------------------------------------------------------------------------
# generate
# --------------------------------------------------------------------------


def cmd_generate(args) -> int:
    try:
        budget = GenerationBudget.parse(args.budget)
    except (ValueError, ValidationError) as exc:
        print(f"invalid --budget: {exc}", file=sys.stderr)
        return EXIT_USAGE
    constraints_path = Path(args.constraints) if args.constraints else None
    try:
        constraints = (
            load_constraints(constraints_path) if constraints_path else Constraints()
        )
        catalog = _load_catalog(args.catalog)
    except (OSError, ValidationError) as exc:
        print(f"cannot load configuration: {exc}", file=sys.stderr)
        return EXIT_IO

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory: {exc}", file=sys.stderr)
        return EXIT_IO

    started = time.time()
    scenarios = generate_batch(
        args.mode, budget, args.size, constraints, catalog, args.seed
    )
    finished = time.time()

    for i, scenario in enumerate(scenarios):
        text = to_json(
            scenario,
            mode=args.mode,
            catalog=catalog,
            overlap_tolerance=constraints.overlap_tolerance,
        )
        (out_dir / f"scenario_{i:06d}.json").write_text(text)

    manifest = {
        "schema_version": "1",
        "mode": args.mode,
        "seed": args.seed,
        "budget": args.budget,
        "total_count": args.size,
        "constraints_hash": _file_sha256(constraints_path),
        "catalog_hash": catalog_hash(catalog),
        "started_at": started,
        "finished_at": finished,
        "count_before_dedup": len(scenarios),
        "count_after_dedup": None,
    }
    (out_dir / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n")
    log.info("wrote %d scenarios to %s", len(scenarios), out_dir)
    print(f"generated {len(scenarios)} scenarios -> {out_dir}")
    return EXIT_OK


# --------------------------------------------------------------------------
# dedup
# --------------------------------------------------------------------------


def cmd_dedup(args) -> int:
    in_dir = Path(args.in_dir)
    if not in_dir.is_dir():
        print(f"input directory not found: {in_dir}", file=sys.stderr)
        return EXIT_IO
    out_dir = Path(args.out) if args.out else in_dir / "deduped"
    try:
        catalog = _load_catalog(args.catalog)
        docs = _read_documents(in_dir, catalog)
    except (OSError, ParseError, ValidationError) as exc:
        print(f"cannot read scenarios: {exc}", file=sys.stderr)
        return EXIT_IO

    files = _scenario_files(in_dir)
    kept_scenarios = deduplicate([d.scenario for d in docs], threshold=args.threshold)
    kept_ids = set(id(s) for s in kept_scenarios)
    kept_files = [
        path for path, doc in zip(files, docs) if id(doc.scenario) in kept_ids
    ]

    out_dir.mkdir(parents=True, exist_ok=True)
    for path in kept_files:
        # Byte-for-byte copies keep the pipeline deterministic.
        (out_dir / path.name).write_bytes(path.read_bytes())

    before, after = len(docs), len(kept_files)
    rate = uniqueness_rate(before, after) if before else None
    report = {
        "before": before,
        "after": after,
        "uniqueness_rate": rate,
        "threshold": args.threshold,
    }
    (out_dir / "dedup_report.json").write_text(json.dumps(report, indent=2) + "\n")

    manifest_path = in_dir / MANIFEST_NAME
    if manifest_path.is_file():
        manifest = json.loads(manifest_path.read_text())
        manifest["count_before_dedup"] = before
        manifest["count_after_dedup"] = after
        (out_dir / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n")

    rate_text = f"{rate:.3f}" if rate is not None else "n/a"
    print(f"kept {after}/{before} scenarios (uniqueness {rate_text}) -> {out_dir}")
    return EXIT_OK


# --------------------------------------------------------------------------
# export
# --------------------------------------------------------------------------


def cmd_export(args) -> int:
    in_dir = Path(args.in_dir)
    if not in_dir.is_dir():
        print(f"input directory not found: {in_dir}", file=sys.stderr)
        return EXIT_IO
    out_dir = Path(args.out) if args.out else in_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        catalog = _load_catalog(args.catalog)
    except (OSError, ValidationError) as exc:
        print(f"cannot load catalog: {exc}", file=sys.stderr)
        return EXIT_IO

    count = 0
    for path in _scenario_files(in_dir):
        try:
            doc = load_document(path.read_text(), catalog=catalog)
        except (ParseError, ValidationError) as exc:
            print(f"skipping {path.name}: {exc}", file=sys.stderr)
            continue
        if args.format == "json":
            output = to_json(
                doc.scenario,
                mode=doc.mode,
                catalog=catalog,
                overlap_tolerance=doc.overlap_tolerance,
            )
            suffix = ".json"
        elif args.format == "xodr":
            output = to_opendrive(doc.scenario)
            suffix = ".xodr"
        else:
            output = to_svg(doc.scenario, scale=args.scale)
            suffix = ".svg"
        (out_dir / (path.stem + suffix)).write_text(output)
        count += 1
    print(f"exported {count} scenarios as {args.format} -> {out_dir}")
    return EXIT_OK


# --------------------------------------------------------------------------
# stats
# --------------------------------------------------------------------------


def _run_stats(directory: Path, catalog) -> dict:
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.is_file():
        raise FileNotFoundError(f"no {MANIFEST_NAME} in {directory}")
    manifest = json.loads(manifest_path.read_text())
    docs = _read_documents(directory, catalog)
    scenarios = [d.scenario for d in docs]

    before = len(scenarios)
    after = len(deduplicate(scenarios)) if scenarios else 0
    catalog_size = len(catalog)
    seen: set[int] = set()
    placed = 0
    coverage_index = None
    histogram: Counter = Counter()
    for scenario in scenarios:
        for inst in scenario.instances:
            placed += 1
            seen.add(inst.template.template_id)
            histogram[inst.template.kind.value] += 1
            if coverage_index is None and len(seen) == catalog_size:
                coverage_index = placed
    return {
        "directory": str(directory),
        "mode": manifest.get("mode"),
        "seed": manifest.get("seed"),
        "scenarios": before,
        "unique_scenarios": after,
        "uniqueness_rate": uniqueness_rate(before, after) if before else None,
        "placed_components": placed,
        "templates_covered": len(seen),
        "catalog_size": catalog_size,
        "components_to_full_coverage": coverage_index,
        "kind_histogram": dict(sorted(histogram.items())),
    }


def _print_stats(stats: dict) -> None:
    rate = stats["uniqueness_rate"]
    coverage = stats["components_to_full_coverage"]
    print(f"run {stats['directory']} (mode={stats['mode']}, seed={stats['seed']})")
    print(f"  scenarios:            {stats['scenarios']}")
    print(f"  after dedup:          {stats['unique_scenarios']}")
    print(f"  uniqueness rate:      {'n/a' if rate is None else f'{rate:.3f}'}")
    print(f"  placed components:    {stats['placed_components']}")
    print(
        f"  templates covered:    {stats['templates_covered']}/{stats['catalog_size']}"
    )
    print(
        "  components to cover:  "
        + ("not covered" if coverage is None else str(coverage))
    )
    print("  kind histogram:")
    for kind, count in stats["kind_histogram"].items():
        print(f"    {kind:15s} {count}")


def cmd_stats(args) -> int:
    try:
        catalog = _load_catalog(args.catalog)
        runs = [_run_stats(Path(d), catalog) for d in args.dirs]
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_IO
    except (OSError, ParseError, ValidationError) as exc:
        print(f"cannot read run: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.json:
        print(json.dumps(runs, indent=2))
        return EXIT_OK
    for stats in runs:
        _print_stats(stats)
    if len(runs) == 2:
        a, b = runs
        print("comparison:")
        ra = a["uniqueness_rate"] or 0.0
        rb = b["uniqueness_rate"] or 0.0
        print(f"  uniqueness: {ra:.3f} ({a['mode']}) vs {rb:.3f} ({b['mode']})")
        ca = a["components_to_full_coverage"]
        cb = b["components_to_full_coverage"]
        print(
            f"  coverage index: {ca if ca is not None else 'n/a'} ({a['mode']}) vs "
            f"{cb if cb is not None else 'n/a'} ({b['mode']})"
        )
    return EXIT_OK


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    if args.action != "list":
        print(f"unknown catalog action: {args.action}", file=sys.stderr)
        return EXIT_USAGE
    try:
        catalog = _load_catalog(args.catalog)
    except (OSError, ValidationError) as exc:
        print(f"cannot load catalog: {exc}", file=sys.stderr)
        return EXIT_IO
    config = default_catalog_config() if args.catalog is None else None
    for template in catalog:
        endpoints = ", ".join(s.label() for s in template.endpoint_signatures)
        print(f"{template.template_id:4d}  {template.label():45s} -> [{endpoints}]")
    print(f"total: {len(catalog)} templates (hash {catalog_hash(catalog)[:12]})")
    if config is not None:
        print(f"validity rules: {len(config.rules)}")
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roadgen",
        description="Procedurally generate, deduplicate and export road scenarios.",
    )
    parser.add_argument("--version", action="version", version=f"roadgen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a batch of scenarios")
    gen.add_argument("--size", type=int, required=True,
                     help="components per scenario (TotalCount)")
    gen.add_argument("--budget", required=True,
                     help="scenario count ('500') or duration ('24h', '30m', '90s')")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--mode", choices=("guided", "random"), default="guided")
    gen.add_argument("--constraints", help="constraints YAML file")
    gen.add_argument("--catalog", help="validity-table YAML file (default: shipped)")
    gen.add_argument("--out", required=True, help="output directory")
    gen.set_defaults(func=cmd_generate)

    dedup = sub.add_parser("dedup", help="remove topology duplicates")
    dedup.add_argument("--in", dest="in_dir", required=True, help="input directory")
    dedup.add_argument("--threshold", type=float, default=1.0,
                       help="keep scenarios with similarity below this (default 1.0)")
    dedup.add_argument("--out", help="output directory (default <in>/deduped)")
    dedup.add_argument("--catalog", help="validity-table YAML file")
    dedup.set_defaults(func=cmd_dedup)

    export = sub.add_parser("export", help="convert scenario documents")
    export.add_argument("--in", dest="in_dir", required=True)
    export.add_argument("--format", choices=("xodr", "svg", "json"), required=True)
    export.add_argument("--out", help="output directory (default: input directory)")
    export.add_argument("--scale", type=float, default=4.0,
                        help="SVG pixels per meter")
    export.add_argument("--catalog", help="validity-table YAML file")
    export.set_defaults(func=cmd_export)

    stats = sub.add_parser("stats", help="report run statistics")
    stats.add_argument("dirs", nargs="+", metavar="DIR",
                       help="one run directory, or two for a comparison")
    stats.add_argument("--json", action="store_true",
                       help="machine-readable output")
    stats.add_argument("--catalog", help="validity-table YAML file")
    stats.set_defaults(func=cmd_stats)

    catalog = sub.add_parser("catalog", help="inspect the template catalog")
    catalog.add_argument("action", choices=("list",))
    catalog.add_argument("--catalog", help="validity-table YAML file")
    catalog.set_defaults(func=cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    if args.command == "stats" and len(args.dirs) > 2:
        print("stats accepts at most two directories", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

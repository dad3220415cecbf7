"""Command-line interface for equichain.

Subcommands validate group and complex documents, run the equivariant
pipeline and print per-degree (co)homology tables, and run the selftest.
Tables go to stdout; logs and errors go to stderr.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from equichain.config import OUTPUT_FORMATS, EquichainConfig
from equichain.errors import EquichainError
from equichain.homology import AbelianGroupDescriptor, homology_frame
from equichain.logging_config import get_logger, setup_logging
from equichain.pipeline import Pipeline
from equichain.pydantic_models import (
    GroupDescriptorDocument,
    HomologyReportDocument,
    parse_document,
)
from equichain.schema import validate_document
from equichain.selftest import report_payload, run_selftest
from equichain.workbench import gen_bar_resolution, load_complex, load_group

console = Console()
error_console = Console(stderr=True)
logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


def setup_argparser() -> argparse.ArgumentParser:
    """Set up the command-line argument parser.

    Returns:
        Configured ArgumentParser instance.
    """
    parser = argparse.ArgumentParser(
        prog="equichain",
        description="equichain - equivariant strong equivalences and equivariant homology",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  equichain group-homology --group cyclic:2 --max-degree 5
  equichain equivariant-homology --input builtin:lens:3:2 --max-degree 3 --format tsv
  equichain validate data/examples/lens_3.json
  equichain selftest --seed 7 --max-degree 4
        """,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")
    parser.add_argument("--log-json", action="store_true", help="Output structured JSON logs")
    parser.add_argument("--log-file", type=Path, help="Also write JSON logs to this file")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    validate_parser = subparsers.add_parser(
        "validate", help="Check a group or complex document"
    )
    validate_parser.add_argument("file", type=Path, help="JSON document")

    def add_table_options(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--max-degree", type=int, required=True, help="Highest degree")
        sub.add_argument(
            "--cohomology", action="store_true", help="Integral cohomology instead of homology"
        )
        sub.add_argument(
            "--format", choices=OUTPUT_FORMATS, help="Output format (default: table)"
        )
        sub.add_argument("--seed", type=int, help="Seed for sampled input checks")
        sub.add_argument(
            "--parallel", action="store_true", help="Reduce differentials concurrently"
        )
        sub.add_argument("--workers", type=int, help="Number of worker threads")
        sub.add_argument(
            "--no-check", action="store_true", help="Skip sampled checks of the input"
        )

    equivariant_parser = subparsers.add_parser(
        "equivariant-homology", help="Run the pipeline on a complex and print its homology"
    )
    equivariant_parser.add_argument(
        "--input", required=True, help="builtin:<name> or a complex document"
    )
    add_table_options(equivariant_parser)

    group_parser = subparsers.add_parser(
        "group-homology", help="Homology of a finite group through its bar resolution"
    )
    group_parser.add_argument(
        "--group", required=True, help="cyclic:n, symmetric:3 or a group document"
    )
    add_table_options(group_parser)

    selftest_parser = subparsers.add_parser("selftest", help="Run the deterministic checks")
    selftest_parser.add_argument("--seed", type=int, help="Base seed (default: EQUICHAIN_SEED)")
    selftest_parser.add_argument("--max-degree", type=int, default=4, help="Degree bound")
    selftest_parser.add_argument("--only", nargs="+", help="Run only these checks")
    selftest_parser.add_argument("--output", type=Path, help="Also write the report here")

    return parser


def render_groups(
    descriptors: Sequence[AbelianGroupDescriptor],
    fmt: str,
    title: str,
    report: HomologyReportDocument,
) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(report.to_json_payload(), indent=2, sort_keys=True) + "\n")
        return
    if fmt == "tsv":
        sys.stdout.write(homology_frame(descriptors).to_csv(sep="\t", index=False))
        return
    table = Table(title=title, show_header=True)
    table.add_column("Degree", justify="right", style="cyan")
    table.add_column("Group")
    table.add_column("Rank", justify="right")
    table.add_column("Torsion")
    for k, descriptor in enumerate(descriptors):
        table.add_row(
            str(k),
            str(descriptor),
            str(descriptor.rank),
            ", ".join(str(d) for d in descriptor.torsion),
        )
    console.print(table)


def _apply_table_options(args: argparse.Namespace, config: EquichainConfig) -> EquichainConfig:
    updates = {}
    if args.format:
        updates["output_format"] = args.format
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.parallel:
        updates["parallel"] = True
    if args.workers is not None:
        updates["max_workers"] = args.workers
    return config.model_copy(update=updates)


def _run_homology(
    args: argparse.Namespace,
    config: EquichainConfig,
    module,
    se,
    label: str,
    group_name: str,
) -> int:
    if args.max_degree < 0:
        error_console.print("[red]Error:[/red] --max-degree must be non-negative")
        return EXIT_USAGE
    pipeline = Pipeline(config)
    result = pipeline.run(module, se, args.max_degree, check=not args.no_check)
    descriptors = pipeline.homology(result, args.max_degree, cohomology=args.cohomology)
    kind = "cohomology" if args.cohomology else "homology"
    report = HomologyReportDocument(
        input=label,
        group=group_name,
        kind=kind,
        max_degree=args.max_degree,
        seed=config.seed,
        target_ranks=result.target_ranks(),
        groups=[
            GroupDescriptorDocument(degree=k, rank=d.rank, torsion=list(d.torsion))
            for k, d in enumerate(descriptors)
        ],
    )
    symbol = "H^k" if args.cohomology else "H_k"
    render_groups(descriptors, config.output_format, f"{symbol} of {label}", report)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, config: EquichainConfig) -> int:
    """Validate a group or complex document."""
    with open(args.file, "r", encoding="utf-8") as f:
        payload = json.load(f)
    doc = parse_document(payload)
    problems = validate_document(doc)
    if problems:
        for problem in problems:
            console.print(f"[red]invalid:[/red] {problem}")
        return EXIT_INVALID
    console.print(f"[green]valid[/green] {doc.kind} document {args.file}")
    return EXIT_OK


def cmd_equivariant_homology(args: argparse.Namespace, config: EquichainConfig) -> int:
    """Run the pipeline on a complex and print (co)homology of the quotient."""
    config = _apply_table_options(args, config)
    module, se = load_complex(args.input, max(args.max_degree, 0))
    group_name = module.ring.group.name if module.ring.group else module.ring.name
    return _run_homology(args, config, module, se, args.input, group_name)


def cmd_group_homology(args: argparse.Namespace, config: EquichainConfig) -> int:
    """Group (co)homology from the bar resolution contracted to a point."""
    config = _apply_table_options(args, config)
    group = load_group(args.group)
    module, se = gen_bar_resolution(group, max(args.max_degree, 0))
    return _run_homology(args, config, module, se, args.group, group.name)


def cmd_selftest(args: argparse.Namespace, config: EquichainConfig) -> int:
    """Run the selftest and print its JSON report."""
    seed = config.seed if args.seed is None else args.seed
    if args.max_degree < 0:
        error_console.print("[red]Error:[/red] --max-degree must be non-negative")
        return EXIT_USAGE
    report = run_selftest(seed, args.max_degree, config, only=args.only)
    text = json.dumps(report_payload(report), indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    targets: List[Path] = []
    if args.output:
        targets.append(args.output)
    if config.report_dir:
        config.ensure_directories()
        targets.append(config.report_dir / f"selftest_{seed}_{args.max_degree}.json")
    for target in targets:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        logger.info(f"wrote selftest report to {target}")
    if not report.ok:
        failed = [check.name for check in report.checks if not check.ok]
        error_console.print(Panel(f"failed checks: {', '.join(failed)}", title="selftest"))
        return EXIT_INVALID
    return EXIT_OK


def main(argv: Optional[list] = None) -> int:
    """Main entry point for the CLI.

    Args:
        argv: Command-line arguments. Uses sys.argv if None.

    Returns:
        Exit code: 0 on success, 1 on a validation failure, 2 on bad input.
    """
    parser = setup_argparser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_OK

    config = EquichainConfig()
    log_level = "DEBUG" if args.verbose else config.log_level
    setup_logging(
        level=log_level, json_output=args.log_json or config.log_json, log_file=args.log_file
    )

    command_handlers = {
        "validate": cmd_validate,
        "equivariant-homology": cmd_equivariant_homology,
        "group-homology": cmd_group_homology,
        "selftest": cmd_selftest,
    }
    handler = command_handlers[args.command]

    try:
        return handler(args, config)
    except (OSError, json.JSONDecodeError) as e:
        error_console.print(f"[red]Error:[/red] cannot read input: {e}")
        return EXIT_USAGE
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        error_console.print(f"[red]Error:[/red] {location}: {first['msg']}")
        return EXIT_USAGE
    except EquichainError as e:
        error_console.print(f"[red]Error:[/red] {e}")
        if args.verbose:
            logger.exception("command failed")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

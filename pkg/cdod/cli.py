import argparse
import logging
import re
import sys
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table

from cdod.alloy import emit_module
from cdod.analysis import CheckReport, SweepRow, load_inputs, run_check, run_sweep
from cdod.config import AnalysisConfig
from cdod.engines import compute_scope, encode, export_dimacs
from cdod.engines.scope import ScopeOverrides
from cdod.errors import CdodError, ConfigError, Diagnostic, ScopeError
from cdod.features import enumerate_valid, load_preset, print_config, read_config, require_valid
from cdod.features.config_parser import preset_names
from cdod.features.semantic_config import SemanticConfig

logger = logging.getLogger(__name__)

console = Console()
err_console = Console(stderr=True)

_VERDICT_STYLE = {"CONSISTENT": "green", "INCONSISTENT": "red", "UNKNOWN_WITHIN_SCOPE": "yellow"}

CONFIG_KEY = re.compile(r"^[01]{9}$")


def setup_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def load_config_arg(value: str) -> SemanticConfig:
    """A configuration file path, the name of a shipped preset, or a nine-digit key."""
    path = Path(value)
    if path.is_file():
        return require_valid(read_config(path))
    if value in preset_names():
        return load_preset(value)
    if CONFIG_KEY.match(value):
        return require_valid(SemanticConfig.from_key(value))
    raise ConfigError([Diagnostic.error(
        f"'{value}' is neither a configuration file, a preset ({', '.join(preset_names())}) "
        f"nor a configuration key"
    )])


def parse_scope(items: list[str], max_objects: Optional[int]) -> Optional[ScopeOverrides]:
    """Turn `Class=N`, `foreign=N` and `max=N` items into scope overrides."""
    if not items and max_objects is None:
        return None
    overrides = ScopeOverrides(max_objects=max_objects)
    for item in items:
        name, sep, count = item.partition("=")
        if not sep or not count.strip().isdigit():
            raise ScopeError(f"scope items look like Class=N, got '{item}'")
        n = int(count)
        if name == "foreign":
            overrides.foreign_max = n
        elif name == "max":
            overrides.max_objects = n
        else:
            overrides.per_class_max[name] = n
    return overrides


def _print_diagnostics(diagnostics: list[Diagnostic]) -> None:
    for d in diagnostics:
        colour = "red" if d.severity == "error" else "yellow" if d.severity == "warning" else "blue"
        err_console.print(f"[{colour}]{escape(str(d))}[/{colour}]", highlight=False)


def _print_report(report: CheckReport) -> None:
    style = _VERDICT_STYLE[report.verdict.value]
    console.print(f"[bold {style}]{report.verdict.value}[/bold {style}] ({report.engine}, {report.config.name})")
    console.print(f"scope: {report.scope.describe()}, exhaustive: {report.exhaustive}", highlight=False)
    stats = report.stats
    console.print(
        f"variables: {stats.variables}, clauses: {stats.clauses}, "
        f"candidates: {stats.candidates}, seconds: {stats.seconds:.3f}",
        highlight=False,
    )
    if report.resource_limited:
        console.print("[yellow]the solver ran out of its conflict budget[/yellow]")
    if report.witness is not None:
        console.print(report.witness.to_text(), highlight=False, markup=False, soft_wrap=True)


def _print_sweep(rows: list[SweepRow], oracle: bool) -> None:
    table = Table(title=f"{len(rows)} configurations")
    table.add_column("key")
    table.add_column("verdict")
    table.add_column("exhaustive")
    if oracle:
        table.add_column("oracle")
    for row in rows:
        style = _VERDICT_STYLE[row.verdict.value]
        cells = [row.key, f"[{style}]{row.verdict.value}[/{style}]", str(row.exhaustive)]
        if oracle:
            cells.append(row.oracle_verdict.value + ("" if row.agree else " [red]DIFFERS[/red]"))
        table.add_row(*cells)
    console.print(table)


def cmd_check(args) -> int:
    settings = AnalysisConfig(args.settings).get_settings()
    pair = load_inputs(args.cd, args.od)
    config = load_config_arg(args.config)
    user_scope = parse_scope(args.scope, args.max_objects)
    unknown = [c for c in (user_scope.per_class_max if user_scope else {}) if c not in pair.concrete_classes]
    if unknown:
        raise ScopeError(f"scope names classes that are not concrete classes of {pair.cd.name}: {', '.join(unknown)}")
    report = run_check(pair, config, engine=args.engine, settings=settings, user_scope=user_scope)

    if args.dimacs:
        scope, _ = compute_scope(pair, config, settings, user_scope)
        export_dimacs(encode(pair, config, scope), Path(args.dimacs))
    if args.witness and report.witness is not None:
        path = Path(args.witness)
        path.write_text(report.witness.to_text(), encoding="utf-8")
        path.with_suffix(".json").write_text(report.witness.model_dump_json(indent=2), encoding="utf-8")

    if args.json:
        console.print_json(report.model_dump_json())
    else:
        _print_diagnostics(report.diagnostics)
        _print_report(report)
    return report.exit_code


def cmd_sweep(args) -> int:
    settings = AnalysisConfig(args.settings).get_settings()
    pair = load_inputs(args.cd, args.od)
    rows = run_sweep(pair, settings=settings, oracle=args.oracle, workers=args.workers)
    if args.json:
        console.print_json(data=[r.model_dump(mode="json") for r in rows])
    else:
        _print_sweep(rows, args.oracle)
    disagreements = [r for r in rows if r.agree is False]
    if disagreements:
        err_console.print(f"[red]{len(disagreements)} configurations where the engines disagree[/red]")
        return 4
    return 0


def cmd_emit(args) -> int:
    settings = AnalysisConfig(args.settings).get_settings()
    pair = load_inputs(args.cd, args.od)
    config = load_config_arg(args.config)
    text = emit_module(pair, config, settings)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        logger.info("wrote %s", args.output)
    else:
        console.print(text, highlight=False, markup=False, soft_wrap=True, end="")
    return 0


def cmd_configs(args) -> int:
    if args.action == "count":
        console.print(str(len(enumerate_valid())))
    elif args.action == "list":
        for config in enumerate_valid():
            console.print(print_config(config), highlight=False, markup=False, soft_wrap=True, end="")
    else:
        if not args.file:
            raise ConfigError([Diagnostic.error("configs validate needs a configuration file")])
        config = load_config_arg(args.file)
        console.print(f"valid ({config.label}, {config.key})", highlight=False)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdod", description="Class diagram / object diagram consistency under semantic variability")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug output")
    parser.add_argument("--settings", default="config.json", help="Tool settings file (default: config.json)")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Decide whether a CD and an OD are consistent")
    check.add_argument("cd", help="Class diagram file")
    check.add_argument("od", help="Object diagram file")
    check.add_argument("config", help="Semantic configuration file, preset name or nine-digit key")
    check.add_argument("--engine", choices=("sat", "enum", "both"), default="sat")
    check.add_argument("--scope", action="append", default=[], metavar="CLASS=N",
                       help="Object bound for a class; 'foreign=N' and 'max=N' bound omitted classes and the total")
    check.add_argument("--max-objects", type=int, default=None, help="Bound on the total number of objects")
    check.add_argument("--witness", help="Write the witness here (OD syntax, plus a .json copy)")
    check.add_argument("--dimacs", help="Write the CNF encoding here")
    check.add_argument("--json", action="store_true", help="Print the report as JSON")
    check.set_defaults(handler=cmd_check)

    sweep = commands.add_parser("sweep", help="Check a pair under every valid configuration")
    sweep.add_argument("cd")
    sweep.add_argument("od")
    sweep.add_argument("--oracle", action="store_true", help="Re-check every row with the enumeration engine")
    sweep.add_argument("--workers", type=int, default=None, help="Worker processes (default: all cores)")
    sweep.add_argument("--json", action="store_true")
    sweep.set_defaults(handler=cmd_sweep)

    emit = commands.add_parser("emit", help="Write the Alloy module for a pair and a configuration")
    emit.add_argument("cd")
    emit.add_argument("od")
    emit.add_argument("config")
    emit.add_argument("-o", "--output", help="Output file (default: stdout)")
    emit.set_defaults(handler=cmd_emit)

    configs = commands.add_parser("configs", help="List, count or validate semantic configurations")
    configs.add_argument("action", choices=("list", "count", "validate"))
    configs.add_argument("file", nargs="?")
    configs.set_defaults(handler=cmd_configs)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.handler(args)
    except CdodError as e:
        _print_diagnostics(e.diagnostics)
        return e.exit_code
    except OSError as e:
        err_console.print(f"[red]error: {escape(str(e))}[/red]", highlight=False)
        return 3


if __name__ == "__main__":
    sys.exit(main())

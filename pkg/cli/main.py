# cli/main.py
"""
CLI for the q^{-1}-symmetric Askey-scheme toolkit with Rich formatting.
Reports go to stdout; logs and diagnostics go to stderr.
"""

import json
import sys
from pathlib import Path
from typing import Any, Dict

import click
from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from common.config import get_config
from common.errors import ConfigError, ConstraintError, DivergenceError, QaskeyError
from common.logger import setup_logging
from verifier.commands import run_command
from verifier.core import OUTPUTS, Report, RunConfig, __version__, format_number
from verifier.storage import get_history, report_to_csv, report_to_json

console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_INVALID_CONFIG = 2


def print_error(message: str):
    err_console.print(f"[bold red]error:[/bold red] {message}")


def print_info(message: str):
    err_console.print(f"[dim]{message}[/dim]")


def create_report_table(report: Report) -> Table:
    table = Table(title=f"{report.config.command} ({report.config.family})"
                  if report.config.command != "suite" else f"suite (seed {report.config.seed})",
                  box=box.ROUNDED)
    table.add_column("Check", style="cyan", no_wrap=True)
    table.add_column("Computed", style="white")
    table.add_column("Reference", style="white")
    table.add_column("Defect", justify="right")
    table.add_column("Tol", justify="right", style="dim")
    table.add_column("Status", style="bold")

    for check in report.checks:
        status = "[green]PASS[/green]" if check.passed else "[red]FAIL[/red]"
        table.add_row(
            check.name,
            _short(check.computed),
            _short(check.reference),
            f"{check.defect:.3e}",
            f"{check.tol:.0e}",
            status,
        )
    return table


def _short(value: Any) -> str:
    if value is None:
        return "-"
    text = format_number(value, digits=10)
    text = ", ".join(text) if isinstance(text, list) else str(text)
    return text if len(text) <= 40 else text[:37] + "..."


def print_report(report: Report, output: str, timing: bool):
    if output == "json":
        click.echo(report_to_json(report, timing=timing))
    elif output == "csv":
        click.echo(report_to_csv(report), nl=False)
    else:
        console.print(create_report_table(report))
        for check in report.checks:
            if check.error:
                console.print(f"[red]{check.name}[/red]: {check.error}")
        summary = report.summary()
        style = "green" if report.ok else "red"
        console.print(Panel(
            f"[bold]{summary['passed']}/{summary['total']}[/bold] passed, "
            f"worst defect {summary['worst_defect']:.3e}",
            box=box.ROUNDED, border_style=style,
        ))
    if not (output == "json" and timing):
        print_info(f"wall time {report.wall_time:.2f}s")


def run_options(func):
    """Options shared by every verification command"""
    options = [
        click.option('--family', help='Family tag: aw, dual-hahn, asc, big-hermite, hermite'),
        click.option('--q', type=float, help='Base q in (0, 1)'),
        click.option('--alpha', type=float, help='Lattice offset / weight parameter alpha'),
        click.option('--params', help="Parameters: '0.2,0.3' for reals, '0.2,0.1;0.3' for complex entries"),
        click.option('--n', type=int, help='Degree n'),
        click.option('--m', type=int, help='Degree m'),
        click.option('--max-degree', type=int, help='Largest degree in Gram computations'),
        click.option('--tol', type=float, help='Pass threshold for defects'),
        click.option('--output', type=click.Choice(OUTPUTS), help='Report format'),
        click.option('--seed', type=int, help='Seed for randomized suites'),
        click.option('--z', help="Evaluation point z ('re,im' for complex)"),
        click.option('--x', help="Evaluation point x = (z - 1/z)/2 instead of z"),
        click.option('--timing', is_flag=True, default=None, help='Include wall time in JSON output'),
        click.option('--record', is_flag=True, default=None, help='Append the report to the run history'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def execute_command(ctx, command: str, options: Dict[str, Any]):
    """Build the run configuration, run it, print the report and exit with the contract status"""
    base: RunConfig = ctx.obj['base_config']
    try:
        cfg = RunConfig.from_mapping({**options, "command": command}, base)
        report = run_command(cfg)
    except (ConfigError, ConstraintError, DivergenceError) as e:
        print_error(str(e))
        sys.exit(EXIT_INVALID_CONFIG)
    except QaskeyError as e:
        print_error(str(e))
        sys.exit(EXIT_FAILED_CHECK)

    print_report(report, cfg.output, cfg.timing)

    if cfg.record:
        try:
            run_id = get_history().save_run(report)
            print_info(f"recorded run {run_id}")
        except ConfigError as e:
            print_error(str(e))
            sys.exit(EXIT_INVALID_CONFIG)

    sys.exit(EXIT_OK if report.ok else EXIT_FAILED_CHECK)


@click.group()
@click.option('--config-file', type=click.Path(exists=True, dir_okay=False), help='YAML file with run defaults')
@click.option('--log-level', default=None, help='Log level (DEBUG, INFO, WARNING, ERROR)')
@click.option('--verbose', '-v', is_flag=True, help='Verbose output')
@click.pass_context
def cli(ctx, config_file, log_level, verbose):
    """Numerical verification of q^{-1}-symmetric Askey-scheme identities"""
    ctx.ensure_object(dict)
    try:
        config = get_config()
    except ConfigError as e:
        print_error(str(e))
        sys.exit(EXIT_INVALID_CONFIG)
    level = 'DEBUG' if verbose else (log_level or config.system.log_level)
    logger = setup_logging(level, config.system.log_file)
    logger.debug(f"qaskey {__version__} started")

    try:
        base = RunConfig.from_mapping({"output": config.report.default_output})
        if config_file:
            base = RunConfig.from_yaml(config_file, base)
    except ConfigError as e:
        print_error(str(e))
        sys.exit(EXIT_INVALID_CONFIG)

    ctx.obj['config'] = config
    ctx.obj['logger'] = logger
    ctx.obj['base_config'] = base


def _register(name: str, help_text: str):
    @cli.command(name=name, help=help_text)
    @run_options
    @click.pass_context
    def command(ctx, **options):
        execute_command(ctx, name, options)

    return command


_register('eval', 'Evaluate a polynomial and compare its representations')
_register('gram', 'Discrete bilateral Gram matrix against closed norms')
_register('cont-gram', 'Continuous Gram matrix against closed norms')
_register('qbeta', 'q-beta integral: quadrature against closed form')
_register('beta', 'Symmetric beta integral: quadrature, Dougall sum, closed form')
_register('mass', 'Askey-Wilson total mass: bilateral sum against closed product')
_register('jint', 'J integral: unit-interval, real-line and closed forms')
_register('tconst', 'T constant along q -> 1 (use --params for the q values)')


@cli.command()
@run_options
@click.option('--only', help='Comma-separated check groups to run')
@click.pass_context
def suite(ctx, only, **options):
    """Full acceptance battery with seeded random grids"""
    options["only"] = only
    execute_command(ctx, "suite", options)


@cli.command()
@click.option('--limit', default=20, show_default=True, help='Number of runs to list')
@click.option('--show', 'run_id', help='Print the stored JSON report of one run')
@click.pass_context
def history(ctx, limit, run_id):
    """List recorded runs"""
    try:
        store = get_history()
    except ConfigError as e:
        print_error(str(e))
        sys.exit(EXIT_INVALID_CONFIG)

    if run_id:
        stored = store.load_report(run_id)
        if stored is None:
            print_error(f"No run with id {run_id}")
            sys.exit(EXIT_FAILED_CHECK)
        click.echo(json.dumps(stored, indent=2))
        return

    table = Table(title="Run History", box=box.ROUNDED)
    table.add_column("ID", style="dim", width=10)
    table.add_column("Command", style="bold cyan")
    table.add_column("Seed", style="yellow")
    table.add_column("Passed", style="bold")
    table.add_column("Worst defect", justify="right")
    table.add_column("Created", style="dim")
    for run in store.load_runs(limit):
        style = "green" if run["passed"] == run["total"] else "red"
        table.add_row(
            run["id"], run["command"], str(run["seed"]),
            f"[{style}]{run['passed']}/{run['total']}[/{style}]",
            f"{run['worst_defect']:.3e}", run["created_at"][:19],
        )
    console.print(table)


@cli.command()
def version():
    """Show version information"""
    console.print(Panel(
        f"[bold]qaskey[/bold] v{__version__}\n\n"
        "[bold cyan]Commands:[/bold cyan] eval, gram, cont-gram, qbeta, beta, mass, jint, tconst, suite, history",
        title="[bold]Version Information[/bold]",
        box=box.DOUBLE_EDGE,
    ))


if __name__ == '__main__':
    cli()

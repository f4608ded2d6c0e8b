import logging
from pathlib import Path

import click
from rich.console import Console
from rich.table import Table

from reports import emit_convergence, emit_csv, write_table
from scenario import grid_doubling_check, run_schedule
from utils.constants import SWEEP_CSV
from utils.exceptions import SimulationError
from utils.log import LOG_FORMATS, configure_logging
from utils.scenario_loader import load_scenario
from utils.sweeps import (
    interval_variants, parse_interval_list, parse_region_list, region_variants, run_variants, sweep_table
)

logger = logging.getLogger('zeno')
console = Console()

scenario_argument = click.argument('scenario_file', type=click.Path(exists=True, dir_okay=False, path_type=Path))


def seed_option(command):
    return click.option('--seed', type=int, default=None,
                        help='Accepted for compatibility; runs are deterministic and ignore it.')(command)


def warn_seed(seed):
    if seed is not None:
        logger.warning("--seed %d ignored: every run is deterministic", seed)


@click.group()
@click.option('-v', '--verbose', count=True, help='Repeat for more detail (-v info, -vv debug).')
@click.option('--log-format', type=click.Choice(LOG_FORMATS), default='rich', show_default=True)
def cli(verbose, log_format):
    """Repeated position measurement of a free particle on a periodic lattice."""
    configure_logging(verbose, log_format)


@cli.command()
@scenario_argument
@click.option('--out', 'out_dir', type=click.Path(file_okay=False, path_type=Path), default=None,
              help='Output directory (defaults to [output] path in the scenario).')
@click.option('--workers', type=int, default=None, help='Threads per FFT pass.')
@seed_option
def run(scenario_file, out_dir, workers, seed):
    """Run a scenario and write positions.csv, momenta.csv and summary.csv."""
    warn_seed(seed)
    try:
        scenario = load_scenario(scenario_file)
        records = run_schedule(scenario, workers)
        paths = emit_csv(records, out_dir or scenario.output_path)
    except SimulationError as e:
        raise click.ClickException(str(e)) from e
    for path in paths:
        console.print(f"wrote {path}")


@cli.command()
@scenario_argument
@click.option('--out', 'out_dir', type=click.Path(file_okay=False, path_type=Path), default=None,
              help='Also write convergence.csv into this directory.')
@seed_option
def convergence(scenario_file, out_dir, seed):
    """Rerun a scenario on a doubled grid and report the largest differences."""
    warn_seed(seed)
    try:
        report = grid_doubling_check(load_scenario(scenario_file))
        if out_dir is not None:
            emit_convergence(report, out_dir)
    except SimulationError as e:
        raise click.ClickException(str(e)) from e

    table = Table(title=f"N={report.n_sites} vs N={2 * report.n_sites}")
    table.add_column('time')
    table.add_column('max |dp_x|')
    table.add_column('max |dp_k|')
    for row in report.table.itertuples():
        table.add_row(f"{row.time_display:g}", f"{row.max_position_diff:.3e}", f"{row.max_momentum_diff:.3e}")
    console.print(table)
    if not report.reliable:
        console.print(f"[yellow]unreliable: momentum weight {report.wrap_weight:.3g} near k=N/2[/yellow]")


@cli.command()
@scenario_argument
@click.option('--interval', 'intervals', default=None, help="Comma-separated intervals, e.g. 'none,4,2,1'.")
@click.option('--regions', 'regions', default=None, help="Comma-separated region counts, e.g. '2,6,12'.")
@click.option('--jobs', type=int, default=1, show_default=True, help='Variants run in parallel.')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False, path_type=Path), default=None)
@seed_option
def sweep(scenario_file, intervals, regions, jobs, out_dir, seed):
    """Rerun a scenario across measurement intervals or region counts."""
    warn_seed(seed)
    if (intervals is None) == (regions is None):
        raise click.UsageError('give exactly one of --interval or --regions')
    try:
        scenario = load_scenario(scenario_file)
        if intervals is not None:
            variants = interval_variants(scenario, parse_interval_list(intervals))
        else:
            variants = region_variants(scenario, parse_region_list(regions))
        frame = sweep_table(variants, run_variants(variants, jobs))
        path = write_table(frame, Path(out_dir or scenario.output_path) / SWEEP_CSV)
    except SimulationError as e:
        raise click.ClickException(str(e)) from e

    final = frame.groupby('label', sort=False).last()
    table = Table(title=f"{scenario.name}: final record")
    for column in ('variant', 'initial region mass', 'forward mass', 'position variance'):
        table.add_column(column)
    for label, row in final.iterrows():
        table.add_row(label, f"{row.initial_region_mass:.4f}", f"{row.forward_mass:.4f}", f"{row.position_variance:.1f}")
    console.print(table)
    console.print(f"wrote {path}")


if __name__ == '__main__':
    cli()

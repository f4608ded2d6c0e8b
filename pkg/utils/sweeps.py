# sweeps.py

import logging
from dataclasses import replace

import pandas as pd
from joblib import Parallel, delayed

from channels import make_regions
from observables import initial_region, position_mean, window_mass
from scenario import MeasurementSpec, Scenario, run_schedule
from states import density_from_pure
from utils.constants import SWEEP_COLUMNS
from utils.exceptions import ScenarioError

logger = logging.getLogger(__name__)


def interval_label(interval) -> str:
    return 'none' if interval is None else f'interval={interval:g}'


def parse_interval_list(text: str) -> list:
    """'none,4,2,1' -> [None, 4.0, 2.0, 1.0]"""
    intervals = []
    for token in text.split(','):
        token = token.strip()
        if not token:
            continue
        if token.lower() == 'none':
            intervals.append(None)
            continue
        try:
            value = float(token)
        except ValueError:
            raise ScenarioError(f"invalid measurement interval {token!r}") from None
        if not value > 0:
            raise ScenarioError(f"measurement interval must be positive, got {token!r}")
        intervals.append(value)
    if not intervals:
        raise ScenarioError("no measurement intervals given")
    return intervals


def parse_region_list(text: str) -> list:
    try:
        counts = [int(token) for token in text.split(',') if token.strip()]
    except ValueError:
        raise ScenarioError(f"invalid region counts {text!r}") from None
    if not counts:
        raise ScenarioError("no region counts given")
    return counts


def with_interval(scenario: Scenario, interval) -> Scenario:
    """Same scenario measured every `interval` display units; None drops the measurement."""
    if interval is None:
        return replace(scenario, measurement=MeasurementSpec(),
                       report_partition=scenario.reporting_partition(), name=f"{scenario.name}-none")
    if scenario.measurement.kind == 'none':
        raise ScenarioError("an interval sweep needs a scenario with a measurement")
    schedule = replace(scenario.schedule, measurement_interval=interval)
    return replace(scenario, schedule=schedule, name=f"{scenario.name}-{interval_label(interval)}")


def with_regions(scenario: Scenario, m_regions: int) -> Scenario:
    """Same scenario with an M-region PVM; region masses are reported on the same partition."""
    partition = make_regions(scenario.lattice.n_sites, m_regions)
    if scenario.schedule.measurement_interval is None:
        raise ScenarioError("a region sweep needs a measurement interval in [schedule]")
    return replace(scenario, measurement=MeasurementSpec('region_pvm', partition=partition),
                   report_partition=partition, name=f"{scenario.name}-regions={m_regions}")


def run_variants(variants: dict, n_jobs: int = 1) -> dict:
    """Runs independent scenarios, in parallel when n_jobs != 1; results keep the input order."""
    labels = list(variants)
    logger.info("running %d variants with n_jobs=%d", len(labels), n_jobs)
    results = Parallel(n_jobs=n_jobs, prefer='threads')(delayed(run_schedule)(variants[label]) for label in labels)
    return dict(zip(labels, results))


def interval_variants(scenario: Scenario, intervals: list) -> dict:
    return {interval_label(i): with_interval(scenario, i) for i in intervals}


def region_variants(scenario: Scenario, counts: list) -> dict:
    return {f'regions={m}': with_regions(scenario, m) for m in counts}


def sweep_intervals(scenario: Scenario, intervals: list, n_jobs: int = 1) -> dict:
    return run_variants(interval_variants(scenario, intervals), n_jobs)


def sweep_regions(scenario: Scenario, counts: list, n_jobs: int = 1) -> dict:
    return run_variants(region_variants(scenario, counts), n_jobs)


def forward_window(scenario: Scenario) -> tuple:
    """Half of the ring ahead of the initial state: [c + N/4, c + 3N/4) around its centre c."""
    n_sites = scenario.lattice.n_sites
    centre = int(round(position_mean(density_from_pure(scenario.initial_state.build(n_sites)))))
    return centre + n_sites // 4, centre + 3 * n_sites // 4


def sweep_table(variants: dict, results: dict) -> pd.DataFrame:
    """
    One row per variant and record time.

    initial_region_mass uses the region holding most of the initial state
    in each variant's own reporting partition (NaN when it has none).
    """
    scenario = next(iter(variants.values()))
    n_sites = scenario.lattice.n_sites
    initial = density_from_pure(scenario.initial_state.build(n_sites))
    start, stop = forward_window(scenario)

    rows = []
    for label, records in results.items():
        partition = variants[label].reporting_partition()
        region_id = initial_region(partition, initial) if partition is not None else None
        for record in records:
            rows.append({
                'label': label,
                'time_display': record.time_display,
                'initial_region_mass': record.region_masses[region_id] if region_id is not None else float('nan'),
                'forward_mass': window_mass(record.position_dist, start, stop),
                'purity': record.purity,
                'expected_momentum': record.expected_momentum_signed,
                'momentum_variance': record.momentum_variance,
                'position_variance': record.position_variance,
                'negative_momentum_fraction': record.negative_momentum_fraction,
            })
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)

# scenario.py
"""
Batch runs of the evolve/measure cycle.

Each measurement interval: transform to momentum, evolve exactly, transform
back to position, apply the channel. Scenario times are display units; the
lattice converts to natural time. No measurement happens at t = 0, and a
record taken at a measurement time sees the post-measurement state.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import partial
from numbers import Real

import numpy as np
import pandas as pd

from channels import DampingKernel, PointerSpec, RegionPartition, kernel_channel, pointer_kernel, pvm_channel
from lattice import LatticeConfig, StateVector, evolve_position_density
from observables import ObservableRecord, observe, signed_momentum_table, wrap_weight
from states import GaussianPacketSpec, build_gaussian_packet, build_position_eigenstate, density_from_pure
from utils.constants import (
    EVENT_TIME_TOLERANCE, MEASUREMENT_KINDS, MINIMAL_IMAGE, RECORD_TOLERANCE, STATE_KINDS, WRAP_WEIGHT_LIMIT
)
from utils.exceptions import ScenarioError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StateSpec:
    kind: str
    packet: GaussianPacketSpec | None = None
    site: int | None = None

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ScenarioError(f"state kind must be one of {STATE_KINDS}, got {self.kind!r}")
        if self.kind == 'gaussian' and self.packet is None:
            raise ScenarioError("gaussian state needs packet parameters")
        if self.kind == 'position_eigenstate' and self.site is None:
            raise ScenarioError("position_eigenstate needs a site")

    def build(self, n_sites: int) -> StateVector:
        if self.kind == 'gaussian':
            return build_gaussian_packet(self.packet, n_sites)
        return build_position_eigenstate(self.site, n_sites)


@dataclass(frozen=True, eq=False)
class MeasurementSpec:
    kind: str = 'none'
    partition: RegionPartition | None = None
    pointer: PointerSpec | None = None
    kernel: DampingKernel | None = None

    def __post_init__(self):
        if self.kind not in MEASUREMENT_KINDS:
            raise ScenarioError(f"measurement kind must be one of {MEASUREMENT_KINDS}, got {self.kind!r}")
        required = {'region_pvm': self.partition, 'pointer': self.pointer, 'custom_kernel': self.kernel}
        if self.kind in required and required[self.kind] is None:
            raise ScenarioError(f"{self.kind} measurement is missing its parameters")

    def validate(self, n_sites: int):
        sizes = {'region_pvm': self.partition, 'custom_kernel': self.kernel}
        component = sizes.get(self.kind)
        if component is not None and component.n_sites != n_sites:
            raise ScenarioError(f"{self.kind} measurement is sized for {component.n_sites} sites, lattice has {n_sites}")
        if self.kind == 'pointer':
            pointer_kernel(self.pointer, n_sites)
        return self

    def build_channel(self, n_sites: int):
        """Position-basis channel for this measurement, or None when unmeasured."""
        if self.kind == 'region_pvm':
            return partial(pvm_channel, partition=self.partition)
        if self.kind == 'pointer':
            return partial(kernel_channel, kernel=pointer_kernel(self.pointer, n_sites))
        if self.kind == 'custom_kernel':
            return partial(kernel_channel, kernel=self.kernel)
        return None

    def describe(self) -> str:
        if self.kind == 'region_pvm':
            return f"region PVM ({self.partition.n_regions} regions)"
        if self.kind == 'pointer':
            return f"pointer alpha={self.pointer.alpha} width={self.pointer.width:g} ({self.pointer.distance_convention})"
        if self.kind == 'custom_kernel':
            return f"custom kernel ({self.kernel.distance_convention})"
        return "no measurement"


@dataclass(frozen=True)
class Schedule:
    total_time: float
    measurement_interval: float | None = None
    record_times: tuple = ()

    def __post_init__(self):
        if not isinstance(self.total_time, Real) or not 0 < self.total_time < np.inf:
            raise ScenarioError(f"total_time must be positive and finite, got {self.total_time!r}")
        if self.measurement_interval is not None and not 0 < self.measurement_interval < np.inf:
            raise ScenarioError(f"measurement interval must be positive and finite, got {self.measurement_interval!r}")
        times = tuple(float(t) for t in (self.record_times or (0.0, self.total_time)))
        if any(later <= earlier for earlier, later in zip(times, times[1:])):
            raise ScenarioError(f"record times must be strictly increasing, got {list(times)}")
        if times[0] < 0 or times[-1] > self.total_time + EVENT_TIME_TOLERANCE:
            raise ScenarioError(f"record times must lie in [0, {self.total_time}], got {list(times)}")
        object.__setattr__(self, 'record_times', times)

    def measurement_times(self) -> list:
        if self.measurement_interval is None:
            return []
        count = int(np.floor(self.total_time / self.measurement_interval + EVENT_TIME_TOLERANCE))
        return [j * self.measurement_interval for j in range(1, count + 1)]

    def events(self) -> list:
        """Sorted (time, measure, record_time) triples; record_time is None for bare measurements."""
        events = [[t, True, None] for t in self.measurement_times()]
        for record_time in self.record_times:
            match = next((e for e in events if abs(e[0] - record_time) <= EVENT_TIME_TOLERANCE), None)
            if match is not None:
                match[2] = record_time
            else:
                events.append([record_time, False, record_time])
        return [tuple(e) for e in sorted(events, key=lambda e: e[0])]


@dataclass(frozen=True, eq=False)
class Scenario:
    lattice: LatticeConfig
    initial_state: StateSpec
    schedule: Schedule
    measurement: MeasurementSpec = field(default_factory=MeasurementSpec)
    report_partition: RegionPartition | None = None
    output_path: str = 'out'
    name: str = 'scenario'

    def __post_init__(self):
        n_sites = self.lattice.n_sites
        self.measurement.validate(n_sites)
        if self.report_partition is not None and self.report_partition.n_sites != n_sites:
            raise ScenarioError(f"report regions are sized for {self.report_partition.n_sites} sites, lattice has {n_sites}")

    def reporting_partition(self) -> RegionPartition | None:
        if self.report_partition is not None:
            return self.report_partition
        return self.measurement.partition


def run_schedule(scenario: Scenario, workers: int | None = None) -> list:
    """
    Runs the scenario and returns one ObservableRecord per record time.

    Parameters:
    - scenario (Scenario): validated scenario.
    - workers (int | None): threads for each row/column FFT pass.

    Returns:
    - records (list of ObservableRecord): in record-time order.
    """
    lattice = scenario.lattice
    channel = scenario.measurement.build_channel(lattice.n_sites)
    partition = scenario.reporting_partition()
    rho = density_from_pure(scenario.initial_state.build(lattice.n_sites)).validate(check_psd=True)

    events = scenario.schedule.events()
    logger.info("running %s: N=%d, %s, %d events", scenario.name, lattice.n_sites,
                scenario.measurement.describe(), len(events))

    records = []
    now = 0.0
    for time, measure, record_time in events:
        # free evolution up to the next event
        if time > now:
            rho = evolve_position_density(rho, lattice.to_natural(time - now), workers)
            now = time
        # a record at a measurement time sees the post-measurement state
        if measure and channel is not None:
            rho = channel(rho)
        if record_time is not None:
            rho.validate(RECORD_TOLERANCE)
            records.append(observe(rho, record_time, lattice, partition, workers))
            logger.debug("t=%g purity=%.6f", record_time, records[-1].purity)

    logger.info("finished %s with %d records", scenario.name, len(records))
    return records


def double_scenario(scenario: Scenario) -> Scenario:
    """
    The same physical scenario on a lattice twice as fine: sites n -> 2n,
    packet width doubled, momentum index kept, pointer width doubled,
    region boundaries doubled, times unchanged.
    """
    lattice = replace(scenario.lattice, n_sites=scenario.lattice.n_sites * 2)

    state = scenario.initial_state
    if state.kind == 'gaussian':
        packet = state.packet
        state = StateSpec('gaussian', GaussianPacketSpec(packet.center * 2, packet.width * 2, packet.momentum_index))
    else:
        state = StateSpec('position_eigenstate', site=state.site * 2)

    measurement = scenario.measurement
    if measurement.kind == 'region_pvm':
        measurement = MeasurementSpec('region_pvm', partition=measurement.partition.refined(2))
    elif measurement.kind == 'pointer':
        pointer = measurement.pointer
        measurement = MeasurementSpec('pointer', pointer=PointerSpec(pointer.alpha / 2, pointer.distance_convention))
    elif measurement.kind == 'custom_kernel':
        raise ScenarioError("a custom kernel has a fixed length and cannot be carried to a doubled grid")

    report = scenario.report_partition.refined(2) if scenario.report_partition is not None else None
    return replace(scenario, lattice=lattice, initial_state=state, measurement=measurement,
                   report_partition=report, name=f"{scenario.name}-x2")


def bin_centred(p_fine: np.ndarray) -> np.ndarray:
    """Folds a 2N-site distribution onto N sites: 1/2 p(2n-1) + p(2n) + 1/2 p(2n+1)."""
    odd = p_fine[1::2]
    return p_fine[0::2] + 0.5 * odd + 0.5 * np.roll(odd, 1)


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    n_sites: int
    table: pd.DataFrame
    wrap_weight: float
    reliable: bool = True

    @property
    def max_position_diff(self) -> float:
        return float(self.table['max_position_diff'].max())

    @property
    def max_momentum_diff(self) -> float:
        return float(self.table['max_momentum_diff'].max())


def grid_doubling_check(scenario: Scenario, workers: int | None = None) -> ConvergenceReport:
    """
    Reruns a scenario on 2N sites and compares the coarse-grained results.

    Position distributions are compared after centred binning; momentum
    distributions on the indices with |signed k| < N/2, which exist on both grids.
    """
    n_sites = scenario.lattice.n_sites
    fine_scenario = double_scenario(scenario)

    # momentum near k = N/2 aliases differently on the two grids
    initial = density_from_pure(scenario.initial_state.build(n_sites))
    weight = wrap_weight(initial)
    reliable = weight < WRAP_WEIGHT_LIMIT
    if not reliable:
        logger.warning("%s: initial momentum weight %.3g lies near the wrap point k=N/2; "
                       "grid doubling cannot validate this scenario", scenario.name, weight)

    coarse_records = run_schedule(scenario, workers)
    fine_records = run_schedule(fine_scenario, workers)

    # coarse index k sits at the same signed index on the fine grid
    signed = signed_momentum_table(n_sites).astype(int)
    keep = np.abs(signed) < n_sites // 2
    fine_index = signed[keep] % (2 * n_sites)

    rows = []
    for coarse, fine in zip(coarse_records, fine_records):
        rows.append({
            'time_display': coarse.time_display,
            'max_position_diff': float(np.max(np.abs(coarse.position_dist - bin_centred(fine.position_dist)))),
            'max_momentum_diff': float(np.max(np.abs(coarse.momentum_dist[keep] - fine.momentum_dist[fine_index]))),
        })
    return ConvergenceReport(n_sites, pd.DataFrame(rows), weight, reliable)

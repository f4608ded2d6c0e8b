# scenario_loader.py

import logging
import math
from pathlib import Path

import toml

from channels import DampingKernel, PointerSpec, make_regions
from lattice import LatticeConfig
from scenario import MeasurementSpec, Scenario, Schedule, StateSpec
from states import GaussianPacketSpec
from utils.constants import DEFAULT_N_SITES, DEFAULT_PACKET_WIDTH, DISPLAY_TIME_FACTOR, MINIMAL_IMAGE
from utils.exceptions import ScenarioError, SimulationError

logger = logging.getLogger(__name__)

SECTIONS = ('lattice', 'state', 'measurement', 'schedule', 'observables', 'output')


def _section(data: dict, name: str) -> dict:
    section = data.get(name, {})
    if not isinstance(section, dict):
        raise ScenarioError(f"[{name}] must be a table")
    return section


def _finite(value, key: str, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"[{where}] {key} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(f"[{where}] {key} must be finite, got {value!r}")
    return value


def _number(section: dict, key: str, where: str, default=None):
    value = section.get(key, default)
    if value is None:
        raise ScenarioError(f"[{where}] is missing '{key}'")
    return _finite(value, key, where)


def _integer(section: dict, key: str, where: str, default=None) -> int:
    value = _number(section, key, where, default)
    if int(value) != value:
        raise ScenarioError(f"[{where}] {key} must be an integer, got {value!r}")
    return int(value)


def parse_lattice(section: dict) -> LatticeConfig:
    return LatticeConfig(
        n_sites=_integer(section, 'n_sites', 'lattice', DEFAULT_N_SITES),
        display_time_factor=float(_number(section, 'display_time_factor', 'lattice', DISPLAY_TIME_FACTOR)),
    )


def parse_state(section: dict, n_sites: int) -> StateSpec:
    kind = section.get('kind', 'gaussian')
    if kind == 'gaussian':
        packet = GaussianPacketSpec(
            center=_integer(section, 'center', 'state', n_sites // 2),
            width=float(_number(section, 'width', 'state', DEFAULT_PACKET_WIDTH)),
            momentum_index=_integer(section, 'momentum_index', 'state', 0),
        )
        return StateSpec('gaussian', packet=packet.validate(n_sites))
    if kind == 'position_eigenstate':
        site = _integer(section, 'site', 'state', n_sites // 2)
        if not 0 <= site < n_sites:
            raise ScenarioError(f"[state] site must be in [0, {n_sites}), got {site}")
        return StateSpec('position_eigenstate', site=site)
    raise ScenarioError(f"[state] kind must be 'gaussian' or 'position_eigenstate', got {kind!r}")


def parse_measurement(section: dict, n_sites: int) -> MeasurementSpec:
    kind = section.get('kind', 'none')
    if kind == 'none':
        return MeasurementSpec()
    if kind == 'region_pvm':
        return MeasurementSpec('region_pvm', partition=make_regions(n_sites, _integer(section, 'regions', 'measurement')))
    if kind == 'pointer':
        pointer = PointerSpec(float(_number(section, 'alpha', 'measurement')), section.get('distance', MINIMAL_IMAGE))
        return MeasurementSpec('pointer', pointer=pointer)
    if kind == 'custom_kernel':
        values = section.get('values')
        if not isinstance(values, list) or len(values) != n_sites:
            raise ScenarioError(f"[measurement] custom_kernel needs a list of {n_sites} values")
        values = [_finite(v, 'values', 'measurement') for v in values]
        return MeasurementSpec('custom_kernel', kernel=DampingKernel(values, section.get('distance', MINIMAL_IMAGE)))
    raise ScenarioError(f"[measurement] unknown kind {kind!r}")


def parse_schedule(section: dict) -> Schedule:
    interval = section.get('interval')
    if isinstance(interval, str) and interval.lower() == 'none':
        interval = None
    if interval is not None:
        interval = float(_number(section, 'interval', 'schedule'))
    record_times = section.get('record_times', [])
    if not isinstance(record_times, list):
        raise ScenarioError("[schedule] record_times must be a list")
    return Schedule(
        total_time=float(_number(section, 'total_time', 'schedule')),
        measurement_interval=interval,
        record_times=tuple(float(_finite(t, 'record_times', 'schedule')) for t in record_times),
    )


def parse_scenario(data: dict, name: str = 'scenario') -> Scenario:
    """Builds a validated Scenario from the parsed TOML tables."""
    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        raise ScenarioError(f"unknown scenario sections: {', '.join(unknown)}")

    try:
        lattice = parse_lattice(_section(data, 'lattice'))
        n_sites = lattice.n_sites
        observables = _section(data, 'observables')
        report_partition = None
        if 'regions' in observables:
            report_partition = make_regions(n_sites, _integer(observables, 'regions', 'observables'))
        return Scenario(
            lattice=lattice,
            initial_state=parse_state(_section(data, 'state'), n_sites),
            measurement=parse_measurement(_section(data, 'measurement'), n_sites),
            schedule=parse_schedule(_section(data, 'schedule')),
            report_partition=report_partition,
            output_path=str(_section(data, 'output').get('path', f'out/{name}')),
            name=name,
        )
    except ScenarioError:
        raise
    except SimulationError as e:
        raise ScenarioError(str(e)) from e


def load_scenario(path) -> Scenario:
    """Reads and validates a scenario file."""
    path = Path(path)
    try:
        data = toml.load(path)
    except OSError as e:
        raise ScenarioError(f"cannot read scenario {path}: {e}") from e
    except toml.TomlDecodeError as e:
        raise ScenarioError(f"{path}: invalid TOML: {e}") from e
    logger.debug("loaded scenario %s", path)
    try:
        return parse_scenario(data, name=path.stem)
    except ScenarioError as e:
        raise ScenarioError(f"{path}: {e}") from e

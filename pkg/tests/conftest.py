import numpy as np
import pytest

from channels import PointerSpec, make_regions
from lattice import DensityMatrix, LatticeConfig, StateVector
from scenario import MeasurementSpec, Scenario, Schedule, StateSpec
from states import GaussianPacketSpec


@pytest.fixture
def rng():
    return np.random.default_rng(511)


def _random_pure(n_sites, rng, basis='position'):
    amplitudes = rng.normal(size=n_sites) + 1j * rng.normal(size=n_sites)
    return StateVector(amplitudes / np.linalg.norm(amplitudes), basis)


def _random_mixed(n_sites, rng, rank=None):
    rank = rank or n_sites
    g = rng.normal(size=(n_sites, rank)) + 1j * rng.normal(size=(n_sites, rank))
    entries = g @ g.conj().T
    return DensityMatrix(entries / np.trace(entries).real, 'position')


@pytest.fixture
def random_pure():
    return _random_pure


@pytest.fixture
def random_mixed():
    return _random_mixed


def _scenario(n_sites=256, state=None, measurement=None, total_time=10.0, interval=None,
              record_times=(), report_regions=None, name='test'):
    if state is None:
        state = StateSpec('gaussian', GaussianPacketSpec(8, 8.0, 31))
    partition = make_regions(n_sites, report_regions) if report_regions else None
    return Scenario(
        lattice=LatticeConfig(n_sites),
        initial_state=state,
        schedule=Schedule(total_time, interval, tuple(record_times)),
        measurement=measurement or MeasurementSpec(),
        report_partition=partition,
        name=name,
    )


@pytest.fixture
def make_scenario():
    return _scenario


@pytest.fixture
def pvm():
    return lambda n_sites, m_regions: MeasurementSpec('region_pvm', partition=make_regions(n_sites, m_regions))


@pytest.fixture
def pointer():
    return lambda alpha, distance='minimal_image': MeasurementSpec('pointer', pointer=PointerSpec(alpha, distance))

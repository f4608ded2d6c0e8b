# observables.py

from dataclasses import dataclass, field
from functools import lru_cache
from numbers import Integral

import numpy as np

from channels import RegionPartition
from lattice import DensityMatrix, LatticeConfig, density_to_momentum, density_to_position, require_basis
from utils.constants import DIAGONAL_IMAG_TOLERANCE, MOMENTUM, POSITION, WRAP_WINDOW_FRACTION
from utils.exceptions import ContractViolation, DomainError


@dataclass(frozen=True, eq=False)
class ObservableRecord:
    time_natural: float
    time_display: float
    position_dist: np.ndarray
    momentum_dist: np.ndarray
    purity: float
    expected_momentum_signed: float
    momentum_variance: float
    negative_momentum_fraction: float
    position_mean: float
    position_variance: float
    region_masses: list = field(default_factory=list)

    @property
    def n_sites(self) -> int:
        return self.position_dist.size


def _real_diagonal(rho: DensityMatrix) -> np.ndarray:
    diagonal = np.diagonal(rho.entries)
    worst = float(np.max(np.abs(diagonal.imag)))
    if worst >= DIAGONAL_IMAG_TOLERANCE:
        raise ContractViolation(f"density matrix diagonal has imaginary part {worst:.3e}")
    return diagonal.real.copy()


def position_distribution(rho: DensityMatrix) -> np.ndarray:
    """Tr(rho |X_n><X_n|) for every site n."""
    require_basis(rho, POSITION, 'position_distribution')
    return _real_diagonal(rho)


def momentum_distribution(rho: DensityMatrix, workers: int | None = None) -> np.ndarray:
    """Tr(rho |P_k><P_k|) for every index k; transforms position-basis input first."""
    if rho.basis == POSITION:
        rho = density_to_momentum(rho, workers)
    return _real_diagonal(rho)


def _position_dist_any(rho: DensityMatrix) -> np.ndarray:
    if rho.basis == MOMENTUM:
        rho = density_to_position(rho)
    return _real_diagonal(rho)


def signed_momentum_index(k: int, n_sites: int) -> int:
    """k for k <= N/2, -(N - k) beyond; multiply by 2 pi / N for physical momentum."""
    if not isinstance(k, Integral) or not 0 <= k < n_sites:
        raise DomainError(f"momentum index must be an integer in [0, {n_sites}), got {k!r}")
    return int(k) if k <= n_sites // 2 else int(k) - n_sites


@lru_cache(maxsize=None)
def signed_momentum_table(n_sites: int) -> np.ndarray:
    k = np.arange(n_sites)
    table = np.where(k <= n_sites // 2, k, k - n_sites).astype(np.float64)
    table.flags.writeable = False
    return table


# Reductions over distributions

def _mean_signed(p_k: np.ndarray) -> float:
    return float(np.dot(signed_momentum_table(p_k.size), p_k))


def _variance_signed(p_k: np.ndarray) -> float:
    signed = signed_momentum_table(p_k.size)
    return float(np.dot((signed - _mean_signed(p_k)) ** 2, p_k))


def _negative_fraction(p_k: np.ndarray) -> float:
    return float(p_k[signed_momentum_table(p_k.size) < 0].sum())


def _circular_mean(p_x: np.ndarray) -> float:
    n_sites = p_x.size
    phasor = np.dot(p_x, np.exp(2j * np.pi * np.arange(n_sites) / n_sites))
    return float(np.angle(phasor) * n_sites / (2 * np.pi) % n_sites)


def _circular_variance(p_x: np.ndarray) -> float:
    n_sites = p_x.size
    mean = _circular_mean(p_x)
    displacement = (np.arange(n_sites) - mean + n_sites / 2) % n_sites - n_sites / 2
    centred = displacement - np.dot(p_x, displacement)
    return float(np.dot(p_x, centred ** 2))


def expected_momentum(rho: DensityMatrix) -> float:
    return _mean_signed(momentum_distribution(rho))


def momentum_variance(rho: DensityMatrix) -> float:
    return _variance_signed(momentum_distribution(rho))


def negative_momentum_fraction(rho: DensityMatrix) -> float:
    return _negative_fraction(momentum_distribution(rho))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2), the same in either basis."""
    return float(np.vdot(rho.entries, rho.entries).real)


def region_mass(rho: DensityMatrix, partition: RegionPartition, region_id: int) -> float:
    return float(_position_dist_any(rho)[partition.sites(region_id)].sum())


def region_masses(p_x: np.ndarray, partition: RegionPartition) -> list:
    return [float(mass) for mass in np.bincount(partition.region_of, weights=p_x, minlength=partition.n_regions)]


def window_mass(p_x: np.ndarray, start: int, stop: int) -> float:
    """Probability on sites start, ..., stop - 1, wrapping around the ring."""
    return float(p_x[np.arange(start, stop) % p_x.size].sum())


def initial_region(partition: RegionPartition, rho: DensityMatrix) -> int:
    """Region holding the largest share of the state's position probability."""
    return int(np.argmax(region_masses(_position_dist_any(rho), partition)))


def position_mean(rho: DensityMatrix) -> float:
    """Circular mean site in [0, N)."""
    return _circular_mean(_position_dist_any(rho))


def position_variance(rho: DensityMatrix) -> float:
    """Variance of the minimal-image displacement from the circular mean."""
    return _circular_variance(_position_dist_any(rho))


def wrap_weight(rho: DensityMatrix, window: int | None = None) -> float:
    """Momentum weight within `window` indices of the wrap point k = N/2."""
    p_k = momentum_distribution(rho)
    n_sites = p_k.size
    if window is None:
        window = int(n_sites * WRAP_WINDOW_FRACTION)
    distance = np.abs(np.arange(n_sites) - n_sites // 2)
    return float(p_k[distance < window].sum())


def observe(rho: DensityMatrix, time_display: float, lattice: LatticeConfig,
            partition: RegionPartition | None = None, workers: int | None = None) -> ObservableRecord:
    """Snapshot of everything a run reports at one display time."""
    if rho.basis == MOMENTUM:
        rho_k, rho_x = rho, density_to_position(rho, workers)
    else:
        rho_x, rho_k = rho, density_to_momentum(rho, workers)
    p_x = _real_diagonal(rho_x)
    p_k = _real_diagonal(rho_k)

    return ObservableRecord(
        time_natural=lattice.to_natural(time_display),
        time_display=time_display,
        position_dist=p_x,
        momentum_dist=p_k,
        purity=purity(rho_x),
        expected_momentum_signed=_mean_signed(p_k),
        momentum_variance=_variance_signed(p_k),
        negative_momentum_fraction=_negative_fraction(p_k),
        position_mean=_circular_mean(p_x),
        position_variance=_circular_variance(p_x),
        region_masses=region_masses(p_x, partition) if partition is not None else [],
    )

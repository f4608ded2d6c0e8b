# channels.py
"""
Measurement channels acting on position-basis density matrices.

Both channels trace out the apparatus unconditionally: the region PVM zeroes
coherences between different regions, the pointer damps each coherence by a
kernel in the site separation. Both are Schur (elementwise) multipliers with
a PSD unit-diagonal matrix, so trace and diagonal are untouched exactly.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from numbers import Integral, Real

import numpy as np
import scipy.fft
import scipy.linalg

from lattice import DensityMatrix, require_basis
from utils.constants import DISTANCE_CONVENTIONS, LINEAR, MINIMAL_IMAGE, POSITION, PSD_TOLERANCE
from utils.exceptions import DomainError, KernelError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RegionPartition:
    n_sites: int
    boundaries: tuple

    def __post_init__(self):
        bounds = tuple(int(b) for b in self.boundaries)
        if not bounds or bounds[0] != 0:
            raise DomainError(f"region boundaries must start at 0, got {bounds}")
        if any(later <= earlier for earlier, later in zip(bounds, bounds[1:])):
            raise DomainError(f"region boundaries must be strictly increasing, got {bounds}")
        if bounds[-1] >= self.n_sites:
            raise DomainError(f"region boundaries must lie in [0, {self.n_sites}), got {bounds}")
        object.__setattr__(self, 'boundaries', bounds)

    @property
    def n_regions(self) -> int:
        return len(self.boundaries)

    @cached_property
    def region_of(self) -> np.ndarray:
        lookup = np.searchsorted(np.asarray(self.boundaries), np.arange(self.n_sites), side='right') - 1
        lookup.flags.writeable = False
        return lookup

    @cached_property
    def same_region(self) -> np.ndarray:
        mask = self.region_of[:, np.newaxis] == self.region_of[np.newaxis, :]
        mask.flags.writeable = False
        return mask

    def sizes(self) -> list:
        edges = list(self.boundaries) + [self.n_sites]
        return [end - start for start, end in zip(edges[:-1], edges[1:])]

    def sites(self, region_id: int) -> slice:
        if not 0 <= region_id < self.n_regions:
            raise DomainError(f"region id must be in [0, {self.n_regions}), got {region_id}")
        edges = list(self.boundaries) + [self.n_sites]
        return slice(edges[region_id], edges[region_id + 1])

    def refined(self, factor: int) -> 'RegionPartition':
        """Same geometry on a lattice `factor` times finer."""
        return RegionPartition(self.n_sites * factor, tuple(b * factor for b in self.boundaries))


def make_regions(n_sites: int, m_regions: int) -> RegionPartition:
    """
    Splits the ring into m_regions regions of floor(N/M) sites; any
    remainder becomes one extra leftover region at the right end.
    """
    if not isinstance(m_regions, Integral) or not 1 <= m_regions <= n_sites:
        raise DomainError(f"number of regions must be in [1, {n_sites}], got {m_regions!r}")
    size = n_sites // m_regions
    boundaries = [i * size for i in range(m_regions)]
    if n_sites % m_regions:
        boundaries.append(m_regions * size)
    return RegionPartition(n_sites, tuple(boundaries))


def pvm_channel(rho: DensityMatrix, partition: RegionPartition) -> DensityMatrix:
    """Zeroes every entry rho[l, m] with l and m in different regions."""
    require_basis(rho, POSITION, 'pvm_channel')
    if partition.n_sites != rho.n_sites:
        raise DomainError(f"partition covers {partition.n_sites} sites, density matrix has {rho.n_sites}")
    return DensityMatrix(np.where(partition.same_region, rho.entries, 0), POSITION)


@dataclass(frozen=True)
class PointerSpec:
    alpha: float
    distance_convention: str = MINIMAL_IMAGE

    def __post_init__(self):
        if not isinstance(self.alpha, Real) or not self.alpha > 0:
            raise DomainError(f"pointer alpha must be positive, got {self.alpha!r}")
        if self.distance_convention not in DISTANCE_CONVENTIONS:
            raise DomainError(f"distance convention must be one of {DISTANCE_CONVENTIONS}, got {self.distance_convention!r}")

    @property
    def width(self) -> float:
        return 1.0 / self.alpha


@dataclass(frozen=True, eq=False)
class DampingKernel:
    """
    Damping factor per site separation. Under minimal_image the Schur matrix
    is circulant, K[m, n] = values[(m - n) mod N]; under linear it is
    Toeplitz, K[m, n] = values[|m - n|].
    """
    values: np.ndarray
    distance_convention: str = MINIMAL_IMAGE

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise KernelError(f"kernel values must be a non-empty vector, got shape {values.shape}")
        if self.distance_convention not in DISTANCE_CONVENTIONS:
            raise KernelError(f"distance convention must be one of {DISTANCE_CONVENTIONS}, got {self.distance_convention!r}")
        if values[0] != 1.0:
            raise KernelError(f"kernel must leave the diagonal untouched (values[0] = 1), got {values[0]!r}")
        if np.any(values < 0) or np.any(values > 1):
            raise KernelError("kernel values must lie in [0, 1]")
        if self.distance_convention == MINIMAL_IMAGE and not np.array_equal(values[1:], values[:0:-1]):
            raise KernelError("minimal-image kernel must satisfy values[d] == values[N - d]")
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)

        smallest = self.min_eigenvalue()
        if smallest < -PSD_TOLERANCE:
            raise KernelError(f"kernel Schur matrix is not positive semidefinite (eigenvalue {smallest:.3e})")

    @property
    def n_sites(self) -> int:
        return self.values.size

    @property
    def is_circulant(self) -> bool:
        return self.distance_convention == MINIMAL_IMAGE

    @cached_property
    def matrix(self) -> np.ndarray:
        if self.is_circulant:
            matrix = scipy.linalg.circulant(self.values)
        else:
            matrix = scipy.linalg.toeplitz(self.values)
        matrix.flags.writeable = False
        return matrix

    def min_eigenvalue(self) -> float:
        # circulant: the spectrum is the DFT of the first column
        if self.is_circulant:
            return float(np.min(scipy.fft.fft(self.values).real))
        return float(scipy.linalg.eigvalsh(self.matrix)[0])


def separation(n_sites: int, distance_convention: str = MINIMAL_IMAGE) -> np.ndarray:
    d = np.arange(n_sites)
    if distance_convention == LINEAR:
        return d
    return np.minimum(d, n_sites - d)


def pointer_kernel(spec: PointerSpec, n_sites: int) -> DampingKernel:
    """Gaussian pointer damping exp(-alpha^2 dist^2 / 4)."""
    dist = separation(n_sites, spec.distance_convention).astype(np.float64)
    values = np.exp(-spec.alpha ** 2 * dist ** 2 / 4.0)
    logger.debug("pointer kernel alpha=%s width=%.3g (%s), nearest-neighbour damping %.6g",
                 spec.alpha, spec.width, spec.distance_convention, values[1] if n_sites > 1 else 1.0)
    return DampingKernel(values, spec.distance_convention)


def kernel_channel(rho: DensityMatrix, kernel: DampingKernel) -> DensityMatrix:
    """rho[m, n] -> rho[m, n] * K[m, n]; diagonal and trace are exactly preserved."""
    require_basis(rho, POSITION, 'kernel_channel')
    if kernel.n_sites != rho.n_sites:
        raise DomainError(f"kernel has {kernel.n_sites} entries, density matrix has {rho.n_sites} sites")
    return DensityMatrix(rho.entries * kernel.matrix, POSITION)


def momentum_transfer_profile(kernel: DampingKernel) -> np.ndarray:
    """
    Distribution g with p'(k) = sum_j g(j) p(k - j) under kernel_channel.
    Real, symmetric (g(j) = g(N - j)) and summing to one; circulant kernels only.
    """
    if not kernel.is_circulant:
        raise KernelError("momentum transfer profile is only defined for minimal-image kernels")
    return scipy.fft.fft(kernel.values).real / kernel.n_sites

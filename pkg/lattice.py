# lattice.py
"""
Periodic lattice for a discretised free particle.

Natural units throughout: hbar, the lattice spacing and the inverse mass are
all one, so the energy of momentum index k is k^2/2 folded at k = N/2.
Position-space phase exp(+2 pi i k0 n / N) is momentum index +k0; the forward
transform is numpy's sign convention with orthonormal scaling.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from numbers import Integral, Real

import numpy as np
import scipy.fft
import scipy.linalg

from utils.constants import (
    DISPLAY_TIME_FACTOR, HERMITIAN_TOLERANCE, MIN_N_SITES, MOMENTUM, NORM_TOLERANCE,
    ORACLE_MAX_SITES, POSITION, PSD_TOLERANCE, TRACE_TOLERANCE
)
from utils.exceptions import ContractViolation, DomainError, OracleRefusal

logger = logging.getLogger(__name__)

BASES = (POSITION, MOMENTUM)


@dataclass(frozen=True)
class LatticeConfig:
    n_sites: int = 256
    display_time_factor: float = DISPLAY_TIME_FACTOR

    def __post_init__(self):
        n = self.n_sites
        if not isinstance(n, Integral) or n < MIN_N_SITES or n & (n - 1):
            raise DomainError(f"n_sites must be a power of two >= {MIN_N_SITES}, got {n!r}")
        if not isinstance(self.display_time_factor, Real) or not self.display_time_factor > 0:
            raise DomainError(f"display_time_factor must be positive, got {self.display_time_factor!r}")

    def to_natural(self, display_time: float) -> float:
        return display_time / self.display_time_factor

    def to_display(self, natural_time: float) -> float:
        return natural_time * self.display_time_factor


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    basis: str = POSITION

    def __post_init__(self):
        _check_basis_name(self.basis)
        amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if amplitudes.ndim != 1:
            raise ContractViolation(f"state amplitudes must be one-dimensional, got shape {amplitudes.shape}")
        object.__setattr__(self, 'amplitudes', amplitudes)
        norm = np.vdot(amplitudes, amplitudes).real
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ContractViolation(f"state is not normalised: sum |a|^2 = {norm!r}")

    @property
    def n_sites(self) -> int:
        return self.amplitudes.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray
    basis: str = POSITION

    def __post_init__(self):
        _check_basis_name(self.basis)
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ContractViolation(f"density matrix must be square, got shape {entries.shape}")
        object.__setattr__(self, 'entries', entries)

    @property
    def n_sites(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def min_eigenvalue(self) -> float:
        # symmetrised so round-off asymmetry does not leak into the spectrum
        hermitian = (self.entries + self.entries.conj().T) / 2
        return float(scipy.linalg.eigvalsh(hermitian)[0])

    def validate(self, tol: float = HERMITIAN_TOLERANCE, check_psd: bool = False):
        """Raises ContractViolation unless the matrix is Hermitian, unit trace and (optionally) PSD."""
        if self.hermiticity_error() > tol:
            raise ContractViolation(f"density matrix is not Hermitian (error {self.hermiticity_error():.3e})")
        if abs(self.trace() - 1.0) > max(tol, TRACE_TOLERANCE):
            raise ContractViolation(f"density matrix trace is {self.trace()!r}, expected 1")
        if check_psd and self.min_eigenvalue() < -PSD_TOLERANCE:
            raise ContractViolation(f"density matrix has eigenvalue {self.min_eigenvalue():.3e} < -{PSD_TOLERANCE}")
        return self


def _check_basis_name(basis):
    if basis not in BASES:
        raise ContractViolation(f"basis must be one of {BASES}, got {basis!r}")


def require_basis(obj, basis: str, operation: str):
    if obj.basis != basis:
        raise ContractViolation(f"{operation} expects a {basis}-basis input, got {obj.basis}")


def dispersion(k: int, n_sites: int) -> float:
    """Energy of momentum index k: k^2/2 up to N/2, (N-k)^2/2 beyond."""
    if not isinstance(k, Integral) or not 0 <= k < n_sites:
        raise DomainError(f"momentum index must be an integer in [0, {n_sites}), got {k!r}")
    if k <= n_sites // 2:
        return k * k / 2.0
    return (n_sites - k) ** 2 / 2.0


@lru_cache(maxsize=None)
def dispersion_table(n_sites: int) -> np.ndarray:
    k = np.arange(n_sites)
    folded = np.where(k <= n_sites // 2, k, n_sites - k).astype(np.float64)
    table = folded ** 2 / 2.0
    table.flags.writeable = False
    return table


@lru_cache(maxsize=16)
def phase_table(t: float, n_sites: int) -> np.ndarray:
    """Matrix of exp{i t [E(k') - E(k)]}; the diagonal is exactly 1."""
    energies = dispersion_table(n_sites)
    phases = np.exp(1j * t * (energies[np.newaxis, :] - energies[:, np.newaxis]))
    phases.flags.writeable = False
    return phases


def to_momentum_basis(state: StateVector) -> StateVector:
    require_basis(state, POSITION, 'to_momentum_basis')
    return StateVector(scipy.fft.fft(state.amplitudes, norm='ortho'), MOMENTUM)


def to_position_basis(state: StateVector) -> StateVector:
    require_basis(state, MOMENTUM, 'to_position_basis')
    return StateVector(scipy.fft.ifft(state.amplitudes, norm='ortho'), POSITION)


def density_to_momentum(rho: DensityMatrix, workers: int | None = None) -> DensityMatrix:
    """F rho F^dagger: forward transform down the columns, inverse along the rows."""
    require_basis(rho, POSITION, 'density_to_momentum')
    half = scipy.fft.fft(rho.entries, axis=0, norm='ortho', workers=workers)
    return DensityMatrix(scipy.fft.ifft(half, axis=1, norm='ortho', workers=workers), MOMENTUM)


def density_to_position(rho: DensityMatrix, workers: int | None = None) -> DensityMatrix:
    """F^dagger rho F, the inverse of density_to_momentum."""
    require_basis(rho, MOMENTUM, 'density_to_position')
    half = scipy.fft.ifft(rho.entries, axis=0, norm='ortho', workers=workers)
    return DensityMatrix(scipy.fft.fft(half, axis=1, norm='ortho', workers=workers), POSITION)


def evolve_density(rho: DensityMatrix, t: float) -> DensityMatrix:
    """
    Free evolution for natural time t (negative runs backwards).

    Entry (k, k') picks up exp{i t [E(k') - E(k)]}, so the momentum
    distribution on the diagonal is left bit-for-bit unchanged.
    """
    require_basis(rho, MOMENTUM, 'evolve_density')
    if t == 0:
        return DensityMatrix(rho.entries.copy(), MOMENTUM)
    return DensityMatrix(rho.entries * phase_table(float(t), rho.n_sites), MOMENTUM)


def evolve_position_density(rho: DensityMatrix, t: float, workers: int | None = None) -> DensityMatrix:
    """Position -> momentum -> evolve -> position, the free half of one measurement cycle."""
    return density_to_position(evolve_density(density_to_momentum(rho, workers), t), workers)


@lru_cache(maxsize=8)
def momentum_eigenvectors(n_sites: int) -> np.ndarray:
    """Columns are |P_k> written in the position basis."""
    n = np.arange(n_sites)
    vectors = np.exp(2j * np.pi * np.outer(n, n) / n_sites) / np.sqrt(n_sites)
    vectors.flags.writeable = False
    return vectors


def dense_hamiltonian(n_sites: int) -> np.ndarray:
    vectors = momentum_eigenvectors(n_sites)
    return (vectors * dispersion_table(n_sites)) @ vectors.conj().T


def dense_oracle_evolve(rho: DensityMatrix, t: float) -> DensityMatrix:
    """
    Reference evolution U rho U^dagger with U = exp(-iHt) from an explicit
    eigendecomposition of the position-basis Hamiltonian. Test scale only.
    """
    require_basis(rho, POSITION, 'dense_oracle_evolve')
    if rho.n_sites > ORACLE_MAX_SITES:
        raise OracleRefusal(f"dense oracle is limited to {ORACLE_MAX_SITES} sites, got {rho.n_sites}")

    hamiltonian = dense_hamiltonian(rho.n_sites)
    energies, eigenvectors = scipy.linalg.eigh((hamiltonian + hamiltonian.conj().T) / 2)
    unitary = (eigenvectors * np.exp(-1j * energies * t)) @ eigenvectors.conj().T
    return DensityMatrix(unitary @ rho.entries @ unitary.conj().T, POSITION)

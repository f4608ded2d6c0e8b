# states.py

from dataclasses import dataclass
from numbers import Integral, Real

import numpy as np

from lattice import DensityMatrix, StateVector
from utils.constants import DEFAULT_PACKET_WIDTH, NORM_TOLERANCE, POSITION
from utils.exceptions import ContractViolation, DomainError


@dataclass(frozen=True)
class GaussianPacketSpec:
    center: int
    width: float = DEFAULT_PACKET_WIDTH
    momentum_index: int = 0

    def validate(self, n_sites: int):
        if not isinstance(self.center, Integral) or not 0 <= self.center < n_sites:
            raise DomainError(f"packet centre must be a site in [0, {n_sites}), got {self.center!r}")
        if not isinstance(self.width, Real) or not self.width > 0:
            raise DomainError(f"packet width must be positive, got {self.width!r}")
        if not isinstance(self.momentum_index, Integral) or not -n_sites // 2 < self.momentum_index <= n_sites // 2:
            raise DomainError(f"momentum index must lie in (-{n_sites // 2}, {n_sites // 2}], got {self.momentum_index!r}")
        return self


def build_gaussian_packet(spec: GaussianPacketSpec, n_sites: int) -> StateVector:
    """
    Gaussian wavepacket N * exp(-(n - n0)^2 / w^2) * exp(2 pi i k0 n / N).

    The envelope uses the minimal-image displacement from n0 so the packet
    is a proper periodic state even when its tail crosses the seam.
    """
    spec.validate(n_sites)
    n = np.arange(n_sites)
    offset = np.abs(n - spec.center)
    displacement = np.minimum(offset, n_sites - offset)
    envelope = np.exp(-(displacement / spec.width) ** 2)
    amplitudes = envelope * np.exp(2j * np.pi * spec.momentum_index * n / n_sites)
    return StateVector(amplitudes / np.linalg.norm(amplitudes), POSITION)


def build_position_eigenstate(site: int, n_sites: int) -> StateVector:
    if not isinstance(site, Integral) or not 0 <= site < n_sites:
        raise DomainError(f"site must be in [0, {n_sites}), got {site!r}")
    amplitudes = np.zeros(n_sites, dtype=np.complex128)
    amplitudes[site] = 1.0
    return StateVector(amplitudes, POSITION)


def density_from_pure(state: StateVector) -> DensityMatrix:
    """|psi><psi| in the basis the state is written in."""
    norm = state.probabilities().sum()
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise ContractViolation(f"cannot build a density matrix from an unnormalised state (norm {norm!r})")
    return DensityMatrix(np.outer(state.amplitudes, state.amplitudes.conj()), state.basis)

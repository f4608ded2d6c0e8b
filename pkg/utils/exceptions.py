# exceptions.py


class SimulationError(Exception):
    """Base class for every error raised by the simulator."""


class DomainError(SimulationError, ValueError):
    """An argument lies outside the range an operation is defined on."""


class ContractViolation(SimulationError, ValueError):
    """An input breaks an operation's precondition (wrong basis, unnormalised state)."""


class OracleRefusal(SimulationError):
    """The dense oracle was asked for a lattice too large to diagonalise."""


class KernelError(SimulationError, ValueError):
    """A damping kernel is not a valid Schur multiplier (not PSD or out of [0, 1])."""


class ScenarioError(SimulationError, ValueError):
    """A scenario file is invalid or cannot be transformed as requested."""


class ReportError(SimulationError):
    """Output files could not be written."""

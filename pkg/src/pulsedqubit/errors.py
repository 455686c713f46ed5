"""Exception types raised across the package."""


class PulsedQubitError(Exception):
    """Base class for all package errors."""


class NonPhysicalState(PulsedQubitError, ValueError):
    """Bloch vector longer than one where a density matrix is required."""


class DegenerateState(PulsedQubitError, ValueError):
    """Density matrix too close to maximally mixed to fix an eigenbasis."""


class OutOfPulse(PulsedQubitError, ValueError):
    """Time argument outside the rectangular pulse window [0, T]."""


class RequiresResonance(PulsedQubitError, ValueError):
    """The first-order counter-rotating solution only exists at zero detuning."""


class InvalidConfig(PulsedQubitError, ValueError):
    pass


class StepTooLarge(PulsedQubitError, ValueError):
    """RK4 step does not resolve the drive or the 2*omega_l oscillation."""


class InvalidSpec(PulsedQubitError, ValueError):
    pass


class MalformedCsv(PulsedQubitError, ValueError):
    pass

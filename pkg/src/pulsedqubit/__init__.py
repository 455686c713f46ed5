"""Single qubit driven by a rectangular pulse, inside and outside the RWA."""
from .errors import (
    DegenerateState,
    InvalidSpec,
    MalformedCsv,
    NonPhysicalState,
    OutOfPulse,
    RequiresResonance,
    StepTooLarge,
)
from .measures import ExchangeMode, Measure, exchange_information, fidelity, measure_series, orthogonality_overlaps
from .oracle import IntegratorSpec, Mode, bloch_rhs, integrate
from .propagators import DriveConfig, Scheme, evolve, nonrwa_matrix, rwa_matrix, trajectory
from .states import (
    BlochVector,
    QubitDensity,
    StateAngles,
    bloch_from_angles,
    bloch_from_density,
    density_from_bloch,
    eigensystem_2x2,
)

__version__ = "0.1.0"

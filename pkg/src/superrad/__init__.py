"""Superradiance of star-coupled bosonic oscillators.

Closed-form collective decay (intensity, dark fraction, radiance class,
rung populations, two-time correlations) with a brute-force master-equation
oracle, the two-level-atom reference, and state-preparation protocols.
"""

from .collective import BasisIndex, CouplingConfig, collective_transform, enumerate_basis
from .dynamics import (
    Radiance,
    RadianceClass,
    classify,
    dark_fraction,
    intensity_series,
    ladder_populations,
    split_intensity,
    two_time_correlation,
)
from .errors import (
    BasisSizeError,
    IntegrationError,
    NoClosedFormError,
    NumericalContractError,
    SuperradError,
    TruncationError,
    ValidationError,
)
from .states import (
    CollectiveDisplaced,
    CollectiveSqueezedVacuum,
    DickeSuperposition,
    IncoherentMixture,
    ModeMoments,
    MultimodeFock,
    ProductSqueezedCoherent,
    moments_of,
    moon_state,
)

__version__ = "0.1.0"

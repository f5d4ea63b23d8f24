from ._core import (
    DerivedParams,
    DomainError,
    ModelSpec,
    NumericalError,
    OperatorSet,
    block_entropy,
    build_operators,
    classify_phase,
    derive_params,
    dispersion,
    evolve,
    gaussian_entropy,
    initial_correlator,
    many_body_spectrum,
    msee_short_time,
    spectrum,
    two_site,
)

__version__ = "0.1.0"

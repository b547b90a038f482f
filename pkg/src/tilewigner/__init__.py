"""Wigner functions of a free scalar field built from local modes on a tiled Cauchy slab."""

__version__ = "0.1.0"

from .errors import (
    BandwidthWarning,
    CausalOverlapError,
    ConfigError,
    CostGuardError,
    CutoffError,
    DegenerateModeError,
    IllConditionedError,
    InfraredDivergenceError,
    NormalizationError,
    NotGaussianError,
    NumericalDomainError,
    OrderingDomainError,
)
from .geometry import SpacetimeSpec, Tile, TilingLayout, build_tiling, check_spacelike, covariant_scales, layout_from_tiles
from .quadrature import MomentumGrid, reference_grid
from .smearing import BumpProfile, LocalModePair, SmearingFunction, make_local_mode, momentum_transform, rescale_mode
from .propagator import (
    FieldState,
    MomentumEngine,
    OneParticleProfile,
    causal_smeared,
    overlap_beta,
    thermal_wightman,
    wightman_smeared,
)

from .modes import (
    CCRReport,
    CovarianceMatrix,
    LocalModeSet,
    assemble_modes,
    ccr_check,
    covariance,
    symplectic_eigenvalues,
    symplectic_form,
    wightman_quadratic_form,
)
from .wigner import (
    CharacteristicFunction,
    PhaseGrid,
    QuasiDistribution,
    characteristic,
    characteristic_function,
    marginals,
    mode_overlap,
    negativity,
    s_ordered,
    wigner_gaussian,
    wigner_numeric,
)
from .symmetry import PoincareElement, TransformedSmearing, invariance_check, transform_smearing

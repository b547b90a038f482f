# %% [markdown]
# # Negativity from a single particle
#
# Gaussian states have non-negative Wigner functions. A one-particle state
# does not: restricted to a local mode it is a mixture of the local vacuum
# and a local single excitation, and the latter makes the Wigner function
# dip below zero near the origin.
#
# The reference point is an ideal oscillator in its first Fock state, whose
# negativity volume ``\int |W| - \int W`` is ``4 exp(-1/2) - 2`` by radial
# integration.

# %%
import math
import warnings

import numpy as np

from tilewigner import (
    BumpProfile,
    CharacteristicFunction,
    FieldState,
    LocalModeSet,
    OneParticleProfile,
    PhaseGrid,
    SpacetimeSpec,
    assemble_modes,
    build_tiling,
    mode_overlap,
    reference_grid,
    wigner_numeric,
)
from tilewigner.errors import BandwidthWarning

warnings.simplefilter("ignore", BandwidthWarning)

ideal = CharacteristicFunction.from_matrices(0.5 * np.eye(2), 0.5 * np.eye(2), tag="fock1")
fock = wigner_numeric(None, None, PhaseGrid((6.0, 6.0), (1601, 1601)), chi_fn=ideal)
print(f"ideal Fock-1 negativity {fock.negativity:.9f}, closed form {4 * math.exp(-0.5) - 2:.9f}")

# %% [markdown]
# Now a particle in a Gaussian wavepacket centred on tile 1. Its momentum
# width controls how well it matches the local mode; the better the match,
# the more of the Fock-state negativity survives.

# %%
spec = SpacetimeSpec()
grid = reference_grid(1)
modes = assemble_modes(build_tiling(spec, 4, 1.0, 0.05, 0.3), BumpProfile(), spec, grid)
single = LocalModeSet(modes.pairs[1:2], spec)

for sigma_k in (1.0, 2.0, 3.0, 4.0, 6.0):
    state = FieldState.one_particle(OneParticleProfile(sigma_k, k0=(0.0,), x_c=(-0.65,)))
    chi = CharacteristicFunction(single, state, grid)
    dist = wigner_numeric(single, state, PhaseGrid.auto(chi.moment_matrix(), nodes=201, width=6.0), chi_fn=chi)
    beta2 = float(np.sum(np.abs(chi.overlaps) ** 2))
    print(f"sigma_k {sigma_k:3.1f}  |beta|^2 {beta2:.3f}  overlap {mode_overlap(chi):.3f}  negativity {dist.negativity:.4f}  min W {dist.min_value:.4f}")

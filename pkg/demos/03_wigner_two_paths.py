# %% [markdown]
# # Wigner functions by two independent routes
#
# For Gaussian states the Wigner function has a closed form. The same
# function also follows from direct quadrature of the symplectic Fourier
# transform of the characteristic function. Agreement of the two is a strong
# check on conventions (signs, factors of ``2 pi``, ordering of ``x`` and ``p``).

# %%
import warnings

import numpy as np

from tilewigner import (
    BumpProfile,
    FieldState,
    LocalModeSet,
    PhaseGrid,
    SpacetimeSpec,
    assemble_modes,
    build_tiling,
    covariance,
    marginals,
    s_ordered,
    wigner_gaussian,
    wigner_numeric,
)
from tilewigner.errors import BandwidthWarning
from tilewigner.quadrature import reference_grid

warnings.simplefilter("ignore", BandwidthWarning)

spec = SpacetimeSpec()
grid = reference_grid(1)
modes = assemble_modes(build_tiling(spec, 4, 1.0, 0.05, 0.3), BumpProfile(), spec, grid)
pair = LocalModeSet(modes.pairs[1:3], spec)

# %%
for state in (FieldState.vacuum(), FieldState.thermal(1.0)):
    cov = covariance(pair, state, grid)
    pg = PhaseGrid.auto(cov.sigma, nodes=21)
    exact = wigner_gaussian(pair, state, pg, cov=cov)
    num = wigner_numeric(pair, state, pg, grid)
    dev = np.max(np.abs(exact.values - num.values)) / exact.values.max()
    print(f"{state.tag:18s} normalization {exact.normalization:.8f} / {num.normalization:.8f}  max deviation {dev:.2e}")

# %% [markdown]
# The s-ordered family interpolates between the Wigner function (``s = 0``)
# and the Husimi-like distribution (``s = -1``), which is a Gaussian
# smoothing of it and therefore lower and wider.

# %%
single = LocalModeSet(modes.pairs[1:2], spec)
for s in (0.0, -0.5, -1.0):
    d = s_ordered(single, FieldState.vacuum(), s, grid=grid)
    print(f"s = {s:4.1f}  peak {d.values.max():.5f}  normalization {d.normalization:.8f}")

# %% [markdown]
# Marginals integrate out everything but one coordinate and are ordinary
# probability densities.

# %%
w = wigner_gaussian(single, FieldState.vacuum(), grid=grid)
px = marginals(w, 0, "position")
print("position marginal integrates to", np.sum(px * w.grid.axis_weights()[0]))

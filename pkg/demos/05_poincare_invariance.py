# %% [markdown]
# # Poincare invariance of the vacuum
#
# Moving every smearing function by a boost and a translation leaves vacuum
# correlations unchanged, up to quadrature error that falls as the grid is
# refined. A thermal state singles out a rest frame, so it fails the same
# test by a wide margin; translations alone leave it intact.

# %%
import warnings

from tilewigner import BumpProfile, FieldState, PoincareElement, SpacetimeSpec, assemble_modes, build_tiling, invariance_check, reference_grid
from tilewigner.errors import BandwidthWarning

warnings.simplefilter("ignore", BandwidthWarning)

spec = SpacetimeSpec()
grid = reference_grid(1)
modes = assemble_modes(build_tiling(spec, 4, 1.0, 0.05, 0.3), BumpProfile(), spec, grid)

boost = PoincareElement(translation=(0.3, 0.7), rapidity=0.5)
shift = PoincareElement(translation=(0.3, 0.7), rapidity=0.0)

# %%
for g in (grid, grid.refined()):
    print(f"vacuum, boost, k_max {g.k_max:5.1f}: {invariance_check(modes, boost, FieldState.vacuum(), g):.2e}")
print(f"thermal, boost      : {invariance_check(modes, boost, FieldState.thermal(1.0), grid):.3f}")
print(f"thermal, translation: {invariance_check(modes, shift, FieldState.thermal(1.0), grid):.2e}")

# %%
print(boost.lorentz())

# %% [markdown]
# # Covariance matrices and the uncertainty principle
#
# For a Gaussian state every local-mode statistic follows from the smeared
# Wightman function. Here we compare the vacuum, a thermal state and a
# coherent state on the four-tile reference layout.

# %%
import warnings

import numpy as np

from tilewigner import BumpProfile, FieldState, LocalModeSet, SpacetimeSpec, assemble_modes, build_tiling, covariance, reference_grid
from tilewigner.errors import BandwidthWarning

warnings.simplefilter("ignore", BandwidthWarning)
np.set_printoptions(precision=4, suppress=True, linewidth=110)

spec = SpacetimeSpec()
grid = reference_grid(1)
modes = assemble_modes(build_tiling(spec, 4, 1.0, 0.05, 0.3), BumpProfile(), spec, grid)

vacuum = covariance(modes, FieldState.vacuum(), grid)
print(vacuum.sigma)

# %% [markdown]
# Symplectic eigenvalues never drop below ``hbar / 2``. Each local mode is
# entangled with the rest of the field, so even the vacuum restricted to a
# single tile is mixed: its lone symplectic eigenvalue sits strictly above
# ``1/2``.

# %%
print("vacuum, 4 modes :", vacuum.symplectic_eigenvalues())
single = LocalModeSet(modes.pairs[1:2], spec)
print("vacuum, 1 mode  :", covariance(single, FieldState.vacuum(), grid).symplectic_eigenvalues())

# %%
for beta in (5.0, 1.0, 0.3):
    th = covariance(modes, FieldState.thermal(beta), grid)
    print(f"thermal beta={beta:3.1f}:", th.symplectic_eigenvalues())

# %% [markdown]
# A coherent state shifts the mean and leaves the covariance alone.

# %%
coh = covariance(modes, FieldState.coherent([0.8, -0.5j, 0.0, 0.2 + 0.2j]), grid)
print("same sigma:", np.array_equal(coh.sigma, vacuum.sigma))
print("mean      :", coh.mean)

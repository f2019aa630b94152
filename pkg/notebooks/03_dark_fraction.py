# %% [markdown]
# # How much energy stays trapped?
#
# For product squeezed coherent states with uniform couplings the trapped
# share depends only on the ratio of squeezing photons to coherent photons.
# Coherent light is fully correlated and drains completely into the bright
# mode; squeezed vacuum in every mode is uncorrelated between modes and keeps
# the normal share 1 - 1/N.

# %%
import numpy as np

from superrad import CouplingConfig, classify
from superrad.dynamics import sweep_fraction
from superrad.states import CollectiveSqueezedVacuum, ProductSqueezedCoherent

cfg = CouplingConfig.uniform(10)
alphas = np.linspace(0, 2, 21)
rs = np.linspace(0, 2, 21)
closed, piped = sweep_fraction(cfg, alphas, rs)
print("alpha = 0 row:", np.unique(closed[0, 1:]))
print("r = 0 column:", np.unique(closed[1:, 0]))
print("closed form vs moments route:", np.nanmax(np.abs(closed - piped)))

# %% [markdown]
# ## Squeezing the bright mode instead
#
# Squeezing applied to each oscillator separately is normal, while the same
# squeezing applied to the collective bright mode puts every quantum where
# it can radiate.

# %%
print(classify(ProductSqueezedCoherent((0.0,) * 10, (0.5,) * 10), cfg))
print(classify(CollectiveSqueezedVacuum(0.5), cfg))

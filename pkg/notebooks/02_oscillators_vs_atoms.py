# %% [markdown]
# # Oscillators versus two-level atoms
#
# Put five quanta into five emitters.  With harmonic oscillators the bright
# mode holds all five at once and emits with intensity 25 Gamma.  Five
# excited two-level atoms start at only 5 Gamma and build up a burst later.

# %%
import numpy as np

from superrad import BasisIndex, CouplingConfig
from superrad.atomic import atomic_populations, initial_intensity_comparison
from superrad.dynamics import intensity_series, ladder_populations
from superrad.states import DickeSuperposition

N = 5
tau = np.linspace(0, 3, 301)
cfg = CouplingConfig.uniform(N)
bright = DickeSuperposition.single(BasisIndex.ground(N, N))

boson = intensity_series(bright, cfg, tau)["intensity"]
atoms = atomic_populations(N, tau)
atom_i = atoms.intensity()
print("initial intensities:", boson[0], atom_i[0])
k = int(np.argmax(atom_i))
print(f"atomic burst peaks at Gamma t = {tau[k]:.3f} with I = {atom_i[k]:.3f}")

# %% [markdown]
# ## Populations
#
# For the atoms the index counts photons already emitted.  The bosonic rung
# populations follow a binomial-like cascade instead.

# %%
boson_pops = ladder_populations(bright, cfg, tau).values
for t in (0.0, 0.2, 0.5, 1.0):
    i = int(np.searchsorted(tau, t))
    print(f"t={t:4.1f}  atoms", np.round(atoms.values[:, i], 3), "  rungs", np.round(boson_pops[:, i], 3))

# %% [markdown]
# ## Partial excitation
#
# With K of the N emitters excited the two pictures agree only for K <= 1.

# %%
for K in range(N + 1):
    print(K, initial_intensity_comparison(N, K))

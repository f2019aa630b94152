# %% [markdown]
# # Collective decay of star-coupled oscillators
#
# N oscillators talk to one lossy central mode.  Once that mode is
# eliminated only one collective combination of the oscillators, the bright
# mode, loses energy.  Everything else is trapped.  This script walks through
# the bookkeeping for a few states and checks it against a brute-force
# master-equation run.

# %%
import os

import numpy as np

from superrad import BasisIndex, CouplingConfig, classify, collective_transform, enumerate_basis
from superrad.dynamics import intensity_series, ladder_populations, mrl_series
from superrad.oracle import evolve_reduced, prepare_density
from superrad.plots import line_plot_svg, write_svg
from superrad.states import DickeSuperposition, MultimodeFock

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "figures")
os.makedirs(OUT, exist_ok=True)

# %% [markdown]
# ## The collective transform
#
# Rows of the orthogonal matrix below define the collective modes.  The last
# row is proportional to the couplings and is the only mode that radiates.

# %%
cfg = CouplingConfig((1.0, 2.0, 0.5))
U = collective_transform(cfg)
print(np.round(U, 4))
print("orthogonality error:", np.max(np.abs(U @ U.T - np.eye(3))))
print("rate Gamma =", cfg.gamma)

# %% [markdown]
# ## Basis states
#
# A basis state is labelled by its dark occupations and its rung, the number
# of bright quanta.  For three modes and up to two quanta:

# %%
for idx in enumerate_basis(3, 2):
    print(idx, "  L =", sum(idx.degeneracy), " R =", idx.rung)

# %% [markdown]
# ## Intensity and dark fraction
#
# A single excitation parked in one oscillator is a superposition of bright
# and dark pieces.  The bright piece leaves at rate N Gamma; the dark piece
# stays forever.

# %%
tau = np.linspace(0, 2, 81)
fock = MultimodeFock((1, 0, 0))
series = mrl_series(fock, cfg, tau)
print(classify(fock, cfg))
print("M(inf) approx", series["M"][-1], " L =", series["L"][0])

# %%
dicke = DickeSuperposition.single(BasisIndex((0, 0), 3))
print(classify(dicke, cfg))
curves = {
    "Fock (1,0,0)": intensity_series(fock, cfg, tau)["intensity"],
    "bright rung 3": intensity_series(dicke, cfg, tau)["intensity"],
}
write_svg(line_plot_svg(tau, curves, "Intensity", "Gamma t", "I / Gamma"), os.path.join(OUT, "intensity.svg"))

# %% [markdown]
# ## Rung populations
#
# Starting on rung 3 the populations cascade down one rung at a time.  The
# closed form is compared with the master-equation oracle below.

# %%
pops = ladder_populations(dicke, cfg, tau)
rho = prepare_density(dicke, cfg, 3)
rec = evolve_reduced(rho, cfg, tau / cfg.gamma)
print("closed-form M vs oracle M:", np.max(np.abs(mrl_series(dicke, cfg, tau)["M"] - rec["M"])))
write_svg(
    line_plot_svg(tau, {f"rung {r}": pops.values[r] for r in range(4)}, "Rung populations", "Gamma t", "P"),
    os.path.join(OUT, "rungs.svg"),
)

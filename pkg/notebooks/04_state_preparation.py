# %% [markdown]
# # Preparing collective states
#
# Two routes: a coupled-waveguide array that mixes single photons between
# guides, and a qubit that climbs the Fock ladder of one collective mode with
# alternating rotation and exchange pulses.

# %%
import math

import numpy as np

from superrad import CouplingConfig, classify
from superrad.preparation import (
    law_eberly_fidelity,
    law_eberly_simulate,
    law_eberly_synthesize,
    multimode_expansion,
    waveguide_dark_fraction,
)

cfg = CouplingConfig.uniform(3)
J = 1.0
for t in np.linspace(0, math.pi / (2 * math.sqrt(2)), 5):
    f1 = waveguide_dark_fraction(1, J, t, cfg)
    f2 = waveguide_dark_fraction(2, J, t, cfg)
    print(f"J t = {t:.3f}   F(outer) = {f1:.4f}   F(centre) = {f2:.4f}")

# %% [markdown]
# ## Pulse synthesis
#
# Pick a target superposition of the bright mode, synthesize the schedule,
# and run it forward.

# %%
target = np.array([0.5, 0.5j, -0.5, 0.5])
seq = law_eberly_synthesize(target, cfg.g)
print(seq.to_text())
print("fidelity:", law_eberly_fidelity(target, seq))
result = law_eberly_simulate(seq, cfg.g, max_quanta=4)
state = multimode_expansion(result.mode_amplitudes, cfg.g, cfg)
print(classify(state, cfg))

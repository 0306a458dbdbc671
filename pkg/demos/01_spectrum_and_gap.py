# Spectrum of the interpolating search Hamiltonian.
#
# H(s) only acts nontrivially on span{|m>, |psi0>}, so its two lowest levels
# come from a 2x2 block.  Here we compare that block with a dense N x N
# eigensolve and look at where the gap closes.

import math

import numpy as np

from adiasearch.model import uniform_state
from adiasearch.spectral import EffectiveHamiltonian, eigenvalues, full_spectrum, gap

N = 32
state = uniform_state(N, marked_index=5)
h = EffectiveHamiltonian.from_state(state)
print(f"N = {N}, marked amplitude a_m = {h.a_m:.5f}")

# Two lowest levels from the closed form vs the dense solver
print(f"{'s':>5} {'lambda1':>10} {'lambda2':>10} {'dense[0]':>10} {'dense[1]':>10} {'rest':>8}")
for s in np.linspace(0, 1, 6):
    lo, hi = eigenvalues(h, s)
    dense = full_spectrum(state, s)
    print(f"{s:5.2f} {lo:10.6f} {hi:10.6f} {dense[0]:10.6f} {dense[1]:10.6f} {dense[2:].mean():8.4f}")

# The gap is smallest halfway through, where it equals a_m = 1/sqrt(N)
ss = np.linspace(0, 1, 2001)
g = np.array([gap(h, s) for s in ss])
print(f"\nminimum gap {g.min():.6f} at s = {ss[g.argmin()]}; 1/sqrt(N) = {1 / math.sqrt(N):.6f}")

# Multiplying the Hamiltonian by c scales every level by c
for c in (1.0, 2.0, math.sqrt(N)):
    print(f"c = {c:6.3f}: gap at s=1/2 is {gap(h.with_scale(c), 0.5):.6f}")

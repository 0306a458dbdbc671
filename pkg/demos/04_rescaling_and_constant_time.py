# Rescaling the Hamiltonian.
#
# Multiplying H by c keeps its eigenvectors and multiplies the gap by c, so
# the local schedule finishes in T/c.  With c = sqrt(N) the running time no
# longer grows with N.

import math

import numpy as np

from adiasearch.dynamics import evolve
from adiasearch.schedule import Schedule, approx_total_time, total_time
from adiasearch.spectral import EffectiveHamiltonian

eps, n = 0.05, 64
a = 1 / math.sqrt(n)
ref = evolve(EffectiveHamiltonian(a), Schedule.local(a, eps), trace_samples=0)
for c in (0.5, 2.0, 8.0):
    run = evolve(EffectiveHamiltonian(a, c), Schedule.local(a, eps, c), trace_samples=0)
    diff = np.max(np.abs(run.final_state - ref.final_state))
    print(f"c = {c:4.1f}: T = {run.total_time:9.4f}  T*c = {run.total_time * c:9.4f}  "
          f"fidelity {run.fidelity:.8f}  max |d psi| {diff:.1e}")

print("\nc = sqrt(N):")
for n in (64, 256, 1024, 4096, 1 << 20):
    a = 1 / math.sqrt(n)
    exact = total_time(a, eps, math.sqrt(n))
    print(f"N = {n:8d}: T = {exact:8.4f}  (small-a_m form {approx_total_time(a, eps, math.sqrt(n)):.4f})")

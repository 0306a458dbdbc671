# Searching with a prior over where the marked item lives.
#
# Give every item of block i the amplitude sqrt(p_i / n_i).  The running time
# depends only on the marked item's amplitude, so a marked item in a
# likely block is found faster.

import math

from adiasearch.dynamics import evolve, evolve_full
from adiasearch.model import PriorPartition, build_prior_state, parse_partition, uniform_state
from adiasearch.schedule import Schedule, mean_time, no_prior_time, theorem2_time

eps = 0.05
part = parse_partition("0.8:500,0.2:500")
t_uniform = no_prior_time(part.n_total, eps)
for subset in (1, 2):
    t = theorem2_time(part, subset, eps)
    print(f"marked item in block {subset}: T = {t:8.2f}  ({t / t_uniform:.4f} of uniform)")
print(f"prior-averaged time {mean_time(part, eps):8.2f}  ({mean_time(part, eps) / t_uniform:.4f} of uniform)")
print(f"uniform search      {t_uniform:8.2f}")

# Amplitudes off the marked item do not matter: two different states with the
# same a_m evolve to the same success probability.
small = PriorPartition(16, ((4, 0.25), (12, 0.75)))
prior_state = build_prior_state(small, 2, 1)
flat = uniform_state(16, 9)
print(f"\na_m: prior {prior_state.a_m:.4f}, uniform {flat.a_m:.4f}")
for name, st in (("prior", prior_state), ("uniform", flat)):
    res = evolve_full(st, Schedule.for_state(st, eps))
    print(f"{name:>8}: fidelity {res.fidelity:.10f}, leakage {res.leakage:.1e}")

# Same thing without building the N-dimensional state at all
res = evolve(Schedule.local(prior_state.a_m, eps).hamiltonian(), Schedule.local(prior_state.a_m, eps))
print(f"    2-D : fidelity {res.fidelity:.10f}")

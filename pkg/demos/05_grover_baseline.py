# Discrete Grover search for comparison.
#
# Grover counts oracle calls, the adiabatic algorithm counts evolution time;
# both grow like sqrt(N), but the units are not interchangeable.

import math

from adiasearch.baseline import grover_closed_form, grover_optimal_iterations, grover_simulate
from adiasearch.schedule import total_time

eps = 0.05
print(f"{'N':>6} {'k_opt':>6} {'P(success)':>11} {'adiabatic T':>12}")
for n in (4, 16, 64, 256, 1024, 4096):
    k = grover_optimal_iterations(n)
    run = grover_simulate(n, k)
    assert abs(run.success_prob - grover_closed_form(n, k)) < 1e-12
    print(f"{n:6d} {k:6d} {run.success_prob:11.6f} {total_time(1 / math.sqrt(n), eps):12.2f}")

# Over-rotating past the optimum loses probability again
for k in range(0, 10):
    print(f"N=64, k={k}: {grover_simulate(64, k).success_prob:.4f}")

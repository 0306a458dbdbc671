# The local adiabatic schedule.
#
# Instead of ramping s linearly, the local schedule moves at ds/dt = eps g(s)^2:
# quickly where the gap is large, slowly near s = 1/2.  Its total time has
# an arctan closed form, which we check against direct quadrature.

import math

import numpy as np
from scipy import integrate

from adiasearch.schedule import Schedule, adiabaticity_report, approx_total_time, total_time
from adiasearch.spectral import unit_gap

a_m, eps = 1 / math.sqrt(256), 0.05
sched = Schedule.local(a_m, eps)
quad, _ = integrate.quad(lambda s: 1 / (eps * unit_gap(a_m, s) ** 2), 0, 1, points=[0.5])
print(f"closed form T = {sched.total_time:.6f}")
print(f"quadrature  T = {quad:.6f}")
print(f"pi sqrt(N) / (2 eps) = {approx_total_time(a_m, eps):.6f}")

# s(t): most of the time is spent near the gap minimum
for frac in np.linspace(0, 1, 11):
    t = frac * sched.total_time
    print(f"t/T = {frac:.1f}  s = {sched.s_of_t(t):.4f}")

# A linear ramp of the same length is far too fast around s = 1/2
for kind in ("local", "linear"):
    s = Schedule.local(a_m, eps) if kind == "local" else Schedule.linear(a_m, eps)
    rep = adiabaticity_report(s, 401)
    print(f"{kind:>6}: worst local ratio {rep.worst_local_ratio:8.3f} at s = {rep.worst_s:.3f}")

# Doubling N twice doubles T (asymptotically)
for n in (16, 256, 4096, 65536):
    print(f"N = {n:6d}  T(4N)/T(N) = {total_time(1 / math.sqrt(4 * n), eps) / total_time(1 / math.sqrt(n), eps):.4f}")

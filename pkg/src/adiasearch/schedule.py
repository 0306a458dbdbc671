"""Evolution schedules s(t) and running-time formulas.

The local schedule saturates the adiabatic condition at every s using the
bound |<E1|dH/ds|E0>| <= c, i.e. it solves ds/dt = eps * c * g(s)^2 where g
is the unscaled gap.  Integrating dt = ds / (eps c g^2) gives

    t(s) = [arctan(r (2s - 1)) + arctan(r)] / (2 eps a b c),   r = b / a,

with a = a_m and b = sqrt(1 - a_m^2).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate

from .model import AMPLITUDE_GUARD, InitialState, PriorPartition
from .spectral import EffectiveHamiltonian, transition_element, unit_gap

EPS_MAX = 0.5
# p_M / n_M above this breaks the small-amplitude approximation
SMALL_DENSITY = 0.01

Kind = Literal["local", "linear"]


def _check_params(a_m: float, epsilon: float, c: float) -> None:
    if not AMPLITUDE_GUARD < a_m < 1.0 - AMPLITUDE_GUARD:
        raise ValueError(f"a_m={a_m!r} must lie strictly inside (0, 1)")
    if not 0.0 < epsilon <= EPS_MAX:
        raise ValueError(f"epsilon={epsilon!r} outside (0, {EPS_MAX}]")
    if not c > 0:
        raise ValueError(f"scale factor must be positive, got {c!r}")


def local_time_of_s(a_m: float, epsilon: float, c: float, s: float) -> float:
    """Elapsed time at which the local schedule reaches ``s``."""
    _check_params(a_m, epsilon, c)
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s={s!r} outside [0, 1]")
    b = math.sqrt(1.0 - a_m * a_m)
    r = b / a_m
    if s > 0.5:
        # mirror so the small-s form below is used on both ends
        return total_time(a_m, epsilon, c) - local_time_of_s(a_m, epsilon, c, 1.0 - s)
    # atan(r(2s-1)) + atan(r) folded into one atan; the naive sum cancels near s = 0
    angle = math.atan2(2.0 * r * s, 1.0 + r * r * (1.0 - 2.0 * s))
    return angle / (2.0 * epsilon * a_m * b * c)


def total_time(a_m: float, epsilon: float, c: float = 1.0) -> float:
    """Exact running time of the local schedule,
    arctan(b / a) / (eps a b c)."""
    _check_params(a_m, epsilon, c)
    b = math.sqrt(1.0 - a_m * a_m)
    return math.atan(b / a_m) / (epsilon * a_m * b * c)


def approx_total_time(a_m: float, epsilon: float, c: float = 1.0) -> float:
    """Small-amplitude limit pi / (2 eps a_m c)."""
    _check_params(a_m, epsilon, c)
    return math.pi / (2.0 * epsilon * a_m * c)


def local_time_numeric(a_m: float, epsilon: float, c: float = 1.0, s: float = 1.0) -> float:
    """t(s) by adaptive quadrature of 1 / (eps c g(s)^2).

    Reference path for the closed form; not used by the schedules themselves.
    """
    _check_params(a_m, epsilon, c)

    def rate(x: float) -> float:
        g = unit_gap(a_m, x)
        return 1.0 / (epsilon * c * g * g)

    # split at the gap minimum, where the integrand peaks
    pieces = [(0.0, min(s, 0.5)), (0.5, s)] if s > 0.5 else [(0.0, s)]
    total = 0.0
    for lo, hi in pieces:
        val, _ = integrate.quad(rate, lo, hi, epsabs=1e-10, epsrel=1e-13, limit=200)
        total += val
    return total


def theorem2_time(
    partition: PriorPartition, marked_subset: int, epsilon: float, exact: bool = False
) -> float:
    """Running time when the marked item sits in ``marked_subset``.

    Default is the approximation sqrt(n_M / p_M) * pi / (2 eps); ``exact=True``
    evaluates :func:`total_time` at a_m = sqrt(p_M / n_M).
    """
    density = partition.density(marked_subset)
    if density > SMALL_DENSITY:
        warnings.warn(
            f"p_M/n_M = {density:.3g} is not small; the approximate time is unreliable",
            stacklevel=2,
        )
    a_m = math.sqrt(density)
    if exact:
        return total_time(a_m, epsilon)
    return approx_total_time(a_m, epsilon)


def mean_time(partition: PriorPartition, epsilon: float) -> float:
    """Prior-averaged approximate running time, (pi / 2 eps) sum_i sqrt(p_i n_i)."""
    if not 0.0 < epsilon <= EPS_MAX:
        raise ValueError(f"epsilon={epsilon!r} outside (0, {EPS_MAX}]")
    return math.pi / (2.0 * epsilon) * math.fsum(math.sqrt(p * n) for n, p in partition.subsets)


def no_prior_time(n_total: int, epsilon: float) -> float:
    """(pi / 2 eps) sqrt(N), the uninformed approximate running time."""
    return math.pi / (2.0 * epsilon) * math.sqrt(n_total)


@dataclass(frozen=True)
class Schedule:
    kind: Kind
    epsilon: float
    a_m: float
    scale_c: float
    total_time: float

    def __post_init__(self):
        if self.kind not in ("local", "linear"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        _check_params(self.a_m, self.epsilon, self.scale_c)
        if not self.total_time > 0:
            raise ValueError("total time must be positive")

    @classmethod
    def local(cls, a_m: float, epsilon: float, scale_c: float = 1.0) -> "Schedule":
        return cls("local", epsilon, a_m, scale_c, total_time(a_m, epsilon, scale_c))

    @classmethod
    def linear(
        cls, a_m: float, epsilon: float, scale_c: float = 1.0, T: float | None = None
    ) -> "Schedule":
        """Constant-rate ramp; by default as long as the local schedule."""
        if T is None:
            T = total_time(a_m, epsilon, scale_c)
        return cls("linear", epsilon, a_m, scale_c, T)

    @classmethod
    def for_state(
        cls, state: InitialState, epsilon: float, scale_c: float = 1.0, kind: Kind = "local"
    ) -> "Schedule":
        if kind == "local":
            return cls.local(state.a_m, epsilon, scale_c)
        return cls.linear(state.a_m, epsilon, scale_c)

    def hamiltonian(self) -> EffectiveHamiltonian:
        return EffectiveHamiltonian(self.a_m, self.scale_c)

    def s_of_t(self, t: float) -> float:
        return s_of_t(self, t)

    def t_of_s(self, s: float) -> float:
        if self.kind == "linear":
            if not 0.0 <= s <= 1.0:
                raise ValueError(f"s={s!r} outside [0, 1]")
            return s * self.total_time
        return local_time_of_s(self.a_m, self.epsilon, self.scale_c, s)

    def ds_dt(self, t: float) -> float:
        if self.kind == "linear":
            return 1.0 / self.total_time
        g = unit_gap(self.a_m, s_of_t(self, t))
        return self.epsilon * self.scale_c * g * g


def s_of_t(schedule: Schedule, t: float) -> float:
    T = schedule.total_time
    if not 0.0 <= t <= T:
        raise ValueError(f"t={t!r} outside [0, {T!r}]")
    if t == 0.0:
        return 0.0
    if t == T:
        return 1.0
    if schedule.kind == "linear":
        return t / T
    a = schedule.a_m
    b = math.sqrt(1.0 - a * a)
    rate = 2.0 * schedule.epsilon * a * b * schedule.scale_c
    s = 0.5 + 0.5 * (a / b) * math.tan(rate * (t - 0.5 * T))
    return min(1.0, max(0.0, s))


@dataclass(frozen=True)
class AdiabaticityReport:
    """Adiabatic-condition diagnostics for one schedule.

    ``ratio`` is the global D_max / g_min^2 figure; the local condition
    |ds/dt| <= eps g(s)^2 / |<E1|dH/ds|E0>| is checked pointwise and
    summarised by ``worst_local_ratio`` (<= 1 means satisfied everywhere) at
    ``worst_s``.
    """

    g_min: float
    d_max: float
    ratio: float
    epsilon_budget: float
    worst_local_ratio: float
    worst_s: float

    @property
    def globally_valid(self) -> bool:
        return self.ratio <= self.epsilon_budget

    @property
    def locally_valid(self) -> bool:
        return self.worst_local_ratio <= 1.0 + 1e-12


def adiabaticity_report(schedule: Schedule, samples: int = 201) -> AdiabaticityReport:
    if samples < 2:
        raise ValueError("need at least two samples")
    h = schedule.hamiltonian()
    c, eps = schedule.scale_c, schedule.epsilon
    d_max = 0.0
    worst, worst_s = -math.inf, 0.0
    for s in np.linspace(0.0, 1.0, samples):
        s = float(s)
        rate = schedule.ds_dt(schedule.t_of_s(s))
        element = transition_element(h, s)
        g = c * unit_gap(schedule.a_m, s)
        d_max = max(d_max, rate * element)
        local = rate * element / (eps * g * g)
        if local > worst:
            worst, worst_s = local, s
    g_min = c * schedule.a_m
    return AdiabaticityReport(
        g_min=g_min,
        d_max=d_max,
        ratio=d_max / (g_min * g_min),
        epsilon_budget=eps,
        worst_local_ratio=worst,
        worst_s=worst_s,
    )


def s_values(schedule: Schedule, ts: np.ndarray) -> np.ndarray:
    """Vectorized :func:`s_of_t` over a grid of times inside ``[0, T]``."""
    ts = np.asarray(ts, dtype=float)
    T = schedule.total_time
    if schedule.kind == "linear":
        s = ts / T
    else:
        a = schedule.a_m
        b = math.sqrt(1.0 - a * a)
        rate = 2.0 * schedule.epsilon * a * b * schedule.scale_c
        s = 0.5 + 0.5 * (a / b) * np.tan(rate * (ts - 0.5 * T))
    s = np.clip(s, 0.0, 1.0)
    s[ts <= 0.0] = 0.0
    s[ts >= T] = 1.0
    return s

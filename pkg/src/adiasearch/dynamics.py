"""Schroedinger evolution under a schedule, in the 2-D block and in full space.

Both routes integrate i dpsi/dt = H(s(t)) psi (hbar = 1) with classical
fixed-step RK4.  No renormalization is applied, so the norm drift is a
direct read-out of integrator error.  The step count starts from a
dimensionless density of steps per unit ``c*T`` and is doubled until the
final fidelity moves by less than ``FIDELITY_TOL``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .model import InitialState
from .schedule import Schedule, s_values
from .spectral import EffectiveHamiltonian, eigenvectors, full_matrix, oracle_cap

FIDELITY_TOL = 1e-8
NORM_TOL = 1e-9
STEPS_PER_UNIT = 4
MAX_STEPS = 1 << 23
TRACE_SAMPLES = 201


class ConvergenceError(RuntimeError):
    """Step doubling did not reach the fidelity tolerance."""


@dataclass(frozen=True)
class QuantumState2D:
    """Amplitudes on |alpha1> = |m> and |alpha2>."""

    c1: complex
    c2: complex

    @classmethod
    def from_array(cls, psi: np.ndarray) -> "QuantumState2D":
        return cls(complex(psi[0]), complex(psi[1]))

    def to_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2], dtype=complex)

    @property
    def norm2(self) -> float:
        return abs(self.c1) ** 2 + abs(self.c2) ** 2


@dataclass
class EvolutionResult:
    final_state: np.ndarray
    fidelity: float
    norm_drift: float
    total_time: float
    steps: int
    # (t, s, overlap with the instantaneous ground state)
    trace: list[tuple[float, float, float]] = field(default_factory=list, repr=False)
    # largest norm of the component outside span{|m>, |psi0>}; full space only
    leakage: float = 0.0

    @property
    def infidelity(self) -> float:
        return 1.0 - self.fidelity

    @property
    def min_overlap(self) -> float:
        return min((o for _, _, o in self.trace), default=math.nan)

    def state_2d(self) -> QuantumState2D:
        return QuantumState2D.from_array(self.final_state)


SGrid = Callable[[np.ndarray], np.ndarray]


def _rk4_2d(h: EffectiveHamiltonian, s_half: np.ndarray, dt: float, psi0: np.ndarray,
            record_every: int = 0):
    """RK4 on the 2x2 block.

    ``s_half[j]`` is s at time ``j * dt / 2``.  Returns the final state, the
    largest norm drift seen, and the states at every ``record_every`` steps.
    """
    a, c = h.a_m, h.scale_c
    a2, ab = a * a, a * math.sqrt(1.0 - a * a)
    # block entries: c(1-a^2)(1-s), c ab(s-1), c[1-(1-a^2)(1-s)]
    h11 = c * (1.0 - a2) * (1.0 - s_half)
    h12 = c * ab * (s_half - 1.0)
    h22 = c * (1.0 - (1.0 - a2) * (1.0 - s_half))
    # -i dt H, pre-multiplied so the loop only does complex arithmetic
    m11 = (-1j * dt) * h11
    m12 = (-1j * dt) * h12
    m22 = (-1j * dt) * h22
    m11, m12, m22 = m11.tolist(), m12.tolist(), m22.tolist()

    x, y = complex(psi0[0]), complex(psi0[1])
    drift = 0.0
    snapshots = [(x, y)] if record_every else []
    steps = (len(s_half) - 1) // 2
    for n in range(steps):
        j = 2 * n
        p, q, r = m11[j], m12[j], m22[j]
        k1x = p * x + q * y
        k1y = q * x + r * y
        p, q, r = m11[j + 1], m12[j + 1], m22[j + 1]
        ux, uy = x + 0.5 * k1x, y + 0.5 * k1y
        k2x = p * ux + q * uy
        k2y = q * ux + r * uy
        ux, uy = x + 0.5 * k2x, y + 0.5 * k2y
        k3x = p * ux + q * uy
        k3y = q * ux + r * uy
        p, q, r = m11[j + 2], m12[j + 2], m22[j + 2]
        ux, uy = x + k3x, y + k3y
        k4x = p * ux + q * uy
        k4y = q * ux + r * uy
        x += (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        y += (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
        nrm = x.real * x.real + x.imag * x.imag + y.real * y.real + y.imag * y.imag
        drift = max(drift, abs(nrm - 1.0))
        if record_every and (n + 1) % record_every == 0:
            snapshots.append((x, y))
    return np.array([x, y]), drift, snapshots


def propagate(
    h: EffectiveHamiltonian,
    s_grid: SGrid,
    T: float,
    psi0: np.ndarray,
    steps: int,
    trace_samples: int = 0,
) -> EvolutionResult:
    """Fixed-step evolution of the 2-D block for ``steps`` steps.

    ``s_grid`` maps an array of times in ``[0, T]`` to schedule values, so
    frozen or custom schedules can be driven directly.  The returned
    fidelity is against |m>.
    """
    ts = np.linspace(0.0, T, 2 * steps + 1)
    s_half = np.asarray(s_grid(ts), dtype=float)
    every = _record_every(steps, trace_samples)
    psi, drift, snaps = _rk4_2d(h, s_half, T / steps, psi0, every)
    trace = []
    for i, (x, y) in enumerate(snaps):
        j = 2 * i * every
        ground = eigenvectors(h, float(s_half[j]))[:, 0]
        trace.append((float(ts[j]), float(s_half[j]), abs(ground[0] * x + ground[1] * y) ** 2))
    return EvolutionResult(psi, abs(psi[0]) ** 2, drift, T, steps, trace)


def _record_every(steps: int, samples: int) -> int:
    if samples <= 0:
        return 0
    return max(1, steps // max(1, samples - 1))


def _initial_steps(schedule: Schedule, steps_hint: int) -> int:
    # c*T is invariant under rescaling, so equal problems share a step ladder
    base = math.ceil(STEPS_PER_UNIT * schedule.scale_c * schedule.total_time)
    return max(int(steps_hint), base, 16)


def _ladder(run: Callable[[int], EvolutionResult], steps: int) -> EvolutionResult:
    coarse = run(steps)
    while 2 * steps <= MAX_STEPS:
        steps *= 2
        fine = run(steps)
        if abs(fine.fidelity - coarse.fidelity) < FIDELITY_TOL and fine.norm_drift < NORM_TOL:
            return fine
        coarse = fine
    raise ConvergenceError(
        f"fidelity not converged to {FIDELITY_TOL} within {MAX_STEPS} steps"
    )


def _check_match(h: EffectiveHamiltonian, schedule: Schedule) -> None:
    if h.a_m != schedule.a_m or h.scale_c != schedule.scale_c:
        raise ValueError(
            f"Hamiltonian (a_m={h.a_m}, c={h.scale_c}) does not match schedule "
            f"(a_m={schedule.a_m}, c={schedule.scale_c})"
        )


def evolve(
    h: EffectiveHamiltonian,
    schedule: Schedule,
    steps_hint: int = 0,
    trace_samples: int = TRACE_SAMPLES,
) -> EvolutionResult:
    """Run the schedule from the ground state of H(0); fidelity is |<m|psi(T)>|^2."""
    _check_match(h, schedule)
    psi0 = h.initial_state()

    def run(steps: int) -> EvolutionResult:
        return propagate(
            h, lambda ts: s_values(schedule, ts), schedule.total_time, psi0, steps,
            trace_samples,
        )

    return _ladder(run, _initial_steps(schedule, steps_hint))


def _rk4_full(H0: np.ndarray, H1: np.ndarray, s_half: np.ndarray, dt: float,
              psi0: np.ndarray, record_every: int = 0):
    # H(s) = (1 - s) H(0) + s H(1) exactly, since H is affine in s
    A0 = -1j * dt * H0
    A1 = -1j * dt * H1
    psi = psi0.astype(complex)
    drift = 0.0
    snapshots = [psi.copy()] if record_every else []
    steps = (len(s_half) - 1) // 2

    def f(s, v):
        return (1.0 - s) * (A0 @ v) + s * (A1 @ v)

    for n in range(steps):
        j = 2 * n
        k1 = f(s_half[j], psi)
        k2 = f(s_half[j + 1], psi + 0.5 * k1)
        k3 = f(s_half[j + 1], psi + 0.5 * k2)
        k4 = f(s_half[j + 2], psi + k3)
        psi = psi + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        drift = max(drift, abs(float(np.vdot(psi, psi).real) - 1.0))
        if record_every and (n + 1) % record_every == 0:
            snapshots.append(psi.copy())
    return psi, drift, snapshots


def propagate_full(
    state: InitialState,
    s_grid: SGrid,
    T: float,
    psi0: np.ndarray,
    steps: int,
    c: float = 1.0,
    trace_samples: int = 0,
) -> EvolutionResult:
    """Full N-dimensional counterpart of :func:`propagate` built on dense matrices."""
    H0 = full_matrix(state, 0.0, c)
    H1 = full_matrix(state, 1.0, c)
    ts = np.linspace(0.0, T, 2 * steps + 1)
    s_half = np.asarray(s_grid(ts), dtype=float)
    every = _record_every(steps, trace_samples)
    psi, drift, snaps = _rk4_full(H0, H1, s_half, T / steps, psi0, every)

    m = state.basis_vector()
    alpha2 = state.amplitudes - state.a_m * m
    alpha2 /= np.linalg.norm(alpha2)
    basis = np.stack([m, alpha2], axis=1)

    trace, leakage = [], 0.0
    for i, v in enumerate(snaps + [psi]):
        outside = v - basis @ (basis.T @ v)
        leakage = max(leakage, float(np.linalg.norm(outside)))
        if i < len(snaps):
            j = 2 * i * every
            s = float(s_half[j])
            _, vecs = np.linalg.eigh(full_matrix(state, s, c))
            trace.append((float(ts[j]), s, abs(np.vdot(vecs[:, 0], v)) ** 2))
    fidelity = abs(psi[state.marked_index - 1]) ** 2
    return EvolutionResult(psi, fidelity, drift, T, steps, trace, leakage)


def evolve_full(
    state: InitialState,
    schedule: Schedule,
    c: float | None = None,
    steps_hint: int = 0,
    trace_samples: int = TRACE_SAMPLES,
) -> EvolutionResult:
    """Dense-matrix evolution from |psi0>; reference for :func:`evolve`.

    Leakage out of span{|m>, |psi0>} is measured at the trace samples.
    """
    if state.n_total > oracle_cap():
        raise ValueError(f"N={state.n_total} exceeds the dense oracle cap {oracle_cap()}")
    c = schedule.scale_c if c is None else c
    if c != schedule.scale_c or state.a_m != schedule.a_m:
        raise ValueError("state and scale factor must match the schedule")
    psi0 = state.amplitudes.astype(complex)

    def grid(ts):
        return s_values(schedule, ts)

    def run(steps: int) -> EvolutionResult:
        return propagate_full(state, grid, schedule.total_time, psi0, steps, c, 0)

    result = _ladder(run, _initial_steps(schedule, steps_hint))
    # leakage and trace are measured on the converged grid
    return propagate_full(
        state, grid, schedule.total_time, psi0, result.steps, c, max(trace_samples, 2)
    )


def fidelity_sweep(
    h: EffectiveHamiltonian, epsilons: Sequence[float]
) -> list[tuple[float, float]]:
    """Infidelity of the local schedule at each epsilon (given in descending order)."""
    if any(b >= a for a, b in zip(epsilons, epsilons[1:])):
        raise ValueError("epsilons must be strictly descending")
    out = []
    for eps in epsilons:
        schedule = Schedule.local(h.a_m, eps, h.scale_c)
        out.append((eps, evolve(h, schedule, trace_samples=0).infidelity))
    return out

"""Discrete Grover iteration for a single marked item, uniform start."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TIE_TOL = 1e-12


@dataclass(frozen=True)
class GroverRun:
    n_total: int
    iterations: int
    success_prob: float


def _check_n(n_total: int) -> None:
    if n_total < 2:
        raise ValueError("database needs at least two items")


def grover_simulate(n_total: int, iterations: int) -> GroverRun:
    """Iterate oracle + inversion about the mean on the two distinct amplitudes.

    By symmetry every unmarked item keeps the same amplitude, so the state is
    the pair (marked, unmarked) and each iteration is an explicit rotation of
    that pair.
    """
    _check_n(n_total)
    if iterations < 0:
        raise ValueError("iteration count must be non-negative")
    x = y = 1.0 / math.sqrt(n_total)
    for _ in range(iterations):
        x = -x
        mean = (x + (n_total - 1) * y) / n_total
        x, y = 2.0 * mean - x, 2.0 * mean - y
    return GroverRun(n_total, iterations, min(1.0, x * x))


def grover_closed_form(n_total: int, iterations: int) -> float:
    """sin^2((2k + 1) theta) with theta = arcsin(1 / sqrt(N))."""
    _check_n(n_total)
    theta = math.asin(1.0 / math.sqrt(n_total))
    return math.sin((2 * iterations + 1) * theta) ** 2


def grover_statevector(n_total: int, iterations: int, marked_index: int = 1) -> np.ndarray:
    """Full N-dimensional state after ``iterations`` rounds (reference path)."""
    _check_n(n_total)
    psi = np.full(n_total, 1.0 / math.sqrt(n_total))
    for _ in range(iterations):
        psi[marked_index - 1] *= -1.0
        psi = 2.0 * psi.mean() - psi
    return psi


def grover_optimal_iterations(n_total: int) -> int:
    """Iteration count maximizing success; ties go to the smaller count."""
    _check_n(n_total)
    theta = math.asin(1.0 / math.sqrt(n_total))
    guess = max(0, round(math.pi / (4.0 * theta) - 0.5))
    best_k, best_p = 0, -1.0
    for k in range(max(0, guess - 2), guess + 3):
        p = grover_closed_form(n_total, k)
        if p > best_p + TIE_TOL:
            best_k, best_p = k, p
    return best_k

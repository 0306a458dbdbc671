"""Interpolating search Hamiltonian, its spectrum and gap.

H(s) = c [(1 - s)(I - |psi0><psi0|) + s (I - |m><m|)] leaves
span{|m>, |psi0>} invariant and acts as ``c * I`` on its complement, so the
2x2 block in the basis

    |alpha1> = |m>,   |alpha2> = (|psi0> - a_m |m>) / sqrt(1 - a_m^2)

carries all of the nontrivial spectrum.  The dense N x N matrix is kept only
as an independent check.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .model import AMPLITUDE_GUARD, InitialState

DEFAULT_ORACLE_CAP = 256
ORACLE_CAP_ENV = "ADIASEARCH_ORACLE_CAP"


def oracle_cap() -> int:
    """Largest N for which dense full-space matrices are built."""
    raw = os.environ.get(ORACLE_CAP_ENV)
    if raw is None:
        return DEFAULT_ORACLE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{ORACLE_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 2:
        raise ValueError(f"{ORACLE_CAP_ENV} must be >= 2")
    return cap


def _check_s(s: float) -> None:
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"interpolation parameter s={s!r} outside [0, 1]")


@dataclass(frozen=True)
class EffectiveHamiltonian:
    a_m: float
    scale_c: float = 1.0

    def __post_init__(self):
        if not AMPLITUDE_GUARD < self.a_m < 1.0 - AMPLITUDE_GUARD:
            raise ValueError(f"a_m={self.a_m!r} must lie strictly inside (0, 1)")
        if not self.scale_c > 0:
            raise ValueError(f"scale factor must be positive, got {self.scale_c!r}")

    @classmethod
    def from_state(cls, state: InitialState, scale_c: float = 1.0) -> "EffectiveHamiltonian":
        return cls(state.a_m, scale_c)

    @property
    def b(self) -> float:
        """sqrt(1 - a_m^2), the weight of psi0 off the marked item."""
        return math.sqrt(1.0 - self.a_m * self.a_m)

    def with_scale(self, scale_c: float) -> "EffectiveHamiltonian":
        return EffectiveHamiltonian(self.a_m, scale_c)

    def initial_state(self) -> np.ndarray:
        """psi0 = (a_m, sqrt(1 - a_m^2)), the exact ground state of H(0)."""
        return np.array([self.a_m, self.b], dtype=complex)

    def target_state(self) -> np.ndarray:
        return np.array([1.0, 0.0], dtype=complex)


@dataclass(frozen=True)
class SpectralSample:
    s: float
    lambda1: float
    lambda2: float
    gap: float


def matrix_2d(h: EffectiveHamiltonian, s: float) -> np.ndarray:
    _check_s(s)
    a, b, c = h.a_m, h.b, h.scale_c
    off = a * b * (s - 1.0)
    return c * np.array(
        [
            [a * a * (s - 1.0) - s + 1.0, off],
            [off, (1.0 - a * a) * (s - 1.0) + 1.0],
        ]
    )


def unit_gap(a_m: float, s: float) -> float:
    """Gap of the unscaled Hamiltonian, sqrt(1 - 4 (1 - a_m^2) s (1 - s))."""
    # 1 - 4(1-a^2)s(1-s) == a^2 + (1-a^2)(2s-1)^2, which never cancels
    x = 2.0 * s - 1.0
    return math.sqrt(a_m * a_m + (1.0 - a_m * a_m) * x * x)


def gap(h: EffectiveHamiltonian, s: float) -> float:
    _check_s(s)
    return h.scale_c * unit_gap(h.a_m, s)


def eigenvalues(h: EffectiveHamiltonian, s: float) -> tuple[float, float]:
    """The two lowest levels ``(c*lambda1, c*lambda2)``; the rest sit at ``c``."""
    _check_s(s)
    g = unit_gap(h.a_m, s)
    c = h.scale_c
    return c * 0.5 * (1.0 - g), c * 0.5 * (1.0 + g)


def eigenvectors(h: EffectiveHamiltonian, s: float) -> np.ndarray:
    """Columns are the ground and first excited states in the 2-D basis.

    Independent of ``scale_c``.  Signs are fixed so the first nonzero entry of
    each column is positive.
    """
    _, vecs = np.linalg.eigh(matrix_2d(h.with_scale(1.0), s))
    for j in range(2):
        k = 0 if abs(vecs[0, j]) > 1e-14 else 1
        if vecs[k, j] < 0:
            vecs[:, j] = -vecs[:, j]
    return vecs


def spectral_sample(h: EffectiveHamiltonian, s: float) -> SpectralSample:
    lo, hi = eigenvalues(h, s)
    return SpectralSample(s, lo, hi, gap(h, s))


def spectrum(h: EffectiveHamiltonian, samples: int) -> list[SpectralSample]:
    if samples < 2:
        raise ValueError("need at least two samples")
    return [spectral_sample(h, float(s)) for s in np.linspace(0.0, 1.0, samples)]


def hamiltonian_derivative_2d(h: EffectiveHamiltonian) -> np.ndarray:
    """dH/ds = c (|psi0><psi0| - |m><m|) in the 2-D basis."""
    psi0 = h.initial_state().real
    return h.scale_c * (np.outer(psi0, psi0) - np.diag([1.0, 0.0]))


def transition_element(h: EffectiveHamiltonian, s: float) -> float:
    """|<E1| dH/ds |E0>| at ``s``, bounded by ``c``."""
    vecs = eigenvectors(h, s)
    return abs(float(vecs[:, 1] @ hamiltonian_derivative_2d(h) @ vecs[:, 0]))


def full_matrix(state: InitialState, s: float, c: float = 1.0) -> np.ndarray:
    """Dense c [(1-s)(I - psi0 psi0^T) + s (I - e_m e_m^T)]."""
    _check_s(s)
    n = state.n_total
    cap = oracle_cap()
    if n > cap:
        raise ValueError(f"N={n} exceeds the dense oracle cap {cap} (set {ORACLE_CAP_ENV})")
    psi0 = state.amplitudes
    H = np.eye(n) - (1.0 - s) * np.outer(psi0, psi0)
    H[state.marked_index - 1, state.marked_index - 1] -= s
    return c * H


def full_spectrum(state: InitialState, s: float, c: float = 1.0) -> np.ndarray:
    """Ascending eigenvalues of :func:`full_matrix` by dense symmetric solve."""
    return np.linalg.eigvalsh(full_matrix(state, s, c))

"""Database, prior partitions and initial-state construction.

Indices follow the usual labelling of search problems: items are numbered
``1..N`` and subsets of a partition ``1..k``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

PROB_TOL = 1e-12
NORM_TOL = 1e-12
# a_m this close to 0 or 1 is treated as degenerate
AMPLITUDE_GUARD = 1e-9


@dataclass(frozen=True)
class PriorPartition:
    """A split of ``{1..N}`` into consecutive blocks with prior probabilities.

    ``subsets`` holds ``(n_i, p_i)`` pairs: block ``i`` has ``n_i`` items and
    contains the marked item with probability ``p_i``.
    """

    n_total: int
    subsets: tuple[tuple[int, float], ...]

    def __post_init__(self):
        subsets = tuple((int(n), float(p)) for n, p in self.subsets)
        object.__setattr__(self, "subsets", subsets)
        if not subsets:
            raise ValueError("partition needs at least one subset")
        if any(n < 1 for n, _ in subsets):
            raise ValueError("every subset must contain at least one item")
        if sum(n for n, _ in subsets) != self.n_total:
            raise ValueError(
                f"subset sizes sum to {sum(n for n, _ in subsets)}, expected {self.n_total}"
            )
        if any(not p > 0 or p > 1 for _, p in subsets):
            raise ValueError("subset probabilities must lie in (0, 1]")
        total = math.fsum(p for _, p in subsets)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"subset probabilities sum to {total!r}, not 1")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]]) -> "PriorPartition":
        pairs = tuple(pairs)
        return cls(sum(int(n) for n, _ in pairs), pairs)

    @classmethod
    def uniform(cls, n_total: int) -> "PriorPartition":
        return cls(n_total, ((n_total, 1.0),))

    @classmethod
    def proportional(cls, sizes: Sequence[int]) -> "PriorPartition":
        """Partition whose probabilities are proportional to block sizes."""
        n_total = sum(sizes)
        return cls(n_total, tuple((n, n / n_total) for n in sizes))

    @property
    def k(self) -> int:
        return len(self.subsets)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.subsets)

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.subsets)

    def block(self, subset: int) -> range:
        """1-based item indices belonging to ``subset`` (itself 1-based)."""
        self._check_subset(subset)
        start = 1 + sum(self.sizes[: subset - 1])
        return range(start, start + self.sizes[subset - 1])

    def subset_of(self, index: int) -> int:
        if not 1 <= index <= self.n_total:
            raise ValueError(f"item index {index} outside 1..{self.n_total}")
        upper = 0
        for i, n in enumerate(self.sizes, start=1):
            upper += n
            if index <= upper:
                return i
        raise AssertionError("unreachable")

    def density(self, subset: int) -> float:
        """p_i / n_i, the squared amplitude of every item in ``subset``."""
        self._check_subset(subset)
        n, p = self.subsets[subset - 1]
        return p / n

    def is_proportional(self, tol: float = PROB_TOL) -> bool:
        return max(abs(p - n / self.n_total) for n, p in self.subsets) < tol

    def _check_subset(self, subset: int) -> None:
        if not 1 <= subset <= self.k:
            raise ValueError(f"subset index {subset} outside 1..{self.k}")


@dataclass(frozen=True)
class InitialState:
    """Real amplitudes of the initial state and the (1-based) marked item."""

    amplitudes: np.ndarray = field(repr=False)
    marked_index: int

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=float)
        if amps.ndim != 1 or amps.size < 2:
            raise ValueError("amplitudes must be a vector of length >= 2")
        if not 1 <= self.marked_index <= amps.size:
            raise ValueError(f"marked index {self.marked_index} outside 1..{amps.size}")
        norm2 = math.fsum(amps * amps)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"amplitudes not normalized (sum of squares {norm2!r})")
        a_m = amps[self.marked_index - 1]
        if not AMPLITUDE_GUARD < a_m < 1.0 - AMPLITUDE_GUARD:
            raise ValueError(f"marked amplitude {a_m!r} must lie strictly inside (0, 1)")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_total(self) -> int:
        return self.amplitudes.size

    @property
    def a_m(self) -> float:
        return float(self.amplitudes[self.marked_index - 1])

    def basis_vector(self) -> np.ndarray:
        """|m> in the computational basis."""
        e = np.zeros(self.n_total)
        e[self.marked_index - 1] = 1.0
        return e


def uniform_state(n_total: int, marked_index: int) -> InitialState:
    if n_total < 2:
        raise ValueError("database needs at least two items")
    return InitialState(np.full(n_total, 1.0 / math.sqrt(n_total)), marked_index)


def build_prior_state(
    partition: PriorPartition, marked_index: int, marked_subset: int
) -> InitialState:
    """Initial state with amplitude sqrt(p_i / n_i) on every item of block i."""
    if partition.subset_of(marked_index) != marked_subset:
        raise ValueError(
            f"item {marked_index} lies in subset {partition.subset_of(marked_index)}, "
            f"not {marked_subset}"
        )
    amps = np.concatenate(
        [np.full(n, math.sqrt(p / n)) for n, p in partition.subsets]
    )
    return InitialState(amps, marked_index)


def marked_amplitude(state: InitialState) -> float:
    return state.a_m


def parse_partition(text: str) -> PriorPartition:
    """Parse ``"0.8:500,0.2:500"`` or a JSON array of ``{"p": .., "n": ..}``."""
    text = text.strip()
    if text.startswith("["):
        return partition_from_json(json.loads(text))
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            p, n = chunk.split(":")
            pairs.append((int(n), float(p)))
        except ValueError:
            raise ValueError(f"bad partition entry {chunk!r}, expected p:n") from None
    return PriorPartition.from_pairs(pairs)


def partition_from_json(items: Sequence[dict]) -> PriorPartition:
    try:
        return PriorPartition.from_pairs((int(d["n"]), float(d["p"])) for d in items)
    except (KeyError, TypeError):
        raise ValueError("partition JSON must be a list of {p, n} objects") from None


def format_partition(partition: PriorPartition) -> str:
    return ",".join(f"{p!r}:{n}" for n, p in partition.subsets)

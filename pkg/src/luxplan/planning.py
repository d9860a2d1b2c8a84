"""Score candidate sensor points and choose a minimal sensing set.

A point's distinctness under one door state counts how many of the 2^n
configuration readings are isolated from every other reading by more than
tau lux; only isolated readings can be decoded unambiguously. Candidate
selection is a set cover over application states (configuration, door
state): a candidate covers the states it can isolate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scene import DoorState
from .transport import ContributionMatrix, ContributionVector, all_config_readings

DEFAULT_TAU = 0.01  # lux


@dataclass(frozen=True)
class DistinctnessVector:
    """Per-entry isolation flags at tolerance tau; score is their sum."""

    flags: tuple[int, ...]
    tau: float

    @property
    def score(self) -> int:
        return int(sum(self.flags))


@dataclass(frozen=True)
class StateSpace:
    """The application states a deployment must tell apart."""

    n_luminaires: int
    door_states: tuple[DoorState, ...]

    @property
    def n_configs(self) -> int:
        return 1 << self.n_luminaires

    @property
    def total(self) -> int:
        return self.n_configs * len(self.door_states)

    def state_id(self, config_index: int, door_state_index: int) -> int:
        if not 0 <= config_index < self.n_configs:
            raise ValueError("config index out of range")
        if not 0 <= door_state_index < len(self.door_states):
            raise ValueError("door state index out of range")
        return door_state_index * self.n_configs + config_index

    def unpack(self, state_id: int) -> tuple[int, int]:
        return state_id % self.n_configs, state_id // self.n_configs


@dataclass(frozen=True)
class CoverInstance:
    universe: frozenset[int]
    sets: tuple[frozenset[int], ...]


@dataclass
class CoverSolution:
    chosen: list[int]
    gains: list[int]
    covered: frozenset[int]
    complete: bool


def distinctness_vector(values, tau: float) -> DistinctnessVector:
    """Flag entries whose nearest other entry is more than tau away.

    Strict inequality: a gap of exactly tau is not distinct. A single
    entry is trivially distinct.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("need a 1-D, nonempty value vector")
    if vals.size == 1:
        return DistinctnessVector(flags=(1,), tau=tau)
    order = np.argsort(vals, kind="stable")
    s = vals[order]
    gaps = np.diff(s)
    left = np.concatenate(([np.inf], gaps))
    right = np.concatenate((gaps, [np.inf]))
    isolated_sorted = np.minimum(left, right) > tau
    flags = np.empty(vals.size, dtype=int)
    flags[order] = isolated_sorted.astype(int)
    return DistinctnessVector(flags=tuple(int(f) for f in flags), tau=tau)


def state_distinctness(x: ContributionVector | np.ndarray, tau: float) -> DistinctnessVector:
    """Distinctness over all 2^n configuration readings at one point.

    Entry p corresponds to configuration index p. The sorted-neighbor
    computation equals the all-pairs definition because the nearest other
    value is always an adjacent one in sorted order.
    """
    return distinctness_vector(all_config_readings(x), tau)


def config_sums_batch(values: np.ndarray) -> np.ndarray:
    """All-configuration readings for a (..., n) contribution array -> (..., 2^n)."""
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    sums = np.zeros(values.shape[:-1] + (1 << n,))
    for i in range(n):
        half = 1 << i
        sums[..., half:2 * half] = sums[..., :half] + values[..., i:i + 1]
    return sums


def distinctness_flags_batch(values: np.ndarray, tau: float) -> np.ndarray:
    """Isolation flags for every configuration, batched.

    values has shape (..., n); the result is boolean with shape (..., 2^n)
    and matches state_distinctness entry for entry.
    """
    sums = config_sums_batch(values)
    order = np.argsort(sums, axis=-1, kind="stable")
    s = np.take_along_axis(sums, order, axis=-1)
    gaps = np.diff(s, axis=-1)
    inf_edge = np.full(s.shape[:-1] + (1,), np.inf)
    left = np.concatenate((inf_edge, gaps), axis=-1)
    right = np.concatenate((gaps, inf_edge), axis=-1)
    isolated_sorted = np.minimum(left, right) > tau
    flags = np.empty_like(isolated_sorted)
    np.put_along_axis(flags, order, isolated_sorted, axis=-1)
    return flags


def heatmap_scores(matrix: ContributionMatrix, tau: float = DEFAULT_TAU) -> np.ndarray:
    """Distinctness score per (point, door state); shape (P, Q)."""
    flags = distinctness_flags_batch(matrix.values, tau)
    return flags.sum(axis=-1)


def aggregate_distinctness(matrix: ContributionMatrix, tau: float, point_index: int) -> int:
    """Total distinctness of one candidate summed over all door states."""
    flags = distinctness_flags_batch(matrix.values[point_index], tau)
    return int(flags.sum())


def build_cover_instance(matrix: ContributionMatrix, tau: float = DEFAULT_TAU) -> CoverInstance:
    """Cover instance over all (configuration, door state) pairs.

    State id layout follows StateSpace: door_state_index * 2^n + config_index.
    Candidate point k covers the states whose reading it isolates.
    """
    flags = distinctness_flags_batch(matrix.values, tau)  # (P, Q, 2^n)
    n_points, n_states, n_configs = flags.shape
    universe = frozenset(range(n_states * n_configs))
    sets = []
    for k in range(n_points):
        ids = np.flatnonzero(flags[k].reshape(-1))  # row-major: q major, p minor
        sets.append(frozenset(int(i) for i in ids))
    return CoverInstance(universe=universe, sets=tuple(sets))


def restrict_cover_instance(instance: CoverInstance, keep: frozenset[int]) -> CoverInstance:
    """Project an instance onto a sub-universe (e.g. a single door state)."""
    return CoverInstance(
        universe=frozenset(instance.universe & keep),
        sets=tuple(frozenset(s & keep) for s in instance.sets),
    )


def _instance_matrix(instance: CoverInstance) -> tuple[np.ndarray, list[int]]:
    ids = sorted(instance.universe)
    col = {u: j for j, u in enumerate(ids)}
    m = np.zeros((len(instance.sets), len(ids)), dtype=bool)
    for k, s in enumerate(instance.sets):
        for u in s:
            if u in col:
                m[k, col[u]] = True
    return m, ids


def greedy_set_cover(instance: CoverInstance) -> CoverSolution:
    """Classic greedy cover: repeatedly take the set with the largest
    uncovered gain, ties broken by the lowest point index.

    Stops early (complete=False) when no set adds coverage, which happens
    whenever part of the universe is in no set.
    """
    m, ids = _instance_matrix(instance)
    uncovered = np.ones(len(ids), dtype=bool)
    chosen: list[int] = []
    gains: list[int] = []
    while uncovered.any():
        counts = (m & uncovered).sum(axis=1)
        best = int(np.argmax(counts))  # argmax returns the first (lowest) index on ties
        gain = int(counts[best])
        if gain == 0:
            break
        chosen.append(best)
        gains.append(gain)
        uncovered &= ~m[best]
    covered_ids = frozenset(u for u, unc in zip(ids, uncovered) if not unc)
    return CoverSolution(
        chosen=chosen,
        gains=gains,
        covered=covered_ids,
        complete=not uncovered.any(),
    )


def exact_min_cover(instance: CoverInstance, limit: int = 24) -> CoverSolution:
    """Provably minimum cover by branch and bound over element bitmasks.

    Branches on an uncovered element with the fewest covering sets and
    prunes with a counting bound. Elements no set covers are excluded up
    front (complete=False); the cover is then minimum for the rest.
    Refuses universes larger than `limit`.
    """
    ids = sorted(instance.universe)
    if len(ids) > limit:
        raise ValueError(f"universe of {len(ids)} exceeds exact-solver limit {limit}")
    bit = {u: 1 << j for j, u in enumerate(ids)}
    set_masks = []
    for s in instance.sets:
        mask = 0
        for u in s:
            if u in bit:
                mask |= bit[u]
        set_masks.append(mask)
    coverable = 0
    for mask in set_masks:
        coverable |= mask
    complete = coverable == (1 << len(ids)) - 1 if ids else True

    covering: dict[int, list[int]] = {}
    for j in range(len(ids)):
        covering[j] = [k for k, mask in enumerate(set_masks) if mask & (1 << j)]

    # greedy reaches every coverable element, so it seeds the upper bound
    greedy = greedy_set_cover(instance)
    best_choice: list[int] = list(greedy.chosen)
    best_size = len(best_choice)

    max_set_size = max((mask.bit_count() for mask in set_masks), default=0)

    def solve(uncovered: int, chosen: list[int]) -> None:
        nonlocal best_choice, best_size
        if uncovered == 0:
            if len(chosen) < best_size:
                best_size = len(chosen)
                best_choice = list(chosen)
            return
        if max_set_size == 0:
            return
        lower = len(chosen) + math.ceil(uncovered.bit_count() / max_set_size)
        if lower >= best_size:
            return
        # fail-first: the uncovered element with the fewest covering sets
        pick, pick_sets = None, None
        for j in range(len(ids)):
            if uncovered & (1 << j):
                cands = covering[j]
                if pick_sets is None or len(cands) < len(pick_sets):
                    pick, pick_sets = j, cands
        assert pick_sets is not None
        for k in sorted(pick_sets, key=lambda k: (set_masks[k] & uncovered).bit_count(), reverse=True):
            chosen.append(k)
            solve(uncovered & ~set_masks[k], chosen)
            chosen.pop()

    solve(coverable, [])
    covered_ids = _mask_ids(coverable, ids, bit)
    gains = []
    running = 0
    for k in best_choice:
        new = set_masks[k] | running
        gains.append((new ^ running).bit_count())
        running = new
    return CoverSolution(
        chosen=best_choice,
        gains=gains,
        covered=covered_ids,
        complete=complete,
    )


def _mask_ids(mask: int, ids: list[int], bit: dict[int, int]) -> frozenset[int]:
    return frozenset(u for u in ids if mask & bit[u])


def harmonic_bound(max_set_size: int) -> float:
    """H(k): the greedy cover's approximation guarantee."""
    return sum(1.0 / i for i in range(1, max_set_size + 1)) if max_set_size > 0 else 0.0

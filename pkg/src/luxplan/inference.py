"""Recover light configurations from summed sensor readings.

Given per-luminaire contributions x and a reading K, the perfect-sum
search enumerates every on/off configuration whose on-contributions sum to
within epsilon of K (absolute tolerance). Ambiguity is scored with the
Jaccard index against ground truth, and multiple sensors are combined by
per-luminaire majority voting.
"""
from __future__ import annotations

import logging
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np

from .transport import ContributionVector, LightConfig

log = logging.getLogger(__name__)

MAX_SOLVER_BITS = 24
# Above this size the meet-in-the-middle path wins; below it, depth-first
# enumeration with suffix-sum pruning is faster and allocation-free.
MITM_THRESHOLD = 20


@dataclass(frozen=True)
class PerfectSumQuery:
    contributions: tuple[float, ...]
    target: float
    epsilon: float

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if any(v < 0 for v in self.contributions):
            raise ValueError("contributions must be nonnegative")
        if len(self.contributions) > MAX_SOLVER_BITS:
            raise ValueError(
                f"{len(self.contributions)} luminaires exceed the solver limit of {MAX_SOLVER_BITS}"
            )

    @classmethod
    def from_vector(cls, x: ContributionVector, target: float, epsilon: float) -> "PerfectSumQuery":
        return cls(contributions=tuple(float(v) for v in x.values), target=target, epsilon=epsilon)


@dataclass(frozen=True)
class VoteVector:
    """Per-luminaire vote from one sensor: +1 on, -1 off, 0 abstain."""

    votes: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(v not in (-1, 0, 1) for v in self.votes):
            raise ValueError("votes must be -1, 0, or +1")


@dataclass
class InferenceResult:
    candidates: list[LightConfig]
    accuracy: float | None = None
    no_solution: bool = False


def _dfs_masks(values: list[float], target: float, epsilon: float) -> list[int]:
    """All index-subset bitmasks with |sum - target| <= epsilon.

    Walks values in descending order so the suffix-sum bound tightens early.
    Masks are expressed over the original index order.
    """
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i], reverse=True)
    vals = [values[i] for i in order]
    suffix = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + vals[i]

    out: list[int] = []
    lo, hi = target - epsilon, target + epsilon

    def walk(i: int, partial: float, mask: int) -> None:
        if partial > hi:
            return
        if partial + suffix[i] < lo:
            return
        if i == n:
            if lo <= partial <= hi:
                out.append(mask)
            return
        walk(i + 1, partial + vals[i], mask | (1 << order[i]))
        walk(i + 1, partial, mask)

    walk(0, 0.0, 0)
    return out


def _half_sums(values: list[float]) -> tuple[list[float], list[int]]:
    """Subset sums of a short value list, sorted, with aligned masks."""
    pairs = [(0.0, 0)]
    for i, v in enumerate(values):
        pairs += [(s + v, m | (1 << i)) for s, m in pairs]
    pairs.sort(key=lambda p: p[0])
    return [p[0] for p in pairs], [p[1] for p in pairs]


def _mitm_masks(values: list[float], target: float, epsilon: float) -> list[int]:
    """Meet-in-the-middle variant of _dfs_masks; returns the same mask set."""
    n = len(values)
    h = n // 2
    lo_sums, lo_masks = _half_sums(values[:h])
    hi_sums, hi_masks = _half_sums(values[h:])
    out: list[int] = []
    for s, m in zip(lo_sums, lo_masks):
        first = bisect_left(hi_sums, target - epsilon - s)
        last = bisect_right(hi_sums, target + epsilon - s)
        for j in range(first, last):
            out.append(m | (hi_masks[j] << h))
    return out


def perfect_sum(query: PerfectSumQuery, method: str = "auto") -> list[LightConfig]:
    """Every configuration whose reading matches the target within epsilon.

    Results are sorted ascending by configuration index. 'auto' picks
    depth-first search for small n and meet-in-the-middle beyond
    MITM_THRESHOLD luminaires; both return identical sets.
    """
    values = list(query.contributions)
    n = len(values)
    if method == "auto":
        method = "mitm" if n > MITM_THRESHOLD else "dfs"
    if method == "dfs":
        masks = _dfs_masks(values, query.target, query.epsilon)
    elif method == "mitm":
        masks = _mitm_masks(values, query.target, query.epsilon)
    else:
        raise ValueError(f"unknown method {method!r}")
    return [LightConfig.from_index(m, n) for m in sorted(masks)]


def nearest_sum_configs(query: PerfectSumQuery) -> list[LightConfig]:
    """Configurations minimizing |sum - target|; the opt-in fallback when
    the tolerance window is empty."""
    values = list(query.contributions)
    n = len(values)
    h = n // 2
    lo_sums, lo_masks = _half_sums(values[:h])
    hi_sums, hi_masks = _half_sums(values[h:])
    best = math.inf
    masks: list[int] = []
    for s, m in zip(lo_sums, lo_masks):
        want = query.target - s
        j = bisect_left(hi_sums, want)
        for k in (j - 1, j):
            if 0 <= k < len(hi_sums):
                err = abs(s + hi_sums[k] - query.target)
                if err < best - 1e-15:
                    best = err
                    masks = [m | (hi_masks[k] << h)]
                elif abs(err - best) <= 1e-15:
                    masks.append(m | (hi_masks[k] << h))
    return [LightConfig.from_index(m, n) for m in sorted(set(masks))]


def jaccard_accuracy(truth: LightConfig, candidates: list[LightConfig]) -> float:
    """Mean Jaccard similarity between the truth's on-set and each candidate's.

    Two all-off sets count as identical (score 1). An empty candidate list
    scores 0 by convention.
    """
    if not candidates:
        log.debug("jaccard_accuracy: no candidates, scoring 0")
        return 0.0
    truth_on = set(truth.on_indices)
    total = 0.0
    for cand in candidates:
        cand_on = set(cand.on_indices)
        union = truth_on | cand_on
        if not union:
            total += 1.0
        else:
            total += len(truth_on & cand_on) / len(union)
    return total / len(candidates)


def infer_reading(
    query: PerfectSumQuery,
    truth: LightConfig | None = None,
    nearest_fallback: bool = False,
) -> InferenceResult:
    """Run the perfect-sum search and score it when truth is known."""
    candidates = perfect_sum(query)
    no_solution = not candidates
    if no_solution and nearest_fallback:
        candidates = nearest_sum_configs(query)
    accuracy = jaccard_accuracy(truth, candidates) if truth is not None else None
    return InferenceResult(candidates=candidates, accuracy=accuracy, no_solution=no_solution)


def sensor_votes(
    x: ContributionVector,
    candidates: list[LightConfig],
    range_mask: list[bool] | tuple[bool, ...] | np.ndarray | None = None,
) -> VoteVector:
    """One sensor's per-luminaire majority vote over its candidate set.

    Luminaires outside the sensor's range (mask False, typically x_i == 0)
    abstain, as do exact ties and empty candidate lists.
    """
    n = x.n
    if range_mask is None:
        range_mask = x.values > 0
    range_mask = list(range_mask)
    if len(range_mask) != n:
        raise ValueError("range mask length does not match contribution vector")
    votes = []
    for i in range(n):
        if not range_mask[i]:
            votes.append(0)
            continue
        ones = sum(c.bits[i] for c in candidates)
        zeros = len(candidates) - ones
        votes.append(1 if ones > zeros else (-1 if zeros > ones else 0))
    return VoteVector(votes=tuple(votes))


def fuse_votes(all_votes: list[VoteVector]) -> LightConfig:
    """Combine sensors: positive vote sum means on; ties resolve to off."""
    if not all_votes:
        raise ValueError("need at least one vote vector")
    n = len(all_votes[0].votes)
    if any(len(v.votes) != n for v in all_votes):
        raise ValueError("vote vectors must have equal length")
    bits = []
    for i in range(n):
        total = sum(v.votes[i] for v in all_votes)
        if total == 0:
            log.debug("fuse_votes: tie on luminaire %d resolves to off", i)
        bits.append(1 if total > 0 else 0)
    return LightConfig(bits=tuple(bits))

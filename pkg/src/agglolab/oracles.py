"""Exact optimal k-clustering costs at desk scale, plus the packing check.

Three independent routes to an optimum:

* ``optimal_by_partition_enum``  -- exhaustive search over set partitions in
  restricted-growth-string order with branch-and-bound pruning (n <= 14);
  works for all three cost functions.
* ``optimal_discrete_kcenter``   -- enumerate k-subsets of the points as
  centers and assign every point to its nearest one; exact for the
  member-centered radius cost.
* ``optimal_diameter_1d``        -- sort + dynamic programming over
  contiguous segments; exact for the diameter cost in dimension 1, where
  optimal clusters are intervals.

``volume_lemma_check`` evaluates the packing bound on a coverable sample:
if a finite set P sits inside k balls of radius r and |P| > k, then some
two of its points are within 4 r (k/|P|)^(1/d) of each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .metrics import (
    BallCover,
    Cluster,
    Instance,
    Norm,
    L2,
    Problem,
    distance,
    powered_matrix,
    radius,
    unpower,
    unpower_array,
)

__all__ = [
    "OracleResult", "CoverableSample", "VolumeCheck", "SizeLimitError",
    "optimal_by_partition_enum", "optimal_discrete_kcenter", "optimal_diameter_1d",
    "volume_lemma_check", "min_pairwise_distance",
    "PARTITION_ENUM_MAX_N", "CENTER_ENUM_BUDGET",
]

PARTITION_ENUM_MAX_N = 14
CENTER_ENUM_BUDGET = 10_000_000


class SizeLimitError(ValueError):
    """The instance exceeds an oracle's combinatorial budget."""


@dataclass(frozen=True)
class OracleResult:
    """Exact optimal cost (with witness partition) for one (problem, k)."""

    problem: Problem
    k: int
    opt_cost: float
    partition: tuple[Cluster, ...] | None
    method: str


@dataclass(frozen=True)
class CoverableSample:
    """Points drawn from a union of k balls, with the cover as certificate."""

    points: tuple[tuple[float, ...], ...]
    cover: BallCover
    norm: Norm = L2

    def __post_init__(self):
        d = self.cover.dim
        for i, p in enumerate(self.points):
            if len(p) != d:
                raise ValueError(f"point {i} has dimension {len(p)}, cover has {d}")

    def to_instance(self, name: str) -> Instance:
        return Instance(name=name, dim=self.cover.dim, norm=self.norm, points=self.points)


@dataclass(frozen=True)
class VolumeCheck:
    min_pair_dist: float
    bound: float
    holds: bool


def _validate_k(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")


def _sorted_clusters(blocks: Sequence[Sequence[int]]) -> tuple[Cluster, ...]:
    clusters = [Cluster(tuple(b)) for b in blocks]
    clusters.sort(key=lambda c: c.min_member)
    return tuple(clusters)


def _farthest_first_order(dpow: np.ndarray) -> list[int]:
    # Spread-out prefixes make branch-and-bound prune early.
    n = dpow.shape[0]
    order = [0]
    nearest = dpow[0].copy()
    for _ in range(n - 1):
        nxt = int(nearest.argmax())
        order.append(nxt)
        nearest = np.minimum(nearest, dpow[nxt])
    return order


def optimal_by_partition_enum(
    inst: Instance,
    k: int,
    problem: Problem,
    upper_bound: float | None = None,
) -> OracleResult:
    """Exact minimum over all partitions of the points into k non-empty parts.

    Enumerates restricted growth strings (blocks in first-use order, at most
    k of them) depth-first, pruning any prefix whose running maximum part
    cost already reaches the best complete partition seen.  ``upper_bound``,
    when given, must be a cost achieved by some k-partition; it tightens the
    initial pruning threshold without affecting exactness.
    """
    n = len(inst.points)
    _validate_k(n, k)
    if n > PARTITION_ENUM_MAX_N:
        raise SizeLimitError(
            f"partition enumeration capped at n <= {PARTITION_ENUM_MAX_N}, got {n}"
        )

    dpow = powered_matrix(inst)
    norm = inst.norm
    order = _farthest_first_order(dpow)

    # Per-block state: member ids (original numbering), powered diameter,
    # and the reported cost of the block.
    blocks: list[list[int]] = []
    block_diam_pow: list[float] = []
    block_cost: list[float] = []

    radius_memo: dict[tuple[int, ...], float] = {}
    drad_memo: dict[tuple[int, ...], float] = {}

    def block_radius(ids: tuple[int, ...]) -> float:
        val = radius_memo.get(ids)
        if val is None:
            val = radius(ids, inst).radius
            radius_memo[ids] = val
        return val

    def block_drad(ids: tuple[int, ...]) -> float:
        val = drad_memo.get(ids)
        if val is None:
            sub = dpow[np.ix_(ids, ids)]
            val = unpower(float(sub.max(axis=1).min()), norm)
            drad_memo[ids] = val
        return val

    incumbent = math.inf if upper_bound is None else (
        upper_bound + max(1e-9 * abs(upper_bound), 1e-12)
    )
    best_blocks: list[tuple[int, ...]] | None = None
    best_cost = math.inf

    def assign_cost(bi: int, p: int) -> tuple[float, float]:
        """(new powered diameter, new reported cost) if p joins block bi."""
        new_diam = block_diam_pow[bi]
        for q in blocks[bi]:
            v = dpow[p, q]
            if v > new_diam:
                new_diam = v
        if problem is Problem.DIAMETER:
            return new_diam, unpower(new_diam, norm)
        if problem is Problem.RADIUS:
            half = unpower(new_diam, norm) / 2.0
            if half >= incumbent:  # cheap monotone bound, skip the solver
                return new_diam, half
            return new_diam, block_radius(tuple(sorted(blocks[bi] + [p])))
        # discrete radius: not monotone under insertion, so prune on the
        # half-diameter lower bound and evaluate exactly at leaves only
        return new_diam, unpower(new_diam, norm) / 2.0

    def dfs(i: int, running: float) -> None:
        nonlocal incumbent, best_blocks, best_cost
        if i == n:
            if len(blocks) != k:
                return
            if problem is Problem.DISCRETE_RADIUS:
                total = 0.0
                for b in blocks:
                    c = block_drad(tuple(sorted(b)))
                    if c > total:
                        total = c
            else:
                total = running
            if total < incumbent:
                incumbent = total
            if total < best_cost:
                best_cost = total
                best_blocks = [tuple(sorted(b)) for b in blocks]
            return
        # remaining points must be able to open the still-missing blocks
        if k - len(blocks) > n - i:
            return
        p = order[i]
        for bi in range(len(blocks)):
            new_diam, new_cost = assign_cost(bi, p)
            new_running = max(running, new_cost)
            if new_running >= incumbent:
                continue
            old_diam, old_cost = block_diam_pow[bi], block_cost[bi]
            blocks[bi].append(p)
            block_diam_pow[bi], block_cost[bi] = new_diam, new_cost
            dfs(i + 1, new_running)
            blocks[bi].pop()
            block_diam_pow[bi], block_cost[bi] = old_diam, old_cost
        if len(blocks) < k:
            blocks.append([p])
            block_diam_pow.append(0.0)
            block_cost.append(0.0)
            dfs(i + 1, running)
            blocks.pop()
            block_diam_pow.pop()
            block_cost.pop()

    dfs(0, 0.0)
    if best_blocks is None:
        # over-tight hint (should not happen when upper_bound is achievable)
        return optimal_by_partition_enum(inst, k, problem, upper_bound=None)
    return OracleResult(
        problem=problem,
        k=k,
        opt_cost=best_cost,
        partition=_sorted_clusters(best_blocks),
        method="partition-enum",
    )


def optimal_discrete_kcenter(inst: Instance, k: int) -> OracleResult:
    """Exact optimum of the member-centered radius cost by center enumeration.

    Every k-subset of the points is tried as a center set; each point is
    assigned to its nearest chosen center and the worst assignment distance
    is minimized over subsets.
    """
    n = len(inst.points)
    _validate_k(n, k)
    if math.comb(n, k) > CENTER_ENUM_BUDGET:
        raise SizeLimitError(
            f"C({n},{k}) center subsets exceed the {CENTER_ENUM_BUDGET:,} budget"
        )
    dist = unpower_array(powered_matrix(inst), inst.norm)
    best = math.inf
    best_centers: tuple[int, ...] | None = None
    for centers in combinations(range(n), k):
        cost = float(dist[:, centers].min(axis=1).max())
        if cost < best:
            best = cost
            best_centers = centers
    assert best_centers is not None
    cols = dist[:, best_centers]
    assignment = cols.argmin(axis=1)
    for slot, c in enumerate(best_centers):
        assignment[c] = slot  # a center always claims itself (duplicates)
    blocks = [[] for _ in best_centers]
    for p, slot in enumerate(assignment):
        blocks[slot].append(p)
    return OracleResult(
        problem=Problem.DISCRETE_RADIUS,
        k=k,
        opt_cost=best,
        partition=_sorted_clusters(blocks),
        method="center-subset-enum",
    )


def optimal_diameter_1d(inst: Instance, k: int) -> OracleResult:
    """Exact optimal diameter cost in dimension 1 via segment DP.

    After sorting, some optimal partition uses contiguous segments, so the
    minimum over segmentations of the maximum segment span is the optimum.
    """
    if inst.dim != 1:
        raise ValueError(f"one-dimensional oracle got dim={inst.dim}")
    n = len(inst.points)
    _validate_k(n, k)
    order = sorted(range(n), key=lambda i: inst.points[i][0])
    vals = [inst.points[i][0] for i in order]

    inf = math.inf
    # best[m][j]: minimal max-span splitting vals[0..j] into m+1 segments
    best = [[inf] * n for _ in range(k)]
    split = [[-1] * n for _ in range(k)]
    for j in range(n):
        best[0][j] = vals[j] - vals[0]
    for m in range(1, k):
        for j in range(m, n):
            choice = inf
            where = -1
            for i in range(m - 1, j):
                cand = max(best[m - 1][i], vals[j] - vals[i + 1])
                if cand < choice:
                    choice = cand
                    where = i
            best[m][j] = choice
            split[m][j] = where
    opt = best[k - 1][n - 1]
    blocks: list[list[int]] = []
    j = n - 1
    for m in range(k - 1, -1, -1):
        i = split[m][j] if m > 0 else -1
        blocks.append([order[t] for t in range(i + 1, j + 1)])
        j = i
    return OracleResult(
        problem=Problem.DIAMETER,
        k=k,
        opt_cost=float(opt),
        partition=_sorted_clusters(blocks),
        method="one-dim-dp",
    )


def min_pairwise_distance(points: Sequence[Sequence[float]], norm: Norm) -> float:
    """Exact minimum over all point pairs (brute force)."""
    if len(points) < 2:
        raise ValueError("need at least two points")
    best = math.inf
    for i, a in enumerate(points):
        for b in points[i + 1:]:
            v = distance(a, b, norm)
            if v < best:
                best = v
    return best


def volume_lemma_check(sample: CoverableSample, dim: int) -> VolumeCheck:
    """Evaluate the packing bound on a coverable sample.

    Computes the minimum pairwise distance delta and the bound
    u = 4 r (k/|P|)^(1/d); ``holds`` is delta <= u.  A False on a certified
    sample indicates a bug, not a counterexample.
    """
    if dim != sample.cover.dim:
        raise ValueError(f"dim={dim} but cover has dimension {sample.cover.dim}")
    k = sample.cover.k
    m = len(sample.points)
    if m <= k:
        raise ValueError(f"need more points than cover balls: |P|={m}, k={k}")
    delta = min_pairwise_distance(sample.points, sample.norm)
    bound = 4.0 * sample.cover.radius * (k / m) ** (1.0 / dim)
    return VolumeCheck(min_pair_dist=delta, bound=bound, holds=delta <= bound)

"""Greedy merge loop for the three linkages, merge scripts, and dendrograms.

Starting from singletons, each step merges the pair of clusters whose union
has minimum cost under the chosen linkage (one of the three cost functions
in :mod:`agglolab.metrics`).  Pairs whose costs agree within a relative
tolerance of 1e-9 (absolute floor 1e-12) count as tied; ties are resolved
either lexicographically or by a prescribed merge script.

Cluster id numbering is fixed: the n input points are clusters 0..n-1 and
the cluster created by step t (t = 0, 1, ...) gets id n + t.  Scripts use
this numbering and every scripted merge must itself be cost-minimal at its
step, otherwise the run aborts with :class:`ScriptViolationError`.

Costs along a run never decrease: the cost of each level equals the cost of
the cluster created last, and the cost of any available union bounds the
next step from above.  ``MergeHistory.check_invariants`` verifies this.

A single run is sequential and deterministic; runs over distinct instances
can proceed in parallel, and a returned ``MergeHistory`` is immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .metrics import (
    Cluster,
    Instance,
    Problem,
    powered_matrix,
    radius,
    unpower,
    unpower_array,
)

__all__ = [
    "MergeScript", "MergeStep", "MergeHistory",
    "ScriptViolationError",
    "agglomerate", "agglomerate_nn_chain", "greedy_tie_margin",
    "TIE_REL_TOL", "TIE_ABS_TOL",
]

TIE_REL_TOL = 1e-9
TIE_ABS_TOL = 1e-12


def _tie_band(best: float) -> float:
    return best + max(TIE_REL_TOL * abs(best), TIE_ABS_TOL)


class ScriptViolationError(ValueError):
    """A scripted merge was not cost-minimal (or referenced a dead cluster)."""

    def __init__(self, step_index: int, scripted_cost: float | None, true_minimum: float | None, message: str):
        super().__init__(message)
        self.step_index = step_index
        self.scripted_cost = scripted_cost
        self.true_minimum = true_minimum


@dataclass(frozen=True)
class MergeScript:
    """Prescribed merge order: a list of (id_a, id_b) cluster-id pairs.

    May cover all n-1 merges or just a prefix; after the prefix the run
    continues with lexicographic tie-breaking.
    """

    steps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "steps", tuple((int(a), int(b)) for a, b in self.steps)
        )
        for t, (a, b) in enumerate(self.steps):
            if a == b:
                raise ValueError(f"script step {t} merges id {a} with itself")

    def __len__(self) -> int:
        return len(self.steps)


class MergeStep(NamedTuple):
    id_a: int
    id_b: int
    cost: float
    new_id: int
    size: int


@dataclass(frozen=True)
class MergeHistory:
    """Full or truncated dendrogram: the ordered merges with their costs."""

    instance: Instance
    linkage: Problem
    steps: tuple[MergeStep, ...]

    @property
    def n(self) -> int:
        return len(self.instance.points)

    @property
    def final_level(self) -> int:
        """Number of clusters remaining after the recorded merges."""
        return self.n - len(self.steps)

    def cost_at_k(self, k: int) -> float:
        """Cost of the level with k clusters: 0 at k = n, otherwise the cost
        of the merge that produced that level."""
        n = self.n
        if not 1 <= k <= n:
            raise ValueError(f"k must be in [1, {n}], got {k}")
        if k == n:
            return 0.0
        if k < self.final_level:
            raise ValueError(f"history truncated at level {self.final_level}; k={k} unavailable")
        return self.steps[n - k - 1].cost

    def clusters_at_k(self, k: int) -> list[Cluster]:
        """The partition at level k, sorted by smallest member id."""
        n = self.n
        if not 1 <= k <= n:
            raise ValueError(f"k must be in [1, {n}], got {k}")
        if k < self.final_level:
            raise ValueError(f"history truncated at level {self.final_level}; k={k} unavailable")
        members: dict[int, tuple[int, ...]] = {i: (i,) for i in range(n)}
        costs: dict[int, float] = {i: 0.0 for i in range(n)}
        for step in self.steps[: n - k]:
            members[step.new_id] = tuple(sorted(members.pop(step.id_a) + members.pop(step.id_b)))
            costs[step.new_id] = step.cost
        out = []
        for cid in sorted(members, key=lambda c: members[c][0]):
            cached_diam = costs[cid] if self.linkage is Problem.DIAMETER or len(members[cid]) == 1 else None
            cached_drad = costs[cid] if self.linkage is Problem.DISCRETE_RADIUS or len(members[cid]) == 1 else None
            out.append(Cluster(members[cid], cached_diameter=cached_diam, cached_drad=cached_drad))
        return out

    def check_invariants(self, deep: bool = False) -> None:
        """Raise ValueError if the recorded run is internally inconsistent.

        Always checks id numbering, sizes and nondecreasing costs; with
        ``deep`` also replays the merges to verify that every level is a
        partition and that levels nest.

        Cost monotonicity is checked up to the tie tolerance: pairs whose
        costs agree within the band are merged in lexicographic order, so a
        run may record a dip of at most one band width (exactly equal tied
        costs, as on integer coordinates, record no dip at all).  A larger
        decrease is an error.
        """
        n = self.n
        prev_cost = 0.0
        for t, step in enumerate(self.steps):
            if step.new_id != n + t:
                raise ValueError(f"step {t}: new cluster id {step.new_id}, expected {n + t}")
            if step.cost < prev_cost - max(TIE_REL_TOL * prev_cost, TIE_ABS_TOL):
                raise ValueError(
                    f"step {t}: cost {step.cost!r} decreased below previous {prev_cost!r} "
                    f"beyond the tie tolerance"
                )
            prev_cost = max(prev_cost, step.cost)
        if deep:
            members: dict[int, frozenset[int]] = {i: frozenset((i,)) for i in range(n)}
            for t, step in enumerate(self.steps):
                if step.id_a not in members or step.id_b not in members:
                    raise ValueError(f"step {t} references a merged or unknown cluster id")
                union = members.pop(step.id_a) | members.pop(step.id_b)
                if len(union) != step.size:
                    raise ValueError(f"step {t}: recorded size {step.size} != {len(union)}")
                members[step.new_id] = union
            covered: set[int] = set()
            for group in members.values():
                if covered & group:
                    raise ValueError("final level is not a partition")
                covered |= group
            if covered != set(range(n)):
                raise ValueError("final level does not cover all points")

    def to_text(self) -> str:
        """One merge per line: ``id_a,id_b,cost,new_id,size`` (cost at 12
        significant digits)."""
        return "\n".join(
            f"{s.id_a},{s.id_b},{s.cost:.12g},{s.new_id},{s.size}" for s in self.steps
        )


# ---------------------------------------------------------------------------
# cost backends


class _DiameterCosts:
    """Cached pair matrix for complete linkage.

    diam(A u B u C) = max(diam(A u C), diam(B u C), diam(A u B)), so the row
    for a merged cluster is an elementwise max; no union is ever re-scanned.
    Entries are powered distances; roots are taken at the boundary.
    """

    def __init__(self, inst: Instance):
        n = len(inst.points)
        size = max(2 * n - 1, 1)
        self.norm = inst.norm
        self.m = np.zeros((size, size), dtype=float)
        self.m[:n, :n] = powered_matrix(inst)

    def cost(self, a: int, b: int) -> float:
        return unpower(float(self.m[a, b]), self.norm)

    def pair_cost_table(self, ids: list[int]) -> np.ndarray:
        view = self.m[np.ix_(ids, ids)]
        return unpower_array(view, self.norm)

    def merged(self, a: int, b: int, new: int, others: list[int]) -> None:
        if not others:
            return
        idx = np.asarray(others)
        row = np.maximum(self.m[a, idx], self.m[b, idx])
        row = np.maximum(row, self.m[a, b])
        self.m[new, idx] = row
        self.m[idx, new] = row


class _RecomputeCosts:
    """Pair-cost memo for radius / discrete-radius linkage.

    No exact union decomposition exists for these costs, so each candidate
    pair recomputes on the union; results are memoized until one side merges
    (keys with dead ids simply stop being queried).
    """

    def __init__(self, inst: Instance, linkage: Problem, members: dict[int, tuple[int, ...]]):
        self.inst = inst
        self.linkage = linkage
        self.members = members
        self.norm = inst.norm
        self.dpow = powered_matrix(inst)
        self.memo: dict[tuple[int, int], float] = {}

    def cost(self, a: int, b: int) -> float:
        key = (a, b) if a < b else (b, a)
        val = self.memo.get(key)
        if val is None:
            ids = sorted(self.members[a] + self.members[b])
            if self.linkage is Problem.DISCRETE_RADIUS:
                sub = self.dpow[np.ix_(ids, ids)]
                val = unpower(float(sub.max(axis=1).min()), self.norm)
            else:
                val = radius(ids, self.inst).radius
            self.memo[key] = val
        return val

    def merged(self, a: int, b: int, new: int, others: list[int]) -> None:
        pass  # memo misses populate lazily


def _make_backend(inst: Instance, linkage: Problem, members: dict[int, tuple[int, ...]]):
    if linkage is Problem.DIAMETER:
        return _DiameterCosts(inst)
    return _RecomputeCosts(inst, linkage, members)


# ---------------------------------------------------------------------------
# greedy loop


def _greedy(
    inst: Instance,
    linkage: Problem,
    script: MergeScript | None,
    stop_at_k: int | None,
    margins: list[float] | None = None,
) -> list[MergeStep]:
    n = len(inst.points)
    target_level = 1 if stop_at_k is None else stop_at_k
    if not 1 <= target_level <= n:
        raise ValueError(f"stop_at_k must be in [1, {n}], got {stop_at_k}")
    total_steps = n - target_level

    scripted = script.steps if script is not None else ()
    if len(scripted) > total_steps:
        raise ValueError(
            f"script has {len(scripted)} steps but the run stops after {total_steps}"
        )

    members: dict[int, tuple[int, ...]] = {i: (i,) for i in range(n)}
    mins: dict[int, int] = {i: i for i in range(n)}
    backend = _make_backend(inst, linkage, members)
    active: list[int] = list(range(n))
    steps: list[MergeStep] = []

    for t in range(total_steps):
        ids = sorted(active)
        scripted_step = t < len(scripted)
        if isinstance(backend, _DiameterCosts):
            table = backend.pair_cost_table(ids)
            masked = np.where(np.triu(np.ones(table.shape, dtype=bool), k=1), table, math.inf)
            best = float(masked.min())
            band = _tie_band(best)
            tied = []
            if not scripted_step:
                ti, tj = np.nonzero(masked <= band)
                tied = [(ids[i], ids[j]) for i, j in zip(ti.tolist(), tj.tolist())]
            if margins is not None:
                above = masked[masked > band]
                margins.append(float(above.min()) - best if above.size else math.inf)
        else:
            best = math.inf
            for i, a in enumerate(ids):
                for b in ids[i + 1:]:
                    c = backend.cost(a, b)
                    if c < best:
                        best = c
            band = _tie_band(best)
            tied = []
            second = math.inf
            if not scripted_step or margins is not None:
                for i, a in enumerate(ids):
                    for b in ids[i + 1:]:
                        c = backend.cost(a, b)
                        if c <= band:
                            tied.append((a, b))
                        elif c < second:
                            second = c
            if margins is not None:
                margins.append(second - best)

        if scripted_step:
            sa, sb = scripted[t]
            if sa not in members or sb not in members or sa not in active or sb not in active:
                raise ScriptViolationError(
                    t, None, best,
                    f"script step {t} references cluster ids ({sa}, {sb}) that do not "
                    f"both exist at that step",
                )
            cost = backend.cost(sa, sb)
            if cost > band:
                raise ScriptViolationError(
                    t, cost, best,
                    f"script step {t} merges ({sa}, {sb}) at cost {cost:.12g} but the "
                    f"minimum merge cost is {best:.12g}",
                )
            pick = (sa, sb) if sa < sb else (sb, sa)
        else:
            pick = min(tied, key=lambda ab: (min(mins[ab[0]], mins[ab[1]]),
                                             max(mins[ab[0]], mins[ab[1]])))
            cost = backend.cost(*pick)

        a, b = pick
        new_id = n + t
        active.remove(a)
        active.remove(b)
        backend.merged(a, b, new_id, active)
        active.append(new_id)
        union = tuple(sorted(members.pop(a) + members.pop(b)))
        members[new_id] = union
        mins[new_id] = min(mins[a], mins[b])
        steps.append(MergeStep(a, b, cost, new_id, len(union)))

    return steps


def agglomerate(
    inst: Instance,
    linkage: Problem,
    script: MergeScript | None = None,
    stop_at_k: int | None = None,
) -> MergeHistory:
    """Run the greedy merge loop; returns the dendrogram.

    With ``script`` the prescribed pairs are taken (each must be cost-minimal
    within tolerance); without it, ties break lexicographically by the pair
    of smallest member ids.  ``stop_at_k`` truncates the run at that level.
    """
    steps = _greedy(inst, linkage, script, stop_at_k)
    return MergeHistory(instance=inst, linkage=linkage, steps=tuple(steps))


def greedy_tie_margin(inst: Instance, linkage: Problem = Problem.DIAMETER) -> float:
    """Smallest gap, over all steps of a lexicographic run, between the best
    merge cost and the best strictly-worse one.  Zero or tiny values mean the
    instance has ties; used to certify tie-free test instances."""
    margins: list[float] = []
    _greedy(inst, linkage, None, None, margins=margins)
    return min(margins) if margins else math.inf


# ---------------------------------------------------------------------------
# nearest-neighbor-chain fast path (complete linkage only)


def agglomerate_nn_chain(inst: Instance) -> MergeHistory:
    """Complete-linkage dendrogram via the nearest-neighbor chain.

    Complete linkage is reducible, so chasing nearest neighbors until a
    reciprocal pair appears yields the same merge set as the naive greedy
    loop on tie-free instances; the collected merges are then replayed in
    greedy order (cost, then lexicographic) so the returned history matches
    ``agglomerate(inst, Problem.DIAMETER)`` step for step.
    """
    n = len(inst.points)
    norm = inst.norm
    if n <= 1:
        return MergeHistory(instance=inst, linkage=Problem.DIAMETER, steps=())

    size = 2 * n - 1
    m = np.zeros((size, size), dtype=float)
    m[:n, :n] = powered_matrix(inst)
    members: dict[int, tuple[int, ...]] = {i: (i,) for i in range(n)}
    mins: dict[int, int] = {i: i for i in range(n)}
    active: set[int] = set(range(n))
    pending: list[tuple[int, int, float, int]] = []  # (a, b, cost, tmp_new)
    next_tmp = n
    chain: list[int] = []

    while len(active) > 1:
        if not chain:
            chain.append(min(active, key=lambda c: mins[c]))
        top = chain[-1]
        prev = chain[-2] if len(chain) >= 2 else None
        nearest = None
        nearest_key = None
        for cand in active:
            if cand == top:
                continue
            key = (m[top, cand], 0 if cand == prev else 1, mins[cand])
            if nearest is None or key < nearest_key:
                nearest = cand
                nearest_key = key
        if nearest == prev:
            a, b = prev, top
            chain.pop()
            chain.pop()
            cost = unpower(float(m[a, b]), norm)
            new = next_tmp
            next_tmp += 1
            active.discard(a)
            active.discard(b)
            rest = list(active)
            if rest:
                idx = np.asarray(rest)
                row = np.maximum(m[a, idx], m[b, idx])
                row = np.maximum(row, m[a, b])
                m[new, idx] = row
                m[idx, new] = row
            active.add(new)
            members[new] = tuple(sorted(members[a] + members[b]))
            mins[new] = min(mins[a], mins[b])
            pending.append((a, b, cost, new))
        else:
            chain.append(nearest)

    # Replay in greedy order: among merges whose operands both exist, apply
    # the one with minimum (cost, lexicographic pair of member minima).
    final_id: dict[int, int] = {i: i for i in range(n)}
    remaining = list(pending)
    steps: list[MergeStep] = []
    t = 0
    while remaining:
        ready = [mg for mg in remaining if mg[0] in final_id and mg[1] in final_id]
        mg = min(ready, key=lambda e: (e[2], min(mins[e[0]], mins[e[1]]),
                                       max(mins[e[0]], mins[e[1]])))
        remaining.remove(mg)
        a, b, cost, tmp_new = mg
        fa, fb = final_id.pop(a), final_id.pop(b)
        new_id = n + t
        final_id[tmp_new] = new_id
        lo, hi = (fa, fb) if fa < fb else (fb, fa)
        steps.append(MergeStep(lo, hi, cost, new_id, len(members[tmp_new])))
        t += 1

    return MergeHistory(instance=inst, linkage=Problem.DIAMETER, steps=tuple(steps))

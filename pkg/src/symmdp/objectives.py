"""Qualitative objective analysis on top of the MEC decomposition.

* ``sym_as_reach``  almost-sure reachability of a target set,
* ``win_pec``       union of winning end-components of a parity objective
                    (min-even semantics), via a binary recursion over the
                    priority range with O(log d) MEC decompositions,
* ``asw_parity``    almost-sure parity winning region, reduced to
                    almost-sure reachability of the winning end-components.

Both analyses consume MEC decompositions as streams and never store the
full decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ContractViolation, VertexSet, release_all
from .graph import graph_reach, random_attractor
from .mec import CollapseMap, collapse_ec, mec_stream


class PriorityMap:
    """Per-vertex priorities in [0, 2d] plus the nested threshold family
    {v | p(v) >= i} for 1 <= i <= 2d, built once and shared read-only."""

    def __init__(self, ctx, priorities):
        priorities = [int(p) for p in priorities]
        if len(priorities) != ctx.n:
            raise ContractViolation("one priority per vertex required")
        if any(p < 0 for p in priorities):
            raise ContractViolation("priorities must be non-negative")
        self.ctx = ctx
        self.priorities = priorities
        self.top = max(priorities) if priorities else 0
        self._universe = ctx.full()
        self._empty = ctx.empty()
        self._geq = {}
        for i in range(1, self.top + 1):
            self._geq[i] = ctx.from_ids([v for v, p in enumerate(priorities) if p >= i])

    @property
    def d(self):
        return (self.top + 1) // 2

    def geq(self, i):
        """Borrowed threshold set {v | p(v) >= i}; callers must not release."""
        if i <= 0:
            return self._universe
        if i > self.top:
            return self._empty
        return self._geq[i]

    def exactly(self, m):
        """New set of the priority-m vertices."""
        return self.geq(m).difference(self.geq(m + 1))

    def release(self):
        release_all(self._universe, self._empty, *self._geq.values())


def min_priority(M, pm):
    """Minimum priority among the members of ``M``: binary search for the
    largest threshold containing all of ``M``, O(log d) subset tests."""
    if M.is_empty():
        raise ContractViolation("min_priority of an empty set")
    lo, hi = 0, pm.top
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if M.subset_of(pm.geq(mid)):
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass
class WinningRegion:
    asw: VertexSet
    objective: str


def sym_as_reach(T, P, gamma=None, stats=None):
    """Almost-sure winning region for reaching ``T`` in ``P``.

    Collapses every MEC in a working copy (extending the target through
    MECs that touch it), keeps the vertices that reach the target and whose
    random attractor of the non-reaching part misses them, and expands the
    answer back through the MECs.  Consumes the MEC decomposition as a
    stream, twice.

    The extended target set is exempt from the attractor: a play standing on
    a target has already won, whatever happens afterwards.  With every MEC
    collapsed this one exemption is sound, since the remaining MDP has no
    non-trivial end-components that could shelter a non-winning vertex.
    """
    ctx = P.ctx
    work = P.copy()
    cmap = CollapseMap()
    t_cur = T.copy()
    for m in mec_stream(P, gamma, stats):
        hit = m.intersect(t_cur)
        if not hit.is_empty():
            t2 = t_cur.union(m)
            t_cur.release()
            t_cur = t2
        hit.release()
        collapse_ec(m, work, cmap)
        m.release()
    t_live = t_cur.intersect(work.vertices)
    t_cur.release()
    S = graph_reach(work, t_live)
    no_reach = work.vertices.difference(S)
    S.release()
    A = random_attractor(work, no_reach, forbidden=t_live).attractor
    release_all(no_reach, t_live)
    R = work.vertices.difference(A)
    A.release()
    for m in mec_stream(P, gamma, stats):
        hit = m.intersect(R)
        if not hit.is_empty():
            r2 = R.union(m)
            R.release()
            R = r2
        release_all(hit, m)
    work.release()
    return WinningRegion(R, "reach")


def win_pec(pm, i, j, P, cmap, gamma=None, stats=None):
    """Union of the winning end-components for priority levels in [i, j].

    ``P`` is consumed: attractors of low-priority vertices are removed and
    the MECs of the remainder are collapsed in place before the lower half
    of the range recurses on it.  Odd-minimum MECs recurse on a materialised
    sub-MDP with the minimum-priority vertices and their attractor removed,
    which strictly shrinks the vertex set.  The returned set is over
    original ids (every contribution is expanded through the collapse map
    as it is found).
    """
    ctx = P.ctx
    W = ctx.empty()
    if j < i:
        return W
    if stats is not None:
        stats.enter()
    try:
        m_mid = math.ceil((i + j) / 2)
        low = P.vertices.difference(pm.geq(m_mid))
        X = random_attractor(P, low).attractor
        low.release()
        Z = P.vertices.difference(X)
        X.release()
        sub = P.restricted_copy(Z)
        Z.release()

        for M in mec_stream(sub, gamma):
            m_true = cmap.expand_set(M)
            mn = min_priority(m_true, pm)
            if mn % 2 == 0:
                w2 = W.union(m_true)
                W.release()
                W = w2
            else:
                pmin = pm.exactly(mn)
                seeds = pmin.intersect(P.vertices)
                pmin.release()
                A = random_attractor(P, seeds).attractor
                seeds.release()
                vu = M.difference(A)
                A.release()
                if not vu.is_empty():
                    p_u = P.restricted_copy(vu)
                    cmap_u = cmap.fork()
                    got = win_pec(pm, mn + 1, j, p_u, cmap_u, gamma, stats)
                    p_u.release()
                    w2 = W.union(got)
                    release_all(W, got)
                    W = w2
                vu.release()
            release_all(M, m_true)

        # collapse the mid-level MECs in place; the remainder handles [i, m-1]
        for M in mec_stream(sub, gamma):
            collapse_ec(M, P, cmap)
            M.release()
        sub.release()
        got = win_pec(pm, i, m_mid - 1, P, cmap, gamma, stats)
        w2 = W.union(got)
        release_all(W, got)
        return w2
    finally:
        if stats is not None:
            stats.exit()


def asw_parity(pm, P, gamma=None, stats=None, reach_stats=None):
    """Almost-sure winning region of the parity objective: the winning
    end-components are computed on a disposable copy, then almost-sure
    reachability of them runs on the original ``P``."""
    work = P.copy()
    cmap = CollapseMap()
    we = win_pec(pm, 0, pm.top, work, cmap, gamma, stats)
    work.release()
    region = sym_as_reach(we, P, gamma, reach_stats)
    we.release()
    return WinningRegion(region.asw, "parity")

"""Symbolic graph primitives.

* ``graph_reach``      backward reachability fixpoint
* ``random_attractor`` least set forced toward a target with positive
                       probability (levels available on request)
* ``separator``        BFS-layer separator of a strongly connected set
* ``scc_stream``       streaming SCC decomposition with optional start vertex
* ``scc_of``           the single SCC containing a given vertex

All functions operate on a ``SymbolicMdp`` and count every primitive they
perform against the context meter.  Sub-graph restriction is realised by
intersecting operand sets, never by copying the edge relation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ContractViolation, VertexSet, release_all


def graph_reach(P, S):
    """Vertices that can reach ``S`` inside the live universe of ``P``.

    Least fixpoint of predecessor images; performs at most
    ``|result \\ S| + 1`` pre operations.
    """
    R = S.intersect(P.vertices)
    while True:
        pr = P.pre(R)
        new = pr.difference(R)
        pr.release()
        if new.is_empty():
            new.release()
            return R
        nxt = R.union(new)
        release_all(R, new)
        R = nxt


@dataclass
class AttractorResult:
    attractor: VertexSet
    levels: list | None = None


def random_attractor(P, T, restrict=None, want_levels=False, forbidden=None):
    """Random attractor of ``T`` in ``P`` (or in the sub-MDP ``P[restrict]``).

    Level i+1 adds predecessors of level i, minus the player-1 vertices that
    still have an edge into the complement.  Costs O(|attractor \\ T| + 1)
    levels with a constant number of operations each.

    ``forbidden`` exempts a vertex set from ever being attracted (used to
    keep already-won targets out of losing regions).

    ``want_levels=True`` additionally returns the level sets A_0 <= A_1 <= ...
    (they stay live and must be released by the caller); by default only the
    final attractor set is kept so that peak-live accounting stays tight.
    """
    universe = restrict if restrict is not None else P.vertices
    A = T.intersect(universe)
    levels = [A.copy()] if want_levels else None
    while True:
        comp = universe.difference(A)
        cand0 = P.pre(A)
        cand = cand0.intersect(universe)
        esc0 = P.pre(comp)
        esc = esc0.intersect(universe)
        blocked = esc.intersect(P.v1)
        add0 = cand.difference(blocked)
        add = add0.difference(A)
        release_all(comp, cand0, cand, esc0, esc, blocked, add0)
        if forbidden is not None:
            a2 = add.difference(forbidden)
            add.release()
            add = a2
        if add.is_empty():
            add.release()
            break
        nxt = A.union(add)
        release_all(A, add)
        A = nxt
        if want_levels:
            levels.append(A.copy())
    return AttractorResult(A, levels)


def separator(X, gamma, P, root=None):
    """BFS-layer separator of the strongly connected set ``X``.

    With q = floor(gamma / (2 log2 |X|)) >= 1: if some vertex of ``X`` is at
    distance >= gamma from the root (in the forward or the backward BFS
    tree), returns a non-empty q-separator T, i.e. every SCC of X \\ T has at
    most ``|X| - q*|T|`` vertices and ``|T| <= |X|/q``.  If both trees have
    fewer than gamma levels the result is empty and the caller may conclude
    the diameter of ``X`` is below 2*gamma.  Runs in O(|X|) symbolic
    operations with a constant number of live sets.
    """
    k = X.cardinality()
    if k == 0:
        raise ContractViolation("separator of an empty set")
    ctx = P.ctx
    if k == 1:
        return ctx.empty()
    q = math.floor(gamma / (2.0 * math.log2(k)))
    if q < 1:
        raise ContractViolation("gamma too small for |X| (q must be >= 1)")

    r = root if root is not None else X.pick()

    def grow(step):
        """One BFS sweep; records the first qualifying low layer and the last
        qualifying high layer.  Returns (i, c, L, R, K)."""
        i = 0
        c = 0
        K = ctx.singleton(r)
        L = None
        R = None
        capped = step is P.pre  # the backward sweep stops once i exceeds gamma
        while True:
            if capped and i > gamma:
                break
            F0 = step(K)
            F = F0.intersect(X)
            F0.release()
            if F.subset_of(K):
                F.release()
                break
            Z = F.difference(K)
            zc = Z.cardinality()
            if q <= i <= gamma / 2 and L is None and zc <= 2 ** (i / q - 1):
                L = Z.copy()
            if gamma / 2 <= i <= gamma - q and zc <= 2 ** ((gamma - i) / q - 1):
                if R is not None:
                    R.release()
                R = Z.copy()
            if i <= gamma / 2:
                c += zc
            nK = K.union(F)
            release_all(K, F, Z)
            K = nK
            i += 1
        return i, c, L, R, K

    i, c, L, R, K = grow(P.post)
    if i < gamma:
        release_all(K, L, R)
        i, c, L, R, K = grow(P.pre)
    K.release()
    if i < gamma:
        release_all(L, R)
        return ctx.empty()
    if c < k / 2:
        if R is not None:
            R.release()
        return L if L is not None else ctx.empty()
    if L is not None:
        L.release()
    return R if R is not None else ctx.empty()


# ---------------------------------------------------------------------------
# Streaming SCC decomposition.
#
# Forward-set/skeleton approach: compute the forward set FW of a start vertex
# N, close backwards inside FW to obtain the SCC of N, emit it, and recurse on
# V \ FW (restarting from the skeleton prefix) and FW \ SCC (restarting from
# the far end of the skeleton).  The skeleton is a shortest path from N to
# the deepest BFS level; consuming regions from the far end of the path keeps
# the total operation count proportional to the sum of SCC diameters.
#
# To keep the number of simultaneously live sets sub-linear, the forward BFS
# only checkpoints every K-th level (K ~ sqrt(n)); the backward skeleton walk
# re-expands one checkpoint segment at a time.  Descending into the smaller
# half first bounds the pending-region stack by log n entries.
# ---------------------------------------------------------------------------


def _forward_levels(P, V, N, K):
    """BFS forward from N inside V.

    Returns (FW, checkpoints, depth) where checkpoints hold
    (level_set, union_below, level_index) every K levels; ``K=None``
    disables checkpointing.
    """
    L = N.copy()
    U = P.ctx.empty()
    depth = 0
    cps = []
    while not L.is_empty():
        if K is not None and depth % K == 0:
            cps.append((L.copy(), U.copy(), depth))
        nU = U.union(L)
        p0 = P.post(L)
        p1 = p0.intersect(V)
        nL = p1.difference(nU)
        release_all(U, L, p0, p1)
        U, L = nU, nL
        depth += 1
    L.release()
    return U, cps, depth


def _skeleton(P, V, cps, depth):
    """Rebuild a shortest path to the deepest BFS level from the checkpoints.

    Returns (newS, newN): the path as a set and its far endpoint (singleton).
    Consumes and releases the checkpoints.
    """
    ctx = P.ctx
    target = depth - 1  # index of the deepest non-empty level
    path = ctx.empty()
    far = None  # singleton of the path's far endpoint (deepest vertex)
    head = None  # singleton of the current walk position
    head_idx = None
    for ci in range(len(cps) - 1, -1, -1):
        cpL, cpU, d0 = cps[ci]
        if d0 > target:
            release_all(cpL, cpU)
            continue
        # re-expand levels d0 .. seg_end
        seg_end = target if head is None else head_idx - 1
        levels = [cpL]
        U = cpU
        d = d0
        while d < seg_end:
            nU = U.union(levels[-1])
            p0 = P.post(levels[-1])
            p1 = p0.intersect(V)
            nL = p1.difference(nU)
            release_all(U, p0, p1)
            U = nU
            levels.append(nL)
            d += 1
        U.release()
        # walk the path backwards through this segment
        if head is None:
            v = levels[-1].pick()
            head = ctx.singleton(v)
            far = ctx.singleton(v)
            head_idx = target
            np_ = path.union(head)
            path.release()
            path = np_
        while head_idx > d0:
            j = head_idx - 1 - d0
            pr = P.pre(head)
            cand = pr.intersect(levels[j])
            v = cand.pick()
            release_all(pr, cand, head)
            head = ctx.singleton(v)
            head_idx -= 1
            np_ = path.union(head)
            path.release()
            path = np_
        for lv in levels:
            lv.release()
    if head is not None:
        head.release()
    newN = far if far is not None else ctx.empty()
    return path, newN


def _close_scc(P, N, FW):
    """Backward closure of N inside FW: the SCC of the vertex in N."""
    scc = N.copy()
    while True:
        pr = P.pre(scc)
        x = pr.intersect(FW)
        pr.release()
        if x.subset_of(scc):
            x.release()
            return scc
        nxt = scc.union(x)
        release_all(scc, x)
        scc = nxt


def scc_stream(P, restrict, start=None, skeleton=True):
    """Yield the SCCs of the subgraph of ``P`` induced by ``restrict``.

    SCCs are emitted as they are found; ownership of the yielded sets passes
    to the consumer.  If ``start`` is given, the first emitted SCC contains
    it.  Internal state stays within O(sqrt(n)) live sets (checkpointed BFS
    levels) plus O(log n) pending region triples: the smaller half of every
    split is processed first, so pending regions shrink geometrically.

    ``skeleton=False`` drops the shortest-path restarts: every region starts
    from a fresh pick.  That keeps only a logarithmic number of live sets
    (no BFS checkpoints) at the price of a weaker operation bound, which is
    the right trade for the quadratic baseline.
    """
    ctx = P.ctx
    K = max(1, math.isqrt(ctx.n))
    V0 = restrict.intersect(P.vertices)
    if start is not None:
        if not V0.contains(start):
            V0.release()
            raise ContractViolation("start vertex outside the restriction set")
        N0 = ctx.singleton(start)
    else:
        N0 = None
    pending = [(V0, None, N0)]  # (region, skeleton path or None, endpoint or None)
    try:
        while pending:
            V, S, N = pending.pop()
            if V.is_empty():
                release_all(V, S, N)
                continue
            if N is None or N.is_empty():
                if N is not None:
                    N.release()
                N = ctx.singleton(V.pick())
            if S is None:
                S = ctx.empty()
            FW, cps, depth = _forward_levels(P, V, N, K if skeleton else None)
            scc = _close_scc(P, N, FW)

            # region 2: FW \ SCC, restarted from the skeleton's far end
            V2 = FW.difference(scc)
            if V2.is_empty() or not skeleton:
                for cpL, cpU, _ in cps:
                    release_all(cpL, cpU)
                r2 = None if V2.is_empty() else (V2, None, None)
            else:
                newS, newN = _skeleton(P, V, cps, depth)
                S2 = newS.difference(scc)
                N2 = newN.difference(scc)
                release_all(newS, newN)
                r2 = (V2, S2, N2)

            # region 1: V \ FW, restarted from the path vertex feeding the SCC
            V1r = V.difference(FW)
            if V1r.is_empty():
                r1 = None
            elif not skeleton:
                r1 = (V1r, None, None)
            else:
                S1 = S.difference(scc)
                hit = scc.intersect(S)
                pr = P.pre(hit)
                N1 = pr.intersect(S1)
                release_all(hit, pr)
                r1 = (V1r, S1, N1)

            release_all(FW, V, S, N)
            if r1 is None:
                V1r.release()
            if r2 is None:
                V2.release()
            if r1 and r2:
                # queue the larger region below so the smaller is popped first
                if r1[0].cardinality() <= r2[0].cardinality():
                    pending.append(r2)
                    pending.append(r1)
                else:
                    pending.append(r1)
                    pending.append(r2)
            elif r1:
                pending.append(r1)
            elif r2:
                pending.append(r2)
            yield scc
    finally:
        for (V, S, N) in pending:
            release_all(V, S, N)


def scc_all(P, restrict, start=None):
    """Convenience list wrapper around ``scc_stream``."""
    return list(scc_stream(P, restrict, start))


def scc_of(P, restrict, v):
    """The SCC containing ``v`` in the subgraph induced by ``restrict``.

    Cheaper than a full stream when only one component is needed: a forward
    reachability sweep followed by a backward closure, O(|restrict|) ops and
    O(1) live sets.
    """
    R = restrict.intersect(P.vertices)
    if not R.contains(v):
        R.release()
        raise ContractViolation("vertex outside the restriction set")
    ctx = P.ctx
    FW = ctx.singleton(v)
    while True:
        p0 = P.post(FW)
        p1 = p0.intersect(R)
        new = p1.difference(FW)
        release_all(p0, p1)
        if new.is_empty():
            new.release()
            break
        nxt = FW.union(new)
        release_all(FW, new)
        FW = nxt
    N = ctx.singleton(v)
    scc = _close_scc(P, N, FW)
    release_all(N, FW, R)
    return scc

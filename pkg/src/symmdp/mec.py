"""Maximal end-component decomposition under the symbolic model.

Two algorithms behind one result contract:

* ``symbolic_mec``  two-stage separator-based decomposition: stage 1 streams
  the SCCs of the unmodified input and runs the recursive ``sym_mec`` against
  a mutable working copy (detected end-components are collapsed to single
  representatives); stage 2 re-streams the SCCs of the input restricted to
  the union of end-component vertices, which are exactly the non-trivial
  MECs.  Parametrised by ``gamma``: larger values buy fewer, cheaper
  recursion levels at the cost of longer BFS sweeps.

* ``classical_mec``  the quadratic baseline: repeat full SCC decomposition
  and random-attractor removal until every component is an end-component.

Both report MECs over original vertex ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import ContractViolation, VertexSet, release_all
from .graph import random_attractor, scc_of, scc_stream, separator


def default_gamma(n):
    """Default separator depth: the low end of the trade-off window,
    ceil((2*sqrt(n) + 2) * log2(n))."""
    if n < 2:
        return 1
    return math.ceil((2.0 * math.sqrt(n) + 2.0) * math.log2(n))


def gamma_for_epsilon(n, epsilon):
    """Map a space exponent to a separator depth:
    ceil(n^(1-eps) * 2 log2 n), clamped into [default_gamma(n), n]."""
    if n < 2:
        return 1
    raw = math.ceil(n ** (1.0 - epsilon) * 2.0 * math.log2(n))
    return max(min(max(raw, default_gamma(n)), n), 1)


class CollapseMap:
    """Union-find record of collapsed end-components.

    ``parent`` maps absorbed vertices to their representative; per-
    representative member lists make expansion back to original ids
    recoverable on demand.  The map itself is ordinary RAM state; only
    materialising a member set as a vertex set costs a symbolic operation.
    """

    def __init__(self):
        self.parent = {}
        self.members = {}

    def fork(self):
        m = CollapseMap()
        m.parent = dict(self.parent)
        m.members = {k: list(v) for k, v in self.members.items()}
        return m

    def representative(self, v):
        root = v
        while root in self.parent:
            root = self.parent[root]
        while v in self.parent and self.parent[v] != root:  # path compression
            self.parent[v], v = root, self.parent[v]
        return root

    def absorb(self, rep, absorbed_ids):
        bucket = self.members.setdefault(rep, [])
        for a in absorbed_ids:
            a = int(a)
            self.parent[a] = rep
            bucket.append(a)
            bucket.extend(self.members.pop(a, []))

    def expand_ids(self, ids):
        out = []
        for v in ids:
            v = int(v)
            out.append(v)
            out.extend(self.members.get(v, []))
        return out

    def expand_set(self, s):
        """Materialise ``s`` with every representative replaced by its full
        member group (one construction operation)."""
        return s.ctx.from_ids(self.expand_ids(s.to_ids()))


def rout(S, P):
    """Random vertices of ``S`` with at least one edge leaving ``S`` w.r.t.
    the current edge set of ``P``."""
    comp = P.vertices.difference(S)
    pr = P.pre(comp)
    inside = pr.intersect(S)
    result = inside.intersect(P.vr)
    release_all(comp, pr, inside)
    return result


def collapse_ec(X, P, cmap, validate=False):
    """Collapse the non-trivial end-component ``X`` of ``P`` to one vertex.

    Picks a player-1 representative when possible (otherwise promotes the
    picked random vertex), rewires the boundary edges of ``X`` through the
    representative, deletes everything else, and removes ``X`` minus the
    representative from the live universe.  Records the absorbed members in
    ``cmap``.  Full end-component validation costs symbolic operations, so
    it runs only with ``validate=True``.
    """
    ctx = P.ctx
    if validate:
        ro = rout(X, P)
        bad = not ro.is_empty()
        ro.release()
        if bad:
            raise ContractViolation("collapse_ec: set has leaving random edges")
        comp = scc_of(P, X, X.pick())
        whole = comp.equals(X)
        comp.release()
        if not whole:
            raise ContractViolation("collapse_ec: set is not strongly connected")

    xv1 = X.intersect(P.v1)
    if not xv1.is_empty():
        v = xv1.pick()
        sv = ctx.singleton(v)
    else:
        v = X.pick()
        sv = ctx.singleton(v)
        nv1 = P.v1.union(sv)
        nvr = P.vr.difference(sv)
        release_all(P.v1, P.vr)
        P.v1, P.vr = nv1, nvr
    xv1.release()

    rest = X.difference(sv)

    # add incoming and outgoing edges of X to v
    pre_x = P.pre(X)
    inc = pre_x.difference(X)
    post_x = P.post(X)
    out = post_x.difference(X)
    e_in = inc.product(sv)
    e_out = sv.product(out)
    e1 = P.edges.union(e_in)
    e2 = e1.union(e_out)
    release_all(pre_x, inc, post_x, out, e_in, e_out, e1, P.edges)

    # remove all edges touching X \ {v}, then the vertices themselves
    d_in = P.vertices.product(rest)
    d_out = rest.product(P.vertices)
    e3 = e2.difference(d_in)
    e4 = e3.difference(d_out)
    release_all(d_in, d_out, e2, e3)
    P.edges = e4

    nverts = P.vertices.difference(rest)
    P.vertices.release()
    P.vertices = nverts
    nv1 = P.v1.intersect(P.vertices)
    nvr = P.vr.intersect(P.vertices)
    release_all(P.v1, P.vr)
    P.v1, P.vr = nv1, nvr

    cmap.absorb(v, rest.to_ids())
    release_all(sv, rest)
    return v


class RunStats:
    """Recursion-depth instrumentation for the decomposition runs."""

    __slots__ = ("depth", "max_depth")

    def __init__(self):
        self.depth = 0
        self.max_depth = 0

    def enter(self):
        self.depth += 1
        if self.depth > self.max_depth:
            self.max_depth = self.depth

    def exit(self):
        self.depth -= 1


def _log_event(event_log, kind, *payload):
    if event_log is not None:
        event_log.append((kind,) + payload)


def sym_mec(S, gamma, P, cmap, stats=None, separator_fn=None, event_log=None):
    """All vertices of ``S`` (current ids of ``P``) lying in non-trivial
    end-components; every such end-component is collapsed in ``P``.

    ``S`` must be strongly connected in the current ``P``.  Control flow:
    singleton sets are trivial; a set with no leaving random edges is an
    end-component and is collapsed whole; otherwise a separator splits the
    set (recursion on the SCCs below its attractor, then incremental
    re-addition of the separator vertices), and when the separator is empty
    the attractor of the leaking random vertices is removed instead.  In the
    latter case one SCC of at least half the size may be deferred and
    processed by reusing the current frame, which keeps the recursion depth
    logarithmic for that branch.

    ``separator_fn`` is a test seam replacing the separator computation;
    ``event_log`` (a list) records the detection sequence.
    """
    ctx = P.ctx
    M = ctx.empty()
    if stats is not None:
        stats.enter()
    try:
        while True:  # frame reuse for the deferred SCC
            size = S.cardinality()
            if size <= 1:
                S.release()
                return M
            ro = rout(S, P)
            if ro.is_empty():
                ro.release()
                _log_event(event_log, "collapse",
                           frozenset(int(x) for x in S.to_ids()),
                           frozenset(cmap.expand_ids(S.to_ids())))
                collapse_ec(S, P, cmap)
                m2 = M.union(S)
                release_all(M, S)
                return m2
            if event_log is not None:
                _log_event(event_log, "rout", frozenset(cmap.expand_ids(ro.to_ids())))

            if gamma < 2.0 * math.log2(size):
                T = ctx.empty()  # q would be 0: take the small-diameter branch
            elif separator_fn is not None:
                T = separator_fn(S, gamma, P)
            else:
                T = separator(S, gamma, P)

            if not T.is_empty():
                ro.release()
                _log_event(event_log, "separator",
                           frozenset(int(x) for x in T.to_ids()))
                A = random_attractor(P, T, restrict=S).attractor
                SA = S.difference(A)
                A.release()
                for s_j in scc_stream(P, SA):
                    sub = sym_mec(s_j, gamma, P, cmap, stats, separator_fn, event_log)
                    m2 = M.union(sub)
                    release_all(M, sub)
                    M = m2
                SA.release()
                # incremental end-component detection for the separator vertices
                while not T.is_empty():
                    v = T.pick()
                    _log_event(event_log, "pick", v)
                    sv = ctx.singleton(v)
                    t2 = T.difference(sv)
                    release_all(T, sv)
                    T = t2
                    st = S.difference(T)
                    s1 = scc_of(P, st, v)
                    st.release()
                    if s1.cardinality() == 1:
                        _log_event(event_log, "trivial", v)
                        s1.release()
                        continue
                    ro1 = rout(s1, P)  # considers all vertices of P
                    Z = random_attractor(P, ro1, restrict=s1).attractor
                    ro1.release()
                    s2 = s1.difference(Z)
                    release_all(s1, Z)
                    if not s2.is_empty():
                        U = scc_of(P, s2, v)
                        _log_event(event_log, "collapse",
                                   frozenset(int(x) for x in U.to_ids()),
                                   frozenset(cmap.expand_ids(U.to_ids())))
                        collapse_ec(U, P, cmap)
                        m2 = M.union(U)
                        release_all(M, U)
                        M = m2
                    else:
                        _log_event(event_log, "no_new_ec", v)
                    s2.release()
                release_all(T, S)
                return M

            # separator empty: diameter below 2*gamma
            T.release()
            X = random_attractor(P, ro, restrict=S).attractor
            ro.release()
            SX = S.difference(X)
            X.release()
            deferred = None
            for s_j in scc_stream(P, SX):
                cj = s_j.cardinality()
                if deferred is None and cj > 1 and cj >= size / 2:
                    deferred = s_j
                    continue
                sub = sym_mec(s_j, gamma, P, cmap, stats, separator_fn, event_log)
                m2 = M.union(sub)
                release_all(M, sub)
                M = m2
            release_all(SX, S)
            if deferred is None:
                return M
            S = deferred  # tail: reuse this frame for the large SCC
    finally:
        if stats is not None:
            stats.exit()


@dataclass
class MecDecomposition:
    """Non-trivial MECs plus the vertices in no non-trivial MEC, over
    original vertex ids."""

    mecs: list
    non_mec: VertexSet

    def as_id_sets(self):
        return (sorted([frozenset(int(x) for x in m.to_ids()) for m in self.mecs],
                       key=lambda s: min(s)),
                frozenset(int(x) for x in self.non_mec.to_ids()))

    def release(self):
        for m in self.mecs:
            m.release()
        self.non_mec.release()


def mec_stream(P, gamma=None, stats=None, separator_fn=None):
    """Stream the non-trivial MECs of ``P`` one by one (original ids).

    ``P`` itself is never modified: stage 1 runs against an internal working
    copy, stage 2 streams the SCCs of ``P`` restricted to the expanded
    end-component vertices.  Ownership of yielded sets passes to the
    consumer, so results can be emitted and dropped without accumulating
    symbolic space.
    """
    ctx = P.ctx
    if gamma is None:
        gamma = default_gamma(P.vertices.cardinality())
    work = P.copy()
    cmap = CollapseMap()
    M = ctx.empty()
    try:
        for comp in scc_stream(P, P.vertices):
            sub = sym_mec(comp, gamma, work, cmap, stats, separator_fn)
            m2 = M.union(sub)
            release_all(M, sub)
            M = m2
        m_orig = cmap.expand_set(M)
        M.release()
        M = m_orig
        work.release()
        work = None
        for comp in scc_stream(P, M):
            yield comp
    finally:
        M.release()
        if work is not None:
            work.release()


def symbolic_mec(P, gamma=None, stats=None, separator_fn=None):
    """Full MEC decomposition of ``P`` (left unmodified)."""
    mecs = list(mec_stream(P, gamma, stats, separator_fn))
    acc = P.ctx.empty()
    for m in mecs:
        a2 = acc.union(m)
        release_all(acc)
        acc = a2
    non_mec = P.vertices.difference(acc)
    acc.release()
    return MecDecomposition(mecs, non_mec)


def classical_mec_stream(P):
    """Baseline decomposition as a stream: repeated SCC decomposition plus
    random-attractor removal until every surviving component is an
    end-component.  O(n) SCC rounds, O(n^2) symbolic operations worst case,
    logarithmic live sets."""
    ctx = P.ctx
    W = P.vertices.copy()
    try:
        while not W.is_empty():
            drop = ctx.empty()
            for comp in scc_stream(P, W, skeleton=False):
                if comp.cardinality() == 1:
                    d2 = drop.union(comp)
                    release_all(drop, comp)
                    drop = d2
                    continue
                leak = rout(comp, P)
                if leak.is_empty():
                    leak.release()
                    d2 = drop.union(comp)
                    drop.release()
                    drop = d2
                    yield comp
                    continue
                attr = random_attractor(P, leak, restrict=W).attractor
                leak.release()
                z = attr.intersect(comp)
                attr.release()
                d2 = drop.union(z)
                release_all(drop, z, comp)
                drop = d2
            w2 = W.difference(drop)
            release_all(W, drop)
            W = w2
    finally:
        W.release()


def classical_mec(P):
    """Baseline MEC decomposition with the same result contract as
    ``symbolic_mec``."""
    mecs = list(classical_mec_stream(P))
    acc = P.ctx.empty()
    for m in mecs:
        a2 = acc.union(m)
        acc.release()
        acc = a2
    non_mec = P.vertices.difference(acc)
    acc.release()
    return MecDecomposition(mecs, non_mec)


def trivial_mecs(decomp, P):
    """Player-1 vertices outside every non-trivial MEC (the trivial MECs)."""
    outside = decomp.non_mec.intersect(P.v1)
    ids = [int(x) for x in outside.to_ids()]
    outside.release()
    return ids

"""Explicit-graph ground truth used only for verification.

Deliberately simple worklist / adjacency-list implementations, sharing no
helpers with the symbolic code so that cross-checks stay meaningful.  These
never run on large instances.
"""

from __future__ import annotations

from collections import deque


class ExplicitMdp:
    """Adjacency-list mirror of a symbolic MDP."""

    def __init__(self, n, edges, random_vertices, priority=None):
        self.n = n
        self.edges = sorted(set((int(u), int(v)) for u, v in edges))
        self.is_random = [False] * n
        for v in random_vertices:
            self.is_random[int(v)] = True
        self.priority = list(priority) if priority is not None else None
        self.out_adj = [[] for _ in range(n)]
        self.in_adj = [[] for _ in range(n)]
        for (u, v) in self.edges:
            self.out_adj[u].append(v)
            self.in_adj[v].append(u)

    @classmethod
    def from_symbolic(cls, P, priority=None):
        """Bit-exact mirror (boundary conversion, unmetered)."""
        return cls(P.n, P.edges.to_pairs(), P.vr.to_ids(), priority)

    def to_symbolic(self, backend="bitset", meter=None):
        from .core import SymbolicMdp

        random_vertices = [v for v in range(self.n) if self.is_random[v]]
        return SymbolicMdp.build(self.n, self.edges, random_vertices,
                                 backend=backend, meter=meter)

    def restrict_sets(self, restrict):
        return set(range(self.n)) if restrict is None else set(restrict)


def tarjan_scc(g, restrict=None):
    """Iterative Tarjan SCC decomposition of the subgraph induced by restrict.

    Returns a list of vertex sets.
    """
    verts = g.restrict_sets(restrict)
    index = {}
    low = {}
    on_stack = set()
    stack = []
    sccs = []
    counter = [0]

    for root in sorted(verts):
        if root in index:
            continue
        # iterative DFS with explicit call frames (vertex, successor iterator)
        work = [(root, iter([w for w in g.out_adj[root] if w in verts]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter([x for x in g.out_adj[w] if x in verts])))
                    advanced = True
                    break
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def explicit_attractor(g, targets, restrict=None, forbidden=()):
    """Random attractor of ``targets`` in the sub-MDP induced by restrict.

    Vertices in ``forbidden`` are never attracted.
    """
    verts = g.restrict_sets(restrict)
    blocked = set(forbidden)
    attr = set(t for t in targets if t in verts)
    out_deg = {v: sum(1 for w in g.out_adj[v] if w in verts) for v in verts}
    queue = deque(attr)
    while queue:
        u = queue.popleft()
        for p in g.in_adj[u]:
            if p not in verts or p in attr or p in blocked:
                continue
            if g.is_random[p]:
                attr.add(p)
                queue.append(p)
            else:
                out_deg[p] -= 1
                if out_deg[p] == 0:
                    attr.add(p)
                    queue.append(p)
    return attr


def explicit_reach(g, targets, restrict=None):
    """Vertices with a path to ``targets`` inside restrict (reverse BFS)."""
    verts = g.restrict_sets(restrict)
    seen = set(t for t in targets if t in verts)
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for p in g.in_adj[u]:
            if p in verts and p not in seen:
                seen.add(p)
                queue.append(p)
    return seen


def explicit_mec(g, restrict=None):
    """Classical MEC decomposition: iterated SCC + random-attractor removal.

    Returns (mecs, non_mec) where mecs is a list of frozen vertex sets (each
    of size >= 2) and non_mec the remaining vertices, over the restricted
    universe.
    """
    work = g.restrict_sets(restrict)
    universe = set(work)
    mecs = []
    while work:
        drop = set()
        for comp in tarjan_scc(g, work):
            if len(comp) == 1:
                drop |= comp
                continue
            leaking = set(v for v in comp
                          if g.is_random[v]
                          and any(w not in comp for w in g.out_adj[v]))
            if not leaking:
                mecs.append(frozenset(comp))
                drop |= comp
            else:
                drop |= explicit_attractor(g, leaking, work) & comp
        work -= drop
    in_mec = set().union(*mecs) if mecs else set()
    return mecs, universe - in_mec


def explicit_asw_reach(g, targets):
    """Almost-sure winning set for reaching ``targets``.

    Iterated removal: vertices with no path to the target cannot win; their
    random attractor cannot win either.  Target vertices themselves are
    never removed (a play starting there has already won).  The fixpoint is
    exactly the almost-sure winning region.
    """
    tset = set(targets)
    work = set(range(g.n))
    while True:
        can_reach = explicit_reach(g, tset & work, work)
        doomed = work - can_reach
        if not doomed:
            return work
        work -= explicit_attractor(g, doomed, work, forbidden=tset)
        if not work:
            return work


def explicit_winning_ecs(g):
    """Union of winning MECs over every priority threshold.

    For each i, remove the random attractor of the priority-below-i vertices
    and collect MECs whose minimum priority is even (all remaining priorities
    are >= i, so the minimum equals i exactly when a priority-i vertex is
    inside).
    """
    assert g.priority is not None
    top = max(g.priority) if g.n else 0
    we = set()
    for i in range(0, top + 1):
        low = set(v for v in range(g.n) if g.priority[v] <= i - 1)
        p_i = set(range(g.n)) - explicit_attractor(g, low, None)
        mecs, _ = explicit_mec(g, p_i)
        for m in mecs:
            if min(g.priority[v] for v in m) % 2 == 0:
                we |= m
    return we


def explicit_asw_parity(g):
    """Almost-sure winning set of the parity objective (min-even semantics)."""
    we = explicit_winning_ecs(g)
    if not we:
        return set()
    return explicit_asw_reach(g, we)


def explicit_bfs_depth(g, root, restrict=None, forward=True):
    """Number of BFS levels beyond the root (used for separator checks)."""
    verts = g.restrict_sets(restrict)
    adj = g.out_adj if forward else g.in_adj
    dist = {root: 0}
    queue = deque([root])
    depth = 0
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w in verts and w not in dist:
                dist[w] = dist[u] + 1
                depth = max(depth, dist[w])
                queue.append(w)
    return depth


def explicit_diameter(g, restrict=None):
    """Largest finite forward distance within restrict (small instances only)."""
    verts = g.restrict_sets(restrict)
    best = 0
    for root in verts:
        best = max(best, explicit_bfs_depth(g, root, verts, forward=True))
    return best

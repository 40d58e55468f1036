"""Set-based symbolic computation model.

Vertex sets and edge relations are opaque handles.  The graph is only
accessible through metered symbolic operations:

* one-step images ``pre`` / ``post`` over an edge relation,
* basic set operations (union, intersection, difference, product,
  subset/equality tests, construction of constant sets),
* ``pick`` (an arbitrary member, fixed here to the minimum index for
  reproducibility) and ``cardinality``.

Each call counts as one symbolic operation in its category.  Symbolic
space is the peak number of simultaneously live sets; sets are live from
creation until they are explicitly released, so the algorithms in this
package release their temporaries.
"""

from __future__ import annotations

import numpy as np

OP_PRE = "pre"
OP_POST = "post"
OP_BASIC = "basic_set"
OP_PICK = "pick"
OP_CARDINALITY = "cardinality"

OP_KINDS = (OP_PRE, OP_POST, OP_BASIC, OP_PICK, OP_CARDINALITY)


class ContractViolation(Exception):
    """An operation was called outside its contract (universe mismatch, ...)."""


class EmptyPickError(ContractViolation):
    """pick() was called on an empty set."""


class ReleasedSetError(ContractViolation):
    """A set handle was used after release()."""


class ResourceMeter:
    """Counts symbolic operations by kind and tracks live / peak-live sets."""

    __slots__ = ("op_counts", "live_sets", "peak_live_sets", "trace")

    def __init__(self):
        self.op_counts = {kind: 0 for kind in OP_KINDS}
        self.live_sets = 0
        self.peak_live_sets = 0
        self.trace = None  # optional list of +1/-1 allocation events

    def count(self, kind):
        self.op_counts[kind] += 1

    def created(self):
        self.live_sets += 1
        if self.live_sets > self.peak_live_sets:
            self.peak_live_sets = self.live_sets
        if self.trace is not None:
            self.trace.append(1)

    def released(self):
        self.live_sets -= 1
        if self.trace is not None:
            self.trace.append(-1)

    @property
    def total_ops(self):
        return sum(self.op_counts.values())

    def snapshot(self):
        """Consistent copy of the current counters (single-threaded contract)."""
        snap = ResourceMeter()
        snap.op_counts = dict(self.op_counts)
        snap.live_sets = self.live_sets
        snap.peak_live_sets = self.peak_live_sets
        return snap

    def reset(self):
        """Zero the op counters; peak restarts from the currently live sets."""
        self.op_counts = {kind: 0 for kind in OP_KINDS}
        self.peak_live_sets = self.live_sets

    def enable_trace(self):
        self.trace = []

    def __repr__(self):
        return (f"ResourceMeter(total={self.total_ops}, {self.op_counts}, "
                f"live={self.live_sets}, peak={self.peak_live_sets})")


# ---------------------------------------------------------------------------
# Backends.  A backend implements raw set/relation storage; the metered
# wrappers below never look inside the data except through backend calls.
# Contents returned by both backends must be identical (one call = one
# symbolic operation regardless of backend).
# ---------------------------------------------------------------------------


class BitsetBackend:
    """Reference backend: numpy bool vectors and integer edge arrays."""

    name = "bitset"

    # vertex sets -----------------------------------------------------------

    def v_empty(self, n):
        return np.zeros(n, dtype=bool)

    def v_full(self, n):
        return np.ones(n, dtype=bool)

    def v_from_ids(self, n, ids):
        data = np.zeros(n, dtype=bool)
        if len(ids):
            data[np.asarray(list(ids), dtype=np.int64)] = True
        return data

    def v_copy(self, a):
        return a.copy()

    def v_union(self, a, b):
        return a | b

    def v_intersect(self, a, b):
        return a & b

    def v_difference(self, a, b):
        return a & ~b

    def v_subset(self, a, b):
        return not np.any(a & ~b)

    def v_equal(self, a, b):
        return bool(np.array_equal(a, b))

    def v_is_empty(self, a):
        return not a.any()

    def v_cardinality(self, a):
        return int(np.count_nonzero(a))

    def v_pick_min(self, a):
        idx = np.argmax(a)
        if not a[idx]:
            raise EmptyPickError("pick() on empty set")
        return int(idx)

    def v_ids(self, a):
        return np.flatnonzero(a)

    # edge relations --------------------------------------------------------
    # stored as dict(src=int32[], dst=int32[]) with unique pairs, or the lazy
    # product form ("prod", A_bool, B_bool) which set operations flatten
    # against concrete relations without materialising |A|*|B| pairs.

    def e_from_pairs(self, n, src, dst):
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if len(src):
            keys = src * n + dst
            keys = np.unique(keys)
            src, dst = keys // n, keys % n
        return {"src": src.astype(np.int32), "dst": dst.astype(np.int32)}

    def e_product(self, a, b):
        return ("prod", a.copy(), b.copy())

    def _materialize(self, n, e):
        if isinstance(e, tuple):
            srcs = np.flatnonzero(e[1])
            dsts = np.flatnonzero(e[2])
            src = np.repeat(srcs, len(dsts))
            dst = np.tile(dsts, len(srcs))
            return {"src": src.astype(np.int32), "dst": dst.astype(np.int32)}
        return e

    def e_copy(self, n, e):
        if isinstance(e, tuple):
            return ("prod", e[1].copy(), e[2].copy())
        return {"src": e["src"].copy(), "dst": e["dst"].copy()}

    def e_union(self, n, e1, e2):
        e1 = self._materialize(n, e1)
        e2 = self._materialize(n, e2)
        src = np.concatenate([e1["src"].astype(np.int64), e2["src"].astype(np.int64)])
        dst = np.concatenate([e1["dst"].astype(np.int64), e2["dst"].astype(np.int64)])
        return self.e_from_pairs(n, src, dst)

    def e_difference(self, n, e1, e2):
        e1 = self._materialize(n, e1)
        if isinstance(e2, tuple):
            # remove edges with src in A and dst in B
            mask = ~(e2[1][e1["src"]] & e2[2][e1["dst"]])
        else:
            keys1 = e1["src"].astype(np.int64) * n + e1["dst"]
            keys2 = e2["src"].astype(np.int64) * n + e2["dst"]
            mask = ~np.isin(keys1, keys2)
        return {"src": e1["src"][mask], "dst": e1["dst"][mask]}

    def e_intersect(self, n, e1, e2):
        e1 = self._materialize(n, e1)
        if isinstance(e2, tuple):
            mask = e2[1][e1["src"]] & e2[2][e1["dst"]]
            return {"src": e1["src"][mask], "dst": e1["dst"][mask]}
        keys1 = e1["src"].astype(np.int64) * n + e1["dst"]
        keys2 = e2["src"].astype(np.int64) * n + e2["dst"]
        mask = np.isin(keys1, keys2)
        return {"src": e1["src"][mask], "dst": e1["dst"][mask]}

    def e_pre(self, n, e, s):
        e = self._materialize(n, e)
        out = np.zeros(n, dtype=bool)
        mask = s[e["dst"]]
        out[e["src"][mask]] = True
        return out

    def e_post(self, n, e, s):
        e = self._materialize(n, e)
        out = np.zeros(n, dtype=bool)
        mask = s[e["src"]]
        out[e["dst"][mask]] = True
        return out

    def e_pairs(self, n, e):
        e = self._materialize(n, e)
        return list(zip(e["src"].tolist(), e["dst"].tolist()))


class PySetBackend:
    """Alternate backend on plain Python sets; slower, used to check that the
    metered results are backend independent."""

    name = "pyset"

    def v_empty(self, n):
        return set()

    def v_full(self, n):
        return set(range(n))

    def v_from_ids(self, n, ids):
        return set(int(i) for i in ids)

    def v_copy(self, a):
        return set(a)

    def v_union(self, a, b):
        return a | b

    def v_intersect(self, a, b):
        return a & b

    def v_difference(self, a, b):
        return a - b

    def v_subset(self, a, b):
        return a <= b

    def v_equal(self, a, b):
        return a == b

    def v_is_empty(self, a):
        return not a

    def v_cardinality(self, a):
        return len(a)

    def v_pick_min(self, a):
        if not a:
            raise EmptyPickError("pick() on empty set")
        return min(a)

    def v_ids(self, a):
        return np.array(sorted(a), dtype=np.int64)

    def e_from_pairs(self, n, src, dst):
        return set(zip((int(u) for u in src), (int(v) for v in dst)))

    def e_product(self, a, b):
        return set((u, v) for u in a for v in b)

    def e_copy(self, n, e):
        return set(e)

    def e_union(self, n, e1, e2):
        return e1 | e2

    def e_difference(self, n, e1, e2):
        return e1 - e2

    def e_intersect(self, n, e1, e2):
        return e1 & e2

    def e_pre(self, n, e, s):
        return set(u for (u, v) in e if v in s)

    def e_post(self, n, e, s):
        return set(v for (u, v) in e if u in s)

    def e_pairs(self, n, e):
        return sorted(e)


_BACKENDS = {"bitset": BitsetBackend, "pyset": PySetBackend}


class SymbolicContext:
    """Owns the universe size, the backend and the meter.

    All sets created through one context interoperate; mixing contexts is a
    contract violation.
    """

    def __init__(self, n, backend="bitset", meter=None):
        if n < 0:
            raise ContractViolation("universe size must be non-negative")
        self.n = n
        if isinstance(backend, str):
            backend = _BACKENDS[backend]()
        self.backend = backend
        self.meter = meter if meter is not None else ResourceMeter()

    # constant-set construction: each call is one basic set operation
    def empty(self):
        self.meter.count(OP_BASIC)
        return VertexSet(self, self.backend.v_empty(self.n))

    def full(self):
        self.meter.count(OP_BASIC)
        return VertexSet(self, self.backend.v_full(self.n))

    def singleton(self, v):
        if not (0 <= v < self.n):
            raise ContractViolation(f"vertex {v} outside universe [0,{self.n})")
        self.meter.count(OP_BASIC)
        return VertexSet(self, self.backend.v_from_ids(self.n, [v]))

    def from_ids(self, ids):
        self.meter.count(OP_BASIC)
        return VertexSet(self, self.backend.v_from_ids(self.n, ids))

    def edges_from_pairs(self, pairs):
        self.meter.count(OP_BASIC)
        src = [u for u, _ in pairs]
        dst = [v for _, v in pairs]
        return EdgeRelation(self, self.backend.e_from_pairs(self.n, src, dst))


def _check_ctx(a, b):
    if a.ctx is not b.ctx:
        raise ContractViolation("operands belong to different universes")


class VertexSet:
    """Opaque handle to a set of vertex ids, manipulated through metered ops."""

    __slots__ = ("ctx", "data", "released")

    def __init__(self, ctx, data):
        self.ctx = ctx
        self.data = data
        self.released = False
        ctx.meter.created()

    def _live(self):
        if self.released:
            raise ReleasedSetError("vertex set used after release")
        return self.data

    # --- basic set operations (one op each) ---

    def union(self, other):
        _check_ctx(self, other)
        self.ctx.meter.count(OP_BASIC)
        return VertexSet(self.ctx, self.ctx.backend.v_union(self._live(), other._live()))

    def intersect(self, other):
        _check_ctx(self, other)
        self.ctx.meter.count(OP_BASIC)
        return VertexSet(self.ctx, self.ctx.backend.v_intersect(self._live(), other._live()))

    def difference(self, other):
        _check_ctx(self, other)
        self.ctx.meter.count(OP_BASIC)
        return VertexSet(self.ctx, self.ctx.backend.v_difference(self._live(), other._live()))

    def copy(self):
        self.ctx.meter.count(OP_BASIC)
        return VertexSet(self.ctx, self.ctx.backend.v_copy(self._live()))

    def subset_of(self, other):
        _check_ctx(self, other)
        self.ctx.meter.count(OP_BASIC)
        return self.ctx.backend.v_subset(self._live(), other._live())

    def equals(self, other):
        _check_ctx(self, other)
        self.ctx.meter.count(OP_BASIC)
        return self.ctx.backend.v_equal(self._live(), other._live())

    def is_empty(self):
        self.ctx.meter.count(OP_BASIC)
        return self.ctx.backend.v_is_empty(self._live())

    def contains(self, v):
        # membership = {v} subset test, charged as one basic set operation
        self.ctx.meter.count(OP_BASIC)
        return self.ctx.backend.v_subset(
            self.ctx.backend.v_from_ids(self.ctx.n, [v]), self._live())

    def product(self, other):
        """Cartesian product of two vertex sets, yielding an edge set."""
        _check_ctx(self, other)
        self.ctx.meter.count(OP_BASIC)
        return EdgeRelation(self.ctx, self.ctx.backend.e_product(self._live(), other._live()))

    # --- pick / cardinality ---

    def pick(self):
        """Deterministic pick: the minimum-index member."""
        self.ctx.meter.count(OP_PICK)
        return self.ctx.backend.v_pick_min(self._live())

    def cardinality(self):
        self.ctx.meter.count(OP_CARDINALITY)
        return self.ctx.backend.v_cardinality(self._live())

    # --- lifetime / boundary ---

    def release(self):
        if not self.released:
            self.released = True
            self.data = None
            self.ctx.meter.released()

    def to_ids(self):
        """Unmetered boundary introspection (test mirrors, reports).

        Not part of the symbolic model; algorithm code must not depend on it
        except when materialising final results.
        """
        return self.ctx.backend.v_ids(self._live())

    def __repr__(self):
        if self.released:
            return "VertexSet(<released>)"
        return f"VertexSet({list(self.to_ids())})"


class EdgeRelation:
    """Opaque handle to a subset of V x V supporting one-step images and the
    basic set operations needed for edge rewiring."""

    __slots__ = ("ctx", "data", "released")

    def __init__(self, ctx, data):
        self.ctx = ctx
        self.data = data
        self.released = False
        ctx.meter.created()

    def _live(self):
        if self.released:
            raise ReleasedSetError("edge relation used after release")
        return self.data

    def pre(self, s):
        """{ v | some edge (v,w) with w in s }"""
        _check_ctx(self, s)
        self.ctx.meter.count(OP_PRE)
        return VertexSet(self.ctx, self.ctx.backend.e_pre(self.ctx.n, self._live(), s._live()))

    def post(self, s):
        """{ v | some edge (w,v) with w in s }"""
        _check_ctx(self, s)
        self.ctx.meter.count(OP_POST)
        return VertexSet(self.ctx, self.ctx.backend.e_post(self.ctx.n, self._live(), s._live()))

    def union(self, other):
        _check_ctx(self, other)
        self.ctx.meter.count(OP_BASIC)
        return EdgeRelation(self.ctx, self.ctx.backend.e_union(self.ctx.n, self._live(), other._live()))

    def difference(self, other):
        _check_ctx(self, other)
        self.ctx.meter.count(OP_BASIC)
        return EdgeRelation(self.ctx, self.ctx.backend.e_difference(self.ctx.n, self._live(), other._live()))

    def intersect(self, other):
        _check_ctx(self, other)
        self.ctx.meter.count(OP_BASIC)
        return EdgeRelation(self.ctx, self.ctx.backend.e_intersect(self.ctx.n, self._live(), other._live()))

    def copy(self):
        self.ctx.meter.count(OP_BASIC)
        return EdgeRelation(self.ctx, self.ctx.backend.e_copy(self.ctx.n, self._live()))

    def release(self):
        if not self.released:
            self.released = True
            self.data = None
            self.ctx.meter.released()

    def to_pairs(self):
        """Unmetered boundary introspection."""
        return self.ctx.backend.e_pairs(self.ctx.n, self._live())

    def __repr__(self):
        if self.released:
            return "EdgeRelation(<released>)"
        return f"EdgeRelation({len(self.to_pairs())} edges)"


def release_all(*sets):
    for s in sets:
        if s is not None:
            s.release()


class SymbolicMdp:
    """An MDP under the symbolic model: a live vertex universe partitioned
    into player-1 and random vertices, plus a mutable edge relation.

    Transition probabilities are implicit (uniform over successors); only
    qualitative analysis is supported, so edge presence is all that matters.
    Input MDPs must have no self-loops and out-degree >= 1 everywhere; both
    properties are checked at build time.  Mutated working copies may
    temporarily hold absorbing representatives with no outgoing edges.
    """

    def __init__(self, ctx, vertices, v1, vr, edges):
        self.ctx = ctx
        self.vertices = vertices
        self.v1 = v1
        self.vr = vr
        self.edges = edges

    @classmethod
    def build(cls, n, edge_pairs, random_vertices, backend="bitset", meter=None,
              validate=True):
        """Construct a fresh MDP (and its context/meter) from explicit data."""
        if validate:
            out_deg = [0] * n
            seen = set()
            for (u, v) in edge_pairs:
                if not (0 <= u < n and 0 <= v < n):
                    raise ContractViolation(f"edge ({u},{v}) outside universe [0,{n})")
                if u == v:
                    raise ContractViolation(f"self-loop on vertex {u}")
                if (u, v) in seen:
                    raise ContractViolation(f"duplicate edge ({u},{v})")
                seen.add((u, v))
                out_deg[u] += 1
            for v in range(n):
                if out_deg[v] == 0:
                    raise ContractViolation(f"vertex {v} has no outgoing edge")
            for v in random_vertices:
                if not (0 <= v < n):
                    raise ContractViolation(f"random vertex {v} outside universe")
        ctx = SymbolicContext(n, backend=backend, meter=meter)
        vr = ctx.from_ids(random_vertices)
        vertices = ctx.full()
        v1 = vertices.difference(vr)
        edges = ctx.edges_from_pairs(edge_pairs)
        return cls(ctx, vertices, v1, vr, edges)

    @property
    def n(self):
        return self.ctx.n

    def pre(self, s):
        return self.edges.pre(s)

    def post(self, s):
        return self.edges.post(s)

    def copy(self):
        """Deep working copy sharing the context (and therefore the meter)."""
        return SymbolicMdp(self.ctx, self.vertices.copy(), self.v1.copy(),
                           self.vr.copy(), self.edges.copy())

    def restricted_copy(self, x):
        """Materialised sub-MDP on the vertex set ``x``."""
        verts = self.vertices.intersect(x)
        v1 = self.v1.intersect(verts)
        vr = self.vr.intersect(verts)
        prod = verts.product(verts)
        edges = self.edges.intersect(prod)
        prod.release()
        return SymbolicMdp(self.ctx, verts, v1, vr, edges)

    def release(self):
        release_all(self.vertices, self.v1, self.vr, self.edges)

    def __repr__(self):
        return f"SymbolicMdp(n={self.n})"

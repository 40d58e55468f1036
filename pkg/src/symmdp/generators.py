"""Seeded random MDP generators for tests and benchmarks.

Three families:

* ``uniform``      sparse random digraph, tunable random-vertex fraction;
* ``layered``      layered ring of wide levels with sparse long back-edges,
                   producing nested SCCs and deep small-diameter recursion;
* ``cycle-chain``  a long chain of small player-1 cycles linked through
                   random bridge vertices whose drop edges resolve one
                   bridge per round, the stress case for round-based
                   decomposition (quadratic for the classical baseline,
                   separator-friendly diameter for the recursive one).

All generators are deterministic in (family, n, parameters, seed), emit no
self-loops or duplicate edges, and give every vertex at least one outgoing
edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FAMILIES = ("uniform", "layered", "cycle-chain")


@dataclass
class MdpModel:
    """Plain in-memory MDP description (the file format mirrors it)."""

    n: int
    edges: list
    random_vertices: list
    priorities: list | None = None
    meta: dict = field(default_factory=dict)

    @property
    def m(self):
        return len(self.edges)

    def to_symbolic(self, backend="bitset", meter=None):
        from .core import SymbolicMdp

        return SymbolicMdp.build(self.n, self.edges, self.random_vertices,
                                 backend=backend, meter=meter)

    def to_explicit(self):
        from .oracle import ExplicitMdp

        return ExplicitMdp(self.n, self.edges, self.random_vertices, self.priorities)


def _finish(n, edge_set, rng, random_fraction, d, seed, family, meta=None):
    edges = sorted(edge_set)
    flags = rng.random(n) < random_fraction
    random_vertices = [int(v) for v in np.flatnonzero(flags)]
    priorities = None
    if d is not None:
        priorities = [int(p) for p in rng.integers(0, 2 * d + 1, size=n)]
    info = {"family": family, "seed": seed, **(meta or {})}
    return MdpModel(n, edges, random_vertices, priorities, info)


def gen_uniform(n, avg_degree=4.0, random_fraction=0.3, d=None, seed=0):
    if n < 2:
        raise ValueError("need at least 2 vertices (no self-loops allowed)")
    rng = np.random.default_rng(seed)
    edge_set = set()
    # one guaranteed out-edge per vertex
    for v in range(n):
        w = int(rng.integers(0, n - 1))
        if w >= v:
            w += 1
        edge_set.add((v, w))
    # extra edges up to the target count
    target = max(n, int(round(n * avg_degree)))
    attempts = 0
    while len(edge_set) < target and attempts < 10 * target:
        u = int(rng.integers(0, n))
        w = int(rng.integers(0, n - 1))
        if w >= u:
            w += 1
        edge_set.add((u, w))
        attempts += 1
    return _finish(n, edge_set, rng, random_fraction, d, seed, "uniform",
                   meta={"avg_degree": avg_degree, "random_fraction": random_fraction})


def gen_layered(n, avg_degree=4.0, random_fraction=0.3, d=None, seed=0, width=4):
    """Ring of layers: dense forward edges to the next layer, the last layer
    wraps around, plus sparse long back-edges.  One large SCC whose diameter
    grows linearly with the number of layers."""
    if n < 2:
        raise ValueError("need at least 2 vertices")
    rng = np.random.default_rng(seed)
    width = max(2, min(width, n // 2)) if n >= 4 else 1
    layers = [list(range(i, min(i + width, n))) for i in range(0, n, width)]
    edge_set = set()
    for li, layer in enumerate(layers):
        nxt = layers[(li + 1) % len(layers)]
        for v in layer:
            kk = max(1, int(rng.integers(1, max(2, int(avg_degree)))))
            for _ in range(kk):
                w = int(nxt[int(rng.integers(0, len(nxt)))])
                if w != v:
                    edge_set.add((v, w))
            if not any(e[0] == v for e in edge_set):
                w = nxt[0] if nxt[0] != v else nxt[-1]
                edge_set.add((v, w))
    # sparse long back-edges: roughly one per four layers
    for _ in range(max(1, len(layers) // 4)):
        u = int(rng.integers(0, n))
        w = int(rng.integers(0, n))
        if u != w:
            edge_set.add((u, w))
    # ensure out-degree (vertices in the final partial layer may miss out)
    out = {v: 0 for v in range(n)}
    for (u, _) in edge_set:
        out[u] += 1
    for v in range(n):
        if out[v] == 0:
            edge_set.add((v, (v + 1) % n))
    return _finish(n, edge_set, rng, random_fraction, d, seed, "layered",
                   meta={"avg_degree": avg_degree,
                         "random_fraction": random_fraction, "width": width})


def gen_cycle_chain(n, cycle_len=8, d=None, seed=0, **_ignored):
    """Chain of player-1 cycles linked by random bridges.

    Block t is a cycle whose last position links forward to the next block's
    head and also feeds bridge r_t (random); the bridge carries block t back
    to block t-1 and holds a drop edge into the head of block t+1 (the final
    bridge drops into the sink pair).  Since both the link and the bridge
    leave a block only from its last cycle position, every lane pays a full
    cycle traversal per block and the chain's diameter stays close to n.
    The drop edges only become leaks one bridge at a time, from the sink end
    backwards, so round-based decomposition pays a full SCC sweep per
    bridge.  The true MECs are the cycles plus the sink pair; the bridges
    belong to no MEC.
    """
    if n < 8:
        raise ValueError("cycle-chain needs at least 8 vertices")
    if cycle_len < 4:
        raise ValueError("cycle_len must be at least 4")
    rng = np.random.default_rng(seed)
    s0, s1 = n - 2, n - 1
    body = n - 2
    unit = cycle_len + 1
    k = max(1, (body - 1) // unit)
    head0_len = body - (k - 1) * unit  # block 0 absorbs the leftover, no bridge

    blocks = []  # list of (cycle vertex list, bridge id or None)
    blocks.append((list(range(0, head0_len)), None))
    base = head0_len
    for _ in range(1, k):
        blocks.append((list(range(base, base + cycle_len)), base + cycle_len))
        base += unit

    edge_set = set()
    edge_set.add((s0, s1))
    edge_set.add((s1, s0))
    random_vertices = []
    for t, (cyc, bridge) in enumerate(blocks):
        for idx, v in enumerate(cyc):
            edge_set.add((v, cyc[(idx + 1) % len(cyc)]))
        head_next = blocks[t + 1][0][0] if t + 1 < k else s0
        edge_set.add((cyc[-1], head_next))  # forward link from the last position
        if bridge is not None:
            random_vertices.append(bridge)
            edge_set.add((cyc[-1], bridge))  # feeder, from the exit position
            edge_set.add((bridge, blocks[t - 1][0][0]))  # back link
            drop = blocks[t + 1][0][0] if t + 1 < k else s0
            edge_set.add((bridge, drop))
    priorities = None
    if d is not None:
        priorities = [int(p) for p in rng.integers(0, 2 * d + 1, size=n)]
    model = MdpModel(n, sorted(edge_set), random_vertices, priorities,
                     {"family": "cycle-chain", "seed": seed, "cycle_len": cycle_len})
    return model


def generate(family, n, avg_degree=4.0, random_fraction=0.3, d=None, seed=0,
             cycle_len=8):
    """Dispatch by family name (``cycle-chain`` has a fixed structure and
    ignores degree/fraction parameters)."""
    if family == "uniform":
        return gen_uniform(n, avg_degree, random_fraction, d, seed)
    if family == "layered":
        return gen_layered(n, avg_degree, random_fraction, d, seed)
    if family == "cycle-chain":
        return gen_cycle_chain(n, cycle_len=cycle_len, d=d, seed=seed)
    raise ValueError(f"unknown family {family!r} (choose from {FAMILIES})")

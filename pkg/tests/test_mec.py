import math

import numpy as np
import pytest

import symmdp as sp
from symmdp.mec import CollapseMap, collapse_ec, rout, sym_mec

from conftest import build, decomposition_key, id_set, oracle_key


# ---------------------------------------------------------------------------
# rout
# ---------------------------------------------------------------------------

def test_rout_of_end_component_is_empty():
    # {0,1} is a 2-cycle with the random vertex closed inside
    P = build(4, [(0, 1), (1, 0), (2, 0), (3, 2), (2, 3)], [1])
    S = P.ctx.from_ids([0, 1])
    assert rout(S, P).is_empty()


def test_rout_singleton_random():
    P = build(3, [(0, 1), (1, 2), (2, 0)], [0])
    S = P.ctx.singleton(0)
    assert id_set(rout(S, P)) == {0}


def test_rout_against_scan():
    rng = np.random.default_rng(30)
    for trial in range(80):
        n = int(rng.integers(4, 40))
        model = sp.gen_uniform(n, 3, 0.5, seed=trial)
        P = model.to_symbolic()
        g = model.to_explicit()
        ids = set(int(x) for x in rng.integers(0, n, size=n // 2))
        S = P.ctx.from_ids(sorted(ids))
        want = set(v for v in ids if g.is_random[v]
                   and any(w not in ids for w in g.out_adj[v]))
        assert id_set(rout(S, P)) == want


# ---------------------------------------------------------------------------
# collapse_ec
# ---------------------------------------------------------------------------

def test_collapse_two_cycle():
    # X = {0,1} with 0 player-1; external edges 2->1 and 1->3
    P = build(4, [(0, 1), (1, 0), (2, 1), (1, 3), (3, 2), (2, 3)], [])
    cmap = CollapseMap()
    X = P.ctx.from_ids([0, 1])
    rep = collapse_ec(X, P, cmap)
    assert rep == 0
    assert id_set(P.vertices) == {0, 2, 3}
    pairs = set(P.edges.to_pairs())
    assert (2, 0) in pairs and (0, 3) in pairs
    assert not any(1 in e for e in pairs)
    assert cmap.expand_ids([0]) == [0, 1]


def test_collapse_all_random_promotes_representative():
    P = build(4, [(0, 1), (1, 0), (2, 0), (3, 2), (2, 3)], [0, 1])
    cmap = CollapseMap()
    X = P.ctx.from_ids([0, 1])
    rep = collapse_ec(X, P, cmap)
    assert rep == 0
    assert P.v1.contains(0)
    assert not P.vr.contains(0)


def test_collapse_nested_order_equivalence():
    # collapsing a sub-EC then the enclosing EC gives the same final MEC
    # membership as collapsing the enclosing EC directly
    edges = [(0, 1), (1, 0), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 4)]
    randoms = [1]
    P1 = build(6, edges, randoms)
    c1 = CollapseMap()
    sub = P1.ctx.from_ids([0, 1])
    collapse_ec(sub, P1, c1)
    enclosing = P1.ctx.from_ids([0, 2, 3])  # {0,1,2,3} with {0,1} collapsed to 0
    collapse_ec(enclosing, P1, c1)
    got_nested = sorted(c1.expand_ids([c1.representative(0)]))

    P2 = build(6, edges, randoms)
    c2 = CollapseMap()
    whole = P2.ctx.from_ids([0, 1, 2, 3])
    collapse_ec(whole, P2, c2)
    got_direct = sorted(c2.expand_ids([c2.representative(0)]))
    assert sorted(set(got_nested)) == sorted(set(got_direct)) == [0, 1, 2, 3]


def test_collapse_preserves_disjoint_ecs():
    # Lemma-style invariance: an EC disjoint from the collapsed one stays an EC
    rng = np.random.default_rng(31)
    checked = 0
    for trial in range(200):
        n = int(rng.integers(6, 32))
        model = sp.gen_uniform(n, 3, 0.5, seed=trial)
        g = model.to_explicit()
        mecs, _ = sp.explicit_mec(g)
        if len(mecs) < 2:
            continue
        P = model.to_symbolic()
        cmap = CollapseMap()
        target, other = mecs[0], mecs[1]
        collapse_ec(P.ctx.from_ids(sorted(target)), P, cmap)
        g2 = sp.ExplicitMdp.from_symbolic(P)
        live = id_set(P.vertices)
        assert other <= live
        # strongly connected and random-closed in the collapsed MDP
        comp = next(c for c in sp.tarjan_scc(g2, live) if other & c)
        assert other <= comp
        for v in other:
            if g2.is_random[v]:
                assert all(w in other for w in g2.out_adj[v])
        checked += 1
    assert checked >= 20


def test_collapse_validate_rejects_leaky_set():
    P = build(3, [(0, 1), (1, 2), (2, 0)], [1])
    cmap = CollapseMap()
    X = P.ctx.from_ids([0, 1])  # 1 is random with an edge to 2
    with pytest.raises(sp.ContractViolation):
        collapse_ec(X, P, cmap, validate=True)


# ---------------------------------------------------------------------------
# sym_mec / symbolic_mec / classical_mec
# ---------------------------------------------------------------------------

def test_sym_mec_closed_two_cycle():
    P = build(4, [(0, 1), (1, 0), (2, 3), (3, 2), (2, 0)], [])
    work = P.copy()
    cmap = CollapseMap()
    S = P.ctx.from_ids([0, 1])
    M = sym_mec(S, 8, work, cmap)
    assert id_set(M) == {0, 1}


def test_symbolic_mec_single_ec():
    P = build(3, [(0, 1), (1, 2), (2, 0), (1, 0)], [1])
    dec = sp.symbolic_mec(P)
    mecs, non = dec.as_id_sets()
    assert mecs == [frozenset({0, 1, 2})]
    assert non == frozenset()


def test_symbolic_mec_spec_triangle():
    P = build(3, [(0, 1), (1, 0), (1, 2), (2, 0)], [1])
    dec = sp.symbolic_mec(P)
    assert dec.as_id_sets() == ([frozenset({0, 1, 2})], frozenset())
    g = sp.ExplicitMdp.from_symbolic(P)
    assert oracle_key(g) == dec.as_id_sets()


def test_chain_of_two_cycles():
    # 2-cycles {0,1},{2,3},{4,5}; each cycle's random exit leads to the next,
    # so only the last cycle (fully internal) plus the leading ones with
    # internal random edges survive as given by the oracle
    edges = [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2), (3, 4), (4, 5), (5, 4)]
    P = build(6, edges, [1, 3])
    g = sp.ExplicitMdp.from_symbolic(P)
    dec = sp.symbolic_mec(P)
    assert dec.as_id_sets() == oracle_key(g)
    dec2 = sp.classical_mec(P)
    assert dec2.as_id_sets() == oracle_key(g)


@pytest.mark.parametrize("family", ["uniform", "layered", "cycle-chain"])
def test_mec_random_suite(family):
    rng = np.random.default_rng(32)
    count = 0
    for trial in range(120):
        n = int(rng.integers(8 if family == "cycle-chain" else 4, 64))
        model = sp.generate(family, n, avg_degree=float(rng.choice([2, 3, 4])),
                            random_fraction=float(rng.choice([0.0, 0.3, 0.7, 1.0])),
                            seed=trial, cycle_len=5)
        P = model.to_symbolic()
        g = model.to_explicit()
        want = oracle_key(g)
        dec = sp.symbolic_mec(P)
        assert dec.as_id_sets() == want, (family, n, trial)
        dec2 = sp.classical_mec(P)
        assert dec2.as_id_sets() == want, (family, n, trial)
        dec.release()
        dec2.release()
        P.release()
        assert P.ctx.meter.live_sets == 0
        count += 1
    assert count == 120


def test_mec_soundness_and_maximality():
    rng = np.random.default_rng(33)
    for trial in range(60):
        n = int(rng.integers(6, 48))
        model = sp.gen_uniform(n, 3, 0.5, seed=600 + trial)
        P = model.to_symbolic()
        g = model.to_explicit()
        dec = sp.symbolic_mec(P)
        mecs, non = dec.as_id_sets()
        covered = set()
        for m in mecs:
            assert len(m) >= 2
            comp = next(c for c in sp.tarjan_scc(g, m) if c)
            assert comp == set(m)  # strongly connected on the original graph
            for v in m:
                if g.is_random[v]:
                    assert all(w in m for w in g.out_adj[v])
            covered |= m
        assert covered | set(non) == set(range(n))
        # maximality: SCCs of the subgraph on all MEC vertices are the MECs
        want = sorted([tuple(sorted(c)) for c in sp.tarjan_scc(g, covered)])
        assert want == sorted([tuple(sorted(m)) for m in mecs])


def test_mec_stream_leaves_input_unmodified():
    model = sp.gen_uniform(24, 3, 0.4, seed=9)
    P = model.to_symbolic()
    pairs_before = sorted(P.edges.to_pairs())
    for m in sp.mec_stream(P):
        m.release()
    assert sorted(P.edges.to_pairs()) == pairs_before
    assert id_set(P.vertices) == set(range(24))


def test_gamma_sweep_equivalence():
    # the decomposition is independent of the separator depth parameter
    model = sp.gen_cycle_chain(96, cycle_len=5, seed=3)
    g = model.to_explicit()
    want = oracle_key(g)
    for gamma in (12, 20, 48, 96):
        P = model.to_symbolic()
        dec = sp.symbolic_mec(P, gamma)
        assert dec.as_id_sets() == want, gamma


def test_recursion_depth_bound():
    for n in (256, 512):
        model = sp.gen_cycle_chain(n, seed=1)
        P = model.to_symbolic()
        gamma = sp.gamma_for_epsilon(n, 0.5)
        stats = sp.RunStats()
        dec = sp.symbolic_mec(P, gamma, stats)
        dec.release()
        q = max(1, math.floor(gamma / (2 * math.log2(n))))
        assert stats.max_depth <= 1.0 * (n / q + math.log2(n)) + 2


def test_sym_mec_operation_bound():
    # ops <= c * (n*gamma + n^2 / floor(gamma / (2 log2 n)))
    for n in (128, 256, 512):
        model = sp.gen_cycle_chain(n, seed=1)
        P = model.to_symbolic()
        gamma = sp.gamma_for_epsilon(n, 0.5)
        dec = sp.symbolic_mec(P, gamma)
        dec.release()
        q = max(1, math.floor(gamma / (2 * math.log2(n))))
        bound = n * gamma + n * n / q
        assert P.ctx.meter.total_ops <= 3.0 * bound  # frozen constant


def test_trivial_mecs_listing():
    P = build(4, [(0, 1), (1, 0), (2, 0), (3, 0), (0, 2)], [3])
    dec = sp.symbolic_mec(P)
    # 2 is a player-1 vertex outside every non-trivial MEC; 3 is random
    assert sp.trivial_mecs(dec, P) == [2]

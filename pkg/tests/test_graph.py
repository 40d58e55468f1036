import math

import numpy as np
import pytest

import symmdp as sp

from conftest import build, id_set


# ---------------------------------------------------------------------------
# graph_reach
# ---------------------------------------------------------------------------

def test_graph_reach_path():
    P = build(3, [(0, 1), (1, 2), (2, 0)], [])
    S = P.ctx.singleton(2)
    assert id_set(sp.graph_reach(P, S)) == {0, 1, 2}
    assert id_set(sp.graph_reach(P, P.ctx.empty())) == set()


def test_graph_reach_pre_op_budget():
    model = sp.gen_uniform(40, 3, 0.3, seed=2)
    P = model.to_symbolic()
    S = P.ctx.from_ids([0, 5])
    before = P.ctx.meter.op_counts["pre"]
    R = sp.graph_reach(P, S)
    pre_ops = P.ctx.meter.op_counts["pre"] - before
    assert pre_ops <= R.cardinality() - S.intersect(R).cardinality() + 2


def test_graph_reach_matches_reverse_bfs():
    rng = np.random.default_rng(8)
    for trial in range(60):
        model = sp.gen_uniform(int(rng.integers(4, 40)), 3, 0.4, seed=trial)
        P = model.to_symbolic()
        g = model.to_explicit()
        ids = sorted(set(int(x) for x in rng.integers(0, model.n, size=3)))
        S = P.ctx.from_ids(ids)
        assert id_set(sp.graph_reach(P, S)) == sp.explicit_reach(g, ids)


# ---------------------------------------------------------------------------
# random_attractor
# ---------------------------------------------------------------------------

def test_attractor_hand_example():
    # V1={a}, VR={b}; edges a->b, b->c, b->a, c->a; T={c}
    # fixpoint by hand: b random with an edge to c joins at level 1, a is
    # player-1 with its only edge into {b,c} and joins at level 2
    P = build(3, [(0, 1), (1, 2), (1, 0), (2, 0)], [1])
    T = P.ctx.singleton(2)
    res = sp.random_attractor(P, T, want_levels=True)
    assert id_set(res.attractor) == {0, 1, 2}
    assert [id_set(l) for l in res.levels] == [{2}, {1, 2}, {0, 1, 2}]


def test_attractor_fixpoint_at_level_zero():
    model = sp.gen_uniform(12, 3, 0.5, seed=4)
    P = model.to_symbolic()
    res = sp.random_attractor(P, P.vertices)
    assert id_set(res.attractor) == set(range(12))


def test_attractor_against_explicit_worklist():
    rng = np.random.default_rng(12)
    for trial in range(500):
        n = int(rng.integers(3, 64))
        model = sp.gen_uniform(n, float(rng.choice([2, 3, 4])),
                               float(rng.choice([0.0, 0.3, 0.7, 1.0])), seed=trial)
        P = model.to_symbolic()
        g = model.to_explicit()
        ids = sorted(set(int(x) for x in rng.integers(0, n, size=max(1, n // 6))))
        T = P.ctx.from_ids(ids)
        got = id_set(sp.random_attractor(P, T).attractor)
        assert got == sp.explicit_attractor(g, ids), (n, trial, ids)


def test_attractor_soundness_on_levels():
    # player-1 members beyond T have all live out-edges inside the attractor;
    # random members beyond T have an edge to a strictly lower level
    rng = np.random.default_rng(13)
    for trial in range(50):
        n = int(rng.integers(6, 40))
        model = sp.gen_uniform(n, 3, 0.5, seed=100 + trial)
        P = model.to_symbolic()
        g = model.to_explicit()
        ids = sorted(set(int(x) for x in rng.integers(0, n, size=2)))
        res = sp.random_attractor(P, P.ctx.from_ids(ids), want_levels=True)
        levels = [id_set(l) for l in res.levels]
        attr = levels[-1]
        level_of = {}
        for depth, l in enumerate(levels):
            for v in l:
                level_of.setdefault(v, depth)
        for v in attr - set(ids):
            if g.is_random[v]:
                assert any(w in attr and level_of[w] < level_of[v]
                           for w in g.out_adj[v])
            else:
                assert all(w in attr for w in g.out_adj[v])


def test_attractor_op_budget():
    rng = np.random.default_rng(14)
    for trial in range(40):
        n = int(rng.integers(6, 64))
        model = sp.gen_uniform(n, 3, 0.6, seed=200 + trial)
        P = model.to_symbolic()
        ids = [int(rng.integers(0, n))]
        T = P.ctx.from_ids(ids)
        before = P.ctx.meter.total_ops
        res = sp.random_attractor(P, T)
        ops = P.ctx.meter.total_ops - before
        growth = res.attractor.cardinality() - 1
        assert ops <= 12 * (growth + 2)  # frozen constant


# ---------------------------------------------------------------------------
# scc_stream / scc_of
# ---------------------------------------------------------------------------

def test_scc_cycle_and_dag():
    P = build(3, [(0, 1), (1, 2), (2, 0)], [])
    sccs = [id_set(c) for c in sp.scc_all(P, P.vertices)]
    assert sccs == [{0, 1, 2}]
    # a DAG needs sink out-edges, so append a 2-cycle tail: 0->1->2->3<->4
    P = build(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 3)], [])
    sccs = sorted([tuple(sorted(id_set(c))) for c in sp.scc_all(P, P.vertices)])
    assert sccs == [(0,), (1,), (2,), (3, 4)]


@pytest.mark.parametrize("skeleton", [True, False])
def test_scc_against_tarjan(skeleton):
    rng = np.random.default_rng(15)
    for trial in range(200):
        n = int(rng.integers(2, 64))
        model = sp.gen_uniform(n, float(rng.choice([1.5, 2, 3, 4])), 0.3, seed=trial)
        P = model.to_symbolic()
        g = model.to_explicit()
        got = sorted([tuple(sorted(id_set(c)))
                      for c in sp.scc_stream(P, P.vertices, skeleton=skeleton)])
        want = sorted([tuple(sorted(c)) for c in sp.tarjan_scc(g)])
        assert got == want, (n, trial)
        assert P.ctx.meter.live_sets == 4  # only the MDP's own sets remain


def test_scc_start_vertex_first():
    rng = np.random.default_rng(16)
    for trial in range(40):
        n = int(rng.integers(3, 48))
        model = sp.gen_uniform(n, 3, 0.3, seed=300 + trial)
        P = model.to_symbolic()
        start = int(rng.integers(0, n))
        stream = sp.scc_stream(P, P.vertices, start=start)
        first = next(stream)
        assert start in id_set(first)
        rest = [id_set(c) for c in stream]
        union = id_set(first).union(*rest) if rest else id_set(first)
        assert union == set(range(n))


def test_scc_partition_invariants():
    model = sp.gen_layered(60, 3, 0.4, seed=7)
    P = model.to_symbolic()
    sccs = [id_set(c) for c in sp.scc_stream(P, P.vertices)]
    seen = set()
    for c in sccs:
        assert c
        assert not (c & seen)
        seen |= c
    assert seen == set(range(60))


def test_scc_restrict_subset():
    model = sp.gen_uniform(30, 3, 0.3, seed=17)
    P = model.to_symbolic()
    g = model.to_explicit()
    sub = set(range(0, 30, 2))
    R = P.ctx.from_ids(sorted(sub))
    got = sorted([tuple(sorted(id_set(c))) for c in sp.scc_stream(P, R)])
    want = sorted([tuple(sorted(c)) for c in sp.tarjan_scc(g, sub)])
    assert got == want


def test_scc_of_matches_stream():
    rng = np.random.default_rng(18)
    for trial in range(60):
        n = int(rng.integers(3, 48))
        model = sp.gen_uniform(n, 3, 0.3, seed=400 + trial)
        P = model.to_symbolic()
        g = model.to_explicit()
        v = int(rng.integers(0, n))
        got = id_set(sp.scc_of(P, P.vertices, v))
        want = next(c for c in sp.tarjan_scc(g) if v in c)
        assert got == want


def test_scc_start_outside_restrict_raises():
    P = build(3, [(0, 1), (1, 0), (2, 0), (0, 2)], [])
    R = P.ctx.from_ids([0, 1])
    with pytest.raises(sp.ContractViolation):
        list(sp.scc_stream(P, R, start=2))


def test_scc_operation_budget():
    # total stream ops within a frozen constant of sum of (diameter + 1)
    rng = np.random.default_rng(19)
    worst = 0.0
    for trial in range(30):
        n = int(rng.integers(8, 64))
        model = sp.gen_uniform(n, float(rng.choice([1.5, 2, 3])), 0.3, seed=500 + trial)
        P = model.to_symbolic()
        g = model.to_explicit()
        budget = 0
        for c in sp.tarjan_scc(g):
            budget += sp.explicit_diameter(g, c) + 1
        before = P.ctx.meter.total_ops
        for c in sp.scc_stream(P, P.vertices):
            c.release()
        ops = P.ctx.meter.total_ops - before
        worst = max(worst, ops / budget)
    assert worst <= 60  # frozen constant


# ---------------------------------------------------------------------------
# separator
# ---------------------------------------------------------------------------

def _sc_cycle(n):
    return build(n, [(i, (i + 1) % n) for i in range(n)], [])


def test_separator_small_diameter_branch():
    # a clique on 8 vertices has diameter 1; gamma=6 gives q=1 but no layer
    # at depth >= gamma exists, so the result is empty
    edges = [(i, j) for i in range(8) for j in range(8) if i != j]
    P = build(8, edges, [])
    X = P.ctx.full()
    T = sp.separator(X, 6, P)
    assert T.is_empty()


def test_separator_directed_cycle():
    P = _sc_cycle(64)
    X = P.ctx.full()
    T = sp.separator(X, 16, P)
    t_ids = id_set(T)
    assert t_ids
    q = math.floor(16 / (2 * math.log2(64)))
    assert q == 1
    assert len(t_ids) <= 64 / q
    g = sp.ExplicitMdp.from_symbolic(P)
    for c in sp.tarjan_scc(g, set(range(64)) - t_ids):
        assert len(c) <= 64 - q * len(t_ids)


def test_separator_layer_threshold_formula():
    # a layer at loop depth i qualifies for the low side only when its size
    # is at most 2^(i/q - 1); with q=2 and i=4 that bound is exactly 2
    assert 2 ** (4 / 2 - 1) == 2.0


def test_separator_completeness_on_deep_sets():
    # whenever the true diameter is >= 2*gamma the result is non-empty
    rng = np.random.default_rng(20)
    for n in (48, 96, 160):
        P = _sc_cycle(n)
        X = P.ctx.full()
        gamma = int(2 * math.log2(n)) + int(rng.integers(1, 5))
        T = sp.separator(X, gamma, P)
        assert not T.is_empty(), (n, gamma)


def test_separator_contract_randomized():
    rng = np.random.default_rng(21)
    nonempty = 0
    for trial in range(120):
        kind = trial % 3
        if kind == 0:
            model = sp.gen_uniform(int(rng.integers(8, 100)), 3, 0.3, seed=trial)
        elif kind == 1:
            model = sp.gen_cycle_chain(int(rng.integers(30, 160)), cycle_len=6, seed=trial)
        else:
            model = sp.gen_layered(int(rng.integers(16, 120)), 3, 0.3, seed=trial)
        g = model.to_explicit()
        comps = [c for c in sp.tarjan_scc(g) if len(c) >= 4]
        if not comps:
            continue
        x_ids = max(comps, key=len)
        k = len(x_ids)
        P = model.to_symbolic()
        X = P.ctx.from_ids(sorted(x_ids))
        for gamma in {int(2 * math.log2(k)) + 1, k // 3 + 2, k // 2 + 2}:
            q = math.floor(gamma / (2 * math.log2(k)))
            if q < 1:
                continue
            T = sp.separator(X, gamma, P)
            t_ids = id_set(T)
            root = min(x_ids)
            if t_ids:
                nonempty += 1
                assert len(t_ids) <= k / q
                for c in sp.tarjan_scc(g, x_ids - t_ids):
                    assert len(c) <= k - q * len(t_ids)
            else:
                assert sp.explicit_bfs_depth(g, root, x_ids, True) < gamma
                assert sp.explicit_bfs_depth(g, root, x_ids, False) < gamma
            T.release()
        X.release()
    assert nonempty >= 20


def test_separator_op_budget_and_space():
    for n in (64, 128, 256):
        P = _sc_cycle(n)
        X = P.ctx.full()
        before = P.ctx.meter.total_ops
        live_before = P.ctx.meter.live_sets
        peak_before = P.ctx.meter.peak_live_sets
        T = sp.separator(X, int(2 * math.log2(n)) + 2, P)
        ops = P.ctx.meter.total_ops - before
        assert ops <= 16 * n  # frozen constant: O(|X|) operations
        T.release()
        assert P.ctx.meter.live_sets == live_before
        # constant live sets beyond what was already live
        assert P.ctx.meter.peak_live_sets <= max(peak_before, live_before + 8)


def test_separator_contract_violations():
    P = _sc_cycle(16)
    with pytest.raises(sp.ContractViolation):
        sp.separator(P.ctx.empty(), 8, P)
    with pytest.raises(sp.ContractViolation):
        sp.separator(P.ctx.full(), 2, P)  # q would be 0

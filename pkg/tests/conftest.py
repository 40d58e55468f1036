import numpy as np
import pytest

import symmdp as sp


def build(n, edges, randoms, backend="bitset"):
    return sp.SymbolicMdp.build(n, edges, randoms, backend=backend)


def mirror(P, priority=None):
    return sp.ExplicitMdp.from_symbolic(P, priority)


def id_set(vs):
    return frozenset(int(x) for x in vs.to_ids())


def decomposition_key(mecs, non_mec):
    """Canonical (sorted MEC list, non-MEC set) over plain id collections."""
    return (sorted([frozenset(m) for m in mecs], key=min), frozenset(non_mec))


def oracle_key(g):
    mecs, non = sp.explicit_mec(g)
    return decomposition_key(mecs, non)


def random_models(count, seed, n_lo=4, n_hi=48, degrees=(2, 3, 4),
                  fractions=(0.0, 0.3, 0.7, 1.0), d=None):
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        deg = float(rng.choice(degrees))
        rf = float(rng.choice(fractions))
        yield sp.gen_uniform(n, deg, rf, d=d, seed=seed * 10_000 + i)


# the hand-built walkthrough instance: letters d=0 f=1 e=2 g=3 a=4 b=5 c=6
# h=7 i=8 j=9 k=10 l=11, sink pair 12/13.
WALKTHROUGH_EDGES = [
    (4, 11), (11, 4), (11, 5), (5, 6), (6, 0), (0, 2), (0, 1), (2, 11),
    (2, 3), (1, 0), (1, 12), (3, 7), (3, 8), (7, 4), (8, 7), (8, 9),
    (9, 10), (10, 9), (10, 0), (12, 13), (13, 12),
]
WALKTHROUGH_RANDOMS = [4, 5, 6, 1, 9]
WALKTHROUGH_N = 14


@pytest.fixture
def walkthrough_mdp():
    P = build(WALKTHROUGH_N, WALKTHROUGH_EDGES, WALKTHROUGH_RANDOMS)
    yield P
    P.release()

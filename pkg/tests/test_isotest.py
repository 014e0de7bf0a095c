import numpy as np
import pytest

from ddwl.digraph import Digraph
from ddwl.isotest import (
    BudgetExceeded,
    are_isomorphic,
    automorphism_generators,
    automorphism_order,
    iso_class_count,
)
from ddwl.srings import SRing


def test_self_isomorphism(cons3, closures3):
    g = cons3.build_cayley(1)
    cert = are_isomorphic(g, g, closures3[1], closures3[1])
    assert cert.isomorphic
    assert np.array_equal(g.arcs[np.ix_(cert.mapping, cert.mapping)], g.arcs)


def test_permuted_copy(cons3, closures3):
    g = cons3.build_cayley(1)
    rng = np.random.default_rng(23)
    for _ in range(3):
        perm = rng.permutation(g.n)
        cert = are_isomorphic(g, g.relabeled(perm))
        assert cert.isomorphic
        h = g.relabeled(perm)
        assert np.array_equal(h.arcs[np.ix_(cert.mapping, cert.mapping)], g.arcs)


def test_invariant_distinguisher():
    g1 = Digraph.complete(5)
    a = g1.arcs.copy()
    a[0, 1] = False
    g2 = Digraph(a)
    cert = are_isomorphic(g1, g2)
    assert cert.kind == "non-isomorphic"
    assert cert.invariant_diff is not None


def test_random_digraph_pairs():
    g = Digraph.random(14, 0.35, seed=41)
    perm = np.random.default_rng(1).permutation(14)
    assert are_isomorphic(g, g.relabeled(perm)).isomorphic
    a = g.arcs.copy()
    u, v = np.argwhere(a)[0]
    a[u, v] = False
    assert are_isomorphic(g, Digraph(a)).kind == "non-isomorphic"


def test_size_mismatch_rejected():
    with pytest.raises(ValueError):
        are_isomorphic(Digraph.complete(3), Digraph.complete(4))


def test_automorphism_orders_known_graphs():
    assert automorphism_order(Digraph.complete(5)) == 120
    assert automorphism_order(Digraph.directed_cycle(6)) == 6
    assert automorphism_order(Digraph.directed_cycle(9)) == 9


def test_automorphism_order_family_q3(cons3, closures3):
    for i in cons3.generators_I():
        assert automorphism_order(cons3.build_cayley(i), closures3[i]) == 216


def test_automorphism_order_relabeling_invariant(cons3):
    g = cons3.build_cayley(1)
    rng = np.random.default_rng(3)
    orders = {automorphism_order(g.relabeled(rng.permutation(g.n))) for _ in range(3)}
    assert orders == {216}


def test_stabilizer_structure_q3(cons3, closures3):
    g = cons3.build_cayley(1)
    stab = automorphism_order(g, closures3[1], fixed=(0,))
    assert stab == 8                  # q**2 - 1
    assert (3**2 - 1) % stab == 0
    order, gens = automorphism_generators(g, closures3[1], fixed=(0,))
    ring = SRing.from_construction(cons3)
    for f in gens:
        assert f[0] == 0
        # stabilizer orbits refine the basic-set partition
        assert (ring.cell_of[f] == ring.cell_of).all()


def test_stabilizer_structure_q5(cons5, closures5):
    i = cons5.generators_I()[0]
    g = cons5.build_cayley(i)
    stab = automorphism_order(g, closures5[i], fixed=(0,))
    assert stab == 24
    _, gens = automorphism_generators(g, closures5[i], fixed=(0,))
    ring = SRing.from_construction(cons5)
    for f in gens:
        assert (ring.cell_of[f] == ring.cell_of).all()


def test_budget_exhaustion(cons3, closures3):
    g1, g2 = cons3.build_cayley(1), cons3.build_cayley(2)
    cert = are_isomorphic(g1, g2, closures3[1], closures3[2], node_budget=1)
    assert cert.kind == "undetermined"
    with pytest.raises(BudgetExceeded):
        automorphism_order(g1, closures3[1], node_budget=1)


def test_iso_class_count_copies(cons3):
    g = cons3.build_cayley(1)
    res = iso_class_count([g, g, g])
    assert res.count == 1 and res.exact


def test_iso_class_count_q3(cons3, closures3):
    gens = cons3.generators_I()
    res = iso_class_count(
        [cons3.build_cayley(i) for i in gens], [closures3[i] for i in gens]
    )
    assert res.exact
    assert res.count >= 1
    # measured: the two generator-labelled digraphs are isomorphic at q = 3
    assert res.count == 1


def test_iso_class_count_lower_bound_on_budget_exhaustion(cons3, closures3):
    gens = cons3.generators_I()
    graphs = [cons3.build_cayley(i) for i in gens]
    res = iso_class_count(graphs, [closures3[i] for i in gens], node_budget=1)
    assert not res.exact
    assert res.count == 1  # a lower bound, not a class count
    assert all(v == "undetermined" for v in res.pair_results.values())


def test_iso_class_count_mixed():
    g1 = Digraph.complete(8)
    g2 = Digraph.directed_cycle(8)
    g3 = g2.relabeled(np.random.default_rng(5).permutation(8))
    res = iso_class_count([g1, g2, g3])
    assert res.exact and res.count == 2
    assert res.pair_results[(1, 2)] == "isomorphic"


def test_certificate_json(cons3, closures3):
    cert = are_isomorphic(cons3.build_cayley(1), cons3.build_cayley(1))
    payload = cert.to_json()
    assert payload["type"] == "isomorphic"
    assert len(payload["mapping"]) == 27

import numpy as np
import pytest

from ddwl.arith import euler_phi
from ddwl.construction import INFINITY, Construction, MatrixM, rho_apply
from ddwl.digraph import Digraph
from ddwl.heisenberg import GroupElement, g_mul


def element(cons, x, y, z):
    f = cons.field
    return GroupElement(f.element(x), f.element(y), f.element(z))


def test_rho_identity_matrix_is_identity_map(cons3):
    f = cons3.field
    m = MatrixM(f.element(1), f.element(0), f.element(cons3.epsilon))
    for v in range(cons3.n):
        g = cons3.table.element(v)
        assert rho_apply(m, g) == g


def test_rho_fixes_identity_and_example(cons3):
    f = cons3.field
    m = MatrixM(f.element(0), f.element(1), f.element(cons3.epsilon))
    assert rho_apply(m, element(cons3, 0, 0, 0)) == element(cons3, 0, 0, 0)
    assert rho_apply(m, element(cons3, 1, 0, 0)) == element(cons3, 0, 1, 0)


def test_rho_perm_agrees_with_typed_map(cons5):
    f = cons5.field
    perm = cons5.rho_perm(2, 3)
    m = MatrixM(f.element(2), f.element(3), f.element(cons5.epsilon))
    for v in range(0, cons5.n, 7):
        assert cons5.table.vertex_index(rho_apply(m, cons5.table.element(v))) == perm[v]


def test_matrix_m_excludes_zero_pair(cons3):
    f = cons3.field
    with pytest.raises(ValueError):
        MatrixM(f.element(0), f.element(0), f.element(cons3.epsilon))


@pytest.mark.parametrize("q", [3, 5, 9])
def test_build_k_size_and_homomorphism(q):
    cons = Construction(q)
    ks = cons.build_K()
    assert len(ks) == q * q - 1
    # rho is multiplicative as a matrix action: composition stays inside K
    perms = {k.perm.tobytes() for k in ks}
    for a in ks[:5]:
        for b in ks[:5]:
            assert a.perm[b.perm].tobytes() in perms


def test_k_composition_closure_exhaustive_q3(cons3):
    ks = cons3.build_K()
    perms = {k.perm.tobytes() for k in ks}
    for a in ks:
        for b in ks:
            assert a.perm[b.perm].tobytes() in perms


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_k_orbits_match_analytic_cells(q):
    cons = Construction(q)
    orbits = cons.k_orbits()
    assert len(orbits) == q + 2
    sizes = sorted(len(o) for o in orbits)
    assert sizes == [1, q - 1] + [q * q - 1] * q
    e_orbit = [o for o in orbits if len(o) == 1]
    assert e_orbit[0][0] == 0


def test_orbit_of_simple_element_is_y0(cons3):
    orbits = cons3.k_orbits()
    v110 = cons3.table.vertex_index(element(cons3, 1, 0, 0))
    orbit = next(o for o in orbits if v110 in o)
    assert np.array_equal(orbit, cons3.build_Y(0))


def test_gamma_examples(cons3):
    assert cons3.gamma(0, 1, 1) == 2          # 1/2 in GF(3)
    assert cons3.gamma(1, 0, 0) == 0
    assert cons3.gamma(1, 1, 1) == 1          # 2 + (1 - 2) * 1


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_connection_sets(q):
    cons = Construction(q)
    f = cons.field
    for i in range(q):
        y = cons.build_Y(i)
        x = cons.build_X(i)
        assert len(y) == q * q - 1
        assert len(x) == q * q
        assert 0 in x and 0 not in y
        # no element of Y_i is central
        assert not cons.table.center_mask[y].any()
        # elementwise inverses give the set labelled by -i
        inv_set = np.sort(cons.table.inv[y])
        assert np.array_equal(inv_set, cons.build_Y(int(f.neg(i))))
        # exactly one member in every coset of the center
        counts = np.bincount(cons.table.coset_ids[x], minlength=q * q)
        assert (counts == 1).all()


def test_cayley_digraph_shape(cons3):
    g = cons3.build_cayley(1)
    assert g.n == 27
    assert set(g.out_degrees().tolist()) == {9}
    assert set(g.in_degrees().tolist()) == {9}
    assert g.arcs.diagonal().all()          # identity in the connection set
    assert int(g.arcs.sum()) == 27 * 9
    assert g.is_asymmetric()
    loopless = cons3.build_cayley(1, include_identity=False)
    assert not loopless.arcs.diagonal().any()
    assert set(loopless.out_degrees().tolist()) == {8}
    # each vertex dominates exactly one vertex in every center coset
    for v in range(g.n):
        targets = np.flatnonzero(g.arcs[v])
        assert (np.bincount(cons3.table.coset_ids[targets], minlength=9) == 1).all()


def test_cayley_arc_rule(cons3):
    g = cons3.build_cayley(1)
    t = cons3.table
    mask = np.zeros(cons3.n, dtype=bool)
    mask[cons3.build_X(1)] = True
    for u in range(0, 27, 5):
        for v in range(27):
            assert g.arcs[u, v] == mask[t.mult[v, t.inv[u]]]


def test_psi_special_cases(cons3):
    assert cons3.psi(1, INFINITY) == 1
    assert cons3.psi(INFINITY, 2) == 2
    assert cons3.psi(INFINITY, INFINITY) is INFINITY
    assert cons3.psi(1, 2) is INFINITY       # j = -i
    assert cons3.psi(1, 1) == 0              # (1 + 2) / 2 in GF(3)
    assert cons3.chi(INFINITY) is INFINITY
    assert cons3.chi(1) == 2


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_psi_group_axioms_exhaustive(q):
    cons = Construction(q)
    els = [INFINITY] + list(range(q))
    for i in els:
        assert cons.psi(i, INFINITY) == i or cons.psi(i, INFINITY) is i
        assert cons.psi(INFINITY, i) == i or cons.psi(INFINITY, i) is i
        assert cons.psi(i, cons.chi(i)) is INFINITY
        for j in els:
            assert cons.psi(i, j) == cons.psi(j, i) or cons.psi(i, j) is cons.psi(j, i)
            for k in els:
                assert cons.psi(cons.psi(i, j), k) == cons.psi(i, cons.psi(j, k))
    # closure: results stay inside the carrier set
    values = {cons.psi(i, j) for i in els for j in els}
    assert all(v is INFINITY or 0 <= v < q for v in values)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_generators(q):
    cons = Construction(q)
    gens = cons.generators_I()
    assert len(gens) == euler_phi(q + 1)
    assert gens == sorted(gens)
    assert all(cons.psi_order(i) == q + 1 for i in gens)
    # the generator list never contains the identity element
    assert INFINITY not in gens
    assert cons.psi_order(INFINITY) == 1


def test_generators_small_cases(cons3, cons7):
    # powers of 1 in GF(3): 1, 0, 2, inf -> order 4
    seq = [1]
    while seq[-1] is not INFINITY:
        seq.append(cons3.psi(seq[-1], 1))
    assert len(seq) == 4
    assert cons3.generators_I() == [1, 2]
    assert len(cons7.generators_I()) == 4


def test_digraph_text_round_trip(cons3):
    g = cons3.build_cayley(2)
    again = Digraph.from_text(g.to_text())
    assert np.array_equal(again.arcs, g.arcs)

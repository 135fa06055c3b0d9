from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from toricfano import lattice as L
from toricfano.errors import DegenerateDimension, LatticeOverflow, NoSolution, NotUnique, ZeroVector

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
O = (0, 0, 0)

small = st.integers(-6, 6)
vec3 = st.tuples(small, small, small)


def test_primitive_vector():
    assert L.primitive_vector((15, 10, 6)) == (15, 10, 6)
    assert L.primitive_vector((0, 4, 6)) == (0, 2, 3)
    assert L.primitive_vector((-4, 0, 2)) == (-2, 0, 1)
    with pytest.raises(ZeroVector):
        L.primitive_vector((0, 0, 0))


@given(vec3.filter(any))
def test_primitive_vector_idempotent(v):
    p = L.primitive_vector(v)
    assert L.primitive_vector(p) == p
    assert L.is_primitive(p)
    assert L.rank([p, v]) == 1 and L.dot(p, v) > 0


def test_determinant3_examples():
    assert L.determinant3(E1, E2, E3) == 1
    assert L.determinant3(E2, E3, (15, 10, 6)) == 15
    assert L.determinant3((2, 1, 1), (1, 2, 1), (1, 1, 2)) == 4


@given(vec3, vec3, vec3)
def test_determinant3_alternating(a, b, c):
    assert L.determinant3(b, a, c) == -L.determinant3(a, b, c)
    assert L.determinant3(a, a, c) == 0
    assert L.determinant3(a, b, c) == oracle.det3(a, b, c)


def test_overflow_aborts():
    big = 2 ** 62
    with pytest.raises(LatticeOverflow):
        L.add((big, 0, 0), (big, 0, 0))
    with pytest.raises(LatticeOverflow):
        L.as_vector((2 ** 63, 0, 0))


def test_support_form_examples():
    assert L.support_form([E1, E2, E3]) == L.DualForm((1, 1, 1))
    u = L.support_form([E2, E3, (15, 10, 6)])
    assert u.as_ints() == (-1, 1, 1)
    assert u.equation() == "-Z1+Z2+Z3=1"
    w = L.support_form([E1, E2, (1, 1, 2)])
    assert w.coeffs == (1, 1, Fraction(-1, 2))
    assert not w.integral


def test_support_form_verdicts():
    with pytest.raises(NotUnique):
        L.support_form([E1, E2])
    with pytest.raises(NoSolution):
        L.support_form([E1, (2, 0, 0)])
    with pytest.raises(NoSolution):
        L.support_form([E1, E2, (1, 1, 0)])


@given(vec3, vec3, vec3)
def test_support_form_takes_one(a, b, c):
    if oracle.det3(a, b, c) == 0:
        return
    u = L.support_form([a, b, c])
    assert [u(p) for p in (a, b, c)] == [1, 1, 1]
    assert u.coeffs == oracle._form([a, b, c])


def test_hull_simplex():
    h = L.convex_hull([O, E1, E2, E3])
    assert sorted(h.vertices) == sorted([O, E1, E2, E3])
    assert len(h.facets) == 4


def test_hull_planar_interior_point():
    h = L.convex_hull([(0, 0), (1, 0), (0, 1), (2, 1), (1, 2), (1, 1)])
    assert sorted(h.vertices) == [(0, 0), (0, 1), (1, 0), (1, 2), (2, 1)]
    assert h.location((1, 1)) == "interior"


def test_hull_pyramid_over_111():
    pts = [O, E1, E2, E3, (1, 1, 1)]
    h = L.convex_hull(pts)
    assert len(h.vertices) == 5
    assert len(h.facets) == 6
    assert len(h.origin_facets()) == 3
    assert {(f.normal, f.offset) for f in h.facets} == set(oracle.facets3(pts))


def test_hull_degenerate_is_returned():
    h = L.convex_hull([O, E1, E2, (1, 1, 0)])
    assert h.dimension == 2 and h.ambient == 3
    with pytest.raises(DegenerateDimension):
        h.require_full()


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)), min_size=4, max_size=9))
def test_hull_against_brute_force(pts):
    pts = sorted(set(pts))
    h = L.convex_hull(pts)
    if L.affine_dimension(pts) < 3:
        assert not h.full
        return
    assert sorted(h.vertices) == oracle.vertices(pts)
    brute = oracle.facets3(pts)
    assert {(f.normal, f.offset) for f in h.facets} == set(brute)
    for f in h.facets:
        on = brute[(f.normal, f.offset)]
        assert set(f.vertices) == {v for v in on if v in h.vertices}
        for v in h.vertices:
            assert (f.excess(v) == 0) == (v in f.vertices)
            assert f.excess(v) <= 0
    again = L.convex_hull(h.vertices)
    assert again.vertices == h.vertices and again.facets == h.facets


def test_facet_forms_take_one_on_their_vertices():
    h = L.convex_hull([O, E1, E2, E3, (15, 10, 6)])
    for f in h.outer_facets():
        u = f.form
        assert all(u(v) == 1 for v in f.vertices)
        assert all(u(v) < 1 for v in h.vertices if v not in f.vertices)


def test_lattice_points_examples():
    simplex = L.lattice_points(L.convex_hull([O, E1, E2, E3]))
    assert simplex == {p: "vertex" for p in (O, E1, E2, E3)}

    pts = L.lattice_points(L.convex_hull([O, E1, E2, E3, (2, 2, 1)]))
    assert len(pts) == 6
    assert pts[(1, 1, 1)] == "boundary"

    big = L.lattice_points(L.convex_hull([O, E1, E2, E3, (15, 10, 6)]))
    for p in [(3, 2, 2), (6, 4, 3), (9, 6, 4), (5, 4, 2), (4, 3, 2), (5, 3, 2), (3, 2, 1), (2, 2, 1)]:
        assert p in big


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), min_size=5, max_size=8),
       st.randoms(use_true_random=False))
def test_lattice_points_order_invariant(pts, rnd):
    if L.affine_dimension(pts) < 3:
        return
    shuffled = list(pts)
    rnd.shuffle(shuffled)
    a = L.lattice_points(L.convex_hull(pts))
    b = L.lattice_points(L.convex_hull(shuffled))
    assert a == b
    verts = set(oracle.vertices(pts))
    for p, tag in a.items():
        assert oracle.in_hull(p, sorted(verts))
        assert (tag == "vertex") == (p in verts)


def test_dual_form_permuted_and_coordinate():
    u = L.DualForm((1, -2, 1))
    perm = (0, 2, 1)
    v = (3, 2, 2)
    assert u.permuted(perm)(tuple(v[i] for i in perm)) == u(v)
    assert L.DualForm((0, 0, 1)).is_coordinate() == 2
    assert L.DualForm((0, 1, -1)).is_coordinate() is None


@pytest.mark.parametrize("perm", list(permutations(range(3))))
def test_normalized_volume_permutation_invariant(perm):
    pts = [O, E1, E2, E3, (3, 2, 2)]
    moved = [tuple(p[i] for i in perm) for p in pts]
    assert L.convex_hull(moved).normalized_volume() == L.convex_hull(pts).normalized_volume() == 7

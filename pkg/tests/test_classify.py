import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from toricfano import lattice as L
from toricfano.classify import (
    canonical_form,
    classify,
    enumerate_polygons_iib,
    enumerate_region,
    enumerate_smooth_surfaces,
    iib_bound,
    key_digest,
    polygon_from_fan,
    region_lattice_points,
)
from toricfano.constructions import family_i, fan_from_polygon, random_polygon, sporadic, surface_family, validate_polygon
from toricfano.errors import NotPolytopeType, RegionTooLarge
from toricfano.fans import affine_fan, fan_from_rays, gorenstein_form, make_cone, make_fan, permute_fan
from toricfano.local_fano import fano_grade

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
O = (0, 0, 0)
PERMS = list(permutations(range(3)))


# canonical keys

def test_canonical_key_examples():
    assert {canonical_form(permute_fan(affine_fan(3), p)) for p in PERMS} == {canonical_form(affine_fan(3))}
    a = fan_from_rays([E1, E2, E3, (10, 15, 6)])
    b = fan_from_rays([E1, E2, E3, (15, 10, 6)])
    assert canonical_form(a) == canonical_form(b)
    keys = {canonical_form(fan_from_rays([E1, E2, E3, r])) for r in [(3, 3, 1), (3, 1, 3), (1, 3, 3)]}
    assert keys == {canonical_form(family_i(3))}
    assert canonical_form(family_i(3)) != canonical_form(family_i(4))
    assert len(key_digest(canonical_form(family_i(3)))) == 16


@settings(max_examples=60, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)).filter(oracle.primitive),
               max_size=3),
       st.sampled_from(PERMS))
def test_canonical_key_is_orbit_invariant(extra, perm):
    f = fan_from_rays([E1, E2, E3] + sorted(extra))
    g = permute_fan(f, perm)
    assert canonical_form(f) == canonical_form(g)
    # keys separate fans that are not permutation images of each other
    h = fan_from_rays([E1, E2, E3] + sorted(extra) + [(1, 1, 1)])
    assert (canonical_form(h) == canonical_form(f)) == any(permute_fan(f, p) == h for p in PERMS)


# classification

def test_classify_examples():
    assert classify(affine_fan(3)).kind == "Affine"
    assert str(classify(family_i(5))) == "FamilyI(5)"
    assert str(classify(sporadic(1))) == "Sporadic(1)"
    label = classify(fan_from_polygon([(0, 0, 1), (1, 1, 1), (2, 1, 1)]))
    assert label.kind == "PolytopeType"
    assert str(label) == "PolytopeType(P[(0,0), (1,1), (2,1)])"


def test_classify_negative_labels():
    # the case-IV body is strictly convex but one form is not integral
    assert classify(fan_from_rays([E1, E2, E3, (2, 1, 1), (1, 2, 1), (1, 1, 2)])).kind == "NotGorenstein"
    assert classify(fan_from_rays([E1, E2, E3, (1, 1, 0)])).kind == "NotLocalFano"


@pytest.mark.parametrize("k", range(1, 14))
def test_classify_sporadic_all_permutations(k):
    f = sporadic(k)
    for p in PERMS:
        label = classify(permute_fan(f, p))
        assert label.kind == "Sporadic" and label.k == k
        assert permute_fan(permute_fan(f, p), label.permutation) == f


def test_polygon_from_fan_examples():
    P = validate_polygon([(0, 0, 1), (1, 2, 1), (2, 1, 1)])
    assert polygon_from_fan(fan_from_polygon(P)) == P
    with pytest.raises(NotPolytopeType):
        polygon_from_fan(sporadic(1))
    with pytest.raises(NotPolytopeType):
        polygon_from_fan(family_i(2))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from(PERMS))
def test_polygon_round_trip_under_permutation(seed, perm):
    P = random_polygon(random.Random(seed))
    f = fan_from_polygon(P)
    assert polygon_from_fan(f) == P
    g = permute_fan(f, perm)
    label = classify(g)
    assert label.kind == "PolytopeType"
    assert fan_from_polygon(label.polygon) == permute_fan(g, label.permutation)
    assert canonical_form(fan_from_polygon(label.polygon)) == canonical_form(f)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 100), st.sampled_from(PERMS))
def test_classify_family_i_equivariant(m, perm):
    label = classify(permute_fan(family_i(m), perm))
    assert label.kind == "FamilyI" and label.m == m
    assert permute_fan(permute_fan(family_i(m), perm), label.permutation) == family_i(m)


# the case IIb region

def test_iib_bound():
    r = iib_bound()
    assert r.alphas == (1, 0, -1, -2, -3, -4)
    assert r.alpha_t0 == tuple(Fraction(6, a + 5) for a in r.alphas)
    assert r.line(1) == E3
    assert r.line(6) == r.z1 == (15, 10, 6)
    assert r.z2 == (15, 6, 10)
    assert sorted(r.wedge1.vertices) == sorted([O, E1, E2, E3, (15, 10, 6)])
    assert {u.as_ints() for u in r.forms1} == {(-1, 1, 1), (1, -2, 1), (1, 1, -4)}
    assert {u.as_ints() for u in r.forms2} == {(-1, 1, 1), (1, 1, -2), (1, -4, 1)}
    for u in ((-1, 1, 1), (1, -2, 1), (1, 1, -4)):
        assert L.dot(u, r.z1) == 1
    w = r.witness
    assert w == (15, 8, 8)
    assert not r.contains(w)
    assert oracle.in_hull(w, [r.z1, r.z2])
    assert not oracle.in_hull(w, [O, E1, E2, E3, r.z1])
    assert not oracle.in_hull(w, [O, E1, E2, E3, r.z2])


def test_iib_region_points():
    pts = region_lattice_points(iib_bound())
    assert (15, 10, 6) in pts and (15, 6, 10) in pts and (3, 2, 2) in pts
    assert O not in pts


# enumeration

def test_enumerate_small_regions():
    simplex = L.convex_hull([O, E1, E2, E3])
    res = enumerate_region(simplex)
    assert res.keys == (canonical_form(affine_fan(3)),)

    region = L.convex_hull([O, E1, E2, E3, (1, 1, 1)])
    for strategy in ("closure", "reverse", "naive"):
        res = enumerate_region(region, strategy=strategy)
        assert set(res.keys) == {canonical_form(affine_fan(3)), canonical_form(family_i(1))}


def test_enumeration_strategies_agree():
    region = L.convex_hull([O, E1, E2, E3, (3, 2, 2), (2, 2, 1), (1, 2, 2)])
    runs = {s: enumerate_region(region, strategy=s, max_candidates=20) for s in ("closure", "reverse", "naive")}
    keys = {s: set(r.keys) for s, r in runs.items()}
    assert keys["closure"] == keys["reverse"] == keys["naive"]
    # brute force over every subset of primitive region points, graded by the oracle
    pts = [p for p in region_lattice_points(region) if p not in (E1, E2, E3) and oracle.primitive(p)]
    brute = set()
    for mask in range(1 << len(pts)):
        extra = [p for i, p in enumerate(pts) if mask >> i & 1]
        rays = [E1, E2, E3] + extra
        if sorted(oracle.vertices([O] + rays)) != sorted([O] + rays):
            continue
        if oracle.grade(rays) == (True, True, True):
            brute.add(canonical_form(fan_from_rays(rays)))
    assert keys["closure"] == brute
    kinds = sorted(classify(f).kind for f in runs["closure"].fans)
    assert kinds == ["Affine", "FamilyI", "FamilyI", "PolytopeType", "PolytopeType", "Sporadic", "Sporadic"]
    for f in runs["closure"].fans:
        label = classify(f)
        assert label.kind not in ("UnclassifiedWitness", "NotLocalFano", "NotGorenstein")
        coordinate = any(gorenstein_form(c).is_coordinate() is not None for c in f.cones)
        assert (label.kind == "PolytopeType") == coordinate
        if coordinate:
            assert polygon_from_fan(f) == label.polygon
            assert fan_from_polygon(label.polygon) == permute_fan(f, label.permutation)


def test_region_too_large():
    with pytest.raises(RegionTooLarge):
        enumerate_region(L.convex_hull([O, E1, E2, E3, (6, 6, 6)]), max_points=9)
    assert len(enumerate_region(L.convex_hull([O, E1, E2, E3, (6, 6, 6)]), max_points=10)) >= 1


def test_enumerate_polygons():
    res = enumerate_polygons_iib()
    assert res.count == 23
    assert res.before_swap == 44
    assert any(sorted(p) == sorted([E2, E3, (3, 2, 2)]) for p in res.polygons)
    plane = L.DualForm((-1, 1, 1))
    r = iib_bound()
    for poly in res.polygons:
        assert all(plane(v) == 1 for v in poly)
        assert E2 in poly and E3 in poly
        assert all(r.contains(v) for v in poly)
    assert res.lines()[-1] == "polygons: 23"


# surfaces

def test_smooth_surface_enumeration_small_box():
    res = enumerate_smooth_surfaces(box=4)
    # brute force: every chain of det-1 steps from e1 to e2 in the box, graded directly
    brute = []

    def chains(chain):
        last = chain[-1]
        if last == (0, 1):
            yield chain
            return
        for x in range(5):
            for y in range(5):
                w = (x, y)
                if last[0] * w[1] - last[1] * w[0] == 1:
                    yield from chains(chain + [w])

    for ch in chains([(1, 0)]):
        f = make_fan([make_cone(pair) for pair in zip(ch, ch[1:])])
        if fano_grade(f).weak_fano:
            brute.append(f)
    assert sorted(f.rays for f in res.fans) == sorted(f.rays for f in brute)
    reps = {f.rays for f in res.classes}
    for n in range(5):
        s = surface_family(n)
        assert s.rays in reps or permute_fan(s, (1, 0)).rays in reps

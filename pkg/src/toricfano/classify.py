"""Canonical keys, the classifier, the case-IIb region and exhaustive enumeration.

Isomorphisms of fans over the affine space are the coordinate permutations,
so every comparison here is made up to the action of that group.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Optional

from . import lattice as L
from .constructions import (
    AdmissiblePolygon,
    E1,
    E2,
    E3,
    fan_from_polygon,
    sporadic,
    sporadic_table,
    validate_polygon,
)
from .errors import InvalidPolygon, NotPolytopeType, RegionTooLarge
from .fans import Fan, affine_fan, face_fan, gorenstein_form, make_cone, make_fan, permute_fan, permute_vector
from .local_fano import FanoGrade, fano_grade


# --------------------------------------------------------------------------
# canonical keys


@lru_cache(maxsize=None)
def coordinate_permutations(d: int) -> tuple:
    return tuple(permutations(range(d)))


def _serialize(f: Fan) -> bytes:
    rays = f.rays
    index = {r: i for i, r in enumerate(rays)}
    cones = sorted(tuple(sorted(index[g] for g in c.gens)) for c in f.cones)
    text = "{}|{}|{}".format(
        f.ambient,
        ";".join(",".join(map(str, r)) for r in rays),
        ";".join(",".join(map(str, c)) for c in cones),
    )
    return text.encode("ascii")


def canonical_permutation(f: Fan) -> tuple:
    """The first permutation (in lexicographic order) reaching the minimal key."""
    best = None
    for perm in coordinate_permutations(f.ambient):
        key = _serialize(permute_fan(f, perm))
        if best is None or key < best[0]:
            best = (key, perm)
    return best[1]


def canonical_form(f: Fan) -> bytes:
    """Minimal serialization of rays and cones over all coordinate permutations."""
    return min(_serialize(permute_fan(f, p)) for p in coordinate_permutations(f.ambient))


def canonical_fan(f: Fan) -> Fan:
    return permute_fan(f, canonical_permutation(f))


def key_digest(key: bytes) -> str:
    """Short hex digest of a canonical key for reports."""
    return hashlib.sha256(key).hexdigest()[:16]


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ClassLabel:
    kind: str  # Affine, FamilyI, PolytopeType, Sporadic, NotLocalFano, NotGorenstein, UnclassifiedWitness
    m: Optional[int] = None
    polygon: Optional[AdmissiblePolygon] = None
    k: Optional[int] = None
    permutation: Optional[tuple] = None  # carries the input onto the standard representative
    grade: Optional[FanoGrade] = field(default=None, compare=False)
    detail: Optional[str] = field(default=None, compare=False)

    def __str__(self):
        if self.kind == "FamilyI":
            return f"FamilyI({self.m})"
        if self.kind == "Sporadic":
            return f"Sporadic({self.k})"
        if self.kind == "PolytopeType":
            return f"PolytopeType({self.polygon})"
        return self.kind


def _coordinate_cones(f: Fan):
    """(coordinate index, cone) for cones whose support form is a dual basis vector."""
    out = []
    for c in f.cones:
        try:
            u = gorenstein_form(c)
        except (L.NotUnique, L.NoSolution):
            continue
        i = u.is_coordinate()
        if i is not None:
            out.append((i, c))
    return out


def _polygon_candidates(f: Fan):
    for i, c in sorted(_coordinate_cones(f), key=lambda t: -t[0]):
        others = [j for j in range(3) if j != i]
        for perm in ((others[0], others[1], i), (others[1], others[0], i)):
            yield perm, [permute_vector(g, perm) for g in c.gens]


def _clockwise_from_e3(points):
    planar = L.convex_hull_2d([(p[0], p[1]) for p in points])[::-1]
    if (0, 0) not in planar:
        return None
    k = planar.index((0, 0))
    planar = planar[k:] + planar[:k]
    return [(a, b, 1) for a, b in planar]


def polygon_and_permutation(f: Fan):
    """(polygon, permutation) with fan_from_polygon(polygon) == permute_fan(f, permutation)."""
    if f.ambient != 3:
        raise NotPolytopeType("polygon fans live in dimension 3")
    tried = False
    for perm, gens in _polygon_candidates(f):
        tried = True
        verts = _clockwise_from_e3(gens)
        if verts is None:
            continue
        try:
            p = validate_polygon(verts)
        except InvalidPolygon:
            continue
        if fan_from_polygon(p) == permute_fan(f, perm):
            return p, perm
    if not tried:
        raise NotPolytopeType("no maximal cone has a coordinate support form")
    raise NotPolytopeType("a coordinate support form exists but no admissible polygon reproduces the fan")


def polygon_from_fan(f: Fan) -> AdmissiblePolygon:
    return polygon_and_permutation(f)[0]


@lru_cache(maxsize=None)
def _sporadic_keys() -> dict:
    return {canonical_form(sporadic(row.index)): row.index for row in sporadic_table()}


def _family_i_parameter(f: Fan):
    basis = set(L.basis(3))
    if len(f.rays) != 4 or not basis <= set(f.rays):
        return None
    (x,) = [r for r in f.rays if r not in basis]
    for perm in coordinate_permutations(3):
        y = permute_vector(x, perm)
        if y[2] == 1 and y[0] == y[1] >= 1:
            return y[0], perm
    return None


def classify(f: Fan) -> ClassLabel:
    """Label a fan on the positive orthant; priority Affine > FamilyI > PolytopeType > Sporadic.

    Only Gorenstein local Fano fans get a class; local Fano fans with a
    non-integral form are labelled NotGorenstein.
    """
    grade = fano_grade(f)
    if not grade.fano:
        return ClassLabel("NotLocalFano", grade=grade, detail=grade.witness)
    if not grade.gorenstein:
        return ClassLabel("NotGorenstein", grade=grade, detail=grade.witness)
    if f == affine_fan(f.ambient):
        return ClassLabel("Affine", permutation=tuple(range(f.ambient)), grade=grade)
    if f.ambient != 3:
        return ClassLabel("UnclassifiedWitness", grade=grade, detail="only dimension 3 is classified")
    hit = _family_i_parameter(f)
    if hit is not None:
        m, perm = hit
        return ClassLabel("FamilyI", m=m, permutation=perm, grade=grade)
    if _coordinate_cones(f):
        try:
            p, perm = polygon_and_permutation(f)
            return ClassLabel("PolytopeType", polygon=p, permutation=perm, grade=grade)
        except NotPolytopeType as exc:
            return ClassLabel("UnclassifiedWitness", grade=grade, detail=str(exc))
    k = _sporadic_keys().get(canonical_form(f))
    if k is not None:
        perm = next(p for p in coordinate_permutations(3) if permute_fan(f, p) == sporadic(k))
        return ClassLabel("Sporadic", k=k, permutation=perm, grade=grade)
    return ClassLabel("UnclassifiedWitness", grade=grade,
                      detail="Fano, no coordinate form, and not in the sporadic table")


# --------------------------------------------------------------------------
# the case-IIb region


@dataclass(frozen=True)
class RegionIIb:
    z1: tuple
    z2: tuple
    wedge1: L.HullComplex
    wedge2: L.HullComplex
    forms1: tuple  # outer facet forms of wedge 1
    forms2: tuple
    alphas: tuple  # admissible alpha, with t0 in alpha_t0
    alpha_t0: tuple  # Fractions
    line_point: tuple  # x(t) = line_point + t * line_direction
    line_direction: tuple
    witness: tuple  # a point of Conv(z1, z2) outside both wedges
    witness_detail: str

    def line(self, t):
        return tuple(p + t * d for p, d in zip(self.line_point, self.line_direction))

    def contains(self, p) -> bool:
        return self.wedge1.contains(p) or self.wedge2.contains(p)

    @property
    def hulls(self) -> tuple:
        return (self.wedge1, self.wedge2)


def iib_bound(alpha_window: int = 20) -> RegionIIb:
    """Recompute the bounding region from the two fixed planes and the pencil Z1+Z2+αZ3=1."""
    u1 = L.DualForm((-1, 1, 1))
    u2 = L.DualForm((1, -2, 1))
    assert u1(E3) == 1 and u2(E3) == 1
    direction = L.cross(u1.as_ints(), u2.as_ints())
    if direction[2] < 0:
        direction = L.neg(direction)
    assert direction[2] == 1
    # x(t) = e3 + (t - 1) * direction
    base = L.sub(E3, direction)

    alphas, t0s = [], []
    for alpha in range(-alpha_window, alpha_window + 1):
        u = L.DualForm((1, 1, alpha))
        slope = u(direction)
        if slope <= 0:
            continue
        t0 = 1 + (1 - u(E3)) / slope
        if 1 <= t0 <= 6:
            alphas.append(alpha)
            t0s.append(t0)
    order = sorted(range(len(alphas)), key=lambda i: -alphas[i])
    alphas = [alphas[i] for i in order]
    t0s = [t0s[i] for i in order]

    t_max = int(max(t0s))
    z1 = tuple(b + t_max * d for b, d in zip(base, direction))
    swap = (0, 2, 1)
    z2 = permute_vector(z1, swap)
    w1 = L.convex_hull([L.zero(3), E1, E2, E3, z1])
    w2 = L.convex_hull([L.zero(3), E1, E2, E3, z2])
    forms1 = tuple(f.form for f in w1.outer_facets())
    forms2 = tuple(f.form for f in w2.outer_facets())

    mid = tuple(Fraction(a + b, 2) for a, b in zip(z1, z2))
    witness = tuple(int(x) for x in mid) if all(x.denominator == 1 for x in mid) else mid
    bad1 = [u for u in forms1 if u(witness) > 1]
    bad2 = [u for u in forms2 if u(witness) > 1]
    assert bad1 and bad2, "the midpoint of z1 and z2 should leave both wedges"
    detail = (f"{witness} is the midpoint of {z1} and {z2}; "
              f"{bad1[0].equation().replace('=', ' takes ' + str(bad1[0](witness)) + ' > ')} "
              f"and {bad2[0].equation().replace('=', ' takes ' + str(bad2[0](witness)) + ' > ')}")
    return RegionIIb(z1, z2, w1, w2, forms1, forms2, tuple(alphas), tuple(t0s),
                     base, direction, witness, detail)


# --------------------------------------------------------------------------
# enumeration over a region


def _region_hulls(region):
    if isinstance(region, RegionIIb):
        return region.hulls
    if isinstance(region, L.HullComplex):
        return (region,)
    return tuple(region)


def region_lattice_points(region) -> list:
    """Nonzero lattice points of the union of the region's hulls, sorted."""
    pts = set()
    for h in _region_hulls(region):
        pts.update(L.lattice_points(h))
    pts.discard(L.zero(3))
    return sorted(pts)


@dataclass(frozen=True)
class RegionEnumeration:
    fans: tuple  # canonical representatives, sorted by key
    keys: tuple
    nodes: int
    leaves: int

    def __len__(self):
        return len(self.fans)


class _Closure:
    """Lattice points of Conv(0 ∪ T) restricted to a fixed universe."""

    def __init__(self, universe):
        self.universe = universe

    def __call__(self, points):
        hull = L.convex_hull([L.zero(3)] + list(points))
        if not hull.full:
            return hull, set(points), False
        inside, interior = set(), False
        for p in self.universe:
            excess = [f.excess(p) for f in hull.facets]
            if all(e <= 0 for e in excess):
                inside.add(p)
                if all(e < 0 for e in excess):
                    interior = True
        return hull, inside, interior


def _fano_face_fan(hull):
    """Face fan of a hull if its rays are the right shape and it is Gorenstein local Fano."""
    rays = [v for v in hull.vertices if any(v)]
    if not set(L.basis(3)) <= set(rays) or not all(L.is_primitive(r) for r in rays):
        return None
    f = face_fan(hull)
    grade = fano_grade(f)
    return f if grade.fano and grade.gorenstein else None


def _enumerate_closure(points, universe, order):
    cand = [p for p in points if p not in L.basis(3) and L.is_primitive(p)]
    if order == "reverse":
        cand.reverse()
    closure = _Closure(universe)
    found = {}
    stats = {"nodes": 0, "leaves": 0}

    def visit(i, chosen, inside, excluded):
        stats["nodes"] += 1
        while i < len(cand) and cand[i] in inside:
            i += 1
        if i == len(cand):
            stats["leaves"] += 1
            hull, _, _ = closure(chosen)
            f = _fano_face_fan(hull)
            if f is not None:
                found.setdefault(canonical_form(f), f)
            return
        p = cand[i]
        _, grown, interior = closure(chosen + [p])
        if not interior and not (grown & excluded):
            visit(i + 1, chosen + [p], grown, excluded)
        visit(i + 1, chosen, inside, excluded | {p})

    start = list(L.basis(3))
    _, inside, interior = closure(start)
    if not interior:
        visit(0, start, inside, frozenset())
    return found, stats


def _enumerate_naive(points, max_candidates):
    """Every subset whose elements stay vertices, grown point by point."""
    cand = [p for p in points if p not in L.basis(3) and L.is_primitive(p)]
    if len(cand) > max_candidates:
        raise RegionTooLarge(f"{len(cand)} candidates exceed the naive limit {max_candidates}")
    found = {}
    stats = {"nodes": 0, "leaves": 0}

    def visit(i, chosen):
        stats["nodes"] += 1
        hull = L.convex_hull([L.zero(3)] + chosen)
        if set(chosen) - set(hull.vertices):
            return  # some point is no longer a vertex; supersets cannot repair it
        stats["leaves"] += 1
        f = _fano_face_fan(hull)
        if f is not None:
            found.setdefault(canonical_form(f), f)
        for j in range(i, len(cand)):
            visit(j + 1, chosen + [cand[j]])

    visit(0, list(L.basis(3)))
    return found, stats


def enumerate_region(region, max_points: int = 40, strategy: str = "closure",
                     max_candidates: int = 16) -> RegionEnumeration:
    """All Gorenstein local Fano face fans with rays in the region, one per permutation class.

    strategy 'closure' walks include/exclude decisions in point order and
    prunes a branch as soon as the hull of the included points has a lattice
    point in its interior (impossible for a Gorenstein body) or swallows an
    excluded point; 'reverse' is the same walk in reverse order; 'naive'
    grows subsets whose members stay hull vertices and is meant for small
    regions only.
    """
    points = region_lattice_points(region)
    if len(points) + 1 > max_points:
        raise RegionTooLarge(f"region has {len(points) + 1} lattice points, bound is {max_points}")
    if strategy in ("closure", "reverse"):
        hull = L.convex_hull([L.zero(3)] + points)
        universe = sorted(p for p in L.lattice_points(hull) if any(p))
        found, stats = _enumerate_closure(points, universe, "reverse" if strategy == "reverse" else "forward")
    elif strategy == "naive":
        found, stats = _enumerate_naive(points, max_candidates)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    keys = tuple(sorted(found))
    fans = tuple(canonical_fan(found[k]) for k in keys)
    return RegionEnumeration(fans, keys, stats["nodes"], stats["leaves"])


# --------------------------------------------------------------------------
# case IIb reports


@dataclass(frozen=True)
class IIbEntry:
    key: bytes
    fan: Fan
    label: ClassLabel

    def line(self) -> str:
        extra = [r for r in self.fan.rays if r not in L.basis(3)]
        rays = " ".join("(" + ",".join(map(str, r)) + ")" for r in extra) or "-"
        return f"label={self.label} key={key_digest(self.key)} rays={rays}"


@dataclass(frozen=True)
class IIbReport:
    region: RegionIIb
    entries: tuple
    nodes: int
    leaves: int

    @property
    def sporadic(self) -> tuple:
        """Sporadic entries ordered by table index."""
        return tuple(sorted((e for e in self.entries if e.label.kind == "Sporadic"), key=lambda e: e.label.k))

    def count(self, kind: str) -> int:
        return sum(1 for e in self.entries if e.label.kind == kind)

    def lines(self) -> list:
        out = [f"region: Conv(0,e1,e2,e3,{self.region.z1}) U Conv(0,e1,e2,e3,{self.region.z2})",
               f"search: {self.nodes} nodes, {self.leaves} leaves, {len(self.entries)} classes"]
        out += [e.line() for e in self.entries]
        for kind in ("Affine", "FamilyI", "PolytopeType", "UnclassifiedWitness"):
            out.append(f"{kind} classes: {self.count(kind)}")
        out.append(f"sporadic classes: {len(self.sporadic)}")
        return out


def enumerate_iib(strategy: str = "closure") -> IIbReport:
    region = iib_bound()
    result = enumerate_region(region, strategy=strategy)
    entries = []
    for key, f in zip(result.keys, result.fans):
        entries.append(IIbEntry(key, f, classify(f)))
    return IIbReport(region, tuple(entries), result.nodes, result.leaves)


# --------------------------------------------------------------------------
# polygons in the plane of the IIb region


def _plane_coords(p):
    # points of -Z1+Z2+Z3=1 are determined by (Z2, Z3)
    return (p[1], p[2])


def _lift(q):
    return (q[0] + q[1] - 1, q[0], q[1])


def _in_triangle(tri, p) -> bool:
    a, b, c = tri
    s = [L.determinant2(L.sub(b, a), L.sub(p, a)), L.determinant2(L.sub(c, b), L.sub(p, b)),
         L.determinant2(L.sub(a, c), L.sub(p, c))]
    return all(x >= 0 for x in s) or all(x <= 0 for x in s)


def _clip(poly, sign):
    """Part of a planar polygon with sign*(y0 - y1) >= 0, exact."""
    out = []
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        fa, fb = sign * (a[0] - a[1]), sign * (b[0] - b[1])
        if fa >= 0:
            out.append(a)
        if fa * fb < 0:
            t = Fraction(fa, fa - fb)
            out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    return out


@dataclass(frozen=True)
class PolygonCount:
    polygons: tuple  # lifted vertex tuples, one per swap class, sorted
    before_swap: int
    required: tuple

    @property
    def count(self) -> int:
        return len(self.polygons)

    def lines(self) -> list:
        out = []
        for poly in self.polygons:
            out.append("polygon: " + " ".join("(" + ",".join(map(str, v)) + ")" for v in poly))
        out.append(f"polygons before swap identification: {self.before_swap}")
        out.append(f"polygons: {self.count}")
        return out


def enumerate_polygons_iib() -> PolygonCount:
    """Lattice polygons inside the planar region through e2, e3, z1, z2 containing e2, e3 and (3,2,2).

    The plane -Z1+Z2+Z3=1 is charted by (Z2, Z3); the region is the union
    of the triangles (e2, e3, z1) and (e2, e3, z2), which lie on either side
    of the diagonal Z2 = Z3, so a polygon is inside the union exactly when
    each of its two halves is inside the matching triangle.
    """
    region = iib_bound()
    plane = L.DualForm((-1, 1, 1))
    corners = [E2, E3, region.z1, region.z2]
    assert all(plane(p) == 1 for p in corners)
    e2, e3, t1, t2 = (_plane_coords(p) for p in corners)
    tri1, tri2 = (e2, e3, t1), (e2, e3, t2)
    required_3d = (E2, E3, (3, 2, 2))
    required = [_plane_coords(p) for p in required_3d]

    box = [range(0, max(t1[k], t2[k]) + 1) for k in range(2)]
    lattice = [(x, y) for x in box[0] for y in box[1] if _in_triangle(tri1, (x, y)) or _in_triangle(tri2, (x, y))]
    optional = [p for p in lattice if p not in (e2, e3)]

    def inside_union(h):
        return all(_in_triangle(tri1, p) for p in _clip(h, 1)) and all(_in_triangle(tri2, p) for p in _clip(h, -1))

    found = set()

    def visit(i, chosen):
        h = L.convex_hull_2d(chosen)
        if len(h) != len(chosen):
            return  # a chosen point stopped being a vertex
        if len(h) >= 3 and not inside_union(h):
            return  # growing the polygon cannot bring it back inside
        if len(h) >= 3 and all(_point_in_polygon(h, q) for q in required):
            found.add(tuple(h))
        for j in range(i, len(optional)):
            visit(j + 1, chosen + [optional[j]])

    visit(0, [e2, e3])
    canon = set()
    for h in found:
        swapped = tuple(L.convex_hull_2d([(b, a) for a, b in h]))
        canon.add(min(h, swapped))
    polys = tuple(sorted(tuple(_lift(q) for q in h) for h in canon))
    return PolygonCount(polys, len(found), required_3d)


def _point_in_polygon(h, q) -> bool:
    n = len(h)
    return all(L.determinant2(L.sub(h[(i + 1) % n], h[i]), L.sub(q, h[i])) >= 0 for i in range(n))


# --------------------------------------------------------------------------
# smooth surfaces


@dataclass(frozen=True)
class SurfaceEnumeration:
    fans: tuple  # every smooth weak Fano fan found, in search order
    classes: tuple  # one representative per swap class, sorted by ray count
    nodes: int


def enumerate_smooth_surfaces(box: int = 30) -> SurfaceEnumeration:
    """Smooth local weak Fano fans in the plane with rays in [0, box]^2.

    Rays run counterclockwise from e1 to e2 with consecutive determinants 1.
    A ray is kept only while v_prev + v_next = b * v with b <= 2, which is
    convexity of the body at v; every leaf is confirmed with fano_grade.
    """
    found = []
    nodes = 0

    def successors(v):
        for x in range(box + 1):
            for y in range(box + 1):
                w = (x, y)
                if L.determinant2(v, w) == 1:
                    yield w

    def visit(chain):
        nonlocal nodes
        nodes += 1
        last = chain[-1]
        if last == (0, 1):
            f = make_fan([make_cone(pair) for pair in zip(chain, chain[1:])])
            if fano_grade(f).weak_fano:
                found.append(f)
            return
        for w in successors(last):
            if len(chain) >= 2:
                prev = chain[-2]
                s = L.add(prev, w)
                # s = b * last with b <= 2; for det 1 neighbours s is always a multiple of last
                b = s[0] // last[0] if last[0] else s[1] // last[1]
                if L.scale(b, last) != s or b > 2:
                    continue
            visit(chain + [w])

    visit([(1, 0)])
    classes = {}
    for f in found:
        swapped = permute_fan(f, (1, 0))
        key = min(_serialize(f), _serialize(swapped))
        classes.setdefault(key, f)
    reps = tuple(sorted(classes.values(), key=lambda f: (len(f.rays), f.rays)))
    return SurfaceEnumeration(tuple(found), reps, nodes)

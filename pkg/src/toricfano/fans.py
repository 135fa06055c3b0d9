"""Cones, fans and their validation.

A fan is stored by its maximal cones; lower faces are derived on demand.
Cones in this package have at most a dozen generators and live in
dimension 2 or 3, so face and intersection computations are done by direct
exact enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional

from . import lattice as L
from .errors import (
    ApexNotVertex,
    MissingFace,
    NonPrimitive,
    NotAFan,
    NotPointed,
    RedundantGenerator,
    WrongSupport,
    ZeroVector,
)


def _perp2(v):
    return (-v[1], v[0])


def in_cone(x, gens) -> bool:
    """Exact membership of x in Cone(gens), via simplicial sub-cones."""
    x = tuple(x)
    if not any(x):
        return True
    gens = [tuple(g) for g in gens]
    r = L.rank(gens) if gens else 0
    for size in range(1, r + 1):
        for sub_gens in combinations(gens, size):
            if _in_simplicial(x, sub_gens):
                return True
    return False


def _same_sign(num, den) -> bool:
    # num/den >= 0 with den != 0
    return num == 0 or (num > 0) == (den > 0)


def _in_simplicial(x, gens) -> bool:
    """x in the cone over linearly independent gens (False if they are dependent).

    Cramer's rule on integer determinants; only signs matter.
    """
    d, k = len(x), len(gens)
    if k == 1:
        (g,) = gens
        parallel = L.determinant2(g, x) == 0 if d == 2 else not any(L.cross(g, x))
        return parallel and L.dot(g, x) > 0
    if k == d:
        D = L.determinant(gens)
        if D == 0:
            return False
        for i in range(k):
            cols = list(gens)
            cols[i] = x
            if not _same_sign(L.determinant(cols), D):
                return False
        return True
    # two generators in space: x must lie in their plane
    a, b = gens
    n = L.cross(a, b)
    if not any(n) or L.dot(n, x) != 0:
        return False
    D = L.dot(n, n)
    return _same_sign(L.dot(L.cross(x, b), n), D) and _same_sign(L.dot(L.cross(a, x), n), D)


@dataclass(frozen=True)
class Cone:
    """A strongly convex cone given by its primitive extremal generators.

    Build cones with :func:`make_cone`, which validates; the constructor
    itself only sorts the generators.
    """

    gens: tuple
    ambient: int

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(sorted(set(tuple(g) for g in self.gens))))

    def __repr__(self):
        return "Cone(" + ", ".join(str(g) for g in self.gens) + ")"

    @cached_property
    def dimension(self) -> int:
        return L.rank(self.gens) if self.gens else 0

    @property
    def full(self) -> bool:
        return self.dimension == self.ambient

    @property
    def simplicial(self) -> bool:
        return len(self.gens) == self.dimension

    def contains(self, x) -> bool:
        return all(L.dot(n, x) >= 0 for n in self.inequalities) and all(
            L.dot(m, x) == 0 for m in self.equations
        )

    def contains_relint(self, x) -> bool:
        return all(L.dot(n, x) > 0 for n in self.inequalities) and all(
            L.dot(m, x) == 0 for m in self.equations
        )

    @cached_property
    def facet_pairs(self) -> tuple:
        """Generator pairs spanning the 2-dimensional faces of a 3-dimensional cone."""
        if self.ambient != 3 or self.dimension != 3:
            return ()
        out = []
        for a, b in combinations(self.gens, 2):
            n = L.cross(a, b)
            vals = [L.dot(n, g) for g in self.gens if g != a and g != b]
            if all(v > 0 for v in vals) or all(v < 0 for v in vals):
                out.append((a, b))
        return tuple(out)

    @cached_property
    def faces(self) -> frozenset:
        """Generator sets (sorted tuples) of every face, including () and the cone."""
        out = {(), self.gens}
        for g in self.gens:
            out.add((g,))
        out.update(self.facet_pairs)
        return frozenset(out)

    @cached_property
    def inequalities(self) -> tuple:
        """Integer normals n with n.x >= 0 on the cone (within its span)."""
        d, k = self.ambient, self.dimension
        gens = self.gens
        if k == 0:
            return ()
        if d == 2:
            if k == 1:
                return (gens[0],)
            a, b = gens
            na, nb = _perp2(a), _perp2(b)
            if L.dot(na, b) < 0:
                na = L.neg(na)
            if L.dot(nb, a) < 0:
                nb = L.neg(nb)
            return (na, nb)
        if k == 1:
            return (gens[0],)
        if k == 2:
            a, b = gens
            plane = L.cross(a, b)
            na, nb = L.cross(plane, a), L.cross(plane, b)
            if L.dot(na, b) < 0:
                na = L.neg(na)
            if L.dot(nb, a) < 0:
                nb = L.neg(nb)
            return (na, nb)
        out = []
        for a, b in self.facet_pairs:
            n = L.cross(a, b)
            if any(L.dot(n, g) < 0 for g in gens):
                n = L.neg(n)
            out.append(n)
        return tuple(out)

    @cached_property
    def equations(self) -> tuple:
        """Integer normals m with m.x == 0 on the linear span."""
        d, k = self.ambient, self.dimension
        if k == d:
            return ()
        if k == 0:
            return L.basis(d)
        if d == 2:
            return (_perp2(self.gens[0]),)
        if k == 2:
            return (L.cross(*self.gens[:2]),)
        g = self.gens[0]
        return tuple(n for n in (L.cross(g, e) for e in L.basis(3)) if any(n))


def make_cone(gens: Iterable) -> Cone:
    """Validated cone; rejects bad input instead of repairing it."""
    gens = [L.as_vector(g) for g in gens]
    if not gens:
        raise ValueError("a cone needs at least one generator")
    d = len(gens[0])
    if d not in (2, 3) or any(len(g) != d for g in gens):
        raise ValueError("generators must share dimension 2 or 3")
    for g in gens:
        if not any(g):
            raise ZeroVector("zero generator")
        if not L.is_primitive(g):
            raise NonPrimitive(f"generator {g} is not primitive")
    gens = sorted(set(gens))
    for g in gens:
        if in_cone(L.neg(g), gens):
            raise NotPointed(f"the cone contains the line through {g}")
    for g in gens:
        others = [h for h in gens if h != g]
        if others and in_cone(g, others):
            raise RedundantGenerator(f"generator {g} lies in the cone of the others")
    return Cone(tuple(gens), d)


def is_smooth_cone(c: Cone) -> bool:
    """True iff the generators extend to a basis of the lattice."""
    if not c.simplicial:
        return False
    k, d = len(c.gens), c.ambient
    if k == 0:
        return True
    minors = [L.determinant([[g[j] for j in cols] for g in c.gens]) if k > 1 else c.gens[0][cols[0]]
              for cols in combinations(range(d), k)]
    return L.content(minors) == 1


def gorenstein_form(c: Cone) -> L.DualForm:
    """The form equal to 1 on every generator; check ``.integral`` for Gorenstein.

    Raises NotUnique (or NoSolution for non-coplanar generators) when no
    single form exists.
    """
    if not c.full:
        raise L.NotUnique(f"{c} is not full-dimensional")
    return L.support_form(c.gens)


@dataclass(frozen=True)
class Fan:
    cones: tuple
    ambient: int

    def __repr__(self):
        return f"Fan({list(self.cones)})"

    @cached_property
    def rays(self) -> tuple:
        return tuple(sorted({g for c in self.cones for g in c.gens}))

    @cached_property
    def all_faces(self) -> frozenset:
        out = set()
        for c in self.cones:
            out |= c.faces
        return frozenset(out)

    def has_cone(self, gens) -> bool:
        return tuple(sorted(tuple(g) for g in gens)) in self.all_faces


def make_fan(cones: Iterable) -> Fan:
    """Fan from a collection of cones (or generator lists); keeps the maximal ones."""
    built = []
    for c in cones:
        built.append(c if isinstance(c, Cone) else make_cone(c))
    if not built:
        raise ValueError("a fan needs at least one cone")
    d = built[0].ambient
    uniq = sorted(set(built), key=lambda c: c.gens)
    maximal = [c for c in uniq if not any(c.gens != o.gens and c.gens in o.faces for o in uniq)]
    return Fan(tuple(maximal), d)


def affine_fan(d: int = 3) -> Fan:
    """The fan of all faces of the positive orthant."""
    return Fan((Cone(L.basis(d), d),), d)


# --------------------------------------------------------------------------
# validation


def _extreme_rays(normals_ge, normals_eq, d):
    """Extreme rays of {x : n.x >= 0, m.x == 0}, assumed pointed."""
    cons = list(normals_ge) + list(normals_eq)
    cands = set()
    if d == 2:
        for n in cons:
            p = _perp2(n)
            if any(p):
                cands.add(L.primitive_vector(p))
                cands.add(L.primitive_vector(L.neg(p)))
    else:
        for a, b in combinations(cons, 2):
            p = L.cross(a, b)
            if any(p):
                cands.add(L.primitive_vector(p))
                cands.add(L.primitive_vector(L.neg(p)))
    return sorted(
        x for x in cands
        if all(L.dot(n, x) >= 0 for n in normals_ge) and all(L.dot(m, x) == 0 for m in normals_eq)
    )


def cone_intersection_rays(c1: Cone, c2: Cone) -> list:
    return _extreme_rays(
        c1.inequalities + c2.inequalities, c1.equations + c2.equations, c1.ambient
    )


def _check_pairwise(f: Fan):
    for c1, c2 in combinations(f.cones, 2):
        rays = tuple(cone_intersection_rays(c1, c2))
        if rays not in c1.faces or rays not in c2.faces:
            raise NotAFan(f"{c1} and {c2} meet in Cone{rays}, not a common face", cones=(c1, c2))


def _positive_orthant_faces(d):
    e = L.basis(d)
    for k in range(1, d):
        for sub_e in combinations(e, k):
            yield tuple(sorted(sub_e))


def _uncovered_witness(f: Fan, cone: Cone, face) -> tuple:
    """A lattice point of the orthant just beyond ``face`` and in no cone."""
    others = [g for g in cone.gens if g not in face]
    if f.ambient == 2:
        (g,) = face
        n = _perp2(g)
    else:
        n = L.cross(*face)
    if L.dot(n, others[0]) > 0:
        n = L.neg(n)
    mid = [sum(col) for col in zip(*face)]
    m = 1
    while True:
        p = tuple(m * x + y for x, y in zip(mid, n))
        if all(x >= 0 for x in p) and not any(c.contains(p) for c in f.cones):
            return p
        m *= 2
        if m > 1 << 20:
            return tuple(mid)


def _check_support(f: Fan):
    d = f.ambient
    for g in f.rays:
        if any(x < 0 for x in g):
            raise WrongSupport(f"ray {g} lies outside the positive orthant", point=g)
    full = [c for c in f.cones if c.full]
    if not full:
        raise WrongSupport("no full-dimensional cone", point=tuple([1] * d))
    count = {}
    owner = {}
    for c in full:
        walls = [(g,) for g in c.gens] if d == 2 else list(c.facet_pairs)
        for w in walls:
            count[w] = count.get(w, 0) + 1
            owner[w] = c
    for w, k in sorted(count.items()):
        on_boundary = any(all(g[i] == 0 for g in w) for i in range(d))
        if k == 1 and not on_boundary:
            p = _uncovered_witness(f, owner[w], w)
            raise WrongSupport(f"the wall Cone{w} of {owner[w]} has nothing on its far side", point=p)


def check_orthant_faces(f: Fan):
    for face in _positive_orthant_faces(f.ambient):
        if face not in f.all_faces:
            raise MissingFace(f"Cone{face} is not a cone of the fan", face=face)


def validate_fan(f: Fan, support: bool = False, orthant_faces: Optional[bool] = None) -> None:
    """Raise NotAFan / WrongSupport / MissingFace; return None when fine.

    Face closure holds by construction (faces are derived from the stored
    maximal cones).  With ``support`` set the fan must also cover exactly the
    positive orthant and, unless ``orthant_faces`` is False, contain every
    proper face of it.
    """
    if orthant_faces is None:
        orthant_faces = support
    _check_pairwise(f)
    if support:
        _check_support(f)
    if orthant_faces:
        check_orthant_faces(f)


def face_fan(body) -> Fan:
    """Fan over the facets not containing the origin of a body with apex 0.

    Accepts a HullComplex or anything with a ``hull`` attribute.
    """
    hull = getattr(body, "hull", body)
    hull.require_full()
    origin = L.zero(hull.ambient)
    if origin not in hull.vertices:
        raise ApexNotVertex("the origin is not a vertex of the body")
    cones = [make_cone(f.vertices) for f in hull.outer_facets()]
    return make_fan(cones)


def fan_from_rays(rays: Iterable) -> Fan:
    """Face fan of Conv({0} ∪ rays)."""
    rays = [L.as_vector(r) for r in rays]
    return face_fan(L.convex_hull([L.zero(len(rays[0]))] + rays))


def permute_vector(v, perm):
    return tuple(v[i] for i in perm)


def permute_fan(f: Fan, perm) -> Fan:
    """Image of the fan under the coordinate permutation v -> (v[perm[0]], ...)."""
    return Fan(
        tuple(sorted((Cone(tuple(permute_vector(g, perm) for g in c.gens), c.ambient) for c in f.cones),
                     key=lambda c: c.gens)),
        f.ambient,
    )

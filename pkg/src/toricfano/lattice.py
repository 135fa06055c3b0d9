"""Exact integer geometry in Z^2 and Z^3.

Lattice vectors are plain tuples of ints.  Linear forms on the lattice carry
``Fraction`` coefficients so that non-integral support forms can be reported
exactly.  Everything here is pure and immutable.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import DegenerateDimension, LatticeOverflow, NoSolution, NotUnique, ZeroVector

Vec = tuple

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


def _checked(x: int) -> int:
    if not INT64_MIN <= x <= INT64_MAX:
        raise LatticeOverflow(f"integer {x} leaves the signed 64-bit range")
    return x


def as_vector(coords: Iterable) -> Vec:
    """Convert a coordinate sequence to a lattice vector, rejecting non-integers."""
    out = []
    for c in coords:
        if isinstance(c, bool) or not isinstance(c, numbers.Integral):
            raise TypeError(f"lattice coordinates must be integers, got {c!r}")
        out.append(_checked(int(c)))
    return tuple(out)


def zero(d: int) -> Vec:
    return (0,) * d


def unit(i: int, d: int) -> Vec:
    """The standard basis vector e_i, 1-based."""
    return tuple(1 if j == i - 1 else 0 for j in range(d))


def basis(d: int) -> tuple:
    return tuple(unit(i, d) for i in range(1, d + 1))


def _checked_vec(v: Vec) -> Vec:
    if max(v) > INT64_MAX or min(v) < INT64_MIN:
        raise LatticeOverflow(f"vector {v} leaves the signed 64-bit range")
    return v


def add(u: Vec, v: Vec) -> Vec:
    return _checked_vec(tuple(a + b for a, b in zip(u, v)))


def sub(u: Vec, v: Vec) -> Vec:
    return _checked_vec(tuple(a - b for a, b in zip(u, v)))


def neg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def scale(k, u: Vec) -> Vec:
    return _checked_vec(tuple(k * a for a in u))


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def cross(a: Vec, b: Vec) -> Vec:
    return _checked_vec((
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ))


def determinant2(a: Vec, b: Vec) -> int:
    return _checked(a[0] * b[1] - a[1] * b[0])


def determinant3(a: Vec, b: Vec, c: Vec) -> int:
    """Exact determinant of the 3x3 matrix with rows a, b, c."""
    if not len(a) == len(b) == len(c) == 3:
        raise ValueError("determinant3 needs three vectors of length 3")
    terms = (
        a[0] * (b[1] * c[2] - b[2] * c[1]),
        -a[1] * (b[0] * c[2] - b[2] * c[0]),
        a[2] * (b[0] * c[1] - b[1] * c[0]),
    )
    for t in terms:
        _checked(t)
    return _checked(sum(terms))


def determinant(vectors: Sequence[Vec]) -> int:
    if len(vectors) == 2:
        return determinant2(*vectors)
    if len(vectors) == 3:
        return determinant3(*vectors)
    raise ValueError("only 2x2 and 3x3 determinants are supported")


def content(v: Vec) -> int:
    return reduce(gcd, v, 0)


def is_primitive(v: Vec) -> bool:
    return content(v) == 1


def primitive_vector(v: Vec) -> Vec:
    """Shortest lattice vector on the ray through ``v``."""
    g = content(v)
    if g == 0:
        raise ZeroVector("the zero vector spans no ray")
    return tuple(a // g for a in v)


def rank(vectors: Sequence[Sequence]) -> int:
    vectors = [tuple(v) for v in vectors if any(v)]
    if not vectors:
        return 0
    d = len(vectors[0])
    if d in (2, 3) and all(isinstance(x, int) for v in vectors for x in v):
        return _small_rank(vectors, d)
    rows = [[Fraction(x) for x in v] for v in vectors]
    return len(_row_reduce(rows))


def _small_rank(vectors, d) -> int:
    a = vectors[0]
    if d == 2:
        return 2 if any(determinant2(a, b) for b in vectors[1:]) else 1
    planes = [n for n in (cross(a, b) for b in vectors[1:]) if any(n)]
    if not planes:
        return 1
    n = planes[0]
    return 3 if any(dot(n, c) for c in vectors) else 2


def _row_reduce(rows, ncols=None):
    """Gauss-Jordan elimination in place over the first ``ncols`` columns.

    Returns the pivots as (column, row) pairs; rows past the last pivot are
    zero in those columns.
    """
    pivots = []
    if not rows:
        return pivots
    if ncols is None:
        ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][col]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append((col, r))
        r += 1
        if r == len(rows):
            break
    return pivots


def affine_dimension(points: Sequence[Vec]) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]]) if len(points) > 1 else 0


def coordinate_name(i: int) -> str:
    return f"Z{i + 1}"


@dataclass(frozen=True)
class DualForm:
    """A linear functional on N with rational coefficients."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_normal(cls, normal: Vec, offset: int) -> "DualForm":
        """The form normal/offset, i.e. value 1 on the plane normal.x = offset."""
        if offset == 0:
            raise ZeroDivisionError("a plane through the origin has no +1 normalization")
        return cls(tuple(Fraction(n, offset) for n in normal))

    @property
    def dimension(self) -> int:
        return len(self.coeffs)

    @property
    def integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __call__(self, v) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, v)), Fraction(0))

    def as_ints(self) -> Vec:
        if not self.integral:
            raise ValueError(f"{self} is not integral")
        return tuple(int(c) for c in self.coeffs)

    def permuted(self, perm: Sequence[int]) -> "DualForm":
        """Form transported along the coordinate permutation v -> (v[perm[0]], ...)."""
        out = [Fraction(0)] * len(self.coeffs)
        for j, i in enumerate(perm):
            out[j] = self.coeffs[i]
        return DualForm(tuple(out))

    def is_coordinate(self) -> Optional[int]:
        """Index i if this form is the coordinate functional Z_{i+1}, else None."""
        hits = [i for i, c in enumerate(self.coeffs) if c != 0]
        if len(hits) == 1 and self.coeffs[hits[0]] == 1:
            return hits[0]
        return None

    def equation(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else (str(mag) if mag.denominator == 1 else f"({mag})")
            terms.append((sign, f"{coef}{coordinate_name(i)}"))
        if not terms:
            return "0=1"
        head_sign, head = terms[0]
        text = ("-" if head_sign == "-" else "") + head
        text += "".join(f"{s}{t}" for s, t in terms[1:])
        return text + "=1"

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"


def support_form(points: Iterable[Vec]) -> DualForm:
    """The unique form taking the value 1 on every point.

    Raises NoSolution when the points admit no such form and NotUnique when
    they do not affinely span a hyperplane avoiding the origin.
    """
    pts = [tuple(p) for p in points]
    if not pts:
        raise NotUnique("no points given")
    d = len(pts[0])
    rows = [[Fraction(x) for x in p] + [Fraction(1)] for p in pts]
    pivots = _row_reduce(rows, d)
    for row in rows[len(pivots):]:
        if row[d] != 0:
            raise NoSolution("the points do not lie on a hyperplane avoiding the origin")
    if len(pivots) < d:
        raise NotUnique(f"the points span only rank {len(pivots)} < {d}")
    sol = [Fraction(0)] * d
    for col, r in pivots:
        sol[col] = rows[r][d]
    return DualForm(tuple(sol))


# --------------------------------------------------------------------------
# convex hulls


@dataclass(frozen=True)
class Facet:
    """A facet: normal.x <= offset on the hull with equality exactly on the facet.

    ``normal`` is primitive and points outward.  ``vertices`` are in cyclic
    order, counterclockwise when seen from outside (for 2D hulls: the two
    endpoints in counterclockwise order).
    """

    normal: Vec
    offset: int
    vertices: tuple

    @property
    def form(self) -> Optional[DualForm]:
        """Outward form normalized to 1 on the facet; None if 0 is not strictly inside."""
        if self.offset <= 0:
            return None
        return DualForm.from_normal(self.normal, self.offset)

    @property
    def contains_origin(self) -> bool:
        return self.offset == 0

    def excess(self, p) -> int:
        """normal.p - offset; positive means beyond the facet."""
        return dot(self.normal, p) - self.offset

    def sort_key(self):
        if self.offset > 0:
            return (0, tuple(Fraction(n, self.offset) for n in self.normal))
        return (1 if self.offset == 0 else 2, self.normal, self.offset)


@dataclass(frozen=True)
class HullComplex:
    points: tuple
    vertices: tuple
    facets: tuple
    dimension: int
    ambient: int

    @property
    def full(self) -> bool:
        return self.dimension == self.ambient

    def require_full(self) -> "HullComplex":
        if not self.full:
            raise DegenerateDimension(
                f"points span dimension {self.dimension} < {self.ambient}", hull=self
            )
        return self

    def vertex_indices(self, facet: Facet) -> tuple:
        index = {v: i for i, v in enumerate(self.vertices)}
        return tuple(index[v] for v in facet.vertices)

    def location(self, p) -> Optional[str]:
        """'vertex', 'boundary', 'interior', or None when p is outside."""
        self.require_full()
        p = tuple(p)
        excess = [f.excess(p) for f in self.facets]
        if any(e > 0 for e in excess):
            return None
        if p in self._vertex_set:
            return "vertex"
        if any(e == 0 for e in excess):
            return "boundary"
        return "interior"

    def contains(self, p) -> bool:
        return self.location(p) is not None

    @property
    def _vertex_set(self):
        return frozenset(self.vertices)

    def outer_facets(self) -> tuple:
        return tuple(f for f in self.facets if f.offset > 0)

    def origin_facets(self) -> tuple:
        return tuple(f for f in self.facets if f.offset == 0)

    def normalized_volume(self) -> int:
        """d! times the Euclidean volume."""
        if not self.full:
            return 0
        ref = self.vertices[0]
        total = 0
        for f in self.facets:
            if ref in f.vertices:
                continue
            vs = [sub(v, ref) for v in f.vertices]
            if self.ambient == 2:
                total += abs(determinant2(vs[0], vs[1]))
            else:
                for i in range(1, len(vs) - 1):
                    total += abs(determinant3(vs[0], vs[i], vs[i + 1]))
        return total


def _turn(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points: Iterable) -> list:
    """Strictly convex counterclockwise vertex cycle (monotone chain)."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    cycle = lower[:-1] + upper[:-1]
    if len(cycle) == 2 and cycle[0] == cycle[1]:
        cycle = cycle[:1]
    return cycle


def _primitive_plane(normal: Vec, offset: int):
    g = reduce(gcd, normal, abs(offset))
    return tuple(n // g for n in normal), offset // g


def _planar_cycle(points, normal: Vec) -> tuple:
    """Vertex cycle of coplanar 3D points, counterclockwise seen along +normal."""
    axis = max(range(3), key=lambda k: abs(normal[k]))
    keep = [k for k in range(3) if k != axis]
    lift = {}
    for p in points:
        lift[(p[keep[0]], p[keep[1]])] = p
    cyc = [lift[q] for q in convex_hull_2d(lift)]
    if len(cyc) >= 3 and dot(cross(sub(cyc[1], cyc[0]), sub(cyc[2], cyc[0])), normal) < 0:
        cyc.reverse()
    start = cyc.index(min(cyc))
    return tuple(cyc[start:] + cyc[:start])


def _initial_simplex(pts):
    p0 = pts[0]
    p1 = next(p for p in pts if p != p0)
    u = sub(p1, p0)
    p2 = next(p for p in pts if cross(u, sub(p, p0)) != (0, 0, 0))
    n = cross(u, sub(p2, p0))
    p3 = next(p for p in pts if dot(n, sub(p, p0)) != 0)
    return [p0, p1, p2, p3]


def _hull3(pts) -> tuple:
    """Incremental (beneath-beyond) hull; returns {plane: support points}."""
    simplex = _initial_simplex(pts)
    inserted = list(simplex)
    planes = {}

    def add_plane(a, b, c):
        n = cross(sub(b, a), sub(c, a))
        if n == (0, 0, 0):
            return
        off = dot(n, a)
        vals = [dot(n, q) - off for q in inserted]
        if all(v <= 0 for v in vals):
            pass
        elif all(v >= 0 for v in vals):
            n, off = neg(n), -off
        else:
            return
        key = _primitive_plane(n, off)
        if key not in planes:
            planes[key] = {q for q in inserted if dot(key[0], q) == key[1]}

    for a, b, c in combinations(simplex, 3):
        add_plane(a, b, c)

    in_simplex = set(simplex)
    for p in pts:
        if p in in_simplex:
            continue
        visible = [k for k in planes if dot(k[0], p) > k[1]]
        for k, support in planes.items():
            if dot(k[0], p) == k[1]:
                support.add(p)
        inserted.append(p)
        if not visible:
            continue
        horizon = set()
        for k in visible:
            horizon |= planes.pop(k)
        for a, b in combinations(sorted(horizon), 2):
            add_plane(p, a, b)
    return planes


def convex_hull(points: Iterable) -> HullComplex:
    """Exact convex hull of lattice points in dimension 2 or 3.

    Lower-dimensional input is not an error here: the complex comes back with
    its true ``dimension`` and no facets (``require_full`` raises).
    """
    pts = sorted(set(as_vector(p) for p in points))
    if not pts:
        raise ValueError("convex hull of an empty set")
    d = len(pts[0])
    if d not in (2, 3) or any(len(p) != d for p in pts):
        raise ValueError("convex_hull supports points of a single dimension 2 or 3")
    dim = affine_dimension(pts)

    if dim < d:
        if dim <= 0:
            verts = tuple(pts[:1])
        elif dim == 1:
            verts = (pts[0], pts[-1])
        else:
            p0 = pts[0]
            normal = cross(sub(pts[1], p0), next(sub(p, p0) for p in pts if cross(sub(pts[1], p0), sub(p, p0)) != (0, 0, 0)))
            verts = tuple(sorted(_planar_cycle(pts, normal)))
        return HullComplex(tuple(pts), verts, (), dim, d)

    facets = []
    if d == 2:
        cyc = convex_hull_2d(pts)
        for i, a in enumerate(cyc):
            b = cyc[(i + 1) % len(cyc)]
            n, off = _primitive_plane((b[1] - a[1], a[0] - b[0]), dot((b[1] - a[1], a[0] - b[0]), a))
            facets.append(Facet(n, off, (a, b)))
    else:
        for (n, off), support in _hull3(pts).items():
            facets.append(Facet(n, off, _planar_cycle(support, n)))
    facets.sort(key=Facet.sort_key)
    verts = tuple(sorted({v for f in facets for v in f.vertices}))
    return HullComplex(tuple(pts), verts, tuple(facets), dim, d)


def lattice_points(hull: HullComplex) -> dict:
    """All lattice points of a full-dimensional hull, tagged by location."""
    hull.require_full()
    lo = [min(v[k] for v in hull.vertices) for k in range(hull.ambient)]
    hi = [max(v[k] for v in hull.vertices) for k in range(hull.ambient)]
    verts = set(hull.vertices)
    out = {}
    for p in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        excess = [f.excess(p) for f in hull.facets]
        if any(e > 0 for e in excess):
            continue
        if p in verts:
            out[p] = "vertex"
        elif any(e == 0 for e in excess):
            out[p] = "boundary"
        else:
            out[p] = "interior"
    return out


def in_convex_hull(x, points: Sequence[Vec]) -> bool:
    """Carathéodory membership test: x is a convex combination of <= d+1 points.

    Independent of the hull machinery; intended for oracles and small inputs.
    """
    x = tuple(Fraction(c) for c in x)
    pts = [tuple(p) for p in points]
    if not pts:
        return False
    d = len(x)
    for size in range(1, d + 2):
        for sub_pts in combinations(pts, size):
            lam = _barycentric(x, sub_pts)
            if lam is not None and all(l >= 0 for l in lam):
                return True
    return False


def _barycentric(x, pts):
    """Coefficients lam with sum lam_i p_i = x, sum lam_i = 1, if unique."""
    k = len(pts)
    d = len(x)
    rows = [[Fraction(p[r]) for p in pts] + [x[r]] for r in range(d)]
    rows.append([Fraction(1)] * k + [Fraction(1)])
    pivots = _row_reduce(rows, k)
    if len(pivots) < k:
        return None
    for row in rows[len(pivots):]:
        if row[k] != 0:
            return None
    lam = [Fraction(0)] * k
    for col, r in pivots:
        lam[col] = rows[r][k]
    return lam

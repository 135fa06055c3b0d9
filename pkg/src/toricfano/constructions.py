"""Explicit fans: the surface family, family (i), polygon fans and the sporadic table.

Every constructor returns a Fan supported on the positive orthant.  Forms
follow the package-wide convention of value +1 on primitive generators.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

from . import lattice as L
from .errors import IndexOutOfRange, InvalidPolygon, NotGorenstein
from .fans import Cone, Fan, affine_fan, fan_from_rays, make_cone, make_fan, validate_fan
from .local_fano import is_gorenstein_fan

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


# --------------------------------------------------------------------------
# surfaces


def surface_family(n: int, gorenstein: bool = False) -> Fan:
    """The n-th smooth local weak Fano surface, or its Gorenstein model.

    Smooth: rays e1, (n,1), (n-1,1), ..., (1,1), e2 with consecutive cones.
    Gorenstein: the two cones Cone(e1,(n,1)) and Cone((n,1),e2).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return affine_fan(2)
    if gorenstein:
        chain = [(1, 0), (n, 1), (0, 1)]
    else:
        chain = [(1, 0)] + [(k, 1) for k in range(n, 0, -1)] + [(0, 1)]
    return make_fan([make_cone(pair) for pair in zip(chain, chain[1:])])


def _boundary_points(a, b):
    """Lattice points on the segment a-b, in order from a."""
    step = L.sub(b, a)
    g = L.content(step)
    step = tuple(x // g for x in step)
    return [L.add(a, L.scale(t, step)) for t in range(g + 1)]


def crepant_resolve_2d(f: Fan) -> Fan:
    """Insert a ray at every lattice point of the outer boundary of Γ."""
    if f.ambient != 2:
        raise ValueError("crepant_resolve_2d expects a fan in the plane")
    validate_fan(f, support=True)
    ok, forms = is_gorenstein_fan(f)
    if not ok:
        bad = next(c for c, u in forms.items() if u is None or not u.integral)
        raise NotGorenstein(f"{bad} has form {forms[bad]}, not integral")
    cones = []
    for c in f.cones:
        pts = _boundary_points(*c.gens)
        cones.extend(make_cone(pair) for pair in zip(pts, pts[1:]))
    return make_fan(cones)


# --------------------------------------------------------------------------
# family (i)


def family_i(m: int) -> Fan:
    """Face fan of Conv(0, e1, e2, e3, (m,m,1))."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    return fan_from_rays([E1, E2, E3, (m, m, 1)])


# --------------------------------------------------------------------------
# admissible polygons


@dataclass(frozen=True)
class PolygonEdge:
    """Edge x_{i-1} -> x_i together with the cone it contributes.

    cone_type 2 pairs the edge with e2 and carries the slope s = Δb/Δa,
    type 4 pairs it with e1 and carries r = Δa/Δb, type 3 uses both e1 and
    e2 and has no ratio.
    """

    start: tuple
    end: tuple
    cone_type: int
    ratio: Optional[int]

    @property
    def delta(self):
        return (self.end[0] - self.start[0], self.end[1] - self.start[1])


@dataclass(frozen=True)
class AdmissiblePolygon:
    vertices: tuple  # height-1 lattice points, e3 first, clockwise
    edges: tuple

    @property
    def planar(self) -> tuple:
        return tuple((v[0], v[1]) for v in self.vertices)

    def __str__(self):
        return "P[" + ", ".join(f"({a},{b})" for a, b in self.planar) + "]"


def _classify_edge(start, end):
    """(cone_type, ratio) for an edge, ratio None when not integral."""
    da, db = end[0] - start[0], end[1] - start[1]
    if da + db > 0:
        return 2, (db // da if da and db % da == 0 else None)
    if da + db < 0:
        return 4, (da // db if db and da % db == 0 else None)
    return 3, None


def _signed_area2(planar) -> int:
    n = len(planar)
    return sum(planar[i][0] * planar[(i + 1) % n][1] - planar[(i + 1) % n][0] * planar[i][1]
               for i in range(n))


def _is_rotation(seq, ref) -> bool:
    if len(seq) != len(ref) or seq[0] not in ref:
        return False
    k = ref.index(seq[0])
    return list(seq) == list(ref[k:]) + list(ref[:k])


def validate_polygon(vertices: Sequence) -> AdmissiblePolygon:
    """Check the admissibility conditions and return the certified polygon.

    All violations found are reported together in one InvalidPolygon.
    """
    if isinstance(vertices, AdmissiblePolygon):
        vertices = vertices.vertices
    pts = [L.as_vector(v) for v in vertices]
    off = [p for p in pts if len(p) != 3 or p[2] != 1]
    if off:
        raise InvalidPolygon([("NotHeightOne", f"{q} is not at height 1") for q in off])
    violations = []
    if not pts or pts[0] != E3:
        where = "absent" if E3 not in pts else f"at position {pts.index(E3)}"
        violations.append(("MissingE3", f"the first vertex must be e3 (e3 is {where})"))
    for p in pts:
        if p != E3 and (p[0] <= 0 or p[1] <= 0):
            violations.append(("NonPositiveCoordinate", f"{p} needs a > 0 and b > 0"))
    planar = [(p[0], p[1]) for p in pts]
    if len(set(planar)) != len(planar):
        violations.append(("NotConvex", "a vertex is repeated"))
    if len(set(planar)) < 3 or L.affine_dimension(list(set(planar))) < 2:
        violations.append(("DegenerateDimension", f"{len(set(planar))} distinct points span no polygon"))
        raise InvalidPolygon(violations)

    hull = L.convex_hull_2d(planar)  # counterclockwise, extremal points only
    inner = [p for p in planar if p not in hull]
    if inner:
        violations.append(("NotConvex", f"{inner[0]} is not an extremal vertex"))
    elif len(set(planar)) == len(planar):
        if _is_rotation(planar, hull):
            violations.append(("NotClockwise", f"signed area {Fraction(_signed_area2(planar), 2)} is positive"))
        elif not _is_rotation(planar, hull[::-1]):
            violations.append(("NotConvex", "the vertices are not in cyclic boundary order"))

    edges = []
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        kind, ratio = _classify_edge(a, b)
        da, db = b[0] - a[0], b[1] - a[1]
        if kind == 2 and ratio is None:
            violations.append(("SlopeNotIntegral", f"edge {a}->{b}: slope {Fraction(db, da) if da else 'undefined'} is not an integer"))
        elif kind == 4 and ratio is None:
            violations.append(("SlopeNotIntegral",
                               f"edge {a}->{b}: inverse slope {Fraction(da, db) if db else 'undefined'} is not an integer"))
        edges.append(PolygonEdge(a, b, kind, ratio))
    if violations:
        raise InvalidPolygon(violations)
    return AdmissiblePolygon(tuple(pts), tuple(edges))


def _edge_cone_gens(e: PolygonEdge):
    if e.cone_type == 2:
        return [E2, e.start, e.end]
    if e.cone_type == 4:
        return [E1, e.start, e.end]
    return [E1, E2, e.start, e.end]


def turning_vertex(p: AdmissiblePolygon):
    """The vertex where edges switch from e2-cones to e1-cones, if no type-3 edge does it.

    The wedge Cone(e1, e2, x) at that vertex must be added for the cones to
    cover the orthant.
    """
    for e, nxt in zip(p.edges, p.edges[1:]):
        if e.cone_type == 2 and nxt.cone_type == 4:
            return e.end
    return None


def fan_from_polygon(p) -> Fan:
    """Cone over P, one cone per edge chosen by its type, and the turning wedge."""
    p = validate_polygon(p)
    cones = [make_cone(p.vertices)]
    cones += [make_cone(_edge_cone_gens(e)) for e in p.edges]
    x = turning_vertex(p)
    if x is not None:
        cones.append(make_cone([E1, E2, x]))
    return make_fan(cones)


@dataclass(frozen=True)
class EdgeForm:
    cone_type: int  # 1 for Cone(P); 3 also covers the turning wedge
    cone: Cone
    form: L.DualForm
    edge: Optional[PolygonEdge] = None
    vertex: Optional[tuple] = None  # set for the turning wedge only


def polygon_hyperplanes(p) -> list:
    """Support forms from the closed formulas, one per maximal cone."""
    p = validate_polygon(p)
    out = [EdgeForm(1, make_cone(p.vertices), L.DualForm((0, 0, 1)))]
    for e in p.edges:
        a, b = e.end[0], e.end[1]
        if e.cone_type == 2:
            s = e.ratio
            coeffs = (-s, 1, 1 - b + s * a)
        elif e.cone_type == 3:
            coeffs = (1, 1, 1 - a - b)
        else:
            r = e.ratio
            coeffs = (1, -r, 1 - a + r * b)
        out.append(EdgeForm(e.cone_type, make_cone(_edge_cone_gens(e)), L.DualForm(coeffs), edge=e))
    x = turning_vertex(p)
    if x is not None:
        out.append(EdgeForm(3, make_cone([E1, E2, x]), L.DualForm((1, 1, 1 - x[0] - x[1])), vertex=x))
    return out


def _direction_key(d):
    # clockwise order: (1,s) by decreasing s, then (1,-1), then (-r,-1) by increasing r
    x, y = d
    if x > 0 and y >= 0:
        return (0, -y)
    if (x, y) == (1, -1):
        return (1, 0)
    return (2, -x)


def random_polygon(rng: Optional[random.Random] = None, max_vertices: int = 8,
                   max_coord: int = 20, attempts: int = 100000) -> AdmissiblePolygon:
    """A random admissible polygon from a clockwise walk of integral directions.

    Directions (1,s), (1,-1) and (-r,-1) are drawn, sorted clockwise and
    given multiplicities; the walk is closed back to e3 and kept only when
    the result passes validate_polygon.
    """
    rng = rng or random.Random()
    pool = [(1, s) for s in range(0, 7)] + [(1, -1)] + [(-r, -1) for r in range(0, 7)]
    for _ in range(attempts):
        k = rng.randint(2, max_vertices - 1)
        dirs = sorted(rng.sample(pool, k), key=_direction_key)
        x = (0, 0)
        planar = [x]
        for d in dirs:
            lam = rng.randint(1, 3)
            x = (x[0] + lam * d[0], x[1] + lam * d[1])
            planar.append(x)
        if any(a <= 0 or b <= 0 or a > max_coord or b > max_coord for a, b in planar[1:]):
            continue
        try:
            return validate_polygon([(a, b, 1) for a, b in planar])
        except InvalidPolygon:
            continue
    raise RuntimeError("no admissible polygon found; loosen the bounds")


# --------------------------------------------------------------------------
# sporadic table


@dataclass(frozen=True)
class SporadicRow:
    index: int
    rays: tuple  # generators besides e1, e2, e3
    printed: tuple  # equations as typeset
    forms: tuple  # parsed printed forms, None where the printed equation is malformed
    printed_rays: Optional[tuple] = None

    @property
    def all_rays(self) -> tuple:
        return (E1, E2, E3) + self.rays


_TERM = re.compile(r"([+-]?)(\d*)Z_?(\d)")


def parse_printed_form(text: str, d: int = 3) -> Optional[L.DualForm]:
    """Parse 'Z_1-2Z_2+Z_3=1'; None if a variable repeats or the form vanishes."""
    lhs, _, rhs = text.replace(" ", "").partition("=")
    if rhs != "1":
        return None
    coeffs = [0] * d
    seen = set()
    pos = 0
    for m in _TERM.finditer(lhs):
        if m.start() != pos:
            return None
        pos = m.end()
        i = int(m.group(3)) - 1
        if i in seen or not 0 <= i < d:
            return None
        seen.add(i)
        c = int(m.group(2) or 1)
        coeffs[i] = -c if m.group(1) == "-" else c
    if pos != len(lhs) or not any(coeffs):
        return None
    return L.DualForm(tuple(coeffs))


@lru_cache(maxsize=None)
def sporadic_table() -> tuple:
    raw = json.loads(resources.files("toricfano").joinpath("data/sporadic_table.json").read_text("utf-8"))
    rows = []
    for r in raw["rows"]:
        printed_rays = r.get("printed_rays")
        rows.append(SporadicRow(
            index=r["index"],
            rays=tuple(tuple(v) for v in r["rays"]),
            printed=tuple(r["printed"]),
            forms=tuple(parse_printed_form(t) for t in r["printed"]),
            printed_rays=tuple(tuple(v) for v in printed_rays) if printed_rays else None,
        ))
    return tuple(rows)


def sporadic(k: int) -> Fan:
    """The k-th sporadic fan, 1 <= k <= 13, as the face fan of its rays."""
    table = sporadic_table()
    if not isinstance(k, int) or not 1 <= k <= len(table):
        raise IndexOutOfRange(f"sporadic index must be in 1..{len(table)}, got {k}")
    return fan_from_rays(table[k - 1].all_rays)


@dataclass(frozen=True)
class RowCheck:
    """Computed support forms of a sporadic fan against the printed equations."""

    index: int
    computed: tuple  # DualForms of the maximal cones
    matched: tuple  # printed forms found among the computed ones
    missing: tuple  # printed forms with no computed counterpart
    malformed: tuple  # printed strings that do not define a form
    replacements: tuple  # computed forms standing in for the malformed ones

    @property
    def exact(self) -> bool:
        return not self.missing and not self.malformed and len(self.matched) == len(self.computed)

    def line(self) -> str:
        text = f"row {self.index}: {len(self.matched)}/{len(self.computed)} printed forms match"
        if self.missing:
            text += "; missing " + ", ".join(u.equation() for u in self.missing)
        for bad, u in zip(self.malformed, self.replacements):
            text += f"; printed {bad} reads as {u.equation()}"
        return text


def check_sporadic_row(k: int) -> RowCheck:
    f = sporadic(k)
    row = sporadic_table()[k - 1]
    _, forms = is_gorenstein_fan(f)
    computed = tuple(sorted((u for u in forms.values() if u is not None), key=lambda u: u.coeffs))
    printed = [(t, u) for t, u in zip(row.printed, row.forms)]
    matched = tuple(u for _, u in printed if u is not None and u in computed)
    missing = tuple(u for _, u in printed if u is not None and u not in computed)
    malformed = tuple(t for t, u in printed if u is None)
    spare = tuple(u for u in computed if u not in matched)
    replacements = spare if len(spare) == len(malformed) else ()
    return RowCheck(k, computed, matched, missing, malformed, replacements)

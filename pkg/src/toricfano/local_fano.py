"""Gorenstein, local weak Fano and local Fano tests for fans over the orthant.

The body of a fan is the union of the pyramids Conv({0} ∪ G(σ)) over its
cones.  A fan supported on the positive orthant (with every proper face of
the orthant present) is local weak Fano when that union is convex, and local
Fano when moreover each support hyperplane meets the body exactly in the
corresponding face F_σ.  All forms use the +1 normalization: the support form
of a cone takes the value 1 on its generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import lattice as L
from .errors import MissingFace, NoSolution, NotUnique
from .fans import Cone, Fan, check_orthant_faces, gorenstein_form, validate_fan


@dataclass(frozen=True)
class GammaBody:
    fan: Fan
    hull: L.HullComplex
    convex: bool
    witness: Optional[str] = None

    @property
    def origin_facets(self):
        return self.hull.origin_facets()

    @property
    def outer_facets(self):
        return self.hull.outer_facets()


@dataclass(frozen=True)
class FanoGrade:
    gorenstein: bool
    weak_fano: bool
    fano: bool
    witness: Optional[str] = None
    forms: tuple = field(default=(), compare=False, repr=False)

    def lines(self):
        flag = lambda b: "true" if b else "false"
        out = [
            f"gorenstein: {flag(self.gorenstein)}",
            f"weak_fano: {flag(self.weak_fano)}",
            f"fano: {flag(self.fano)}",
        ]
        if self.witness:
            out.append(f"witness: {self.witness}")
        return out


def _cone_form(c: Cone):
    try:
        return gorenstein_form(c)
    except (NotUnique, NoSolution):
        return None


def _pyramid_volume(c: Cone) -> int:
    return L.convex_hull([L.zero(c.ambient)] + list(c.gens)).normalized_volume()


def _body(f: Fan, forms) -> GammaBody:
    hull = L.convex_hull([L.zero(f.ambient)] + list(f.rays))
    union = sum(_pyramid_volume(c) for c in f.cones)
    total = hull.normalized_volume()
    if union == total:
        return GammaBody(f, hull, True)
    witness = f"union of pyramids has normalized volume {union} < {total}"
    for c, u in forms:
        if u is None:
            continue
        beyond = [g for g in f.rays if u(g) > 1]
        if beyond:
            witness = f"ray {beyond[0]} lies beyond the support plane {u.equation()} of {c}"
            break
    return GammaBody(f, hull, False, witness)


def gamma_body(f: Fan) -> GammaBody:
    """Hull of {0} ∪ G(Σ) plus whether the union of pyramids fills it."""
    validate_fan(f, support=True, orthant_faces=False)
    return _body(f, [(c, _cone_form(c)) for c in f.cones])


def is_gorenstein_fan(f: Fan):
    """(ok, {cone: form or None}); ok iff every maximal cone has an integral form."""
    validate_fan(f)
    forms = {c: _cone_form(c) for c in f.cones}
    ok = all(u is not None and u.integral for u in forms.values())
    return ok, forms


def fano_grade(f: Fan) -> FanoGrade:
    """Grade a fan on the positive orthant.

    NotAFan and WrongSupport propagate.  A missing proper face of the orthant
    means the exceptional locus is not over the origin; it is reported as a
    non-weak-Fano witness rather than raised.
    """
    validate_fan(f, support=True, orthant_faces=False)
    forms = [(c, _cone_form(c)) for c in f.cones]

    gorenstein = True
    witnesses = []
    for c, u in forms:
        if u is None:
            gorenstein = False
            witnesses.append(f"{c} has no support form (generators not coplanar)")
            break
        if not u.integral:
            gorenstein = False
            witnesses.append(f"{c} has non-integral form {u}")
            break

    try:
        check_orthant_faces(f)
        local = True
    except MissingFace as exc:
        local = False
        witnesses.append(str(exc))

    body = _body(f, forms)
    weak = local and body.convex
    if local and not body.convex:
        witnesses.append(body.witness)

    fano = weak
    if weak:
        rays = f.rays
        for c, u in forms:
            if u is None:
                fano = False
                witnesses.append(f"{c} has no support plane")
                break
            contact = tuple(g for g in rays if u(g) == 1)
            if contact != c.gens:
                extra = [g for g in contact if g not in c.gens]
                fano = False
                witnesses.append(f"ray {extra[0]} lies on the support plane {u.equation()} of {c}")
                break
        if fano:
            # structural cross-check: outer facets and maximal cones correspond
            facets = sorted(tuple(sorted(fc.vertices)) for fc in body.outer_facets)
            if facets != sorted(c.gens for c in f.cones):
                fano = False
                witnesses.append("outer facets of the body do not match the maximal cones")

    return FanoGrade(
        gorenstein=gorenstein,
        weak_fano=weak,
        fano=fano,
        witness="; ".join(witnesses) if witnesses else None,
        forms=tuple(forms),
    )

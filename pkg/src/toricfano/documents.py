"""JSON fan documents, polygon files and OFF export."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from . import lattice as L
from .errors import (
    DocumentSyntaxError,
    DocumentValidationError,
    FanModelError,
    LatticeError,
    NonPrimitive,
    SchemaError,
    ZeroVector,
)
from .fans import Fan, make_cone, make_fan, validate_fan
from .local_fano import gamma_body

FIELDS = ("dimension", "rays", "max_cones", "metadata")
METADATA_FIELDS = ("name", "source")


@dataclass(frozen=True)
class FanDocument:
    dimension: int
    rays: tuple
    max_cones: tuple
    metadata: Optional[tuple] = None  # ((key, value), ...) in canonical order

    @classmethod
    def from_fan(cls, f: Fan, name: Optional[str] = None, source: Optional[str] = None) -> "FanDocument":
        rays = f.rays
        index = {r: i for i, r in enumerate(rays)}
        cones = tuple(sorted(tuple(sorted(index[g] for g in c.gens)) for c in f.cones))
        meta = tuple((k, v) for k, v in (("name", name), ("source", source)) if v is not None)
        return cls(f.ambient, rays, cones, meta or None)

    def to_fan(self) -> Fan:
        return _build_fan(self)


def _fail_schema(msg):
    raise SchemaError(msg)


def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        _fail_schema(f"{where} must be an integer, got {json.dumps(x)}")
    return x


def _int_list(x, where, length=None):
    if not isinstance(x, list):
        _fail_schema(f"{where} must be an array")
    if length is not None and len(x) != length:
        _fail_schema(f"{where} has {len(x)} entries, expected {length}")
    return tuple(_int(v, f"{where}[{i}]") for i, v in enumerate(x))


def parse_document(text) -> FanDocument:
    """Parse and schema-check a fan document (bytes or str)."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"not UTF-8: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        _fail_schema("top level must be an object")
    unknown = sorted(set(data) - set(FIELDS))
    if unknown:
        _fail_schema(f"unknown field {unknown[0]!r}")
    for key in FIELDS[:3]:
        if key not in data:
            _fail_schema(f"missing field {key!r}")
    d = _int(data["dimension"], "dimension")
    if d not in (2, 3):
        _fail_schema(f"dimension must be 2 or 3, got {d}")
    if not isinstance(data["rays"], list) or not data["rays"]:
        _fail_schema("rays must be a non-empty array")
    rays = tuple(_int_list(r, f"rays[{i}]", d) for i, r in enumerate(data["rays"]))
    if not isinstance(data["max_cones"], list) or not data["max_cones"]:
        _fail_schema("max_cones must be a non-empty array")
    cones = []
    for j, c in enumerate(data["max_cones"]):
        idx = _int_list(c, f"max_cones[{j}]")
        if not idx:
            _fail_schema(f"max_cones[{j}] is empty")
        for k, i in enumerate(idx):
            if not 0 <= i < len(rays):
                _fail_schema(f"max_cones[{j}][{k}] = {i} is not a ray index")
        cones.append(idx)
    meta = None
    if "metadata" in data:
        m = data["metadata"]
        if not isinstance(m, dict):
            _fail_schema("metadata must be an object")
        bad = sorted(set(m) - set(METADATA_FIELDS))
        if bad:
            _fail_schema(f"unknown metadata field {bad[0]!r}")
        for k, v in m.items():
            if not isinstance(v, str):
                _fail_schema(f"metadata.{k} must be a string")
        meta = tuple((k, m[k]) for k in METADATA_FIELDS if k in m)
    return FanDocument(d, rays, tuple(cones), meta)


def _build_fan(doc: FanDocument) -> Fan:
    for i, r in enumerate(doc.rays):
        try:
            L.as_vector(r)
            if not any(r):
                raise ZeroVector(f"ray {r} is zero")
            if not L.is_primitive(r):
                raise NonPrimitive(f"ray {r} is not primitive")
        except (FanModelError, LatticeError) as exc:
            raise DocumentValidationError(f"rays[{i}]: {exc}", cause=exc, location=f"rays[{i}]") from exc
    cones = []
    for j, idx in enumerate(doc.max_cones):
        try:
            cones.append(make_cone([doc.rays[i] for i in idx]))
        except (FanModelError, LatticeError) as exc:
            raise DocumentValidationError(f"max_cones[{j}]: {exc}", cause=exc, location=f"max_cones[{j}]") from exc
    f = make_fan(cones)
    if len(f.cones) != len(set(c.gens for c in cones)):
        dropped = next(j for j, c in enumerate(cones) if c not in f.cones)
        raise DocumentValidationError(f"max_cones[{dropped}] is a face of another cone",
                                      location=f"max_cones[{dropped}]")
    try:
        validate_fan(f)
    except (FanModelError, LatticeError) as exc:
        raise DocumentValidationError(f"max_cones: {exc}", cause=exc, location="max_cones") from exc
    return f


def parse_fan(text) -> Fan:
    return parse_document(text).to_fan()


def emit_document(doc: FanDocument) -> str:
    """Canonical text: fixed field order, one ray or cone list per line."""
    rays = ",\n    ".join(json.dumps(list(r)) for r in doc.rays)
    cones = ",\n    ".join(json.dumps(list(c)) for c in doc.max_cones)
    parts = [
        f'  "dimension": {doc.dimension}',
        f'  "rays": [\n    {rays}\n  ]',
        f'  "max_cones": [\n    {cones}\n  ]',
    ]
    if doc.metadata:
        parts.append(f'  "metadata": {json.dumps(dict(doc.metadata))}')
    return "{\n" + ",\n".join(parts) + "\n}\n"


def emit_fan(f: Fan, name: Optional[str] = None, source: Optional[str] = None) -> str:
    return emit_document(FanDocument.from_fan(f, name, source))


# --------------------------------------------------------------------------
# polygon files


def parse_polygon_file(text: str) -> list:
    """Height-1 vertices from lines of integer pairs; e3 is prepended."""
    verts = [(0, 0, 1)]
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.replace("(", " ").replace(")", " ").replace(",", " ").split()
        if len(fields) != 2:
            raise SchemaError(f"line {n}: expected two integers, got {line!r}")
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise SchemaError(f"line {n}: expected two integers, got {line!r}") from None
        verts.append((a, b, 1))
    return verts


# --------------------------------------------------------------------------
# OFF export


def export_gamma_off(f: Fan) -> str:
    """OFF text of the convex body Γ; vertices in lexicographic order."""
    if f.ambient != 3:
        raise ValueError("OFF export needs a 3-dimensional fan")
    body = gamma_body(f)
    if not body.convex:
        raise ValueError(f"the body is not convex: {body.witness}")
    hull = body.hull
    verts = sorted(hull.vertices)
    index = {v: i for i, v in enumerate(verts)}
    edges = set()
    faces = []
    for fc in hull.facets:
        cyc = [index[v] for v in fc.vertices]
        faces.append(cyc)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            edges.add((min(a, b), max(a, b)))
    lines = ["OFF", f"{len(verts)} {len(faces)} {len(edges)}"]
    lines += [" ".join(map(str, v)) for v in verts]
    lines += [" ".join(map(str, [len(c)] + c)) for c in faces]
    return "\n".join(lines) + "\n"


def parse_off_vertices(text: str) -> list:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if lines[0].strip() != "OFF":
        raise DocumentSyntaxError("missing OFF header")
    nv = int(lines[1].split()[0])
    return [tuple(int(x) for x in ln.split()) for ln in lines[2:2 + nv]]

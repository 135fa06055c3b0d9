import io
import json
import random
import subprocess
import sys
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricfano.cli import run_command
from toricfano.constructions import family_i, fan_from_polygon, random_polygon, sporadic, surface_family
from toricfano.documents import (
    FanDocument,
    emit_document,
    emit_fan,
    export_gamma_off,
    parse_document,
    parse_fan,
    parse_off_vertices,
    parse_polygon_file,
)
from toricfano.errors import DocumentSyntaxError, DocumentValidationError, NonPrimitive, SchemaError
from toricfano.fans import affine_fan, fan_from_rays, make_fan
from toricfano.local_fano import gamma_body

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
CASE_IV = [E1, E2, E3, (2, 1, 1), (1, 2, 1), (1, 1, 2)]


def doc(**fields):
    base = {"dimension": 3, "rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "max_cones": [[0, 1, 2]]}
    base.update(fields)
    return json.dumps(base).encode()


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, out, err)
    return code, out.getvalue(), err.getvalue()


# documents

def test_parse_affine():
    assert parse_fan(doc()) == affine_fan(3)


def test_parse_errors():
    with pytest.raises(DocumentSyntaxError) as info:
        parse_fan(b'{"dimension": 3,')
    assert "line 1" in str(info.value)
    with pytest.raises(SchemaError):
        parse_fan(doc(colour="red"))
    with pytest.raises(SchemaError):
        parse_fan(doc(rays=[[1, 0], [0, 1, 0], [0, 0, 1]]))
    with pytest.raises(SchemaError):
        parse_fan(doc(max_cones=[[0, 1, 5]]))
    with pytest.raises(SchemaError):
        parse_fan(json.dumps({"dimension": 3, "rays": [[1, 0, 0]]}).encode())
    with pytest.raises(DocumentValidationError) as info:
        parse_fan(doc(rays=[[2, 2, 2], [0, 1, 0], [0, 0, 1]]))
    assert isinstance(info.value.cause, NonPrimitive)
    assert info.value.location == "rays[0]"


@pytest.mark.parametrize("f", [affine_fan(3), affine_fan(2), family_i(4), sporadic(10), surface_family(5),
                               fan_from_rays(CASE_IV)])
def test_round_trip(f):
    text = emit_fan(f, name="x", source="test")
    assert parse_fan(text.encode()) == f
    assert emit_document(parse_document(text)) == text


@settings(max_examples=40, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)), max_size=4))
def test_round_trip_random(extra):
    extra = [p for p in extra if gcd(gcd(p[0], p[1]), p[2]) == 1]
    f = fan_from_rays([E1, E2, E3] + extra)
    text = emit_fan(f)
    d = parse_document(text)
    assert d == FanDocument.from_fan(f)
    assert emit_document(d) == text
    assert parse_fan(text) == f


def test_polygon_file():
    assert parse_polygon_file("1 1\n(2,1)  # corner\n\n") == [(0, 0, 1), (1, 1, 1), (2, 1, 1)]
    with pytest.raises(SchemaError):
        parse_polygon_file("1 2 3\n")


def test_off_examples():
    for f, counts in [(sporadic(1), (5, 6)), (affine_fan(3), (4, 4)), (family_i(2), (5, 6))]:
        text = export_gamma_off(f)
        lines = text.splitlines()
        assert lines[0] == "OFF"
        v, fc, e = map(int, lines[1].split())
        assert (v, fc) == counts
        assert v - e + fc == 2
        verts = parse_off_vertices(text)
        assert verts == sorted(verts)
        assert set(verts) == set(gamma_body(f).hull.vertices)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_off_vertices_match_gamma(seed):
    f = fan_from_polygon(random_polygon(random.Random(seed)))
    assert set(parse_off_vertices(export_gamma_off(f))) == set(gamma_body(f).hull.vertices)


def test_off_refuses_non_convex():
    # the plane fan with rays e1, (2,1), (1,1), (1,2), e2 crossed with e3
    f = make_fan([[E1, (2, 1, 0), E3], [(2, 1, 0), (1, 1, 0), E3], [(1, 1, 0), (1, 2, 0), E3], [(1, 2, 0), E2, E3]])
    assert not gamma_body(f).convex
    with pytest.raises(ValueError):
        export_gamma_off(f)


# command line

def test_cli_classify_sporadic(tmp_path):
    path = tmp_path / "s3.json"
    code, text, _ = run(["construct", "sporadic", "--k", "3"])
    assert code == 0
    path.write_text(text)
    code, text, _ = run(["classify", str(path)])
    assert code == 0
    assert text.splitlines()[0] == "Sporadic(3)"
    assert text.splitlines()[-1].startswith("label=Sporadic(3) key=")


def test_cli_check_case_iv(tmp_path):
    path = tmp_path / "iv.json"
    path.write_text(emit_fan(fan_from_rays(CASE_IV)))
    code, text, _ = run(["check", str(path)])
    assert code == 1
    assert "gorenstein: false" in text.splitlines()


def test_cli_check_and_export(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(emit_fan(family_i(2)))
    code, text, _ = run(["check", str(path)])
    assert code == 0
    assert text.splitlines()[:3] == ["gorenstein: true", "weak_fano: true", "fano: true"]
    code, text, _ = run(["export-gamma", str(path)])
    assert code == 0 and text == export_gamma_off(family_i(2))


def test_cli_construct_and_resolve(tmp_path):
    code, text, _ = run(["construct", "surface", "--n", "3", "--gorenstein"])
    assert code == 0
    path = tmp_path / "g.json"
    path.write_text(text)
    code, text, _ = run(["resolve2d", str(path)])
    assert code == 0
    assert parse_fan(text) == surface_family(3)

    poly = tmp_path / "p.txt"
    poly.write_text("1 2\n2 1\n")
    code, text, _ = run(["construct", "polygon", str(poly)])
    assert code == 0
    assert parse_fan(text) == fan_from_polygon([(0, 0, 1), (1, 2, 1), (2, 1, 1)])
    code, text, _ = run(["construct", "family-i", "--m", "7"])
    assert parse_fan(text) == family_i(7)


def test_cli_failures(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3 1\n")
    code, _, err = run(["construct", "polygon", str(bad)])
    assert code == 1 and "SlopeNotIntegral" in err
    path = tmp_path / "np.json"
    path.write_bytes(doc(rays=[[2, 2, 2], [0, 1, 0], [0, 0, 1]]))
    code, _, err = run(["check", str(path)])
    assert code == 1
    assert "cli.DocumentValidationError [fan_model.NonPrimitive]" in err
    code, _, err = run(["construct", "sporadic", "--k", "14"])
    assert code == 1 and "constructions.IndexOutOfRange" in err


def test_cli_usage_errors(tmp_path):
    assert run([])[0] == 2
    code, _, err = run(["construct", "family-i"])
    assert code == 2 and "--m" in err
    assert run(["frobnicate"])[0] == 2
    assert run(["check", str(tmp_path / "missing.json")])[0] == 2


def test_cli_enumerate_polygons():
    code, text, _ = run(["enumerate", "polygons"])
    assert code == 0
    lines = text.splitlines()
    assert lines[-1] == "polygons: 23"
    assert "polygons before swap identification: 44" in lines
    assert run(["enumerate", "polygons"])[1] == text


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "toricfano.cli", "construct", "sporadic", "--k", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert parse_fan(proc.stdout) == sporadic(1)

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from flatlam import io as fio
from flatlam.cli import run
from flatlam.fixtures import l_surface, nonplanar_theta, reference_graph, square_torus
from flatlam.ribbon import ExceptionalKind
from flatlam.surface import validate_surface
from flatlam.svg import fmt, render_trajectory
from flatlam.tracer import SurfacePoint, shoot

DATA = Path(__file__).parent / "data"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def dump(path, obj):
    path.write_text(json.dumps(obj))
    return path


# ---------------------------------------------------------------------------
# formats


def test_surface_round_trip():
    for s in (square_torus(), l_surface()):
        back = fio.surface_from_json(json.loads(fio.dumps(fio.surface_to_json(s))))
        assert back == s


def test_graph_round_trip():
    for g in (nonplanar_theta(), reference_graph(ExceptionalKind.DUMBBELL)):
        assert fio.graph_from_json(fio.graph_to_json(g)) == g


def test_data_files_match_fixtures():
    assert fio.surface_from_json(json.loads((DATA / "L.json").read_text())) == l_surface()
    assert fio.surface_from_json(json.loads((DATA / "torus.json").read_text())) == square_torus()


@pytest.mark.parametrize("doc,where", [
    ({"polygons": [{"id": "A", "vertices": [["0", "0"], ["1", "x"], ["0", "1"]]}]},
     "$.polygons[0].vertices[1][1]"),
    ({"polygons": [{"vertices": []}]}, "$.polygons[0]"),
    ({"polygons": [], "gluings": [{"a": ["A", 0], "b": ["A", "2"]}]}, "$.gluings[0].b"),
    ({"polygons": [], "gluings": [{"a": ["A", 0], "b": ["A", 2], "kind": "twist"}]},
     "$.gluings[0].kind"),
])
def test_parse_errors_carry_location(doc, where):
    with pytest.raises(fio.ParseError) as info:
        fio.surface_from_json(doc)
    assert info.value.location == where


def test_trajectory_lines_are_json():
    s = l_surface()
    t = shoot(s, SurfacePoint("A", ("1/2", "1/4")), (2, 1), 100)
    lines = fio.trajectory_lines(t)
    assert len(lines) == len(t.segments)
    first = json.loads(lines[0])
    assert set(first) == {"polygon", "entry", "exit", "holonomy"}
    assert first["entry"] == ["1/2", "1/4"]


def test_fmt_is_exact_fixed_point():
    assert fmt(0) == "0.000000000000"
    assert fmt("1/3") == "0.333333333333"
    assert fmt("-5/2") == "-2.500000000000"


# ---------------------------------------------------------------------------
# command line


def test_validate_ok():
    code, out, _ = cli("validate", DATA / "L.json")
    assert code == 0
    assert out == "OK: 1 singularities, χ=-2\n"


def test_validate_invalid(tmp_path):
    doc = fio.surface_to_json(square_torus())
    doc["polygons"][0]["vertices"] = [["0", "0"], ["2", "0"], ["2", "1"], ["0", "1"]]
    doc["gluings"] = [{"a": ["A", 0], "b": ["A", 1]}, {"a": ["A", 2], "b": ["A", 3]}]
    code, out, _ = cli("validate", dump(tmp_path / "s.json", doc))
    assert code == 1
    assert out.startswith("INVALID:") and "mismatch" in out


def test_usage_and_data_errors(tmp_path):
    assert cli("frobnicate")[0] == 64
    assert cli("trace", DATA / "L.json")[0] == 64
    assert cli("--jobs", "0", "validate", DATA / "L.json")[0] == 64
    code, _, err = cli("validate", tmp_path / "missing.json")
    assert code == 65 and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli("validate", bad)[0] == 65


def test_singularities_table():
    code, out, _ = cli("singularities", DATA / "L.json")
    assert code == 0
    assert "6π" in out
    assert cli("singularities", DATA / "torus.json")[1] == "no singularities\n"


def test_trace_outputs(tmp_path):
    code, out, _ = cli("trace", DATA / "torus.json", "--point", "A:1/2,1/2", "--direction", "1,1")
    assert code == 0
    assert "termination: closed" in out and "length^2: 2" in out
    code, out, _ = cli("trace", DATA / "L.json", "--point", "A:1/2,1/4", "--direction", "2,1",
                       "--jsonl", "--svg", tmp_path / "t.svg")
    assert code == 0
    assert all(json.loads(line)["polygon"] for line in out.splitlines())
    svg = (tmp_path / "t.svg").read_text()
    assert svg.startswith("<svg") and 'class="path"' in svg


def test_trace_outside_polygon():
    code, _, err = cli("trace", DATA / "L.json", "--point", "A:5,5", "--direction", "1,0")
    assert code == 1 and "not in polygon" in err


def test_saddles_counts():
    code, out, _ = cli("saddles", DATA / "L.json", "--budget", "1")
    assert code == 0 and out.startswith("6 saddle connection(s)")
    code, out, _ = cli("saddles", DATA / "L.json", "--budget", "1", "--oriented")
    assert out.startswith("12 saddle connection(s)")


def test_cylinders_exit_codes(tmp_path):
    code, out, _ = cli("cylinders", DATA / "L.json", "--direction", "1,0", "--svg", tmp_path / "c.svg")
    assert code == 0
    assert "cylinders: 2" in out and "total area: 3 of 3" in out
    svg = (tmp_path / "c.svg").read_text()
    assert svg.count('class="cylinder"') >= 2
    code, out, _ = cli("cylinders", DATA / "L.json", "--direction", "55,89", "--budget", "20")
    assert code == 2 and "outcome: undetermined" in out


def test_ribbon_verb(tmp_path):
    code, out, _ = cli("ribbon", DATA / "theta_flat.json", "--emit-surface", tmp_path / "s.json")
    assert code == 0
    assert out.splitlines()[0] == "exceptional: FlatTheta; χ=-1 b=3 g=0"
    built = fio.surface_from_json(json.loads((tmp_path / "s.json").read_text()))
    assert validate_surface(built).ok
    code, out, _ = cli("ribbon", DATA / "theta_nonplanar.json")
    assert out.splitlines()[0] == "not exceptional; χ=-1 b=1 g=1"


def test_link_verb(tmp_path):
    horiz = {"kind": "regular", "start": {"polygon": "A", "coords": ["1/2", "1/2"]},
             "direction": ["1", "0"]}
    vert = {"kind": "regular", "start": {"polygon": "A", "coords": ["1/3", "1/2"]},
            "direction": ["0", "1"]}
    edge = {"kind": "saddle", "legs": [{"polygon": "A", "vertex": 0, "holonomy": ["1", "0"]},
                                       {"polygon": "B", "vertex": 0, "holonomy": ["1", "0"]}]}
    h, v, e = (dump(tmp_path / f"{n}.json", d) for n, d in (("h", horiz), ("v", vert), ("e", edge)))
    code, out, _ = cli("link", DATA / "L.json", h, v)
    assert code == 0 and out.startswith("LINKED\n")
    code, out, _ = cli("link", DATA / "L.json", h, e)
    assert code == 0 and out.startswith("NOT-LINKED\n")


def test_link_bad_certificate(tmp_path):
    g = {"kind": "regular", "start": {"polygon": "A", "coords": ["1/2", "1/2"]},
         "direction": ["1", "0"], "itinerary": ["nowhere"]}
    p = dump(tmp_path / "g.json", g)
    code, _, err = cli("link", DATA / "L.json", p, p)
    assert code == 65 and "itinerary" in err


def test_classify_verb(tmp_path):
    code, out, _ = cli("classify", DATA / "L.json", "--from-direction", "1,0")
    assert code == 0 and "components: 2" in out
    fam = {"leaves": [{"kind": "saddle", "legs": [
        {"polygon": "C", "vertex": 0, "holonomy": ["1", "0"]},
        {"polygon": "B", "vertex": 0, "holonomy": ["1", "0"]}]}]}
    code, out, _ = cli("classify", DATA / "L.json", dump(tmp_path / "f.json", fam))
    assert code == 0 and "periodic-pair" in out
    assert cli("classify", DATA / "L.json")[0] == 64
    code, out, _ = cli("classify", DATA / "L.json", "--from-direction", "55,89", "--budget", "20")
    assert code == 2 and "candidate-minimal-domain" in out


def test_outputs_byte_identical(tmp_path):
    runs = []
    for i in range(2):
        svg = tmp_path / f"c{i}.svg"
        _, out, _ = cli("cylinders", DATA / "L.json", "--direction", "1,1", "--svg", svg)
        runs.append(out + svg.read_text())
    assert runs[0] == runs[1]


def test_svg_without_path():
    svg = render_trajectory(square_torus(), None)
    assert 'class="axis"' in svg and 'class="path"' not in svg


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "flatlam", "validate", str(DATA / "torus.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "OK: 0 singularities, χ=0\n"

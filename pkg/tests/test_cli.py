import io
import json

import numpy as np
import pytest
from support import data_file, fd_curvature, load_lift

from flagcurve.cli import main
from flagcurve.oracle import latitude_points


def run(*args):
    out = io.StringIO()
    code = main([str(a) for a in args], out)
    return code, out.getvalue()


def test_sequence_report():
    code, text = run("sequence", data_file("rank2_deg4.json"))
    assert code == 0
    assert "flag: F_{2,2,1}" in text
    assert "gamma_0 = 4/(1 + 2z zbar + z^2 zbar^2)" in text
    code, text = run("sequence", data_file("conic_a1.json"))
    assert "F_{1,1,1}" in text
    assert "gamma_1 = (4 + 4z zbar + 4z^2 zbar^2)/(1 + 8z zbar + 18z^2 zbar^2 + 8z^3 zbar^3 + z^4 zbar^4)" in text


def test_malformed_input(capsys):
    code, text = run("sequence", data_file("malformed.json"))
    assert code == 2 and text == ""
    assert "position 4" in capsys.readouterr().err
    code, _ = run("sequence", data_file("does_not_exist.json"))
    assert code == 2


def test_curvature_reports():
    code, text = run("curvature", data_file("veronese3.json"))
    assert code == 0 and text.splitlines()[-1] == "constant, K = 2/5"
    code, text = run("curvature", data_file("rank2_deg4.json"), "--lambda", "1,1")
    assert text.splitlines()[-1] == "nonconstant"
    code, text = run("curvature", data_file("conic_sqrt2.json"), "--lambda", "1,1")
    assert text.startswith("constant, K = 1.0")


def test_weight_count_mismatch():
    code, _ = run("curvature", data_file("rank2_deg4.json"), "--lambda", "1,2,3")
    assert code == 4


def test_degrees_and_maximize():
    code, text = run("degrees", data_file("rank2_deg4.json"))
    assert code == 0 and text == "degrees: 4, 2\n"
    code, text = run("maximize", data_file("rank2_deg4.json"), "--json")
    data = json.loads(text)
    assert data["direction"] == [4, 2] and data["norm_square"] == 20
    assert np.allclose([float(w) for w in data["weights"]], [0.894427191, 0.4472135955])
    code, text = run("maximize", data_file("rank2_deg6.json"))
    assert "maximizer: (6, 4) / sqrt(52)" in text
    assert "weights: 0.832050294338, 0.554700196225" in text
    code, text = run("degrees", data_file("rank2_deg6_float.json"))
    assert text == "degrees: 6, 4\n"


def test_non_compact_refused():
    assert run("degrees", data_file("rank2_deg4_local.json"))[0] == 5
    assert run("maximize", data_file("rank2_deg4_local.json"))[0] == 5


def test_plot_constant_for_veronese_plane(tmp_path):
    path = tmp_path / "k.csv"
    code, text = run("plot", data_file("conic_sqrt2.json"), "--lambda", "1,1", "--out", path)
    assert code == 0 and text == ""
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "phi,K" and len(lines) == 65
    vals = np.array([float(l.split(",")[1]) for l in lines[1:]])
    phis = np.array([float(l.split(",")[0]) for l in lines[1:]])
    assert np.all(np.diff(phis) > 0) and 0 < phis[0] and phis[-1] < np.pi
    assert np.ptp(vals) < 1e-8 and vals.mean() == pytest.approx(1.0, abs=1e-10)


def test_plot_matches_finite_differences():
    code, text = run("plot", data_file("conic_a1.json"), "--lambda", "1,1")
    rows = [tuple(map(float, l.split(","))) for l in text.splitlines()[1:]]
    lift = load_lift("conic_a1.json")
    rho = lambda z: lift.gammas[0](z) + lift.gammas[1](z)  # noqa: E731
    assert np.ptp([k for _, k in rows]) > 1e-3
    for phi, k in (rows[0], rows[-1]):
        assert fd_curvature(rho, complex(latitude_points(phi, 0.0))) == pytest.approx(k, rel=1e-5)


def test_plot_two_rows():
    code, text = run("plot", data_file("veronese3.json"), "--samples", "2")
    assert len(text.splitlines()) == 3
    assert run("plot", data_file("veronese3.json"), "--samples", "1")[0] == 3


def test_certify():
    code, text = run("certify", data_file("rank2_deg4.json"))
    assert code == 0 and text.splitlines()[0] == "NOT_CONSTANT"
    code, text = run("certify", data_file("veronese3.json"))
    assert text.splitlines()[0] == "CONSTANT_CURVATURE_ALL_METRICS(3, 4, 3)"
    code, text = run("certify", data_file("line.json"), "--json")
    assert json.loads(text)["verdict"] == "CONSTANT_CURVATURE_ALL_METRICS"
    assert run("certify", data_file("conic_sqrt2.json"))[0] == 6


def test_json_round_trip_and_determinism():
    from flagcurve import RationalFn, parse_poly
    code, text = run("sequence", data_file("rank2_deg6.json"), "--json")
    data = json.loads(text)
    lift = load_lift("rank2_deg6.json")
    got = [RationalFn(parse_poly(g["num"]), parse_poly(g["den"])) for g in data["gamma"]]
    assert tuple(got) == lift.gammas
    assert run("sequence", data_file("rank2_deg6.json"), "--json")[1] == text
    code, text = run("curvature", data_file("veronese3.json"), "--json", "--lambda", "1,1/2,1")
    data = json.loads(text)
    assert data["constant"] and data["value"] == "1/2"


def test_curve_file_schema_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "backend": "exact", "compact": true, "frames": [["1"]]}')
    assert run("sequence", bad)[0] == 2
    bad.write_text('{"n": 2, "backend": "exact", "frames": [["1", "z"]]}')
    assert run("sequence", bad)[0] == 2
    bad.write_text('{"n": 2, "backend": "exact", "compact": true, "frames": [["1", "zbar"]]}')
    assert run("sequence", bad)[0] == 2

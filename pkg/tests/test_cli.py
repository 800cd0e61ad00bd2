import csv
import json

import numpy as np
import pytest
from click.testing import CliRunner

from fockband.bands import TruncatedOperator
from fockband.cli import main
from fockband.diagnostics import synth_band
from fockband.matrix_io import read_band_triplets, write_triplets
from fockband.symbols import RadialProfile, SymbolSpec
from fockband.toeplitz import cmk_closed_form


def run(args):
    return CliRunner().invoke(main, args, catch_exceptions=False)


def rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


@pytest.fixture
def symbol_file(tmp_path):
    h = SymbolSpec.of((0, RadialProfile.gaussian(1.0)), (1, RadialProfile.constant(1.0)))
    path = tmp_path / "h.json"
    path.write_text(h.dumps())
    return path


def test_cmk(tmp_path):
    res = run(["--out", str(tmp_path), "cmk", "--k", "2", "--m-max", "200"])
    assert res.exit_code == 0, res.output
    table = rows(tmp_path / "cmk_k2.csv")
    assert table[0] == ["m", "closed_form", "quadrature", "abs_diff"]
    assert float(table[1][1]) == pytest.approx(0.7071067812, abs=1e-10)
    last = [float(x) for x in table[-1]]
    assert last[1] == pytest.approx(cmk_closed_form(200, 2)) and 1 - last[1] < 1e-2
    meta = json.loads((tmp_path / "cmk_k2.csv.meta.json").read_text())
    assert meta["tolerances"]["abs_diff_limit"] == 1e-9 and "version" in meta


def test_cmk_k0_all_ones(tmp_path):
    assert run(["--out", str(tmp_path), "cmk", "--k", "0", "--m-max", "20"]).exit_code == 0
    assert all(float(r[1]) == 1.0 for r in rows(tmp_path / "cmk_k0.csv")[1:])


def test_cmk_exact_with_one_node(tmp_path):
    # the half-integer power sits in the weight, so a constant profile needs a single node
    res = CliRunner().invoke(main, ["--quad-q", "1", "--out", str(tmp_path), "cmk", "--k", "1", "--m-max", "5"])
    assert res.exit_code == 0
    assert float(rows(tmp_path / "cmk_k1.csv")[-1][3]) < 1e-12


def test_build_and_determinism(tmp_path, symbol_file):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run(["--n", "32", "--out", str(out1), "build", str(symbol_file)]).exit_code == 0
    assert run(["--n", "32", "--out", str(out2), "build", str(symbol_file)]).exit_code == 0
    for name in ("matrix.csv", "matrix.csv.meta.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    B = read_band_triplets(out1 / "matrix.csv", n=32)
    assert B.offsets == (0, 1)
    assert B.diag(0)[0].real == pytest.approx(0.5)


def test_build_parse_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"terms": [\n  {"k": 1,, }]}')
    res = CliRunner().invoke(main, ["--out", str(tmp_path), "build", str(bad)])
    assert res.exit_code != 0
    assert "line 2" in res.output


def test_build_tolerance_error(tmp_path):
    doc = tmp_path / "rough.json"
    doc.write_text(SymbolSpec.of((0, RadialProfile.radial_sine(60.0))).dumps())
    res = CliRunner().invoke(main, ["--quad-q", "8", "--out", str(tmp_path), "build", str(doc), "--tol", "1e-10"])
    assert res.exit_code != 0


@pytest.mark.parametrize("which, header", [("fejer", ["n", "gap"]), ("band", ["w", "gap"]),
                                           ("rotation", ["theta", "distance"])])
def test_scan(tmp_path, symbol_file, which, header):
    res = run(["--n", "64", "--out", str(tmp_path), "scan", "--symbol", str(symbol_file),
               "--which", which, "--range", "8"])
    assert res.exit_code == 0, res.output
    table = rows(tmp_path / f"scan_{which}.csv")
    assert table[0] == header and len(table) > 2


def test_scan_matrix_single_band(tmp_path):
    mat = tmp_path / "m.csv"
    write_triplets(synth_band(2, "const", 16, dense=False), mat)
    run(["--n", "16", "--out", str(tmp_path), "scan", "--matrix", str(mat), "--which", "rotation",
         "--range", "4"])
    dist = [float(r[1]) for r in rows(tmp_path / "scan_rotation.csv")[1:]]
    # |1 - zeta^2| at 0, pi/2, pi, 3pi/2
    assert dist == pytest.approx([0, 2, 0, 2], abs=1e-12)


@pytest.mark.parametrize("synth, code", [("0:sin_sqrt", 0), ("0:sin_linear", 2)])
def test_diagnose_exit_codes(tmp_path, synth, code):
    res = CliRunner().invoke(main, ["--n", "4096", "--out", str(tmp_path), "diagnose", "--synth", synth])
    assert res.exit_code == code, res.output
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["cr_proxy"] is True
    assert (tmp_path / "report_moduli.csv").exists()
    assert (tmp_path / "report.json.meta.json").exists()


def test_diagnose_neither(tmp_path):
    rng = np.random.default_rng(1)
    mat = tmp_path / "dense.csv"
    write_triplets(TruncatedOperator(rng.standard_normal((40, 40))), mat)
    res = CliRunner().invoke(main, ["--n", "40", "--out", str(tmp_path), "diagnose", "--matrix", str(mat)])
    assert res.exit_code == 3


def test_diagnose_needs_one_source(tmp_path, symbol_file):
    res = CliRunner().invoke(main, ["--out", str(tmp_path), "diagnose"])
    assert res.exit_code != 0
    res = CliRunner().invoke(main, ["--out", str(tmp_path), "diagnose", "--symbol", str(symbol_file),
                                    "--synth", "0:const"])
    assert res.exit_code != 0


def test_berezin(tmp_path, symbol_file):
    res = run(["--n", "128", "--out", str(tmp_path), "berezin", "--symbol", str(symbol_file),
               "--max-dev", "1e-10"])
    assert res.exit_code == 0, res.output
    table = rows(tmp_path / "berezin.csv")
    assert table[0][:2] == ["x", "y"] and "deviation" in table[0] and len(table) == 1 + 12 * 16
    assert max(float(r[table[0].index("deviation")]) for r in table[1:]) < 1e-10


def test_berezin_truncation_error(tmp_path, symbol_file):
    res = CliRunner().invoke(main, ["--n", "8", "--out", str(tmp_path), "berezin", "--symbol", str(symbol_file)])
    assert res.exit_code != 0 and "increase n" in res.output


def test_bergman_commands(tmp_path, symbol_file):
    assert run(["--lambda", "0.5", "--out", str(tmp_path), "bergman", "monomial", "--k", "1"]).exit_code == 0
    table = rows(tmp_path / "bergman_monomial_k1.csv")
    j, closed = int(table[5][0]), float(table[5][1])
    assert closed == pytest.approx(np.sqrt((j + 1) / (j + 2.5)), rel=1e-14)
    assert run(["--n", "16", "--out", str(tmp_path), "bergman", "build", str(symbol_file)]).exit_code == 0
    assert run(["--n", "16", "--out", str(tmp_path), "bergman", "scan", "--symbol", str(symbol_file),
                "--which", "band", "--range", "3"]).exit_code == 0
    res = CliRunner().invoke(main, ["--n", "20000", "--out", str(tmp_path), "bergman", "diagnose",
                                    "--synth", "0:sin_log"])
    assert res.exit_code == 0, res.output
    res = CliRunner().invoke(main, ["--n", "20000", "--out", str(tmp_path), "bergman", "diagnose",
                                    "--synth", "0:sin_sqrt"])
    assert res.exit_code == 2


def test_global_validation(tmp_path):
    res = CliRunner().invoke(main, ["--t", "-1", "--out", str(tmp_path), "cmk", "--k", "1"])
    assert res.exit_code != 0


def test_every_output_has_header_and_sidecar(tmp_path, symbol_file):
    out = str(tmp_path / "out")
    assert run(["--out", out, "cmk", "--k", "1", "--m-max", "50"]).exit_code == 0
    assert run(["--n", "32", "--out", out, "build", str(symbol_file)]).exit_code == 0
    for which in ("fejer", "band", "rotation"):
        assert run(["--n", "32", "--out", out, "scan", "--symbol", str(symbol_file), "--which", which, "--range", "4"]).exit_code == 0
    assert run(["--n", "2000", "--out", out, "diagnose", "--synth", "0:sin_sqrt"]).exit_code in (0, 2)
    assert run(["--n", "128", "--out", out, "berezin", "--symbol", str(symbol_file)]).exit_code == 0
    produced = [p for p in (tmp_path / "out").iterdir() if not p.name.endswith(".meta.json")]
    assert len(produced) >= 7
    for p in produced:
        meta = json.loads((p.parent / (p.name + ".meta.json")).read_text())
        assert {"config", "tolerances", "version"} <= meta.keys()
        if p.suffix == ".csv":
            header = rows(p)[0]
            assert header and all(h and not h[0].isdigit() for h in header)

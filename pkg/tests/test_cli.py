import json
import subprocess
import sys

import pytest

from qpowerset import arith, cli, projgeom
from qpowerset.projgeom import PointSet

from oracles import exponent_vectors, has_qth_power_mod

SCHEMA_FIELDS = {"q", "verdict", "certificate", "anomalies", "bounds", "version", "schema_version", "timings"}


def run(capsys, *argv):
    code = cli.main([*argv, "--json"])
    out = capsys.readouterr()
    report = json.loads(out.out) if out.out.strip() else None
    return code, report, out.err


def test_check_cube_line(capsys):
    code, rep, _ = run(capsys, "check", "--q", "3", "--set", "2,3,6,18")
    assert code == 0
    assert SCHEMA_FIELDS <= rep.keys()
    assert (rep["verdict"], rep["minimal"], rep["dimension"], rep["trivial"]) == (True, True, 1, False)
    assert rep["certificate"]["kind"] == "essentiality"
    assert rep["certificate_replayed"] is True


def test_check_missing_hyperplane_replays(capsys):
    B = [2, 3, 4, 5, 6, 10, 15, 25]
    code, rep, _ = run(capsys, "check", "--q", "7", "--set", ",".join(map(str, B)))
    assert code == 1 and rep["verdict"] is False
    normal = rep["certificate"]["normal"]
    primes, vecs = exponent_vectors(B, 7)
    assert primes == rep["primes"]
    assert all(sum(a * b for a, b in zip(normal, v)) % 7 for v in vecs)


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--q", "4", "--set", "2,3"],
        ["check", "--q", "3", "--set", "2,x"],
        ["check", "--q", "3", "--set", "2,0"],
        ["check", "--q", "3", "--set", str(2**63)],
        ["check", "--q", "3"],
        ["witness", "--q", "3", "--set", "2,3", "--bound", "0"],
        ["construct", "--family", "circle", "--q", "3"],
        ["construct", "tallini", "--q", "7"],
        ["construct", "line", "--q", "3", "--primes", "2,2"],
        ["gapsearch", "--q", "3", "--size", "7"],
        ["bounds", "--q", "9"],
        ["nonsense"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    assert cli.main(argv) == 2
    capsys.readouterr()


def test_large_values_rejected_with_message(capsys):
    assert cli.main(["check", "--q", "3", "--set", "2," + "9" * 25]) == 2
    assert "factored form" in capsys.readouterr().err


def test_factored_input(capsys):
    code, rep, _ = run(capsys, "check", "--q", "5", "--set", "2*3,7,2*3*7,2^2*3^2*7,2^3*3^3*7,2^4*3^4*7")
    assert code == 0 and rep["dimension"] == 1
    assert [a["id"] for a in rep["anomalies"]] == ["line-q5-literal-18114"]
    readings = {r["name"]: r["locally"] for r in rep["anomalies"][0]["readings"]}
    assert readings == {"factored": True, "literal": False}


def test_parse_element():
    assert cli.parse_element("2^4*3^4*7").value == 9072
    assert cli.parse_element({"2": 1, "3": 2}).value == 18
    assert cli.parse_element("-12") == -12
    with pytest.raises(cli.UsageError):
        cli.parse_element("4^2*3")


def test_witness(capsys):
    code, rep, _ = run(capsys, "witness", "--q", "3", "--set", "2,3,6", "--bound", "1000")
    assert code == 0 and rep["witness"] == 13 and rep["check_verdict"] is False
    assert not any(has_qth_power_mod(b, 13, 3) for b in (2, 3, 6))
    code, rep, _ = run(capsys, "witness", "--q", "3", "--set", "2,3,6,18", "--bound", "100000")
    assert code == 1 and rep["witness"] is None and rep["check_verdict"] is True


def test_construct_line(capsys):
    code, rep, _ = run(capsys, "construct", "line", "--q", "3", "--primes", "2,3")
    assert code == 0
    assert sorted(int(e["value"]) for e in rep["set"]) == [2, 3, 6, 18]
    assert rep["minimal"] is True


def test_construct_hessian(capsys):
    code, rep, _ = run(capsys, "construct", "--family", "hessian", "--q", "7", "--primes", "2,3,5")
    assert code == 0 and len(rep["set"]) == 12 and rep["minimal"]
    assert "inequivalent to triangle" in rep["notes"]


def test_construct_quadric(capsys):
    code, rep, _ = run(capsys, "construct", "quadric", "--q", "3", "--primes", "2,3,5,7")
    assert code == 0 and len(rep["set"]) == 10 and rep["dimension"] == 3


def test_equiv_witness_replays(capsys):
    a, b = "2,15,30,60,120,240,480,960", "2,3,6,12,24,48,96,192"
    code, rep, _ = run(capsys, "equiv", "--q", "7", "--set-a", a, "--set-b", b)
    assert code == 0
    g = rep["certificate"]["matrix"]
    assert len(g) == 3
    primes = rep["certificate"]["primes"]

    def points(text):
        vecs = [arith.rad_q(int(x), 7).vector(primes) for x in text.split(",")]
        return PointSet.of(7, vecs, k=len(primes))

    image = {projgeom.normalize([sum(r[j] * p[j] for j in range(3)) for r in g], 7) for p in points(a).points}
    assert image == points(b).points


def test_equiv_inequivalent(capsys):
    tri = cli.main(["construct", "triangle", "--q", "7", "--primes", "2,3,5", "--json"])
    tri_rep = json.loads(capsys.readouterr().out)
    cli.main(["construct", "hessian", "--q", "7", "--primes", "2,3,5", "--json"])
    hes_rep = json.loads(capsys.readouterr().out)
    assert tri == 0
    a = ",".join(e["factored"] for e in tri_rep["set"])
    b = ",".join(e["factored"] for e in hes_rep["set"])
    code, rep, _ = run(capsys, "equiv", "--q", "7", "--set-a", a, "--set-b", b)
    assert code == 1 and rep["certificate"]["kind"] == "inequivalence"


def test_reduce(capsys):
    code, rep, _ = run(capsys, "reduce", "--q", "7", "--set", "2,15,30,60,120,240,480,960")
    assert code == 0
    got = {arith.rad_q(int(e["value"]), 7) for e in rep["set"]}
    assert got == {arith.rad_q(b, 7) for b in [2, 3, 6, 12, 24, 48, 96, 192]}
    assert rep["certificate_replayed"] and rep["locally"]["equal"]


def test_gapsearch(capsys):
    code, rep, _ = run(capsys, "gapsearch", "--q", "3", "--size", "5")
    assert code == 0 and rep["candidates"] == 1287 and rep["minimal_found"] == 0


def test_bounds(capsys):
    code, rep, _ = run(capsys, "bounds", "--q", "3", "--k", "4")
    assert code == 0 and rep["bounds"]["upper"] == 10


def test_anomalies_command(capsys):
    code, rep, _ = run(capsys, "anomalies")
    assert code == 0
    assert len(rep["anomalies"]) == 6


def test_request_document(tmp_path, capsys):
    doc = tmp_path / "req.json"
    doc.write_text(json.dumps({"q": 3, "set": [{"2": 1}, {"3": 1}, {"2": 1, "3": 1}, {"2": 1, "3": 2}]}))
    code, rep, _ = run(capsys, "check", "--request", str(doc))
    assert code == 0 and rep["minimal"]


def test_out_file_and_text_rendering(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = cli.main(["check", "--q", "3", "--set", "2,3,6", "--out", str(out)])
    text = capsys.readouterr().out
    saved = json.loads(out.read_text())
    assert code == 1 and saved["verdict"] is False
    # the text form is a rendering of the same report
    assert text.splitlines()[0] == f"schema_version: {saved['schema_version']}"
    assert "verdict: False" in text


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qpowerset", "check", "--q", "3", "--set", "2,3,6,18", "--json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] is True

import csv
import io
import json
from fractions import Fraction

from toricmld import example_family, mld
from toricmld.cli import (
    EXIT_ERROR,
    EXIT_INEQUALITY,
    EXIT_OK,
    EXIT_ORACLE_MISMATCH,
    EXIT_PRECONDITION,
    load_instance,
    main,
    serialize_toric,
)

F = Fraction


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def quotient_17_doc():
    return {
        "kind": "toric",
        "dim": 2,
        "lattice_generators": [["1/17", "1/17"]],
        "rays": [[1, 0], [0, 1]],
        "max_cones": [[0, 1]],
    }


def family_doc(l):
    r = l**4 + 1
    return {
        "kind": "mfs",
        "m": 2,
        "n": 2,
        "fiber_rays": [[1, 0], [-(l - 1), 1], [-(l - 1), -1]],
        "base_multiples": [1, 1],
        "extra_generators": [[f"{l}/{r}", f"{l * l}/{r}", f"1/{r}", f"1/{r}"]],
    }


def test_mld_quotient(tmp_path, capsys):
    path = write(tmp_path, "q17.json", quotient_17_doc())
    assert main(["mld", path]) == EXIT_OK
    out = capsys.readouterr().out
    assert "mld = 2/17" in out
    assert "witness = (1/17, 1/17)" in out


def test_mld_smooth(tmp_path, capsys):
    doc = {
        "kind": "toric",
        "dim": 3,
        "lattice_generators": [],
        "rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "max_cones": [[0, 1, 2]],
    }
    path = write(tmp_path, "a3.json", doc)
    assert main(["mld", path]) == EXIT_OK
    assert "mld = 1" in capsys.readouterr().out


def test_mld_json_and_bruteforce(tmp_path, capsys):
    path = write(tmp_path, "q17.json", quotient_17_doc())
    assert main(["mld", path, "--brute-force", "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["mld"] == "2/17"
    assert doc["witness"] == ["1/17", "1/17"]
    assert doc["method"] == "parallelepiped"


def test_mld_malformed_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["mld", str(path)]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_mld_bad_field_path(tmp_path, capsys):
    doc = quotient_17_doc()
    doc["rays"][1] = ["1/0", "1"]
    path = write(tmp_path, "bad.json", doc)
    assert main(["mld", path]) == EXIT_ERROR
    err = capsys.readouterr().err
    assert "$.rays[1][0]" in err


def test_mld_guard_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TORICMLD_GUARD", "3")
    path = write(tmp_path, "q17.json", quotient_17_doc())
    assert main(["mld", path, "--brute-force"]) == EXIT_ERROR
    assert "guard" in capsys.readouterr().err


def test_validate_family(tmp_path, capsys):
    path = write(tmp_path, "fam3.json", family_doc(3))
    assert main(["validate", path]) == EXIT_OK
    out = capsys.readouterr().out
    assert "overall: PASS" in out
    assert out.count("PASS") >= 8


def test_validate_shifted_fiber(tmp_path, capsys):
    doc = family_doc(2)
    doc["fiber_rays"] = [[1, 0], [0, 1], [1, 1]]
    path = write(tmp_path, "shifted.json", doc)
    assert main(["validate", path]) == EXIT_ERROR
    out = capsys.readouterr().out
    assert "FAIL  fiber_simplex" in out


def test_validate_six_rays(tmp_path, capsys):
    doc = family_doc(2)
    doc["rays"] = [
        ["1", "0", "0", "0"],
        ["-1", "1", "0", "0"],
        ["-1", "-1", "0", "0"],
        ["0", "0", "1", "0"],
        ["0", "0", "0", "1"],
        ["1", "1", "0", "0"],
    ]
    doc["max_cones"] = [[1, 2, 3, 4], [0, 2, 3, 4], [0, 1, 3, 4], [5, 0, 3, 4]]
    path = write(tmp_path, "sixrays.json", doc)
    assert main(["validate", path]) == EXIT_ERROR
    out = capsys.readouterr().out
    assert "FAIL  ray_count" in out
    assert "6 rays, expected 5" in out


def test_family_summary(capsys):
    assert main(["family", "--l", "2", "--emit", "summary"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "r = 17" in out
    assert "mld_Y = 2/17" in out
    assert "mld_X = 12/17" in out


def test_family_json_roundtrip(tmp_path, capsys):
    assert main(["family", "--l", "2", "--emit", "json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    path = write(tmp_path, "fam2.json", doc)
    assert main(["validate", path]) == EXIT_OK
    capsys.readouterr()
    instance = load_instance(path)
    assert mld(instance.x).value == F(12, 17)


def test_family_bad_parameter(capsys):
    assert main(["family", "--l", "1"]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_toric_serialization_roundtrip(tmp_path):
    fam = example_family(2)
    doc = serialize_toric(fam.x)
    path = write(tmp_path, "famx.json", doc)
    parsed = load_instance(path)
    assert parsed.lattice == fam.x.lattice
    assert parsed.fan.rays == fam.x.fan.rays
    assert serialize_toric(parsed) == doc


def test_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--l-min", "2", "--l-max", "4", "--out", str(out)]) == EXIT_OK
    text = out.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "l,r,mld_X,mld_Y,ratio_y_over_x4,slope_running"
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 3
    assert rows[0]["mld_Y"] == "2/17"
    assert rows[0]["mld_X"] == "12/17"
    assert rows[0]["slope_running"] == ""
    assert rows[1]["slope_running"] != ""
    # exact columns round-trip through Fraction parsing
    for row in rows:
        F(row["mld_X"])
        F(row["mld_Y"])


def test_sweep_single_row(capsys):
    assert main(["sweep", "--l-min", "3", "--l-max", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    rows = out.strip().splitlines()
    assert len(rows) == 2
    assert rows[1].endswith(",")  # slope column empty for a single row


def test_witness_auto(tmp_path, capsys):
    path = write(tmp_path, "fam4.json", family_doc(4))
    assert main(["witness", path, "--delta", "auto"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "A = (1/257, 1/257)" in out
    assert "bound_satisfied = true" in out


def test_witness_precondition(tmp_path, capsys):
    doc = {
        "kind": "mfs",
        "m": 1,
        "n": 1,
        "fiber_rays": [[1], [-1]],
        "base_multiples": [1],
        "extra_generators": [],
    }
    path = write(tmp_path, "smooth.json", doc)
    assert main(["witness", path, "--delta", "1/1000000"]) == EXIT_PRECONDITION


def test_check_family(tmp_path, capsys):
    path = write(tmp_path, "fam3.json", family_doc(3))
    assert main(["check", path]) == EXIT_OK
    out = capsys.readouterr().out
    assert "holds" in out


def test_check_nonsurjective(tmp_path, capsys):
    doc = {
        "kind": "mfs",
        "m": 1,
        "n": 1,
        "fiber_rays": [[1], [-1]],
        "base_multiples": [2],
        "extra_generators": [],
    }
    path = write(tmp_path, "broken.json", doc)
    assert main(["check", path]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_unknown_kind(tmp_path):
    path = write(tmp_path, "odd.json", {"kind": "mystery"})
    assert main(["mld", path]) == EXIT_ERROR


def test_sweep_csv_lf_line_endings(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--l-min", "2", "--l-max", "3", "--out", str(out)]) == EXIT_OK
    assert b"\r" not in out.read_bytes()


def test_mld_oracle_mismatch_exit_code(tmp_path, capsys, monkeypatch):
    # force a disagreement to exercise the mismatch exit path
    import toricmld.cli as cli_mod
    from toricmld.mld import MldResult

    path = write(tmp_path, "q17.json", quotient_17_doc())

    def fake_bruteforce(variety, guard=None):
        return MldResult(value=F(1, 3), witness=(F(1), F(0)), cone_index=0, method="bruteforce")

    monkeypatch.setattr(cli_mod, "mld_bruteforce", fake_bruteforce)
    assert main(["mld", path, "--brute-force"]) == EXIT_ORACLE_MISMATCH
    assert "mismatch" in capsys.readouterr().err


def test_check_inequality_violation_exit_code(tmp_path, capsys, monkeypatch):
    # no genuine instance violates the inequality, so fake a certificate
    import toricmld.cli as cli_mod
    from toricmld.witness import EpsDeltaCertificate

    path = write(tmp_path, "fam2.json", family_doc(2))
    real = cli_mod.check_eps_delta

    def fake_check(instance):
        cert = real(instance)
        return EpsDeltaCertificate(
            holds=False, mld_x=cert.mld_x, mld_y=cert.mld_y,
            c_z=cert.c_z, lhs=cert.lhs, rhs=cert.rhs,
        )

    monkeypatch.setattr(cli_mod, "check_eps_delta", fake_check)
    assert main(["check", path]) == EXIT_INEQUALITY
    assert "violated" in capsys.readouterr().err


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_ERROR, EXIT_ORACLE_MISMATCH, EXIT_PRECONDITION, EXIT_INEQUALITY}) == 5

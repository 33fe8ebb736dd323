"""Tests for the checks, reports and main submodules."""
import importlib
import json

import pytest

from ncverify import checks, reports

# ncverify/__init__.py rebinds the name `main` to the CLI function, so fetch the submodule explicitly
main = importlib.import_module("ncverify.main")
from ncverify.ncpoly import Report

REQUIRED_IDS = (
    "jordan-relations", "ore-tower", "sigma-normal-q", "sigma-normal-s", "sigma-squared-adg", "centre-zωθ",
    "centre-relation", "counit-mplus", "hopf-relations", "hopf-coassoc", "hopf-counit", "og-sub-bialgebra",
    "adnilp-x", "adnilp-u", "weyl-A", "weyl-B", "weyl-C", "weyl-D", "weyl-express-A", "weyl-express-B",
    "weyl-express-C", "weyl-express-D", "T-relations", "pi-morphism", "h-inner", "invariant-ideal", "ore-laws",
    "m0-equals-P0sq", "p1p2-in-P0", "s-notin-qD", "one-notin-P0", "pq-square-claim", "eta-sign-report",
    "growth", "fuzz-assoc", "filtration",
)


def _ids(descriptors):
    return [descriptor.id for descriptor in descriptors]


def test_registry_has_every_required_check():
    registry = checks.registry()
    for id in REQUIRED_IDS:
        assert id in registry, id
    assert registry["pq-square-claim"].expected == "report"
    assert registry["eta-sign-report"].expected == "report"
    assert registry["centre-relation"].expected == "pass"


def test_select():
    assert _ids(checks.select("all")) == sorted(checks.registry())
    assert _ids(checks.select("centre")) == ["centre-relation", "centre-zωθ"]
    assert _ids(checks.select("weyl-*")) == ["weyl-A", "weyl-B", "weyl-C", "weyl-D"]
    assert _ids(checks.select("weyl-express-*")) == ["weyl-express-A", "weyl-express-B", "weyl-express-C",
                                                      "weyl-express-D"]
    assert _ids(checks.select("hopf-co*")) == ["hopf-coassoc", "hopf-counit"]
    assert _ids(checks.select("adnilp-?")) == ["adnilp-u", "adnilp-x"]

    with pytest.raises(ValueError):
        checks.select("nothing-like-this")


def test_glob_matches():
    assert checks.glob_matches("weyl-A", "weyl-*")
    assert not checks.glob_matches("weyl-express-A", "weyl-*")
    assert checks.glob_matches("weyl-express-A", "weyl-*-A")
    assert checks.glob_matches("growth", "g*")


def test_run_check_statuses():
    def passing():
        report = Report("fine")
        report.add_flag("holds", True)
        return report

    def failing():
        report = Report("broken")
        report.add_flag("does not hold", False, note="on purpose")
        return report

    def crashing():
        raise RuntimeError("boom")

    report = checks.run_check(checks.CheckDescriptor("a", "a claim", passing))
    assert report.status == "pass"
    assert report.details == ["1 identities hold"]
    assert report.wall_time_ms >= 0

    report = checks.run_check(checks.CheckDescriptor("b", "a claim", failing))
    assert report.status == "fail"
    assert report.details == ["does not hold (on purpose)"]

    report = checks.run_check(checks.CheckDescriptor("c", "a claim", failing, expected="report"))
    assert report.status == "report"

    report = checks.run_check(checks.CheckDescriptor("d", "a claim", crashing))
    assert report.status == "fail"
    assert report.details == ["RuntimeError: boom"]


def test_exit_code():
    make = lambda status: checks.CheckReport("id", "claim", status)
    assert checks.exit_code([make("pass"), make("report")]) == 0
    assert checks.exit_code([make("pass"), make("fail")]) == 1
    assert checks.exit_code([]) == 0


def test_run_checks():
    results = checks.run_checks("centre")
    assert [r.status for r in results] == ["pass", "pass"]

    results = checks.run_checks("weyl-*", jobs=2)
    assert [r.id for r in results] == ["weyl-A", "weyl-B", "weyl-C", "weyl-D"]
    assert all(r.status == "pass" for r in results)

    results = checks.run_checks("eta-sign-report")
    assert results[0].status == "report"
    assert any("case C" in detail and "-1" in detail for detail in results[0].details)

    with pytest.raises(ValueError):
        checks.run_checks("centre", jobs=0)


def test_central_coproduct_is_only_reported():
    results = checks.run_checks("central-coproduct")
    assert [r.status for r in results] == ["report"]
    details = results[0].details
    assert [detail.split(":")[0] for detail in details] == [
        "Delta(z) - z⊗z", "Delta(omega) - omega⊗omega", "Delta(theta) - theta⊗theta"]
    for detail in details:
        assert ": residual " in detail and detail.endswith(" terms)")


def test_laurent_roundtrip_fuzzes_every_localisation():
    results = checks.run_checks("laurent-roundtrip")
    assert results[0].status == "pass"


def test_json_and_summary(tmp_path):
    results = [checks.CheckReport("b-check", "second", "fail", ["x: residual 1"], 2.25),
               checks.CheckReport("a-check", "first", "pass", ["3 identities hold"], 1.0)]

    as_dict = reports.reports_to_dict(results, convention="B")
    assert list(as_dict) == ["version", "convention_elected", "checks"]
    assert as_dict["convention_elected"] == "B"
    assert list(as_dict["checks"][0]) == ["id", "paper_ref", "claim", "status", "details", "wall_time_ms"]
    assert as_dict["checks"][0]["paper_ref"] == as_dict["checks"][0]["claim"] == "second"

    path = tmp_path / "out" / "reports.json"
    reports.write_json(results, path, convention="B")
    with open(path, encoding="utf-8") as file:
        assert json.load(file) == as_dict

    text = reports.summary_text(results)
    assert "1 pass, 1 fail, 0 report" in text
    assert "b-check [fail]: second" in text
    assert "a-check [" not in text
    assert reports.summary_text([]) == "no checks were run"


def _main(tmp_path, *argv):
    return main.main(["--log-dir", str(tmp_path), *argv])


def test_main_nf(tmp_path, capsys):
    assert _main(tmp_path, "nf", "v*x") == main.OK
    assert capsys.readouterr().out.strip() == "x*v + x*u - g + 1"

    assert _main(tmp_path, "nf", "q*s - s*q") == main.OK
    assert capsys.readouterr().out.strip() == "0"

    assert _main(tmp_path, "nf", "--algebra", "J", "[y, x]") == main.OK
    assert capsys.readouterr().out.strip() == "-1/2*x^2"


def test_main_usage_errors(tmp_path):
    assert _main(tmp_path, "nf", "x +* y") == main.USAGE_ERROR
    assert _main(tmp_path, "nf", "x^-1") == main.USAGE_ERROR
    assert _main(tmp_path, "nf", "w") == main.USAGE_ERROR
    assert _main(tmp_path, "nf", "--algebra", "T", "(x + 1)^-1") == main.USAGE_ERROR
    assert _main(tmp_path, "check", "nothing-like-this") == main.USAGE_ERROR
    assert _main(tmp_path, "growth", "--max", "-1") == main.USAGE_ERROR
    assert _main(tmp_path, "--step-budget", "0", "nf", "x") == main.USAGE_ERROR


def test_main_member(tmp_path, capsys):
    assert _main(tmp_path, "member", "--ideal", "q", "--target", "q*y", "--bound", "1") == main.OK
    assert capsys.readouterr().out.startswith("witness")

    assert _main(tmp_path, "member", "--ideal", "q, s", "--target", "1", "--bound", "1") == main.CHECK_FAILED
    assert capsys.readouterr().out.startswith("no witness at bound 1")


def test_main_check_and_growth(tmp_path, capsys):
    json_path = tmp_path / "centre.json"
    assert _main(tmp_path, "check", "centre", "--json", str(json_path)) == main.OK
    assert json_path.exists()
    assert "2 pass" in capsys.readouterr().out

    assert _main(tmp_path, "growth", "--max", "2") == main.OK
    assert "35" in capsys.readouterr().out

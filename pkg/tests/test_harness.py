import json

import pytest

from netcay.errors import UnknownCase
from netcay.groups import read_table_file
from netcay.harness import (
    CASES,
    CaseReport,
    Claim,
    dumps_report,
    load_s5,
    run_all,
    run_case,
    symmetric_group_table,
)


@pytest.mark.parametrize("case_id", sorted(CASES))
def test_every_case_passes(case_id):
    rep = run_case(case_id)
    failed = [c for c in rep.claims if not c.passed]
    assert rep.error is None
    assert not failed, failed
    assert rep.claims


def test_unknown_case():
    with pytest.raises(UnknownCase):
        run_case("ex9.9")


def test_reports_are_reproducible_and_round_trip():
    a = dumps_report({"cases": [r.to_dict() for r in run_all()]})
    b = dumps_report({"cases": [r.to_dict() for r in run_all()]})
    assert a == b
    assert dumps_report(json.loads(a)) == a


def test_claim_and_report_semantics():
    ok = Claim.check("x", [1, 2], [1, 2])
    bad = Claim.check("y", 1, 2)
    assert ok.passed and not bad.passed
    rep = CaseReport("demo", [ok])
    assert rep.passed
    rep.claims.append(bad)
    assert not rep.passed
    assert not CaseReport("e", error="boom").passed


def test_s5_fixture_regenerates(tmp_path):
    from importlib import resources

    path = resources.files("netcay") / "data" / "s5.table"
    with resources.as_file(path) as p:
        assert read_table_file(p) == symmetric_group_table(5)
    assert load_s5().order == 120


def test_ex51_specific_claims():
    rep = run_case("ex5.1")
    by = {c.description: c for c in rep.claims}
    assert by["it projects to a loop of Gamma_N"].passed
    assert by["|Aut(G;C)| = 12"].computed == 12
    assert "gamma" in rep.artifacts


def test_ex21_n12():
    rep = run_case("ex2.1")
    c = next(c for c in rep.claims if c.description.startswith("Z_12: Phi(G;C) has order"))
    assert c.computed == 2

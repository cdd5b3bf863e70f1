import json

import pytest

from cpoisson.checks import run_checks
from cpoisson.manifest import bundled, bundled_dir, bundled_names, load_manifest

NAMES = bundled_names()


def expected(name):
    return json.loads((bundled_dir() / "expected" / f"{name}.json").read_text())


@pytest.fixture(scope="module")
def reports():
    return {name: run_checks(load_manifest(bundled(name))) for name in NAMES}


def test_every_manifest_has_a_fixture():
    fixtures = {p.stem for p in (bundled_dir() / "expected").glob("*.json")}
    assert fixtures == set(NAMES)


@pytest.mark.parametrize("name", NAMES)
def test_verdicts_match_fixture(reports, name):
    exp = expected(name)
    r = reports[name]
    assert r.manifest == exp["manifest"]
    assert r.statuses() == exp["checks"]
    assert r.overall == exp["overall"]


@pytest.mark.parametrize("name", NAMES)
def test_no_internal_consistency_failures(reports, name):
    for e in reports[name].entries:
        assert all(loc != "internal-consistency" for loc, _ in e.witnesses), (name, e.name)
        assert e.residuals["max_rel_error"] <= 1e-6


def test_witnesses(reports):
    jac = dict(reports["jacobi-counterexample"]["jacobi"].witnesses)
    assert jac["J(zb1,z2,zb2)"] == "-zb1"
    rp = reports["example31-n2"]["riemann-poisson"]
    assert rp.status == "fail" and rp.witnesses
    assert dict(reports["cstar-family"]["reality"].witnesses) == {"conj(B_11) + B_11": "z1*zb1*c + z1*zb1*cb"}

import json

import pytest

from basecraft import catalog
from basecraft.basesize import q_bounds, q_report
from basecraft.catalog import (IngestError, UnknownCase, UnsupportedCase, bundled_group,
                               case_ids, explicit_base, fpr_identity_rows, get_case, get_record,
                               ingest_generators, parse_generators, solve_case,
                               verify_explicit_base)

SUPPORTED = case_ids(status=catalog.SUPPORTED)


def test_bundled_mathieu_groups():
    assert bundled_group("M11").order() == 7920
    assert bundled_group("M12").order() == 95040
    assert bundled_group("M12").degree == 12


def test_ingest_cycle_notation(tmp_path):
    path = tmp_path / "s7.gens"
    path.write_text("# name: S7\n# degree: 7\n# order: 5040\n(1,2)\n(1,2,3,4,5,6,7)\n")
    assert ingest_generators(path).order() == 5040


def test_ingest_zero_based_offset():
    G = parse_generators("# degree: 5\n# order: 60\n# offset: 0\n(0,1,2)\n(0,1,2,3,4)\n")
    assert G.order() == 60


@pytest.mark.parametrize("text", [
    "# degree: 5\n# order: 120\n(1,2,3)\n(1,2,3,4,5)\n",  # generates A5, not S5
    "# degree: 5\n# order: 30\n(1,2,3)\n(1,2,3,4,5)\n",
    "# degree: 5\n(1,2)\n",
    "# order: 2\n(1,2)\n",
    "# degree: 3\n# order: 2\n(1,7)\n",
])
def test_ingest_refuses_bad_files(text):
    with pytest.raises(IngestError):
        parse_generators(text)


def test_registry_lookup_and_json():
    assert len(SUPPORTED) >= 80
    rows = json.loads(catalog.registry_json())
    assert {r["id"] for r in rows} == set(case_ids())
    with pytest.raises(UnknownCase):
        get_record("nope/none")
    unsupported = case_ids(status=catalog.UNSUPPORTED)
    assert unsupported
    with pytest.raises(UnsupportedCase):
        get_case(unsupported[0])


@pytest.mark.parametrize("cid", SUPPORTED)
def test_supported_case_base_size(cid):
    build = get_case(cid)
    assert build.degree * build.H.order() == build.G.order()
    res = solve_case(build, seed=1)
    assert res.hi == build.record.expected_b
    if build.record.route == "action":
        assert res.exact


SMALL_CASES = [cid for cid in SUPPORTED
               if get_record(cid).route == "action" and get_case(cid).G.order() <= 10**5]


@pytest.mark.parametrize("cid", SMALL_CASES)
def test_fixed_point_identity(cid):
    rows = fpr_identity_rows(get_case(cid))
    assert rows
    for row in rows:
        assert row["lhs"] == row["rhs"]


def test_explicit_four_point_base_on_the_line():
    for q in (7, 8, 9, 11, 16, 25, 27):
        for ext in ("PSL", "PGL", "PSigmaL", "PGammaL"):
            assert verify_explicit_base("line4", q, ext)


def test_three_points_fail_for_semilinear_groups():
    for q in (9, 16, 25, 27):
        assert not verify_explicit_base("line3", q, "PGammaL")
    # PGammaL2(q) = PGL2(q) for prime q, which is sharply 3-transitive
    for q in (11, 13):
        assert verify_explicit_base("line3", q, "PGammaL")


def test_pair_bases():
    for q in (7, 8, 9, 11, 13):
        for ext in ("PSL", "PGL", "PSigmaL", "PGammaL"):
            assert verify_explicit_base("pairs3", q, ext)
    # the two-pair base needs e1 - e2 != e1 + e2, so odd q only
    for q in (7, 9, 11, 13, 25):
        assert verify_explicit_base("pairs2", q, "PSL")
        assert verify_explicit_base("pairs2", q, "PSigmaL")
        assert not verify_explicit_base("pairs2", q, "PGL")
    assert not verify_explicit_base("pairs2", 16, "PSL")


def test_unitary_pair_base():
    assert verify_explicit_base("unitary2", 11)
    assert verify_explicit_base("unitary2", 13)
    assert verify_explicit_base("unitary2", 27, [(0, 1)])
    assert not verify_explicit_base("unitary2", 16)
    with pytest.raises(ValueError):
        explicit_base("hexagon", 7)


@pytest.mark.parametrize("cid", ["as1/S6/S3wrS2", "as1/A6/S3wrS2", "as1/S8/S4wrS2",
                                 "as1/A8/S4wrS2", "as1/S7/S4xS3", "as1/S5/5:4"])
def test_cycle_type_q_route_matches_action_route(cid):
    build = get_case(cid)
    data = catalog.symmetric_coset_q_class_data(build.G, build.H)
    via_action = q_bounds(build.action, [2, 3, 4])
    for c, rep in via_action.items():
        assert q_report(build.degree, c, "exact-cycle-type", data).total == rep.total


def test_case_q_routes():
    reps = catalog.case_q_bounds(get_case("prod/S5wrC2"), [3])
    assert reps[3].mode == "exact-wreath"
    assert reps[3].total == q_bounds(get_case("prod/S5wrC2").action, [3])[3].total
    assert catalog.case_q_bounds(get_case("as1/S12/S4wrS3"), [4])[4].mode == "exact-cycle-type"

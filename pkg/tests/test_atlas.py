import json
from itertools import product

import pytest

from equipart.atlas import AtlasQuery, emit_report, enumerate_rows
from equipart.certify import check
from equipart.exceptions import ConfigurationError, SearchSpaceError
from equipart.problems import ConstraintProblem


def keys(rows):
    return {(r.problem.canonical_key(), r.d) for r in rows}


def test_k2_d2_contains_expected_rows():
    q = AtlasQuery(
        k=2, d_range=(2, 2), mode="strict", max_m=3, max_a=2,
        allow_affine=True, ortho_universe="all",
    )
    rows = list(enumerate_rows(q))
    by_key = {r.problem.canonical_key(): r for r in rows}
    star = ConstraintProblem.of(2, m=(1, 1)).canonical_key()
    assert star in by_key
    label = by_key[star].classification
    assert label.optimal and label.j_maximal == 2 and label.tight
    assert ConstraintProblem.of(2, m=(1, 0), a=(0, 1)).canonical_key() in by_key


def test_k3_d4_reproduces_catalog_rows():
    q = AtlasQuery(k=3, d_range=(4, 4), mode="strict", max_m=2, ortho_universe="all")
    found = {r.problem.canonical_key() for r in enumerate_rows(q)}
    assert ConstraintProblem.of(3, m=(1, 1, 2)).canonical_key() in found
    assert ConstraintProblem.of(3, m=(1, 1, 1), ortho=[(2, 3)]).canonical_key() in found
    assert (
        ConstraintProblem.of(3, m=(1, 1, 0), ortho=[(1, 3), (2, 3)]).canonical_key()
        in found
    )


def test_optimal_filter_limits_first_stage():
    q = AtlasQuery(
        k=3, d_range=(4, 4), mode="strict", max_m=2,
        ortho_universe="all", require_optimal=True,
    )
    rows = list(enumerate_rows(q))
    assert rows and all(r.problem.m[0] == 1 for r in rows)


def test_maximal_and_balanced_filters():
    base = dict(k=2, d_range=(2, 3), mode="strict", max_m=3, ortho_universe="all")
    rows = list(enumerate_rows(AtlasQuery(**base, require_maximal_j=2)))
    assert rows and all(r.classification.j_maximal >= 2 for r in rows)
    rows = list(enumerate_rows(AtlasQuery(**base, require_balanced=True)))
    assert rows and all(r.classification.balanced for r in rows)


def test_rows_recheck_and_dedup():
    q = AtlasQuery(k=2, d_range=(2, 3), mode="strict", max_m=2, ortho_universe="all")
    rows = list(enumerate_rows(q))
    assert len(keys(rows)) == len(rows)
    for r in rows:
        again = check(r.problem, r.d, r.certificate.mode)
        assert again.certified and again.h_digest == r.certificate.h_digest
        # certificate field invariants hold on every emitted row
        assert r.certificate.h_is_top and not r.certificate.h_is_zero
        assert r.certificate.tight and r.certificate.form_count == r.certificate.kd


def test_matches_brute_force_small_box():
    q = AtlasQuery(
        k=2, d_range=(2, 3), mode="strict", max_m=4, max_a=2,
        allow_affine=True, ortho_universe="all",
    )
    rows = list(enumerate_rows(q))
    brute = set()
    for d in (2, 3):
        for m in product(range(5), repeat=2):
            for a in product(range(3), repeat=2):
                for o in ((), ((1, 2),)):
                    p = ConstraintProblem.of(2, m=m, a=a, ortho=o)
                    try:
                        cert = check(p, d, "strict")
                    except Exception:
                        continue
                    if cert.certified:
                        brute.add((p.canonical_key(), d))
    assert keys(rows) == brute


def test_relaxed_mode_is_superset_of_strict():
    strict = AtlasQuery(k=2, d_range=(3, 3), mode="strict", max_m=3, ortho_universe="all")
    relaxed = AtlasQuery(k=2, d_range=(3, 3), mode="relaxed", max_m=3, ortho_universe="all")
    assert keys(enumerate_rows(strict)) <= keys(enumerate_rows(relaxed))


def test_deterministic_order_and_reports():
    q = AtlasQuery(k=2, d_range=(2, 3), mode="strict", max_m=3, ortho_universe="all")
    rows1 = list(enumerate_rows(q))
    rows2 = list(enumerate_rows(q))
    order = [(r.d, r.problem.m, r.problem.a, r.problem.sorted_ortho()) for r in rows1]
    assert order == sorted(order)
    for fmt in ("json", "csv", "markdown"):
        assert emit_report(rows1, fmt) == emit_report(rows2, fmt)


def test_report_formats():
    q = AtlasQuery(k=2, d_range=(2, 2), mode="strict", max_m=1, ortho_universe="all")
    rows = list(enumerate_rows(q))
    doc = json.loads(emit_report(rows, "json"))
    assert doc["schema_version"] == 1 and len(doc["rows"]) == len(rows)
    csv_doc = emit_report(rows, "csv")
    assert csv_doc.splitlines()[0].startswith("k,d,m,a,ortho,extra,D,kd,mode,verdict")
    md = emit_report(rows, "markdown")
    assert md.startswith("| k | d |")
    assert emit_report([], "csv").count("\n") == 1  # header only
    with pytest.raises(ConfigurationError):
        emit_report(rows, "yaml")


def test_known_reference_attached():
    q = AtlasQuery(k=3, d_range=(4, 4), mode="strict", max_m=2, ortho_universe="all")
    by_key = {r.problem.canonical_key(): r for r in enumerate_rows(q)}
    row = by_key[ConstraintProblem.of(3, m=(1, 1, 2)).canonical_key()]
    assert row.known is not None and row.known_ref() == "=4"


def test_search_space_refusal():
    q = AtlasQuery(
        k=3, d_range=(2, 40), mode="strict", max_m=9, max_a=9,
        allow_affine=True, ortho_universe="all", candidate_limit=10_000,
    )
    with pytest.raises(SearchSpaceError) as err:
        list(enumerate_rows(q))
    assert err.value.estimate > 10_000


def test_parallel_enumeration_matches_sequential():
    q = AtlasQuery(
        k=2, d_range=(2, 3), mode="strict", max_m=4, max_a=2,
        allow_affine=True, ortho_universe="all",
    )
    seq = [(r.problem.canonical_key(), r.d) for r in enumerate_rows(q)]
    par = [(r.problem.canonical_key(), r.d) for r in enumerate_rows(q, jobs=2)]
    assert seq == par


def test_custom_universe_and_no_ortho():
    q = AtlasQuery(k=3, d_range=(4, 4), mode="strict", max_m=2, ortho_universe=frozenset({(2, 3)}))
    found = keys(enumerate_rows(q))
    assert (ConstraintProblem.of(3, m=(1, 1, 1), ortho=[(2, 3)]).canonical_key(), 4) in found
    q2 = AtlasQuery(k=3, d_range=(4, 4), mode="strict", max_m=2, allow_ortho=False)
    assert all(not r.problem.ortho for r in enumerate_rows(q2))

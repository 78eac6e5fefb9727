from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gwbound import coeffs
from gwbound.algebra import binom
from gwbound.coeffs import (
    CoeffSource,
    c_g1,
    cgt_closed,
    cgt_summation,
    check_gamma,
    check_positivity_argument,
    check_sign_alternation,
    check_low_branch_identities,
    check_middle_branch_identities,
    check_top_branch_identities,
    check_tables,
    closed_table,
    gamma_sums,
    index_range,
    oracle_expand_symbolic,
    oracle_expand_summation,
    positivity_scan,
    second_difference,
    summarize,
    verify_all,
)


def test_index_range_shape():
    assert list(index_range(2)) == [(1, 0)]
    assert list(index_range(3)) == [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1)]


def test_closed_form_examples():
    assert cgt_closed(4, 1, 0) == 1
    assert cgt_closed(2, 1, 0) == 1
    assert cgt_closed(5, 1, 20) == 0
    for r in range(4, 12):
        for k in range(1, r - 2):
            assert cgt_closed(r, k, 2 * r - 3 - k) == binom(r - 2, k - 1)
            assert cgt_closed(r, k, r) == F(binom(r, k + 1) * ((r - k - 2) * k - 2), k + 2) + (r - k)


def test_symbolic_oracle_small():
    t2 = oracle_expand_symbolic(2)
    assert t2.entries == {(1, 0): 1}
    assert t2.source is CoeffSource.ORACLE_SYMBOLIC
    t3 = oracle_expand_symbolic(3)
    assert t3.mismatches(closed_table(3)) == []
    assert not t3.stray()


@pytest.mark.parametrize("r", range(2, 9))
def test_symbolic_oracle_has_no_terms_past_range(r):
    t = oracle_expand_symbolic(r)
    for (k, n), v in t.entries.items():
        assert 1 <= k <= r - 1 and n <= 2 * r - 3 - k, (k, n, v)


def test_summation_examples():
    for r in range(2, 9):
        for k in range(1, r):
            assert c_g1(r, k, 1, 0) == r - 1 - F(r + 1, k + 2)
            for n in range(2 * r - 2 - k, 2 * r + 2):
                assert cgt_summation(r, k, n) == 0
    assert oracle_expand_summation(6).mismatches(closed_table(6)) == []


def test_gamma_examples():
    for r in range(2, 7):
        for i in range(0, r):
            assert gamma_sums(r, 0, i)["gamma2"] == (0, 0)
    assert gamma_sums(4, 4, 1)["gamma4"] == (3, 3)
    assert gamma_sums(5, 1, 3)["gamma1"] == (2, 2)
    with pytest.raises(IndexError):
        gamma_sums(3, 7, 1)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 14), st.data())
def test_gamma_closed_forms(r, data):
    i = data.draw(st.integers(0, r - 1))
    n = data.draw(st.integers(0, r - 1 + i))
    assert check_gamma(r, n, i).status == "pass"


def test_branch_examples():
    assert check_low_branch_identities(5, 2, 1).status == "pass"
    assert check_middle_branch_identities(6, 2, 5).status == "pass"
    assert check_top_branch_identities(7, 2, 9).status == "pass"
    # k = 1, n = 0: third sum absent, value k
    assert cgt_closed(5, 1, 0) == 1


def test_top_branch_n_equals_r():
    for r in range(4, 12):
        for k in range(1, r - 2):
            rep = check_top_branch_identities(r, k, r)
            assert rep.status == "pass", rep.counterexample


def test_positivity_argument_examples():
    r, k = 9, 3
    cb = lambda n: coeffs.cgt_b(r, k, n)
    assert second_difference(cb, 2 * r - k - 2) == 0
    assert cb(2 * r - k - 1) - cb(2 * r - k - 2) == binom(r, k + 1)
    assert coeffs.cgt_a(r, k, 2 * r - k) + cb(2 * r - k) == 0
    assert check_positivity_argument(r, k).status == "pass"
    assert check_positivity_argument(3, 1).status == "vacuous"


def test_sign_alternation_scope():
    # from m = 2 on the nonzero terms alternate
    assert check_sign_alternation(9, 2, 3).status == "pass"
    # m = 0 and m = 1 can share a sign when n >= 1
    assert any(
        c_g1(r, k, n, 0) * c_g1(r, k, n, 1) > 0
        for r in range(3, 10) for k in range(1, r - 1) for n in range(1, r)
    )


def test_positivity_scan_to_40():
    rep = positivity_scan(40)
    assert rep.status == "pass"
    assert rep.checked == sum(sum(1 for _ in index_range(r)) for r in range(2, 41))


def test_verify_r_max_2():
    reports = verify_all(2)
    assert all(r.passed for r in reports)
    assert oracle_expand_symbolic(2)[(1, 0)] == 1


def test_verify_all_to_5():
    reports = verify_all(5)
    assert reports and all(rep.passed for rep in reports)
    summary = summarize(reports)
    for name in ("triple_agreement", "integrality", "support", "positivity", "zero_pattern",
                 "series_form", "gamma_closed_forms", "low_branch", "middle_branch", "top_branch",
                 "positivity_argument", "sign_alternation", "j_sum_expansion"):
        assert summary[name]["pass"] > 0, name
        assert summary[name]["fail"] == 0, name
    # k = r - 1 leaves the top branch empty and is reported as such
    assert summary["top_branch"]["vacuous"] > 0


def test_verify_all_rejects_small_r_max():
    with pytest.raises(ValueError):
        verify_all(1)


def test_broken_closed_form_is_caught(monkeypatch):
    real = coeffs.cgt_closed

    def broken(r, k, n):
        v = real(r, k, n)
        return v + 1 if (r, k, n) == (5, 2, 3) else v

    monkeypatch.setattr(coeffs, "cgt_closed", broken)
    reps = {rep.identity: rep for rep in check_tables(5)}
    bad = reps["triple_agreement"]
    assert bad.status == "fail"
    rec = bad.to_record()
    assert rec["counterexample"]["k"] == 2 and rec["counterexample"]["n"] == 3
    assert rec["r"] == 5 and rec["status"] == "fail"


def test_report_record_schema():
    rec = check_low_branch_identities(5, 2, 1).to_record()
    assert {"id", "r", "k", "n", "status"} <= rec.keys()
    assert "counterexample" not in rec

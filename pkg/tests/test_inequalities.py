import json

import pytest

from xfam.core import ParameterError
from xfam.inequalities import (
    Grid,
    H_val,
    S_val,
    T_val,
    audit_case3,
    audit_lemma31,
    audit_lemma32,
    audit_lemma33,
    case3_product_audit,
    check_lemma31,
    h_val,
    lemma31_ratio,
    lemma32_val,
    lemma33_val,
    subcase1_factors,
)


def test_S_T_examples():
    assert S_val(8, 5, 4, 4) == 20
    assert S_val(12, 7, 5, 5) == 42
    assert T_val(12, 7, 5, 5) == 32
    assert T_val(8, 5, 4, 4) == 17
    for n in range(5, 20):
        for s in range(1, n):
            for i in range(0, s + 1):
                assert S_val(n, s, i, i) == s * (n - s + 1)
                assert T_val(n, s, s, i) == s * (n - i + 1)


def test_h_H_examples():
    assert h_val(12, 12, 7, 5, 5, 5, 3) == 18
    assert H_val(12, 12, 7, 5, 5, 5, 3) == 18


def test_h_H_symmetry_on_grid():
    checked = 0
    for t in range(3, 7):
        for k in range(t + 1, 9):
            for i in range(t + 2, k + 1):
                s = 2 * i - t
                for n in range(10, 40, 3):
                    for m in range(10, 40, 5):
                        assert h_val(n, m, s, k, k, i, t) == H_val(m, n, s, k, k, i, t)
                        checked += 1
    assert checked > 0


def test_lemma31_single_tuples():
    assert check_lemma31(12, 12, 7, 5, 5, 5, 3) == "ok"
    assert check_lemma31(12, 12, 7, 5, 5, 4, 3) == "out-of-domain"
    num, den = lemma31_ratio(12, 12, 7, 5, 5, 5, 3)
    assert num > den > 0


def test_lemma32_33_examples():
    assert lemma32_val(12, 12, 5, 5, 6, 3) == -32
    assert lemma33_val(12, 12, 5, 5, 6, 3) == -32


def test_lemma32_boundary_and_33_boundary():
    for t in range(3, 6):
        for k in range(t + 2, 9):
            for l in range(t + 1, k + 1):
                lo = (t + 1) * (k - t + 1)
                for n in (lo, lo + 7, 60):
                    assert lemma32_val(n, n, k, l, k + 1, t) < 0
                    if l >= t + 2:
                        assert lemma33_val(n, n, k, l, l + 1, t) < 0


def test_audits_small_grid():
    g = Grid(tmax=5, kmax=7, nmax=30)
    for audit in (audit_lemma31, audit_lemma32, audit_lemma33):
        rep = audit(g)
        assert rep.tuples_checked > 0 and rep.clean
        doc = rep.to_json()
        assert list(doc)[:4] == ["lemma", "grid", "tuples_checked", "violations"]
        json.dumps(doc)


def test_audit_fixed_tuple():
    rep = audit_lemma31(Grid(fixed={"n": 12, "m": 12, "k": 5, "l": 5, "t": 3}))
    assert rep.tuples_checked > 0 and rep.clean


def test_case3_examples():
    res = case3_product_audit(12, 12, 5, 5, 3)
    assert res["ok"]
    assert res["bound"] == 1296
    assert res["subcase1"]["factors"] == [15, 57] and res["subcase1"]["product"] == 855
    assert res["subcase1"]["enumerated"] == [15, 57]
    assert subcase1_factors(12, 12, 5, 5, 3)[0] == 15

    res = case3_product_audit(8, 8, 4, 4, 3)
    assert res["subcase3"]["product"] == 25 == res["bound"]


def test_case3_rejects_outside_domain():
    with pytest.raises(ParameterError):
        case3_product_audit(8, 8, 4, 3, 3)
    with pytest.raises(ParameterError):
        case3_product_audit(7, 7, 4, 4, 3)


def test_case3_small_grid():
    rep = audit_case3(Grid(tmax=4, kmax=5, nmax=12))
    assert rep.tuples_checked > 0 and rep.clean

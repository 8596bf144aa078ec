import json
from fractions import Fraction

import pytest

from qconvmul.resources import (
    COLUMNS,
    comparison_table,
    cost_crossover,
    grade_school_resources,
    karatsuba_closed_form,
    karatsuba_recursive,
    karatsuba_resources,
    module_resources,
)
from qconvmul.reversible import Primitive


def oracle_gs(n):
    return (5 * n * n - 5 * n + 10, 11 * n * n - 12 * n + 12, 2 * n * n - 2 * n + 2)


def test_grade_school_values():
    assert grade_school_resources(4).as_tuple() == (70, 140, 26)
    assert grade_school_resources(1).as_tuple() == (10, 11, 2)
    assert grade_school_resources(16).as_tuple() == (1210, 2636, 482)
    for n in (1, 2, 4, 8, 16):
        assert grade_school_resources(n).as_tuple() == oracle_gs(n)


def test_grade_school_positive_and_increasing():
    prev = None
    for n in range(1, 65):
        cur = grade_school_resources(n).as_tuple()
        assert all(v > 0 for v in cur)
        if prev:
            assert all(c > p for c, p in zip(cur, prev))
        prev = cur


def test_module_values():
    assert module_resources(Primitive.QFA, 8).as_tuple() == (40, 48, 8)
    assert module_resources(Primitive.QFS, 1).as_tuple() == (6, 6, 1)
    assert module_resources(Primitive.FINAL_ADDING, 4).as_tuple() == (20, 24, 4)
    assert module_resources(Primitive.QAC).as_tuple() == (5, 5, 1)


def test_karatsuba_closed_form_values():
    assert karatsuba_closed_form(16).as_tuple() == (514, 2220, 46)
    est = karatsuba_closed_form(4)
    assert (est.depth, est.cost) == (70, 140)
    assert est.ancillas == Fraction(-38, 3)
    assert est.flags == ["negative-ancillas"]


def test_recursive_values():
    r8 = karatsuba_recursive(8)
    assert (r8.depth, r8.cost) == (218, 612)
    assert karatsuba_recursive(16).ancillas == 394
    assert karatsuba_resources(8, "recursive") == r8
    with pytest.raises(ValueError):
        karatsuba_resources(8, "tabulated")
    with pytest.raises(ValueError):
        karatsuba_closed_form(12)


@pytest.mark.parametrize("n", [4, 8, 16, 32, 64])
def test_recursion_equals_closed_form(n):
    c, r = karatsuba_closed_form(n), karatsuba_recursive(n)
    assert c.depth == r.depth and c.cost == r.cost


def test_ancilla_bases_disagree():
    # reported, never reconciled
    for n in (4, 8, 16, 32):
        assert karatsuba_closed_form(n).ancillas != karatsuba_recursive(n).ancillas


def test_crossover():
    assert cost_crossover() == 8
    assert karatsuba_closed_form(8).cost < grade_school_resources(8).cost
    assert karatsuba_closed_form(4).cost == grade_school_resources(4).cost


def test_comparison_table():
    report = comparison_table([4])
    rows = report.rows
    assert (rows[0]["algorithm"], rows[0]["depth"], rows[0]["cost"], rows[0]["ancillas"]) == ("grade-school", 70, 140, 26)
    kc = rows[1]
    assert (kc["depth"], kc["cost"], kc["ancillas"]) == (70, 140, -12.6667)
    assert "negative-ancillas" in kc["flags"]
    conv = rows[-1]
    assert conv["algorithm"] == "convolution" and conv["basis"] == "asymptotic"
    assert conv["sparse_success_probability"] == pytest.approx(1 / 8)
    assert report.to_csv().splitlines()[0] == ",".join(COLUMNS)


def test_empty_table():
    report = comparison_table([])
    assert report.to_csv() == ",".join(COLUMNS) + "\n"
    assert json.loads(report.to_json())["rows"] == []


def test_table_size():
    assert len(comparison_table([4, 8, 16]).rows) >= 9

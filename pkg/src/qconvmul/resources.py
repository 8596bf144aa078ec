"""
Resource accounting (depth, cost = gate count, ancillas) for the three
multipliers, from the published closed forms and from the Karatsuba
recurrence.

All arithmetic is exact: Fractions throughout, and n**log2(3) is computed
as 3**log2(n), which is an integer for powers of two.

The recurrence additive terms (37n/2 for depth, 24n for cost, 4n for
ancillas) are the differences C(n) - alpha*C(n/2) of the closed forms. For
depth and cost, seeding the recurrence with the grade-school values at
n = 4 reproduces the closed forms exactly. For ancillas it does not: the
closed form is negative at n = 4 (-38/3) while grade-school needs 26.
Both numbers are reported and the negative ones are flagged.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

from .amplification import plan_amplification
from .classical import is_power_of_two
from .convolution import success_probability
from .reversible import Primitive

TABLE_SCHEMA = "qconvmul.resources/1"
COLUMNS = ["algorithm", "n", "depth", "cost", "ancillas", "basis", "flags",
           "success_probability", "n_opt", "sparse_success_probability", "sparse_n_opt"]


@dataclass(frozen=True)
class ResourceEstimate:
    algorithm: str
    n: int
    depth: Fraction
    cost: Fraction
    ancillas: Fraction
    basis: str

    @property
    def flags(self) -> list[str]:
        return [f"negative-{name}" for name in ("depth", "cost", "ancillas")
                if getattr(self, name) < 0]

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.depth, self.cost, self.ancillas


def _pow_log2_3(n: int) -> int:
    # n**log2(3) == 3**log2(n) for n a power of two
    return 3 ** (n.bit_length() - 1)


def grade_school_resources(n: int) -> ResourceEstimate:
    if n < 1:
        raise ValueError("bit width must be at least 1")
    return ResourceEstimate(
        "grade-school", n,
        Fraction(5 * n * n - 5 * n + 10),
        Fraction(11 * n * n - 12 * n + 12),
        Fraction(2 * n * n - 2 * n + 2),
        "closed-form",
    )


def module_resources(kind: Primitive, n: int = 1) -> ResourceEstimate:
    """Per-module counts: QFA^[n], QFS^[n], FinalAdding^[n], and the single QAC."""
    kind = Primitive(kind)
    if n < 1:
        raise ValueError("width must be at least 1")
    if kind is Primitive.QAC:
        if n != 1:
            raise ValueError("QAC counts are given for a single block")
        d, c, a = 5, 5, 1
    elif kind is Primitive.QFA:
        d, c, a = 5 * n, 6 * n, n
    elif kind is Primitive.QFS:
        d, c, a = 6 * n, 6 * n, n
    else:
        d, c, a = 5 * n, 6 * n, n
    return ResourceEstimate(kind.value, n, Fraction(d), Fraction(c), Fraction(a), "closed-form")


def _check_karatsuba_width(n: int) -> None:
    if not is_power_of_two(n) or n < 4:
        raise ValueError(f"Karatsuba width must be a power of two >= 4, got {n}")


def karatsuba_closed_form(n: int) -> ResourceEstimate:
    _check_karatsuba_width(n)
    p = _pow_log2_3(n)
    return ResourceEstimate(
        "karatsuba", n,
        Fraction(37 * n - 78),
        Fraction(332, 9) * p - 48 * n,
        Fraction(58, 27) * p - 8 * n,
        "closed-form",
    )


def karatsuba_recursive(n: int) -> ResourceEstimate:
    _check_karatsuba_width(n)
    depth, cost, anc = grade_school_resources(4).as_tuple()
    m = 4
    while m < n:
        m *= 2
        depth = depth + Fraction(37 * m, 2)
        cost = 3 * cost + 24 * m
        anc = 3 * anc + 4 * m
    return ResourceEstimate("karatsuba", n, depth, cost, anc, "recursive")


def karatsuba_resources(n: int, basis: str = "closed-form") -> ResourceEstimate:
    if basis == "closed-form":
        return karatsuba_closed_form(n)
    if basis == "recursive":
        return karatsuba_recursive(n)
    raise ValueError(f"unknown basis {basis!r}")


def cost_crossover(limit: int = 1 << 20) -> int | None:
    """Smallest power of two n >= 4 where the Karatsuba closed-form cost beats grade-school."""
    n = 4
    while n <= limit:
        if karatsuba_closed_form(n).cost < grade_school_resources(n).cost:
            return n
        n *= 2
    return None


def _render(x: Fraction):
    if x.denominator == 1:
        return int(x)
    return round(float(x), 4)


@dataclass
class ComparisonReport:
    rows: list[dict]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({**row, "flags": ";".join(row["flags"])})
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"schema": TABLE_SCHEMA, "columns": COLUMNS, "rows": self.rows},
                          indent=2) + "\n"


def _row(est: ResourceEstimate, **extra) -> dict:
    row = {
        "algorithm": est.algorithm, "n": est.n,
        "depth": _render(est.depth), "cost": _render(est.cost),
        "ancillas": _render(est.ancillas), "basis": est.basis,
        "flags": est.flags, "success_probability": "", "n_opt": "",
        "sparse_success_probability": "", "sparse_n_opt": "",
    }
    row.update(extra)
    return row


def comparison_table(ns) -> ComparisonReport:
    """
    Rows per width: grade-school, Karatsuba (closed form and recursion, for
    powers of two >= 4) and the convolution multiplier. The convolution
    depth and cost are asymptotic only, so they are rendered symbolically;
    its exact postselection probability and planned Grover count are
    evaluated on the all-ones operands 2**n - 1 and on the single-bit
    operands 2**(n-1), whose probability 1/D is the smallest possible.
    """
    rows = []
    for n in ns:
        rows.append(_row(grade_school_resources(n)))
        if is_power_of_two(n) and n >= 4:
            rows.append(_row(karatsuba_closed_form(n)))
            rows.append(_row(karatsuba_recursive(n)))
        ones = (1 << n) - 1
        top = 1 << (n - 1)
        p = success_probability(ones, ones)
        p_sparse = success_probability(top, top)
        rows.append({
            "algorithm": "convolution", "n": n,
            "depth": "O(sqrt(n) log2(n)^2)", "cost": "O(sqrt(n) log2(n)^2)",
            "ancillas": 0, "basis": "asymptotic", "flags": [],
            "success_probability": p, "n_opt": plan_amplification(p).n_opt,
            "sparse_success_probability": p_sparse,
            "sparse_n_opt": plan_amplification(p_sparse).n_opt,
        })
    return ComparisonReport(rows)

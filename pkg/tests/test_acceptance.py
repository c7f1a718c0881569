"""Acceptance criteria, one test per criterion, all at exact (zero) tolerance.

Each test records a PASS/FAIL line that is repeated in the terminal summary.
"""
import time
from fractions import Fraction

import pytest

from mompoly import lab
from mompoly.bijection import verify_bijectivity
from mompoly.core import FamilySpec, Group
from mompoly.counter import count_dp
from mompoly.patterns import count_naive, enumerate_patterns
from mompoly.polytope import (
    build_system, member, symplectic_half_witness, unitary_dilated_witness, unitary_half_witness,
    verify_vertex_witness,
)
from mompoly.reference import golden, keating_snaith

from conftest import small_specs

KQ2 = small_specs(2)


def test_criterion_01_golden_polynomials(record_criterion):
    failures = []
    for g, k, q in [(Group.U, 2, 1), (Group.U, 3, 1), (Group.SP, 1, 1), (Group.SP, 2, 1), (Group.SP, 1, 2)]:
        spec = FamilySpec(g, k, q)
        fitted = lab.fit(spec)
        if fitted.coeffs != golden(spec).poly.coeffs:
            failures.append(spec.label())
    assert record_criterion(1, "golden polynomial reproduction", not failures, ", ".join(failures))


def test_criterion_02_keating_snaith(record_criterion):
    bad = [q for q in (1, 2, 3) if lab.fit(FamilySpec(Group.U, 1, q)) != keating_snaith(q)]
    assert record_criterion(2, "unitary k=1 matches the product formula", not bad, f"q={bad}" if bad else "q=1,2,3")


def test_criterion_03_polynomiality_and_period_collapse(record_criterion):
    bad = []
    for spec in KQ2:
        if not lab.verify_polynomiality(spec, extra=2).passed:
            bad.append(f"{spec.label()} extra nodes")
        if not lab.verify_quasi_collapse(spec, period=2).passed:
            bad.append(f"{spec.label()} period 2")
    assert record_criterion(3, "polynomiality and period collapse (kq<=2)", not bad, "; ".join(bad))


def test_criterion_04_reciprocity(record_criterion):
    bad = [s.label() for s in KQ2 if not lab.verify_reciprocity(s).passed]
    u21 = FamilySpec(Group.U, 2, 1)
    strict = list(enumerate_patterns(u21, 4, strict=True))
    spot = lab.fit(u21)(-4) == -1 and len(strict) == 1
    if not spot:
        bad.append("P_U(2,1)(-4) spot check")
    assert record_criterion(4, "reciprocity N=1..d+2 (kq<=2)", not bad, "; ".join(bad))


def test_criterion_05_root_classification(record_criterion):
    bad = [s.label() for s in KQ2 if not lab.verify_integer_roots(s).passed]
    assert record_criterion(5, "integer roots and guard band (kq<=2)", not bad, "; ".join(bad))


def test_criterion_06_symmetry(record_criterion):
    specs = KQ2 + [FamilySpec(Group.U, 3, 1)]
    bad = [s.label() for s in specs if not lab.symmetry_defect(s, lab.fit(s)).is_zero()]
    assert record_criterion(6, "symmetry defect is the zero polynomial", not bad, "; ".join(bad))


def test_criterion_07_bijections(record_criterion):
    bad = []
    for spec in KQ2:
        for N in range(5):
            r = verify_bijectivity(spec, N)
            if not r.passed or r.detail["lax_count"] != r.detail["strict_count"]:
                bad.append(f"{spec.label()} N={N}")
    assert record_criterion(7, "shift maps are bijections (kq<=2, N<=4)", not bad, "; ".join(bad))


def test_criterion_08_oracle_equivalence(record_criterion):
    total, bad = 0, []
    for spec in KQ2:
        for strict in (False, True):
            for N in range(7):
                total += 1
                if count_dp(spec, N, strict) != count_naive(spec, N, strict):
                    bad.append(f"{spec.label()} N={N} strict={strict}")
    assert record_criterion(8, "dp equals naive enumeration", not bad, f"{total - len(bad)}/{total} agree")


def test_criterion_09_vertex_witnesses(record_criterion):
    results = {}
    u21 = build_system(FamilySpec(Group.U, 2, 1))
    w = unitary_half_witness(u21)
    results["U(2,1) halves"] = (w.point == (Fraction(1, 2),) * 3 and member(u21, w.point)
                                and verify_vertex_witness(u21, w).passed)
    sp21 = build_system(FamilySpec(Group.SP, 2, 1))
    results["SP(2,1)"] = verify_vertex_witness(sp21, symplectic_half_witness(sp21)).passed
    u24 = build_system(FamilySpec(Group.U, 2, 4))
    w = unitary_dilated_witness(u24)
    r = verify_vertex_witness(u24, w)
    results["16*V U(2,4)"] = r.passed and w.scale == 16 and r.detail["rank"] == u24.dim == 63
    bad = [k for k, v in results.items() if not v]
    assert record_criterion(9, "non-integral vertex witnesses", not bad, "; ".join(bad) or "rank 63/63 for 16*V")


@pytest.fixture(scope="module")
def stretch():
    spec = FamilySpec(Group.U, 2, 2)
    t0 = time.perf_counter()
    poly_report = lab.verify_polynomiality(spec, extra=2)
    poly = lab.fit(spec)
    roots = lab.verify_integer_roots(spec, poly=poly)
    sym = lab.verify_symmetry(spec, poly=poly)
    elapsed = time.perf_counter() - t0
    zeros = sorted((z for z in range(-20, 1) if poly(z) == 0), reverse=True)
    return spec, poly, poly_report, roots, sym, zeros, elapsed


def test_criterion_10_stretch_instance(stretch, record_criterion):
    spec, poly, poly_report, roots, sym, zeros, elapsed = stretch
    literal = set(zeros) == {-1, -2, -3}
    ok_rest = poly_report.passed and sym.passed and spec.symmetry_center == 4 and elapsed < 600
    note = (f"fit N=0..15 + 2 extra nodes {'ok' if poly_report.passed else 'FAILED'}, "
            f"symmetry about -4 {'ok' if sym.passed else 'FAILED'}, {elapsed:.1f}s; "
            f"integer zeros are {zeros[0]}..{zeros[-1]}, not {{-1,-2,-3}}")
    record_criterion(10, "U(2,2) stretch instance", literal and ok_rest, note)
    # everything except the stated root set holds
    assert ok_rest
    assert roots.passed and zeros == list(range(-1, -8, -1))


@pytest.mark.xfail(strict=True, reason="U(2,2) vanishes at -1..-7 (roots run to -(2kq-1) = -7); "
                                       "the criterion's root set {-1,-2,-3} cannot hold")
def test_criterion_10_stated_root_set(stretch):
    zeros = stretch[5]
    assert set(zeros) == {-1, -2, -3}

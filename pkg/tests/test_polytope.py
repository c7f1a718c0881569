import itertools
from fractions import Fraction

import pytest

from mompoly.core import FamilySpec, Group
from mompoly.counter import count_dp
from mompoly.patterns import interlaces
from mompoly.polytope import (
    VertexWitness, build_system, dilated_witness_t, lattice_count_via_polytope, member, nullspace_vector, rref,
    symplectic_half_witness, unitary_dilated_witness, unitary_half_witness, verify_vertex_witness,
)

from conftest import small_specs

H = Fraction(1, 2)


def brute_vertices(system):
    """Vertices by solving every d-subset of inequalities as equalities."""
    d = system.dim
    out = set()
    for subset in itertools.combinations(system.inequalities, d):
        rows = [list(ineq.coeffs) + [ineq.bound] for ineq in subset]
        red, piv = rref(rows)
        if piv != list(range(d)):
            continue
        point = tuple(red[n][-1] for n in range(d))
        if member(system, point):
            out.add(point)
    return out


def test_unitary_pyramid_vertices():
    system = build_system(FamilySpec(Group.U, 2, 1))
    assert system.free == [(1, 1), (2, 2), (1, 3)]
    # reorder to (v11, v13, v22)
    got = {(p[0], p[2], p[1]) for p in brute_vertices(system)}
    assert got == {(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0), (H, H, H)}


def test_symplectic_triangle_vertices():
    system = build_system(FamilySpec(Group.SP, 1, 1))
    assert system.free == [(1, 1), (1, 2)]
    got = {(p[1], p[0]) for p in brute_vertices(system)}
    assert got == {(0, 0), (1, 0), (1, 1)}


def _grid(dim, step=Fraction(1, 4)):
    vals = [step * n for n in range(int(1 / step) + 1)]
    return itertools.product(vals, repeat=dim)


def test_unitary_grid_membership():
    system = build_system(FamilySpec(Group.U, 2, 1))
    for a, b, c in _grid(3):
        mid = 1 - b  # row 2 sums to 1
        row2 = (mid, b)
        closed = 0 <= mid <= 1 and interlaces((a,), row2) and interlaces((c,), row2)
        open_ = 0 < mid < 1 and all(0 < x < 1 for x in (a, b, c)) \
            and interlaces((a,), row2, True) and interlaces((c,), row2, True)
        assert member(system, (a, b, c)) == closed
        assert member(system, (a, b, c), "interior") == open_


def test_symplectic_grid_membership():
    system = build_system(FamilySpec(Group.SP, 1, 1))
    for a, b in _grid(2):
        assert member(system, (a, b)) == (0 <= a <= b <= 1)
        assert member(system, (a, b), "interior") == (0 < a < b < 1)


def test_member_errors():
    system = build_system(FamilySpec(Group.U, 2, 1))
    with pytest.raises(ValueError):
        member(system, (0, 0))
    with pytest.raises(ValueError):
        member(system, (0, 0, 0), "boundary")


def test_fixed_forms_have_integer_coefficients():
    for g in (Group.U, Group.SP):
        for k in range(1, 5):
            for q in range(1, 3):
                system = build_system(FamilySpec(g, k, q))
                for form in system.forms.values():
                    assert all(a.denominator == 1 for a in form.coeffs)
                    assert form.const.denominator == 1


@pytest.mark.parametrize("spec", small_specs())
def test_lattice_points_match_pattern_counts(spec):
    system = build_system(spec)
    top = 4 if spec.dimension <= 3 else 2
    for N in range(top + 1):
        assert lattice_count_via_polytope(spec, N, system=system) == count_dp(spec, N)
        assert lattice_count_via_polytope(spec, N, "interior", system=system) == count_dp(spec, N, True)


def test_hrep_export():
    system = build_system(FamilySpec(Group.U, 2, 1))
    lines = system.to_text().splitlines()
    assert lines[0].startswith("# u,k=2,q=1")
    assert len(lines) == 1 + len(system.inequalities)
    for line, ineq in zip(lines[1:], system.inequalities):
        lhs, rhs = line.split(" <= ")
        coeffs = [int(x) for x in lhs.split()]
        scale = next((Fraction(c) / a for c, a in zip(coeffs, ineq.coeffs) if a), None)
        if scale is not None:
            assert Fraction(rhs) == ineq.bound * scale


def test_unitary_half_witness():
    system = build_system(FamilySpec(Group.U, 2, 1))
    w = unitary_half_witness(system)
    assert w.point == (H, H, H)
    r = verify_vertex_witness(system, w)
    assert r.passed and r.detail["rank"] == 3
    assert not member(system, w.point, "interior")


@pytest.mark.parametrize("k,q", [(2, 1), (3, 1), (2, 2), (4, 1)])
def test_unitary_half_witness_general(k, q):
    system = build_system(FamilySpec(Group.U, k, q))
    assert verify_vertex_witness(system, unitary_half_witness(system)).passed


@pytest.mark.parametrize("k,q", [(2, 1), (2, 2), (3, 1), (4, 1), (3, 2)])
def test_symplectic_half_witness(k, q):
    system = build_system(FamilySpec(Group.SP, k, q))
    w = symplectic_half_witness(system)
    r = verify_vertex_witness(system, w)
    assert r.passed, r.witnesses
    assert system.cell_values(w.point)[(1, 1)] == H
    assert system.cell_values(w.point)[(1, system.spec.row_count)] == H
    assert not member(system, w.point, "interior")


def test_witness_constructors_reject_wrong_family():
    with pytest.raises(ValueError):
        unitary_half_witness(build_system(FamilySpec(Group.U, 1, 2)))
    with pytest.raises(ValueError):
        symplectic_half_witness(build_system(FamilySpec(Group.SP, 1, 2)))
    with pytest.raises(ValueError):
        unitary_dilated_witness(build_system(FamilySpec(Group.U, 3, 1)))
    with pytest.raises(ValueError):
        unitary_dilated_witness(build_system(FamilySpec(Group.U, 2, 1)))


def test_dilated_t_choice():
    assert dilated_witness_t(1) is None
    assert dilated_witness_t(2) == 3
    assert dilated_witness_t(4) == 5
    for q in range(4, 30):
        t = dilated_witness_t(q)
        assert t is not None and (4 * q * q) % t


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_dilated_witness(q):
    system = build_system(FamilySpec(Group.U, 2, q))
    w = unitary_dilated_witness(system)
    r = verify_vertex_witness(system, w)
    assert r.passed, r.witnesses
    assert w.scale == 4 * q
    t = dilated_witness_t(q)
    assert system.cell_values(w.point, w.scale)[(1, 2 * q)] == Fraction(4 * q * q, t)
    assert not member(system, w.point, "interior", w.scale)


def test_underdetermined_witness_is_rejected():
    system = build_system(FamilySpec(Group.U, 2, 1))
    w = unitary_half_witness(system)
    weak = VertexWitness(w.point, w.tight[:2], 1, "weak")
    r = verify_vertex_witness(system, weak)
    assert not r.passed
    vec = r.witnesses[-1]["nullspace"]
    assert any(vec)
    for f, _, _ in weak.tight:
        assert sum(a * v for a, v in zip(f.coeffs, vec)) == 0


def test_integral_point_is_rejected():
    system = build_system(FamilySpec(Group.U, 2, 1))
    tight = [(system.forms[c], Fraction(0), ("lower", c)) for c in system.free]
    r = verify_vertex_witness(system, VertexWitness((0, 0, 0), tight))
    assert not r.passed
    assert {"error": "all coordinates are integers"} in r.witnesses


def test_infeasible_point_is_rejected():
    system = build_system(FamilySpec(Group.U, 2, 1))
    w = unitary_half_witness(system)
    bad = VertexWitness((Fraction(3, 2), H, H), w.tight, 1, "outside")
    r = verify_vertex_witness(system, bad)
    assert not r.passed and "violated" in r.witnesses[0]


def test_nullspace_helper():
    assert nullspace_vector([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]], 2) is None
    assert nullspace_vector([[Fraction(1), Fraction(-1)]], 2) == [1, 1]

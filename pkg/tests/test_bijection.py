import pytest

from mompoly.bijection import DomainError, apply_bijection, apply_inverse, offset, verify_bijectivity
from mompoly.core import FamilySpec, Group, Pattern
from mompoly.patterns import interlacing_pairs

from conftest import small_specs


def test_symplectic_offsets_small():
    s = FamilySpec(Group.SP, 1, 1)
    assert [offset(s, 1, j) for j in (1, 2, 3)] == [1, 2, 1]


@pytest.mark.parametrize("group", [Group.U, Group.SP])
def test_offset_structure(group):
    for k in range(1, 6):
        for q in range(1, 6):
            s = FamilySpec(group, k, q)
            for i, j in s.cells():
                assert 1 <= offset(s, i, j) <= s.bijection_shift - 1
            # each interlacing relation gains exactly one unit of slack
            for big, small in interlacing_pairs(s):
                assert offset(s, *big) - offset(s, *small) == 1


def test_unitary_example():
    s = FamilySpec(Group.U, 2, 1)
    zero = Pattern(s, 0, [[0], [0, 0], [0]])
    image = apply_bijection(zero)
    assert image.N == 4 and str(image) == "[2] [3,1] [2]"
    assert apply_inverse(image) == zero


def test_domain_errors():
    s = FamilySpec(Group.U, 2, 1)
    with pytest.raises(DomainError):
        apply_bijection(Pattern(s, 1, [[1], [1, 1], [0]]))
    with pytest.raises(DomainError):
        apply_inverse(Pattern(s, 4, [[2], [2, 2], [2]]))
    with pytest.raises(DomainError):
        apply_inverse(Pattern(s, 3, [[1], [2, 0], [1]]))


@pytest.mark.parametrize("spec", small_specs())
def test_bijection_exhaustive(spec):
    for N in range(3):
        r = verify_bijectivity(spec, N)
        assert r.passed, r.witnesses
        assert r.detail["lax_count"] == r.detail["strict_count"]


def test_symplectic_example():
    s = FamilySpec(Group.SP, 1, 1)
    image = apply_bijection(Pattern(s, 1, [[0], [1], [0]]))
    assert image.N == 4 and str(image) == "[1] [3] [1]"


def test_distance_from_row_kq_breaks_symplectic_offsets():
    # measuring the distance from row kq instead of 2kq gives a non-positive offset
    s = FamilySpec(Group.SP, 2, 1)
    alt = [2 * s.kq + 2 - 2 * i - abs(s.kq - j) for i, j in s.cells()]
    assert min(alt) <= 0

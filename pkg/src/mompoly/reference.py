"""Closed-form counting polynomials used as ground truth.

Goldens are kept as integer factor lists over a common denominator and
expanded on demand.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import FamilySpec, Group
from .poly import RationalPoly, product


def keating_snaith(q: int) -> RationalPoly:
    """prod_{i,j=1..q} (1 + z/(i+j-1))."""
    if q < 1:
        raise ValueError("q must be positive")
    return product(
        RationalPoly([1, Fraction(1, i + j - 1)]) for i in range(1, q + 1) for j in range(1, q + 1)
    )


def _lin(a: int) -> tuple[int, ...]:
    return (a, 1)  # z + a


# (group, k, q) -> (factors with ascending integer coefficients, denominator)
_FACTORED: dict[tuple[Group, int, int], tuple[list[tuple[int, ...]], int]] = {
    (Group.U, 2, 1): ([_lin(1), _lin(2), _lin(3)], 6),
    (Group.U, 3, 1): ([_lin(1), _lin(2), _lin(3), _lin(4), _lin(5), (21, 6, 1)], 2520),
    (Group.SP, 1, 1): ([_lin(1), _lin(2)], 2),
    (Group.SP, 1, 2): (
        [_lin(1), _lin(2), _lin(3), _lin(4), (5, 2), (1512, 1650, 905, 230, 23)],
        181440,
    ),
    (Group.SP, 2, 1): ([_lin(1), _lin(2), _lin(3), _lin(4), (420, 260, 127, 30, 3)], 10080),
}


@dataclass(frozen=True)
class GoldenPoly:
    spec: FamilySpec
    poly: RationalPoly
    source: str
    factors: tuple[tuple[int, ...], ...] = ()
    denominator: int = 1


def golden(spec: FamilySpec) -> GoldenPoly | None:
    if spec.group is Group.U and spec.k == 1:
        return GoldenPoly(spec, keating_snaith(spec.q), "Keating-Snaith product formula")
    entry = _FACTORED.get((spec.group, spec.k, spec.q))
    if entry is None:
        return None
    factors, denom = entry
    poly = product(RationalPoly(f) for f in factors).scale(Fraction(1, denom))
    return GoldenPoly(spec, poly, "factored closed form", tuple(factors), denom)


def golden_specs() -> list[FamilySpec]:
    return [FamilySpec(g, k, q) for (g, k, q) in _FACTORED]

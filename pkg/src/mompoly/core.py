"""Shared vocabulary: family parameters, row shapes, signatures and patterns.

Rows are numbered bottom-to-top ``j = 1 .. row_count`` and entries within a
row are indexed ``i = 1 .. row_length(j)`` with ``i = 1`` the largest entry.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

Cell = tuple[int, int]  # (i, j)


class Group(str, enum.Enum):
    U = "u"
    SP = "sp"

    @classmethod
    def parse(cls, value: "str | Group") -> "Group":
        if isinstance(value, Group):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown group {value!r}; expected 'u' or 'sp'") from None


class ShapeError(ValueError):
    """Rows or signatures of the wrong length."""


@dataclass(frozen=True)
class FamilySpec:
    group: Group
    k: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "group", Group.parse(self.group))
        if self.k < 1 or self.q < 1:
            raise ValueError(f"k and q must be positive, got k={self.k}, q={self.q}")

    @property
    def kq(self) -> int:
        return self.k * self.q

    @property
    def row_count(self) -> int:
        return 2 * self.kq - 1 if self.group is Group.U else 4 * self.kq - 1

    @property
    def middle_row(self) -> int:
        """The row shared by both half-patterns."""
        return self.kq if self.group is Group.U else 2 * self.kq

    @property
    def dimension(self) -> int:
        kq = self.kq
        if self.group is Group.U:
            return kq * kq - (self.k - 1)
        return kq * (2 * kq + 1) - self.k

    @property
    def cell_count(self) -> int:
        kq = self.kq
        return kq * kq if self.group is Group.U else kq * (2 * kq + 1)

    @property
    def bijection_shift(self) -> int:
        """Dilation gap between a lax family and its strict image."""
        return 2 * self.kq if self.group is Group.U else 2 * self.kq + 1

    @property
    def root_count(self) -> int:
        """Number of consecutive negative integer roots -1, -2, ..."""
        return 2 * self.kq - 1 if self.group is Group.U else 2 * self.kq

    @property
    def symmetry_center(self) -> Fraction:
        """The polynomial is (anti)symmetric about z = -center."""
        if self.group is Group.U:
            return Fraction(self.kq)
        return Fraction(2 * self.kq + 1, 2)

    def row_length(self, j: int) -> int:
        return row_length(self, j)

    @cached_property
    def row_lengths(self) -> tuple[int, ...]:
        return tuple(row_length(self, j) for j in range(1, self.row_count + 1))

    def cells(self) -> Iterator[Cell]:
        """All cells in row-major order, bottom row first."""
        for j in range(1, self.row_count + 1):
            for i in range(1, self.row_length(j) + 1):
                yield (i, j)

    def chains(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Row indices of the two half-patterns, each ordered from its
        length-1 row up to the shared middle row."""
        m, top = self.middle_row, self.row_count
        return tuple(range(1, m + 1)), tuple(range(top, m - 1, -1))

    def label(self) -> str:
        return f"{self.group.value},k={self.k},q={self.q}"


def row_length(spec: FamilySpec, j: int) -> int:
    if not 1 <= j <= spec.row_count:
        raise IndexError(f"row {j} outside 1..{spec.row_count} for {spec.label()}")
    kq = spec.kq
    if spec.group is Group.U:
        return kq - abs(kq - j)
    return kq - abs(2 * kq - j) // 2


def fixed_cells(spec: FamilySpec) -> list[Cell]:
    """Cells solved from the sum constraints, one per constraint."""
    k, q = spec.k, spec.q
    if spec.group is Group.U:
        return [(1, 2 * q * l) for l in range(1, k)]
    kq = spec.kq
    half = k // 2
    cells = [(n // 2, n) for n in range(4 * q, 4 * half * q + 1, 4 * q)]
    cells += [((4 * kq - n) // 2, n) for n in range(4 * (half + 1) * q, 4 * (k - 1) * q + 1, 4 * q)]
    cells.append((1, 4 * kq - 1))
    return cells


def free_index_set(spec: FamilySpec) -> list[Cell]:
    fixed = set(fixed_cells(spec))
    return [c for c in spec.cells() if c not in fixed]


def is_signature(entries: Sequence, strict: bool = False) -> bool:
    if len(entries) == 0 or entries[-1] < 0:
        return False
    if strict:
        return all(a > b for a, b in zip(entries, entries[1:]))
    return all(a >= b for a, b in zip(entries, entries[1:]))


@dataclass(frozen=True)
class Pattern:
    """An integer array ``p(i, j)`` on the row shape of ``spec`` at dilation ``N``.

    Construction only checks the shape; use ``patterns.is_member`` for the
    interlacing, bound and sum conditions.
    """

    spec: FamilySpec
    N: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.N < 0:
            raise ValueError(f"dilation must be non-negative, got {self.N}")
        if tuple(len(r) for r in rows) != self.spec.row_lengths:
            raise ShapeError(
                f"row lengths {[len(r) for r in rows]} do not match {list(self.spec.row_lengths)}"
            )

    def p(self, i: int, j: int) -> int:
        return self.rows[j - 1][i - 1]

    def row_sum(self, j: int) -> int:
        if j <= 0 or j > self.spec.row_count:
            return 0
        return sum(self.rows[j - 1])

    def flat(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def __str__(self):
        return " ".join("[" + ",".join(map(str, r)) + "]" for r in self.rows)

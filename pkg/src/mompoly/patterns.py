"""Membership tests and exhaustive enumeration of the constrained pattern families.

This is the reference ("oracle") engine: slow but direct.  It fills cells one
at a time and checks every interlacing relation against cells already placed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .core import Cell, FamilySpec, Group, Pattern, ShapeError


class BudgetExceeded(RuntimeError):
    """A configurable resource budget (search nodes, DP states) was passed."""

    def __init__(self, message: str, used: int | None = None, N: int | None = None):
        super().__init__(message)
        self.used = used
        self.N = N


DEFAULT_NODE_BUDGET = 50_000_000


@dataclass(frozen=True)
class SumConstraint:
    """The linear condition ``sum_r coeffs[r] * |p^(r)| + n_coef * N == 0``."""

    coeffs: tuple[tuple[int, int], ...]  # (row, coefficient), rows ascending
    n_coef: int = 0

    @property
    def rows(self) -> tuple[int, ...]:
        return tuple(r for r, _ in self.coeffs)

    def coef(self, row: int) -> int:
        return dict(self.coeffs).get(row, 0)

    def evaluate(self, row_sums: dict[int, int] | Sequence[int], N: int) -> int:
        """``row_sums`` is a mapping row -> sum or a 0-based list of row sums."""
        if isinstance(row_sums, dict):
            total = sum(c * row_sums.get(r, 0) for r, c in self.coeffs)
        else:
            total = sum(c * row_sums[r - 1] for r, c in self.coeffs)
        return total + self.n_coef * N


def _combine(terms: dict[int, int], row: int, coef: int, row_count: int) -> None:
    # rows 0 and row_count+1 are the phantom empty rows
    if 1 <= row <= row_count and coef:
        terms[row] = terms.get(row, 0) + coef


def _freeze(terms: dict[int, int], n_coef: int = 0) -> SumConstraint:
    return SumConstraint(tuple(sorted((r, c) for r, c in terms.items() if c)), n_coef)


def sum_constraints(spec: FamilySpec) -> list[SumConstraint]:
    k, q, kq = spec.k, spec.q, spec.kq
    if spec.group is Group.U:
        out = []
        for l in range(1, k):
            row = 2 * q * l
            length = kq - abs(kq - row)
            assert length % 2 == 0, "unitary constrained rows have even length"
            out.append(SumConstraint(((row, 1),), -(length // 2)))
        return out

    top = 4 * kq  # phantom row
    rc = spec.row_count

    def low(terms, j, sign):
        # sign * (|p^(2j)| - 2|p^(2j-1)| + |p^(2j-2)|)
        _combine(terms, 2 * j, sign, rc)
        _combine(terms, 2 * j - 1, -2 * sign, rc)
        _combine(terms, 2 * j - 2, sign, rc)

    def high(terms, j, sign):
        _combine(terms, top - 2 * j, sign, rc)
        _combine(terms, top - 2 * j + 1, -2 * sign, rc)
        _combine(terms, top - 2 * j + 2, sign, rc)

    out = []
    for i in range(1, k // 2 + 1):
        for bracket in (low, high):
            terms: dict[int, int] = {}
            for j in range((2 * i - 2) * q + 1, (2 * i - 1) * q + 1):
                bracket(terms, j, 1)
            for j in range((2 * i - 1) * q + 1, 2 * i * q + 1):
                bracket(terms, j, -1)
            out.append(_freeze(terms))
    if k % 2:
        terms = {}
        for j in range((k - 1) * q + 1, kq + 1):
            low(terms, j, 1)
            high(terms, j, -1)
        out.append(_freeze(terms))
    return out


def interlacing_pairs(spec: FamilySpec) -> list[tuple[Cell, Cell]]:
    """Pairs ``(a, b)`` with the relation ``p(a) >= p(b)`` (``>`` when strict).

    Together with the bounds these are all the order relations of a pattern;
    monotonicity inside a row follows from them.
    """
    pairs: list[tuple[Cell, Cell]] = []
    seen = set()
    for chain in spec.chains():
        for lower, upper in zip(chain, chain[1:]):
            a, b = spec.row_length(lower), spec.row_length(upper)
            for i in range(1, a + 1):
                candidates = [((i, upper), (i, lower))]
                if i + 1 <= b:
                    candidates.append(((i, lower), (i + 1, upper)))
                for pair in candidates:
                    if pair not in seen:
                        seen.add(pair)
                        pairs.append(pair)
    return pairs


def interlaces(lower: Sequence[int], upper: Sequence[int], strict: bool = False) -> bool:
    """True iff ``lower`` interlaces with ``upper`` (``lower`` ≺ ``upper``)."""
    m, n = len(lower), len(upper)
    if n not in (m, m + 1) or m == 0:
        raise ShapeError(f"cannot interlace a row of length {m} into one of length {n}")
    chain: list = []
    for i in range(n):
        chain.append(upper[i])
        if i < m:
            chain.append(lower[i])
    if strict:
        return all(x > y for x, y in zip(chain, chain[1:]))
    return all(x >= y for x, y in zip(chain, chain[1:]))


def row_sum_range(length: int, N: int, strict: bool) -> tuple[int, int]:
    if strict:
        tri = length * (length + 1) // 2
        return tri, length * N - tri
    return 0, length * N


def is_member(p: Pattern, strict: bool = False) -> bool:
    spec, N = p.spec, p.N
    lo, hi = (1, N - 1) if strict else (0, N)
    if any(not lo <= x <= hi for x in p.flat()):
        return False
    for chain in spec.chains():
        for lower, upper in zip(chain, chain[1:]):
            if not interlaces(p.rows[lower - 1], p.rows[upper - 1], strict):
                return False
    if strict:
        # a single-row chain has no neighbour to force distinct entries
        if any(not all(a > b for a, b in zip(r, r[1:])) for r in p.rows):
            return False
    elif any(not all(a >= b for a, b in zip(r, r[1:])) for r in p.rows):
        return False
    sums = [sum(r) for r in p.rows]
    return all(c.evaluate(sums, N) == 0 for c in sum_constraints(spec))


@dataclass
class _SearchPlan:
    cells: list[Cell]
    # for position t: indices (< t) of cells that bound cells[t] from below / above
    below: list[list[int]]
    above: list[list[int]]
    row_end: dict[int, int]  # position -> row completed there
    constraints: list[SumConstraint]
    lengths: tuple[int, ...]
    node_budget: int
    nodes: int = field(default=0)


def _plan(spec: FamilySpec, node_budget: int) -> _SearchPlan:
    cells = list(spec.cells())
    pos = {c: t for t, c in enumerate(cells)}
    below: list[list[int]] = [[] for _ in cells]
    above: list[list[int]] = [[] for _ in cells]
    for big, small in interlacing_pairs(spec):
        pb, ps = pos[big], pos[small]
        if pb < ps:
            above[ps].append(pb)
        else:
            below[pb].append(ps)
    row_end = {}
    for t, (i, j) in enumerate(cells):
        if i == spec.row_length(j):
            row_end[t] = j
    return _SearchPlan(cells, below, above, row_end, sum_constraints(spec), spec.row_lengths, node_budget)


def enumerate_patterns(
    spec: FamilySpec, N: int, strict: bool = False, node_budget: int = DEFAULT_NODE_BUDGET
) -> Iterator[Pattern]:
    """Yield every member exactly once, lexicographically in row-major order."""
    if N < 0:
        raise ValueError("N must be non-negative")
    plan = _plan(spec, node_budget)
    lo, hi = (1, N - 1) if strict else (0, N)
    gap = 1 if strict else 0
    n = len(plan.cells)
    values = [0] * n
    row_sums = [0] * spec.row_count
    ranges = [row_sum_range(length, N, strict) for length in plan.lengths]

    # contribution window of rows > j to each constraint
    tails = []
    for c in plan.constraints:
        tail = [(0, 0)] * (spec.row_count + 1)
        acc_lo = acc_hi = 0
        for j in range(spec.row_count, 0, -1):
            tail[j] = (acc_lo, acc_hi)
            coef = c.coef(j)
            r_lo, r_hi = ranges[j - 1]
            acc_lo += min(coef * r_lo, coef * r_hi)
            acc_hi += max(coef * r_lo, coef * r_hi)
        tails.append(tail)

    def feasible_after_row(j: int) -> bool:
        for c, tail in zip(plan.constraints, tails):
            partial = sum(coef * row_sums[r - 1] for r, coef in c.coeffs if r <= j) + c.n_coef * N
            t_lo, t_hi = tail[j]
            if not partial + t_lo <= 0 <= partial + t_hi:
                return False
        return True

    def rec(t: int) -> Iterator[Pattern]:
        if t == n:
            rows, s = [], 0
            for length in plan.lengths:
                rows.append(tuple(values[s : s + length]))
                s += length
            yield Pattern(spec, N, tuple(rows))
            return
        v_lo = max([lo] + [values[b] + gap for b in plan.below[t]])
        v_hi = min([hi] + [values[a] - gap for a in plan.above[t]])
        j = plan.cells[t][1]
        for v in range(v_lo, v_hi + 1):
            plan.nodes += 1
            if plan.nodes > plan.node_budget:
                raise BudgetExceeded(
                    f"naive enumeration passed {plan.node_budget} nodes for {spec.label()} N={N}",
                    used=plan.nodes,
                    N=N,
                )
            values[t] = v
            row_sums[j - 1] += v
            if t not in plan.row_end or feasible_after_row(j):
                yield from rec(t + 1)
            row_sums[j - 1] -= v

    yield from rec(0)


def count_naive(
    spec: FamilySpec, N: int, strict: bool = False, node_budget: int = DEFAULT_NODE_BUDGET
) -> int:
    return sum(1 for _ in enumerate_patterns(spec, N, strict, node_budget))

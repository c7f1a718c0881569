"""H-representation of the pattern polytopes in free-cell coordinates.

Every cell value is an affine form ``a . x + c * N`` in the free coordinates
``x`` (``N`` being the dilation); the fixed cells' forms come from solving the
sum constraints.  Inequalities read ``a . x <= b * N`` (``<`` in interior mode).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .core import Cell, FamilySpec, Group, fixed_cells, free_index_set
from .patterns import BudgetExceeded, DEFAULT_NODE_BUDGET, interlacing_pairs, sum_constraints
from .report import VerdictReport

ZERO = Fraction(0)


@dataclass(frozen=True)
class AffineForm:
    coeffs: tuple[Fraction, ...]
    const: Fraction  # multiplied by the dilation

    def __call__(self, x: Sequence, N=1) -> Fraction:
        return sum((a * v for a, v in zip(self.coeffs, x) if a), ZERO) + self.const * N

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.const - other.const)


@dataclass(frozen=True)
class Inequality:
    coeffs: tuple[Fraction, ...]
    bound: Fraction  # per unit dilation
    label: tuple

    def slack(self, x: Sequence, N=1) -> Fraction:
        return self.bound * N - sum((a * v for a, v in zip(self.coeffs, x) if a), ZERO)


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals and the pivot columns."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace_vector(rows: list[list[Fraction]], ncols: int) -> list[Fraction] | None:
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    vec = [ZERO] * ncols
    vec[f] = Fraction(1)
    for row, pc in zip(red, pivots):
        vec[pc] = -row[f]
    return vec


@dataclass
class ConstraintSystem:
    spec: FamilySpec
    free: list[Cell]
    forms: dict[Cell, AffineForm]
    inequalities: list[Inequality] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.free)

    def cell_values(self, x: Sequence, N=1) -> dict[Cell, Fraction]:
        return {c: f(x, N) for c, f in self.forms.items()}

    def to_text(self) -> str:
        """One inequality per line: integer coefficients, relation, rational bound."""
        lines = [f"# {self.spec.label()} variables: " + " ".join(f"v{i}_{j}" for i, j in self.free)]
        for ineq in self.inequalities:
            scale = lcm(*(a.denominator for a in ineq.coeffs)) if ineq.coeffs else 1
            coeffs = " ".join(str(int(a * scale)) for a in ineq.coeffs)
            b = ineq.bound * scale
            lines.append(f"{coeffs} <= {b.numerator}/{b.denominator}")
        return "\n".join(lines) + "\n"


def _solve_fixed(spec: FamilySpec, free: list[Cell]) -> dict[Cell, AffineForm]:
    constraints = sum_constraints(spec)
    fixed = fixed_cells(spec)
    d = len(free)
    idx = {c: n for n, c in enumerate(free)}
    # A x_fixed + B x_free + n_coef N = 0  ->  [A | -B | -n_coef]
    aug = []
    for con in constraints:
        row = [Fraction(con.coef(j)) for (_, j) in fixed]
        rhs = [ZERO] * d
        for (i, j), n in idx.items():
            rhs[n] = Fraction(-con.coef(j))
        aug.append(row + rhs + [Fraction(-con.n_coef)])
    red, pivots = rref(aug)
    if pivots[: len(fixed)] != list(range(len(fixed))):
        raise ArithmeticError(f"sum constraints do not determine the fixed cells of {spec.label()}")
    return {
        cell: AffineForm(tuple(red[n][len(fixed) : len(fixed) + d]), red[n][-1])
        for n, cell in enumerate(fixed)
    }


def build_system(spec: FamilySpec) -> ConstraintSystem:
    free = free_index_set(spec)
    d = len(free)
    forms: dict[Cell, AffineForm] = {}
    for n, c in enumerate(free):
        forms[c] = AffineForm(tuple(Fraction(int(m == n)) for m in range(d)), ZERO)
    forms.update(_solve_fixed(spec, free))
    forms = {c: forms[c] for c in spec.cells()}
    ineqs: list[Inequality] = []
    for c, f in forms.items():
        ineqs.append(Inequality(tuple(-a for a in f.coeffs), f.const, ("lower", c)))
        ineqs.append(Inequality(f.coeffs, 1 - f.const, ("upper", c)))
    for big, small in interlacing_pairs(spec):
        diff = forms[small] - forms[big]
        ineqs.append(Inequality(diff.coeffs, -diff.const, ("interlace", big, small)))
    return ConstraintSystem(spec, free, forms, ineqs)


def member(system: ConstraintSystem, point: Sequence, mode: str = "closed", N=1) -> bool:
    if len(point) != system.dim:
        raise ValueError(f"point has {len(point)} coordinates, system has {system.dim}")
    if mode not in ("closed", "interior"):
        raise ValueError(f"unknown mode {mode!r}")
    pt = [Fraction(v) for v in point]
    if mode == "closed":
        return all(ineq.slack(pt, N) >= 0 for ineq in system.inequalities)
    return all(ineq.slack(pt, N) > 0 for ineq in system.inequalities)


def lattice_count_via_polytope(spec: FamilySpec, N: int, mode: str = "closed",
                               node_budget: int = DEFAULT_NODE_BUDGET,
                               system: ConstraintSystem | None = None) -> int:
    """Integer points of the free-cell space inside N*V (or its interior).

    Fixed cells may take non-integral values here; only free coordinates are
    required to be integers.
    """
    system = system or build_system(spec)
    d = system.dim
    interior = mode == "interior"
    lo, hi = (1, N - 1) if interior else (0, N)
    # check each inequality as soon as its last variable is assigned
    by_last: list[list[Inequality]] = [[] for _ in range(d)]
    for ineq in system.inequalities:
        nz = [n for n, a in enumerate(ineq.coeffs) if a]
        if not nz:
            ok = ineq.bound * N > 0 if interior else ineq.bound * N >= 0
            if not ok:
                return 0
            continue
        by_last[nz[-1]].append(ineq)
    x = [0] * d
    nodes = 0

    def rec(t: int) -> int:
        nonlocal nodes
        if t == d:
            return 1
        total = 0
        for v in range(lo, hi + 1):
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded(f"polytope enumeration passed {node_budget} nodes", used=nodes, N=N)
            x[t] = v
            good = True
            for ineq in by_last[t]:
                s = ineq.slack(x, N)
                if s < 0 or (interior and s == 0):
                    good = False
                    break
            if good:
                total += rec(t + 1)
        x[t] = 0
        return total

    return rec(0)


@dataclass
class VertexWitness:
    """A candidate vertex of ``scale * V`` and the faces that pin it down.

    ``tight`` holds equations ``form == value`` (value already scaled).
    """

    point: tuple[Fraction, ...]
    tight: list[tuple[AffineForm, Fraction, tuple]]
    scale: int = 1
    name: str = ""
    cell_values: dict[Cell, Fraction] | None = None


def _form_eq(system, a: Cell, b: Cell | None, value=ZERO, label=()):
    f = system.forms[a] - system.forms[b] if b is not None else system.forms[a]
    return (f, Fraction(value), label)


def unitary_half_witness(system: ConstraintSystem) -> VertexWitness:
    """All coordinates 1/2: every interlacing relation made tight, plus the
    fixed entry of each constrained row equal to its neighbour."""
    spec = system.spec
    if spec.group is not Group.U or spec.k < 2:
        raise ValueError("the all-halves vertex needs the unitary family with k >= 2")
    tight = [_form_eq(system, big, small, 0, ("interlace", big, small)) for big, small in interlacing_pairs(spec)]
    for cell in fixed_cells(spec):
        tight.append(_form_eq(system, cell, (2, cell[1]), 0, ("fixed=next", cell)))
    point = tuple(Fraction(1, 2) for _ in system.free)
    values = {c: Fraction(1, 2) for c in system.forms}
    return VertexWitness(point, tight, 1, "unitary all-halves", values)


def symplectic_half_witness(system: ConstraintSystem) -> VertexWitness:
    """First column 1 on rows 2..4kq-2, the rest of rows 3..4kq-3 zero; the two
    end cells are then forced to 1/2 by the constraints."""
    spec = system.spec
    if spec.group is not Group.SP or spec.k < 2:
        raise ValueError("the symplectic half vertex needs k >= 2")
    top = spec.row_count
    tight, values = [], {}
    for j in range(1, top + 1):
        for i in range(1, spec.row_length(j) + 1):
            if j in (1, top):
                values[(i, j)] = Fraction(1, 2)
            elif i == 1:
                values[(i, j)] = Fraction(1)
                tight.append(_form_eq(system, (i, j), None, 1, ("upper", (i, j))))
            else:
                values[(i, j)] = ZERO
                if 3 <= j <= top - 2:
                    tight.append(_form_eq(system, (i, j), None, 0, ("lower", (i, j))))
    point = tuple(values[c] for c in system.free)
    return VertexWitness(point, tight, 1, "symplectic half-ends", values)


def dilated_witness_t(q: int) -> int | None:
    """Smallest t in q..2q not dividing 4q^2, if any."""
    return next((t for t in range(q, 2 * q + 1) if (4 * q * q) % t), None)


def unitary_dilated_witness(system: ConstraintSystem, t: int | None = None) -> VertexWitness:
    """Vertex of 4q * V for k = 2: the first t entries of row 2q equal 4q^2/t,
    everything not forced equal to them through interlacing set to zero."""
    spec = system.spec
    if spec.group is not Group.U or spec.k != 2:
        raise ValueError("the dilated witness is built for the unitary family with k = 2")
    q = spec.q
    t = t if t is not None else dilated_witness_t(q)
    if t is None or not q <= t <= 2 * q:
        raise ValueError(f"no admissible t in {q}..{2 * q} for q={q}")
    scale = 4 * q
    a = Fraction(4 * q * q, t)
    mid = 2 * q
    values: dict[Cell, Fraction] = {}
    for j in range(1, spec.row_count + 1):
        depth = abs(mid - j)
        for i in range(1, spec.row_length(j) + 1):
            values[(i, j)] = a if i <= t - depth else ZERO
    tight = []
    tight.append(_form_eq(system, (t, mid), (1, mid), 0, ("row-equal", t)))
    for (i, j), v in values.items():
        if v == 0:
            tight.append(_form_eq(system, (i, j), None, 0, ("lower", (i, j))))
    for big, small in interlacing_pairs(spec):
        if values[big] == values[small] == a:
            tight.append(_form_eq(system, big, small, 0, ("interlace", big, small)))
    point = tuple(values[c] for c in system.free)
    return VertexWitness(point, tight, scale, f"unitary dilated t={t}", values)


def verify_vertex_witness(system: ConstraintSystem, witness: VertexWitness) -> VerdictReport:
    spec = system.spec
    pt, N = witness.point, witness.scale
    params = {"group": spec.group.value, "k": spec.k, "q": spec.q, "scale": N, "witness": witness.name}
    witnesses = []
    violated = [ineq.label for ineq in system.inequalities if ineq.slack(pt, N) < 0]
    if violated:
        witnesses.append({"violated": violated[:10]})
    if witness.cell_values is not None:
        actual = system.cell_values(pt, N)
        off = {f"{c}": (actual[c], v) for c, v in witness.cell_values.items() if actual[c] != v}
        if off:
            witnesses.append({"cell_mismatch": off})
    loose = [lab for f, v, lab in witness.tight if f(pt, N) != v]
    if loose:
        witnesses.append({"not_tight": loose[:10]})
    rows = [list(f.coeffs) for f, _, _ in witness.tight]
    _, pivots = rref(rows) if rows else ([], [])
    rank = len(pivots)
    if rank < system.dim:
        witnesses.append({"rank": rank, "dim": system.dim, "nullspace": nullspace_vector(rows, system.dim)})
    non_integral = [f"v{c[0]}_{c[1]}" for c, v in zip(system.free, pt) if v.denominator != 1]
    if not non_integral:
        witnesses.append({"error": "all coordinates are integers"})
    return VerdictReport(
        "vertex", params, not witnesses, witnesses,
        {"rank": rank, "dim": system.dim, "tight_faces": len(witness.tight),
         "non_integral_coordinates": non_integral[:10],
         "sample_value": next((v for v in pt if v.denominator != 1), None)},
    )

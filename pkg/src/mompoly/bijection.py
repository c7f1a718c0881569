"""The cellwise shift maps from lax patterns at dilation N onto strict patterns
at dilation N + shift, and their inverses."""
from __future__ import annotations

from .core import FamilySpec, Group, Pattern
from .patterns import enumerate_patterns, is_member, DEFAULT_NODE_BUDGET
from .report import VerdictReport


class DomainError(ValueError):
    """Input pattern is not in the family the map is defined on."""


def offset(spec: FamilySpec, i: int, j: int) -> int:
    kq = spec.kq
    if spec.group is Group.U:
        return 2 * kq + 1 - abs(kq - j) - 2 * i
    # distance is measured from the symplectic middle row 2kq
    return 2 * kq + 2 - 2 * i - abs(2 * kq - j)


def _shifted(p: Pattern, sign: int, N: int) -> Pattern:
    spec = p.spec
    rows = tuple(
        tuple(x + sign * offset(spec, i, j) for i, x in enumerate(row, start=1))
        for j, row in enumerate(p.rows, start=1)
    )
    return Pattern(spec, N, rows)


def apply_bijection(p: Pattern) -> Pattern:
    if not is_member(p, strict=False):
        raise DomainError(f"{p} is not a lax {p.spec.label()} pattern at N={p.N}")
    image = _shifted(p, +1, p.N + p.spec.bijection_shift)
    if not is_member(image, strict=True):
        raise AssertionError(f"image {image} of {p} is not strict")
    return image


def apply_inverse(u: Pattern) -> Pattern:
    shift = u.spec.bijection_shift
    if u.N < shift or not is_member(u, strict=True):
        raise DomainError(f"{u} is not a strict {u.spec.label()} pattern at N={u.N} >= {shift}")
    pre = _shifted(u, -1, u.N - shift)
    if not is_member(pre, strict=False):
        raise AssertionError(f"preimage {pre} of {u} is not a lax pattern")
    return pre


def verify_bijectivity(spec: FamilySpec, N: int, node_budget: int = DEFAULT_NODE_BUDGET) -> VerdictReport:
    """Enumerate both sides independently and check the maps are mutually inverse."""
    shift = spec.bijection_shift
    lax = list(enumerate_patterns(spec, N, False, node_budget))
    strict = list(enumerate_patterns(spec, N + shift, True, node_budget))
    witnesses = []
    strict_rows = {u.rows for u in strict}
    images = set()
    for p in lax:
        try:
            b = apply_bijection(p)
        except (AssertionError, DomainError) as exc:
            witnesses.append({"pattern": str(p), "error": str(exc)})
            continue
        if b.rows not in strict_rows:
            witnesses.append({"pattern": str(p), "image": str(b), "error": "image not enumerated"})
        elif apply_inverse(b).rows != p.rows:
            witnesses.append({"pattern": str(p), "error": "round trip failed"})
        images.add(b.rows)
    for u in strict:
        try:
            v = apply_inverse(u)
        except (AssertionError, DomainError) as exc:
            witnesses.append({"pattern": str(u), "error": str(exc)})
            continue
        if apply_bijection(v).rows != u.rows:
            witnesses.append({"pattern": str(u), "error": "inverse round trip failed"})
    if len(lax) != len(strict):
        witnesses.append({"lax_count": len(lax), "strict_count": len(strict)})
    if images != strict_rows and not witnesses:
        witnesses.append({"error": "image set differs from strict family"})
    return VerdictReport(
        claim="bijection",
        params={"group": spec.group.value, "k": spec.k, "q": spec.q, "N": N},
        passed=not witnesses,
        witnesses=witnesses[:20],
        detail={"lax_count": len(lax), "strict_count": len(strict), "strict_N": N + shift},
    )

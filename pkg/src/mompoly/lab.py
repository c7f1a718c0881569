"""Fitting the counting polynomials and checking their structural claims.

Fits always use exactly the nodes N = 0..d, d being the expected degree; any
further counts are used for verification only.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .core import FamilySpec
from .counter import DEFAULT_STATE_BUDGET, CountCache, count_dp, count_series
from .poly import RationalPoly, fit_quasi, interpolate
from .report import POLY_SCHEMA, VerdictReport

_FITS: dict[FamilySpec, RationalPoly] = {}


def _params(spec: FamilySpec, **extra) -> dict:
    return {"group": spec.group.value, "k": spec.k, "q": spec.q, **extra}


def fit(spec: FamilySpec, *, cache: CountCache | None = None,
        state_budget: int = DEFAULT_STATE_BUDGET, workers: int = 1) -> RationalPoly:
    if spec not in _FITS:
        table = count_series(spec, spec.dimension, state_budget=state_budget, workers=workers, cache=cache)
        _FITS[spec] = interpolate(table, spec.dimension)
    return _FITS[spec]


def poly_json(spec: FamilySpec, poly: RationalPoly) -> dict:
    return {
        "schema": POLY_SCHEMA,
        "group": spec.group.value,
        "k": spec.k,
        "q": spec.q,
        "degree": poly.degree if not poly.is_zero() else None,
        "coeffs": poly.coeff_strings(),
    }


def verify_polynomiality(spec: FamilySpec, extra: int = 2, *, cache: CountCache | None = None,
                         state_budget: int = DEFAULT_STATE_BUDGET, workers: int = 1) -> VerdictReport:
    if extra < 1:
        raise ValueError("extra must be at least 1")
    d = spec.dimension
    table = count_series(spec, d + extra, state_budget=state_budget, workers=workers, cache=cache)
    poly = interpolate(table, d)
    _FITS.setdefault(spec, poly)
    witnesses = []
    for N in range(d + 1, d + extra + 1):
        if poly(N) != table[N]:
            witnesses.append({"N": N, "count": table[N], "predicted": poly(N)})
    if poly.degree != d:
        witnesses.append({"fitted_degree": poly.degree, "expected_degree": d})
    return VerdictReport(
        "polynomiality", _params(spec, extra=extra), not witnesses, witnesses,
        {"degree": poly.degree, "coeffs": poly.coeff_strings(),
         "checked_N": list(range(d + 1, d + extra + 1))},
    )


def verify_quasi_collapse(spec: FamilySpec, period: int = 2, *, cache: CountCache | None = None,
                          state_budget: int = DEFAULT_STATE_BUDGET, workers: int = 1) -> VerdictReport:
    """Fit every residue class mod ``period`` separately; they must coincide."""
    d = spec.dimension
    n_max = period * (d + 1) - 1
    table = count_series(spec, n_max, state_budget=state_budget, workers=workers, cache=cache)
    qp = fit_quasi(table, period, d)
    witnesses = []
    for r, g in enumerate(qp.constituents):
        if g != qp.constituents[0]:
            witnesses.append({"residue": r, "coeffs": g.coeff_strings()})
    return VerdictReport(
        "quasi_collapse", _params(spec, period=period), qp.collapsed(), witnesses,
        {"n_max": n_max, "constituent_degrees": [g.degree for g in qp.constituents]},
    )


def verify_reciprocity(spec: FamilySpec, N_range: Iterable[int] | None = None, *,
                       poly: RationalPoly | None = None, cache: CountCache | None = None,
                       state_budget: int = DEFAULT_STATE_BUDGET) -> VerdictReport:
    """P(-N) == (-1)^d * (number of strict patterns at dilation N)."""
    poly = poly if poly is not None else fit(spec, cache=cache, state_budget=state_budget)
    d = spec.dimension
    Ns = list(N_range) if N_range is not None else list(range(1, d + 3))
    sign = -1 if d % 2 else 1
    witnesses, values = [], {}
    for N in Ns:
        strict = cache.get(spec, N, True) if cache else None
        if strict is None:
            strict = count_dp(spec, N, True, state_budget)
            if cache:
                cache.put(spec, N, True, strict)
        values[N] = strict
        if poly(-N) != sign * strict:
            witnesses.append({"N": N, "P(-N)": poly(-N), "strict_count": strict})
    return VerdictReport(
        "reciprocity", _params(spec, N_range=Ns), not witnesses, witnesses,
        {"sign": sign, "strict_counts": values},
    )


def rational_roots(poly: RationalPoly) -> dict[Fraction, int]:
    """All rational roots with multiplicity, by exact factorization over QQ."""
    import sympy

    z = sympy.Symbol("z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * z**i for i, c in enumerate(poly.coeffs))
    _, factors = sympy.Poly(expr, z, domain="QQ").factor_list()
    out: dict[Fraction, int] = {}
    for f, mult in factors:
        if f.degree() == 1:
            a, b = f.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            out[Fraction(int(r.p), int(r.q))] = out.get(Fraction(int(r.p), int(r.q)), 0) + mult
    return dict(sorted(out.items()))


def verify_integer_roots(spec: FamilySpec, *, poly: RationalPoly | None = None,
                         cache: CountCache | None = None,
                         state_budget: int = DEFAULT_STATE_BUDGET) -> VerdictReport:
    """Zeros exactly at -1..-r; none on the guard band -(r+1)..-(r+2kq+2); P >= 1 on 0..d.

    Beyond the band the symmetry maps negative arguments onto N >= 0, where the
    count is at least one, so the band plus symmetry covers all integers.
    """
    poly = poly if poly is not None else fit(spec, cache=cache, state_budget=state_budget)
    r, d = spec.root_count, spec.dimension
    band = list(range(r + 1, r + 2 * spec.kq + 3))
    witnesses = []
    for m in range(1, r + 1):
        if poly(-m) != 0:
            witnesses.append({"expected_root": -m, "value": poly(-m)})
    for m in band:
        if poly(-m) == 0:
            witnesses.append({"unexpected_root": -m})
    for N in range(0, d + 1):
        if poly(N) < 1:
            witnesses.append({"N": N, "value": poly(N), "error": "P(N) < 1"})
    detail = {
        "roots": [-m for m in range(1, r + 1)],
        "multiplicities": {-m: poly.root_multiplicity(-m) for m in range(1, r + 1) if poly(-m) == 0},
        "guard_band": [-band[0], -band[-1]],
    }
    if poly.degree <= 16:
        detail["rational_roots"] = {str(k): v for k, v in rational_roots(poly).items()}
    return VerdictReport("roots", _params(spec), not witnesses, witnesses, detail)


def symmetry_defect(spec: FamilySpec, poly: RationalPoly) -> RationalPoly:
    """Q(s) = P(-c + s) - (-1)^d P(-c - s); identically zero iff the symmetry holds."""
    c = spec.symmetry_center
    sign = -1 if spec.dimension % 2 else 1
    centered = poly.taylor_shift(-c)
    return centered - centered.reflect().scale(sign)


def verify_symmetry(spec: FamilySpec, *, poly: RationalPoly | None = None,
                    cache: CountCache | None = None,
                    state_budget: int = DEFAULT_STATE_BUDGET) -> VerdictReport:
    poly = poly if poly is not None else fit(spec, cache=cache, state_budget=state_budget)
    q = symmetry_defect(spec, poly)
    witnesses = [] if q.is_zero() else [{"defect_coeffs": q.coeff_strings()}]
    return VerdictReport(
        "symmetry", _params(spec), q.is_zero(), witnesses,
        {"center": -spec.symmetry_center, "degree": spec.dimension},
    )

"""Dense univariate polynomials over the rationals, plus interpolation."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Number = int | Fraction


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RationalPoly:
    """Coefficients in ascending degree; the zero polynomial has none."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, c) -> "RationalPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "RationalPoly":
        return cls([0, 1])

    @property
    def degree(self) -> float | int:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, z) -> Fraction:
        z = _frac(z)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other) -> "RationalPoly":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "RationalPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "RationalPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "RationalPoly":
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RationalPoly":
        out = RationalPoly([1])
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "RationalPoly":
        c = _frac(c)
        return RationalPoly(x * c for x in self.coeffs)

    def compose_affine(self, a, b) -> "RationalPoly":
        """The polynomial z -> self(a*z + b), by Horner over polynomials."""
        inner = RationalPoly([b, a])
        acc = RationalPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def taylor_shift(self, a) -> "RationalPoly":
        """z -> self(z + a)."""
        return self.compose_affine(1, a)

    def reflect(self) -> "RationalPoly":
        """z -> self(-z)."""
        return RationalPoly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def divmod_linear(self, root) -> tuple["RationalPoly", Fraction]:
        """Synthetic division by (z - root): quotient and remainder."""
        root = _frac(root)
        if self.is_zero():
            return RationalPoly(), Fraction(0)
        out = []
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * root + c
            out.append(acc)
        rem = out.pop()
        return RationalPoly(reversed(out)), rem

    def root_multiplicity(self, root) -> int:
        if self.is_zero():
            raise ValueError("every point is a root of the zero polynomial")
        m, p = 0, self
        while True:
            quo, rem = p.divmod_linear(root)
            if rem != 0:
                return m
            m, p = m + 1, quo

    def coeff_strings(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "RationalPoly":
        return cls(Fraction(s) for s in items)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}" + (f"*{mono}" if mono else "")
            terms.append(("-" if c < 0 else "+") + " " + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _coerce(x) -> RationalPoly:
    return x if isinstance(x, RationalPoly) else RationalPoly([x])


def product(factors: Iterable[RationalPoly]) -> RationalPoly:
    out = RationalPoly([1])
    for f in factors:
        out = out * f
    return out


def interpolate_points(points: Sequence[tuple[Number, Number]]) -> RationalPoly:
    """The unique polynomial of degree < len(points) through ``points``
    (Newton divided differences, exact)."""
    xs = [_frac(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    coef = [_frac(y) for _, y in points]
    n = len(xs)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level])
    out = RationalPoly()
    for i in range(n - 1, -1, -1):
        out = out * RationalPoly([-xs[i], 1]) + coef[i]
    return out


def interpolate(table: Mapping[int, int] | "object", degree: int) -> RationalPoly:
    """Fit through N = 0..degree of a count table (a mapping or CountTable)."""
    entries = getattr(table, "entries", table)
    missing = [N for N in range(degree + 1) if N not in entries]
    if missing:
        raise ValueError(f"count table lacks interpolation nodes {missing}")
    return interpolate_points([(N, entries[N]) for N in range(degree + 1)])


@dataclass(frozen=True)
class QuasiPoly:
    """``constituents[r]`` applies to arguments congruent to r modulo the period."""

    constituents: tuple[RationalPoly, ...]

    @property
    def period(self) -> int:
        return len(self.constituents)

    def __call__(self, x: int) -> Fraction:
        return self.constituents[x % self.period](x)

    def collapsed(self) -> bool:
        return all(c == self.constituents[0] for c in self.constituents)


def fit_quasi(table, period: int, degree: int) -> QuasiPoly:
    """Independent fits per residue class, each on its first degree+1 nodes."""
    if period < 1:
        raise ValueError("period must be positive")
    entries = getattr(table, "entries", table)
    parts = []
    for r in range(period):
        nodes = sorted(N for N in entries if N % period == r)[: degree + 1]
        if len(nodes) < degree + 1:
            raise ValueError(
                f"residue {r} mod {period} has {len(nodes)} nodes, need {degree + 1}"
            )
        parts.append(interpolate_points([(N, entries[N]) for N in nodes]))
    return QuasiPoly(tuple(parts))

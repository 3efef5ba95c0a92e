"""Univariate polynomials over exact rationals.

Dense coefficient lists (low degree first) are plenty at this package's scale:
degrees stay around 2n.  Root-form polynomials keep (leading, roots) unexpanded
so the numeric search can evaluate them without coefficient blow-up.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Sequence

from .exactnum import Q, rat_str

__all__ = [
    "UniPoly",
    "RootFormPoly",
    "PartialFractionDecomp",
    "partial_fractions",
    "alternating_moment",
]


@dataclass(frozen=True)
class UniPoly:
    """Polynomial sum(coeffs[i] * x^i); trailing zeros trimmed on construction."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence = ()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        """Degree; -1 stands in for the zero polynomial's -infinity."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        """Exact Horner evaluation."""
        x = Q(x)
        acc = Q(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            c = Q(other)
            return UniPoly([c * a for a in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Q(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def divrem(self, g: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """Exact division with remainder: self = g*q + r, deg r < deg g."""
        if g.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        r = list(self.coeffs)
        dg = g.degree
        lead = g.coeffs[-1]
        q = [Q(0)] * max(len(r) - dg, 0)
        for i in range(len(r) - 1, dg - 1, -1):
            if r[i] == 0:
                continue
            c = r[i] / lead
            q[i - dg] = c
            for j, gc in enumerate(g.coeffs):
                r[i - dg + j] -= c * gc
        return UniPoly(q), UniPoly(r)

    def to_json(self) -> list[str]:
        return [rat_str(c) for c in self.coeffs]

    @staticmethod
    def constant(c) -> "UniPoly":
        return UniPoly([c])

    @staticmethod
    def identity() -> "UniPoly":
        """The polynomial x."""
        return UniPoly([0, 1])

    @staticmethod
    def from_roots(leading, roots: Sequence) -> "UniPoly":
        out = UniPoly.constant(leading)
        for r in roots:
            out = out * UniPoly([-Q(r), 1])
        return out


@dataclass(frozen=True)
class RootFormPoly:
    """leading * prod(x - root); expanded only when exact arithmetic needs it."""

    leading: object
    roots: tuple

    def __init__(self, leading, roots: Sequence):
        object.__setattr__(self, "leading", Q(leading))
        object.__setattr__(self, "roots", tuple(Q(r) for r in roots))

    @property
    def degree(self) -> int:
        return len(self.roots)

    def __call__(self, x):
        x = Q(x)
        acc = self.leading
        for r in self.roots:
            acc *= x - r
        return acc

    def expand(self) -> UniPoly:
        return UniPoly.from_roots(self.leading, self.roots)


@dataclass(frozen=True)
class PartialFractionDecomp:
    """Simple-pole decomposition: sum of coefficient/(x - pole)."""

    poles: tuple  # of (pole_location, coefficient) pairs

    def __call__(self, x):
        x = Q(x)
        return sum((c / (x - p) for p, c in self.poles), Q(0))


def partial_fractions(a, b: int) -> PartialFractionDecomp:
    """Decompose 1/(x-a)(x-a-1)...(x-a-b+1) into simple poles at a, .., a+b-1.

    The residue at a+i is (-1)^(b-1-i) / (i!(b-1-i)!).
    """
    if b < 1:
        raise ValueError("b must be >= 1")
    a = Q(a)
    poles = []
    for i in range(b):
        c = Q((-1) ** (b - 1 - i), factorial(i) * factorial(b - 1 - i))
        poles.append((a + i, c))
    return PartialFractionDecomp(tuple(poles))


def alternating_moment(n: int, c: int):
    """sum_{k=0}^{n} (-1)^k C(n,k) k^c, exactly.

    Zero for every c <= n-1 (n-th finite difference of a degree-c polynomial)
    and (-1)^n n! at c = n; this switch is what caps the certificate level.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if c < 0:
        raise ValueError("c must be >= 0")
    total = Q(0)
    for k in range(n + 1):
        term = Q(comb(n, k) * k**c)
        total += term if k % 2 == 0 else -term
    return total

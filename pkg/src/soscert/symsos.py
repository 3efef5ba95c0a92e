"""Symmetry-reduced PSD criterion: finitely many small weighted Hankel blocks.

For symmetric weights w_k, PSDness of the level-t moment matrix follows from

    sum_{k=h}^{n-h} C(n,k) w_k G_h(k) >= 0

for every polynomial G_h of degree <= 2t that vanishes on the integer sets
{0..h-1} and {n-h+1..n} and is nonnegative on the interval [h-1, n-h+1]
(h = 0..t; for h > floor(n/2) the sum is empty and the condition is vacuous).

Each such G_h factors as Pi_h * (p^2 + s*q^2) with
Pi_h(k) = prod_{i<h} (k-i)(n-i-k), s(k) = (k-h+1)(n-h+1-k): Pi_h carries the
forced integer zeros and is positive inside the interval, and the
Markov-Lukacs representation covers every polynomial of degree
<= 2(t-h) that is nonnegative on [h-1, n-h+1].  Quantifying over all p and q
is then exactly two PSD conditions per h, on the weighted Hankel moment
matrices A_h (for p) and B_h (for q).  This file builds those blocks and
decides them exactly; any failure is converted back into an explicit
violating G_h.

The converse (full matrix PSD implies the criterion) is not assumed: callers
that rely on it label their output accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

from .exactnum import Q, rat_str
from .moments import PsdVerdict, SymmetricAssignment, psd_exact
from .unipoly import UniPoly

__all__ = [
    "GPolySpec",
    "HankelBlock",
    "ReducedCriterion",
    "ReducedVerdict",
    "interval_root_product",
    "build_reduced",
    "check_reduced",
    "eval_condition",
]


def interval_root_product(n: int, h: int) -> UniPoly:
    """Pi_h(k) = prod_{i=0}^{h-1} (k - i)(n - i - k); the empty product is 1."""
    out = UniPoly.constant(1)
    for i in range(h):
        out = out * UniPoly([-i, 1]) * UniPoly([n - i, -1])
    return out


@dataclass(frozen=True)
class GPolySpec:
    """A criterion polynomial G_h = Pi_h * (p^2 + (k-h+1)(n-h+1-k) q^2)."""

    n: int
    t: int
    h: int
    sigma_p: UniPoly
    sigma_q: UniPoly

    def as_unipoly(self) -> UniPoly:
        pi_h = interval_root_product(self.n, self.h)
        s = UniPoly([-(self.h - 1), 1]) * UniPoly([self.n - self.h + 1, -1])
        return pi_h * (
            self.sigma_p * self.sigma_p + s * self.sigma_q * self.sigma_q
        )

    def value_at(self, k):
        return self.as_unipoly()(k)

    def verify_membership(self) -> bool:
        """Degree bound, forced integer zeros, and interval-sign structure."""
        n, t, h = self.n, self.t, self.h
        if self.sigma_p.degree > t - h or self.sigma_q.degree > t - h - 1:
            return False
        g = self.as_unipoly()
        if g.degree > 2 * t:
            return False
        zero_set = list(range(h)) + list(range(n - h + 1, n + 1))
        if any(g(k) != 0 for k in zero_set):
            return False
        # Nonnegativity on [h-1, n-h+1] is structural: Pi_h >= 0 there (each
        # factor pair (k-i)(n-i-k) is >= 0 for k in [i, n-i] which contains
        # the interval), and p^2 + s q^2 >= 0 since s >= 0 on it.  Checked by
        # exact divisibility by Pi_h:
        _, rem = g.divrem(interval_root_product(n, h))
        return rem.is_zero()


@dataclass
class HankelBlock:
    h: int
    kind: str  # "A" (square part) or "B" (interval-weight part)
    rows: list[list]

    @property
    def size(self) -> int:
        return len(self.rows)


@dataclass
class ReducedCriterion:
    n: int
    t: int
    blocks: list[HankelBlock]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "blocks": [
                {
                    "h": b.h,
                    "kind": b.kind,
                    "entries": [[rat_str(x) for x in row] for row in b.rows],
                }
                for b in self.blocks
            ],
        }


@dataclass
class ReducedVerdict:
    """PsdVerdict plus the failing block and a violating G_h, when any."""

    is_psd: bool
    witness: Optional[list] = None
    failing_h: Optional[int] = None
    failing_kind: Optional[str] = None
    violating: Optional[GPolySpec] = None

    def __bool__(self) -> bool:
        return self.is_psd

    def to_json_dict(self) -> dict:
        out: dict = {"is_psd": self.is_psd}
        if not self.is_psd:
            out["failing_h"] = self.failing_h
            out["failing_kind"] = self.failing_kind
            out["witness"] = [rat_str(x) for x in self.witness]
            out["violating_sigma_p"] = self.violating.sigma_p.to_json()
            out["violating_sigma_q"] = self.violating.sigma_q.to_json()
        return out


def build_reduced(w: SymmetricAssignment, t: int) -> ReducedCriterion:
    """All Hankel blocks A_h, B_h for h = 0..min(t, floor(n/2)).

    A_h[i][j] = sum_k C(n,k) w_k Pi_h(k) k^(i+j), i,j <= t-h;
    B_h adds the factor (k-h+1)(n-h+1-k) and has i,j <= t-h-1.
    """
    n = w.n
    if not 1 <= t <= n:
        raise ValueError(f"level t={t} out of range for n={n}")
    blocks: list[HankelBlock] = []
    for h in range(min(t, n // 2) + 1):
        pi_h = interval_root_product(n, h)
        ks = range(h, n - h + 1)
        base = {k: comb(n, k) * w.weights[k] * pi_h(k) for k in ks}
        # moments of k^c against the two weightings, c = 0..2(t-h)
        mom_a = [
            sum((base[k] * Q(k) ** c for k in ks), Q(0))
            for c in range(2 * (t - h) + 1)
        ]
        size_a = t - h + 1
        blocks.append(
            HankelBlock(
                h=h,
                kind="A",
                rows=[[mom_a[i + j] for j in range(size_a)] for i in range(size_a)],
            )
        )
        size_b = t - h
        if size_b > 0:
            mom_b = [
                sum(
                    (
                        base[k] * (k - h + 1) * (n - h + 1 - k) * Q(k) ** c
                        for k in ks
                    ),
                    Q(0),
                )
                for c in range(2 * (t - h - 1) + 1)
            ]
            blocks.append(
                HankelBlock(
                    h=h,
                    kind="B",
                    rows=[
                        [mom_b[i + j] for j in range(size_b)] for i in range(size_b)
                    ],
                )
            )
    return ReducedCriterion(n=n, t=t, blocks=blocks)


def check_reduced(criterion: ReducedCriterion) -> ReducedVerdict:
    """PSD-check every block; on failure, rebuild the violating G_h.

    An A_h witness p gives G_h = Pi_h p^2; a B_h witness q gives
    G_h = Pi_h (k-h+1)(n-h+1-k) q^2.  Either way the witness quadratic form
    equals the criterion sum for that G_h, so the violation is explicit.
    """
    for block in criterion.blocks:
        verdict: PsdVerdict = psd_exact(block.rows)
        if verdict.is_psd:
            continue
        coeffs = verdict.witness
        zero = UniPoly()
        if block.kind == "A":
            g = GPolySpec(
                n=criterion.n,
                t=criterion.t,
                h=block.h,
                sigma_p=UniPoly(coeffs),
                sigma_q=zero,
            )
        else:
            g = GPolySpec(
                n=criterion.n,
                t=criterion.t,
                h=block.h,
                sigma_p=zero,
                sigma_q=UniPoly(coeffs),
            )
        return ReducedVerdict(
            is_psd=False,
            witness=coeffs,
            failing_h=block.h,
            failing_kind=block.kind,
            violating=g,
        )
    return ReducedVerdict(is_psd=True)


def eval_condition(w: SymmetricAssignment, g: GPolySpec):
    """The criterion sum sum_{k=h}^{n-h} C(n,k) w_k G_h(k) for one G_h."""
    n = w.n
    if g.n != n:
        raise ValueError("G_h was built for a different n")
    poly = g.as_unipoly()
    return sum(
        (comb(n, k) * w.weights[k] * poly(k) for k in range(g.h, n - g.h + 1)),
        Q(0),
    )

"""The explicit level-(m+d-1) lower-bound certificate for odd n = 2m+1.

The target polynomial (as a function of the cardinality k = |x|_1) is

    f_d(k) = (k + d - m - 1)(k + d - m - 2)...(k - d - m)     [2d factors]

nonnegative on {0..n} with zeros exactly on the band {m-d+1,...,m+d}.  The
certificate assignment z gives each cardinality the weight

    z_k = (2d-2)! (n+1) C(n/2-d+1, n+1) (-1)^(n-k) / (n/2+d-1-k)^(2d-1 falling)

It decomposes as a conical combination of the simpler one-pole solutions
y[alpha] at the half-integer nodes alpha = n/2+d-1-j, which is what drives
every identity here: sums of C(n,k) z_k P(k) collapse to values of P at the
nodes as long as deg P <= 2(m+d-1), and fail one degree higher.  The
resulting objective value g(d, n) is negative, with an independent
double-factorial closed form to check it against.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Optional

from .exactnum import (
    Q,
    binomial,
    double_factorial,
    falling_factorial,
    rat_str,
)
from .moments import (
    PsdVerdict,
    SymmetricAssignment,
    build_moment_matrix,
    psd_exact,
    psd_float,
)
from .symsos import ReducedVerdict, build_reduced, check_reduced
from .unipoly import UniPoly

__all__ = [
    "Instance",
    "CertificateReport",
    "f_d_eval",
    "f_d_poly",
    "y_alpha",
    "z_solution",
    "decomposition_coeffs",
    "normalize",
    "objective_value",
    "g_sum_form",
    "g_closed_form",
    "lemma4_identity",
    "verify_theorem2",
    "BRUTEFORCE_DIMENSION_LIMIT",
]

# Above this moment-matrix dimension verify_theorem2 skips the brute-force
# oracle (the reduced criterion still runs); n=9, d=1 hits exactly 256.
BRUTEFORCE_DIMENSION_LIMIT = 256


@dataclass(frozen=True)
class Instance:
    """Problem size: odd n = 2m+1, degree parameter 1 <= d <= m."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError("n must be odd and >= 3")
        if not 1 <= self.d <= self.m:
            raise ValueError(f"d must be in 1..{self.m} for n={self.n}")

    @property
    def m(self) -> int:
        return (self.n - 1) // 2

    @property
    def t(self) -> int:
        """Certificate level m+d-1 = ceil((n+2d-1)/2) - 1."""
        return self.m + self.d - 1


def f_d_eval(k, inst: Instance):
    """Objective polynomial at cardinality k (k may be rational)."""
    return falling_factorial(Q(k) + inst.d - inst.m - 1, 2 * inst.d)


def f_d_poly(inst: Instance) -> UniPoly:
    """f_d as an explicit polynomial in k (degree 2d)."""
    shift = inst.d - inst.m - 1
    out = UniPoly.constant(1)
    for i in range(2 * inst.d):
        out = out * UniPoly([shift - i, 1])
    return out


def y_alpha(n: int, alpha) -> SymmetricAssignment:
    """One-pole solution w_k = (n+1) C(alpha, n+1) (-1)^(n-k) / (alpha - k).

    alpha must be a non-integer in (0, n]; at integer alpha the pole lands on
    a cardinality.
    """
    alpha = Q(alpha)
    if alpha.denominator == 1:
        raise ValueError("alpha must be non-integer")
    if not 0 < alpha <= n:
        raise ValueError("alpha must satisfy 0 < alpha <= n")
    c = (n + 1) * binomial(alpha, n + 1)
    return SymmetricAssignment(
        n, [c * (-1) ** (n - k) / (alpha - k) for k in range(n + 1)]
    )


def z_solution(inst: Instance) -> SymmetricAssignment:
    """The certificate weights. For d=1 this is exactly y_alpha(n, n/2)."""
    n, d = inst.n, inst.d
    n2 = Q(n, 2)
    c = factorial(2 * d - 2) * (n + 1) * binomial(n2 - d + 1, n + 1)
    return SymmetricAssignment(
        n,
        [
            c * (-1) ** (n - k) / falling_factorial(n2 + d - 1 - k, 2 * d - 1)
            for k in range(n + 1)
        ],
    )


def decomposition_coeffs(inst: Instance) -> list:
    """Conical coefficients a_0..a_{2d-2} with z = sum_j a_j y[n/2+d-1-j]."""
    n, d = inst.n, inst.d
    n2 = Q(n, 2)
    return [
        binomial(2 * d - 2, j)
        * falling_factorial(n2 + d - 1, j)
        / falling_factorial(n2 - d + 1 + j, j)
        for j in range(2 * d - 1)
    ]


def normalize(w: SymmetricAssignment) -> SymmetricAssignment:
    """Scale so that sum_k C(n,k) w_k = 1."""
    s = w.binomial_sum()
    if not s > 0:
        raise ValueError("total mass must be positive to normalize")
    return w.scaled(1 / s)


def objective_value(w: SymmetricAssignment, inst: Instance):
    """sum_k C(n,k) w_k f_d(k)."""
    if w.n != inst.n:
        raise ValueError("assignment and instance disagree on n")
    return sum(
        (
            comb(inst.n, k) * wk * f_d_eval(k, inst)
            for k, wk in enumerate(w.weights)
        ),
        Q(0),
    )


def g_sum_form(d: int, n: int):
    """Objective of z as the explicit sum over the decomposition nodes:

    g(d,n) = sum_{j=0}^{2d-2} a_j * f_d(n/2 + d - 1 - j)
           = sum_j C(2d-2,j) [fall(n/2+d-1, j)/fall(n/2-d+1+j, j)] fall(2d-3/2-j, 2d)
    """
    _require_odd(d, n)
    n2 = Q(n, 2)
    total = Q(0)
    for j in range(2 * d - 1):
        total += (
            binomial(2 * d - 2, j)
            * falling_factorial(n2 + d - 1, j)
            / falling_factorial(n2 - d + 1 + j, j)
            * falling_factorial(2 * d - Q(3, 2) - j, 2 * d)
        )
    return total


def g_closed_form(d: int, n: int):
    """Double-factorial closed form of g(d, n); negative for every valid (d, n).

    fall(2d-3/2, 2d) has exactly one negative factor (-1/2), and both bracketed
    ratios are positive, so the sign is immediate.
    """
    _require_odd(d, n)
    m = (n - 1) // 2
    lead = falling_factorial(2 * d - Q(3, 2), 2 * d)
    series = Q(
        4 ** (d - 1) * factorial(2 * d - 2) * double_factorial(2 * d - 1),
        factorial(d - 1) * double_factorial(4 * d - 3),
    )
    tail = Q(
        double_factorial(2 * m - 2 * d + 3) * factorial(m - 1),
        factorial(m - d) * double_factorial(2 * m + 1),
    )
    return lead * series * tail


def _require_odd(d: int, n: int):
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    if not 1 <= d <= (n - 1) // 2:
        raise ValueError("d out of range")


def lemma4_identity(inst: Instance, p: UniPoly) -> tuple:
    """(lhs, rhs) of the node-collapse identity for the z weights:

    lhs = sum_k C(n,k) z_k P(k),  rhs = sum_j a_j P(n/2 + d - 1 - j).

    Equal whenever deg P <= 2(m+d-1); the caller owns checking the bound
    (violating it is exactly how the level-tightness test works).
    """
    if p.degree > 2 * inst.t:
        raise ValueError(f"deg P = {p.degree} exceeds 2(m+d-1) = {2 * inst.t}")
    z = z_solution(inst)
    lhs = sum(
        (comb(inst.n, k) * zk * p(k) for k, zk in enumerate(z.weights)), Q(0)
    )
    n2 = Q(inst.n, 2)
    rhs = sum(
        (
            aj * p(n2 + inst.d - 1 - j)
            for j, aj in enumerate(decomposition_coeffs(inst))
        ),
        Q(0),
    )
    return lhs, rhs


@dataclass
class CertificateReport:
    instance: Instance
    normalization_sum: object
    objective_raw: object
    objective_normalized: object
    middle_band_positive: bool
    reduced_psd: ReducedVerdict
    bruteforce_psd: Optional[PsdVerdict]  # None when skipped
    bruteforce_skipped: bool
    decomposition_verified: bool
    objective_matches_closed_form: bool
    warnings: list

    @property
    def passed(self) -> bool:
        return (
            self.middle_band_positive
            and self.decomposition_verified
            and self.normalization_sum > 0
            and self.reduced_psd.is_psd
            and (self.bruteforce_skipped or self.bruteforce_psd.is_psd)
            and self.objective_matches_closed_form
            and self.objective_raw < 0
        )

    def to_json_dict(self) -> dict:
        inst = self.instance
        out = {
            "n": inst.n,
            "d": inst.d,
            "t": inst.t,
            "normalization_sum": rat_str(self.normalization_sum),
            "objective_raw": rat_str(self.objective_raw),
            "objective_normalized": (
                None
                if self.objective_normalized is None
                else rat_str(self.objective_normalized)
            ),
            "g_sum": rat_str(g_sum_form(inst.d, inst.n)),
            "g_closed": rat_str(g_closed_form(inst.d, inst.n)),
            "middle_band_positive": self.middle_band_positive,
            "decomposition_verified": self.decomposition_verified,
            "objective_matches_closed_form": self.objective_matches_closed_form,
            "reduced_psd": self.reduced_psd.to_json_dict(),
            "bruteforce_skipped": self.bruteforce_skipped,
            "warnings": list(self.warnings),
            "pass": self.passed,
        }
        if not self.bruteforce_skipped:
            out["bruteforce_psd"] = self.bruteforce_psd.to_json_dict()
        return out


def verify_theorem2(
    inst: Instance,
    skip_bruteforce: bool = False,
    bruteforce_limit: int = BRUTEFORCE_DIMENSION_LIMIT,
) -> CertificateReport:
    """Run the whole certificate pipeline for one (n, d).

    Checks: z positive on the band {m-d+1..m+d}; exact conical decomposition
    into the y[alpha] family; positive total mass; reduced criterion PSD at
    level t = m+d-1; full moment matrix PSD when its dimension fits under
    bruteforce_limit; objective equal to the closed form and negative.
    """
    n, d, m, t = inst.n, inst.d, inst.m, inst.t
    warnings: list[str] = []
    z = z_solution(inst)

    band = range(m - d + 1, m + d + 1)
    middle_band_positive = all(z.weights[k] > 0 for k in band)

    coeffs = decomposition_coeffs(inst)
    ys = [y_alpha(n, Q(n, 2) + d - 1 - j) for j in range(2 * d - 1)]
    decomposition_verified = all(c > 0 for c in coeffs) and all(
        z.weights[k]
        == sum((coeffs[j] * ys[j].weights[k] for j in range(2 * d - 1)), Q(0))
        for k in range(n + 1)
    )

    normalization_sum = z.binomial_sum()
    objective_raw = objective_value(z, inst)
    objective_normalized = (
        objective_raw / normalization_sum if normalization_sum > 0 else None
    )
    objective_matches_closed_form = objective_raw == g_closed_form(d, n)

    reduced = check_reduced(build_reduced(z, t))

    bruteforce: Optional[PsdVerdict] = None
    skipped = True
    dim = sum(comb(n, i) for i in range(t + 1))
    if not skip_bruteforce and dim <= bruteforce_limit:
        matrix = build_moment_matrix(z, t)
        bruteforce = psd_exact(matrix)
        skipped = False
        if psd_float(matrix) != bruteforce.is_psd:
            warnings.append(
                "float pre-screen disagrees with exact PSD verdict "
                f"(n={n}, d={d}, t={t}); conditioning suspect"
            )
        if bruteforce.is_psd != reduced.is_psd:
            warnings.append(
                "reduced criterion and brute-force oracle disagree "
                f"(n={n}, d={d}, t={t})"
            )

    return CertificateReport(
        instance=inst,
        normalization_sum=normalization_sum,
        objective_raw=objective_raw,
        objective_normalized=objective_normalized,
        middle_band_positive=middle_band_positive,
        reduced_psd=reduced,
        bruteforce_psd=bruteforce,
        bruteforce_skipped=skipped,
        decomposition_verified=decomposition_verified,
        objective_matches_closed_form=objective_matches_closed_form,
        warnings=warnings,
    )

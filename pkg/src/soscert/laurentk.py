"""Rank machinery for the empty polytope K with half-integer margins.

K intersects {0,1}^n with the constraints, one per R subset of N = {1..n},

    g_R(x_I) = |N \\ (R symmetric-difference I)| - 1/2 >= 0

(as printed, the defining sum contains "R \\ N", which is empty; the appendix
closed form above is what the constraint actually is, and this module
implements that reading).  Every 0/1 point violates the constraint with
R = complement(I), so the integer hull is empty; the question is the smallest
hierarchy level t that detects this.

Everything reduces to the uniform solution y_I = 1/2^n and its R = N
constraint: the per-cardinality weights are w_k = (k - 1/2)/2^n, and the
level-t feasibility becomes the symmetry-reduced Hankel criterion on those
weights.  The criterion failing certainly kills the uniform solution (an
explicit violating polynomial exists), and by the symmetrization argument
that kills every solution; treating criterion success as feasibility uses the
cited iff direction, so rank output is labeled "exact under cited-iff
assumption" and cross-checked against the full constraint matrix at small n.

The level-t margin of the fixed falling-factorial polynomial with roots at
n, n-1, ..., n-t+1 gives an unconditional infeasibility certificate; the
root-form numeric search provides feasibility evidence from the other side.
Search verdict comparisons always go through exact re-evaluation at rational
snap points: the binomial weights destroy float accuracy exactly where the
boundary sits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from math import comb, isqrt
from typing import Iterable, Optional

import numpy as np

from ._backend import SEARCH_BACKEND, descend_batch
from .exactnum import Q, falling_factorial, rat_str
from .moments import (
    MomentMatrix,
    SymmetricAssignment,
    subsets_up_to,
)
from .symsos import ReducedVerdict, build_reduced, check_reduced

__all__ = [
    "PolytopeK",
    "constraint_value",
    "uniform_constraint_weights",
    "symmetric_feasibility",
    "upper_bound_certificate",
    "first_negative_margin",
    "exact_objective",
    "SearchResult",
    "lower_bound_search",
    "LevelReport",
    "RankReport",
    "sos_rank",
    "theoretical_bounds",
    "lower_bound_condition_holds",
    "lower_bound_condition_threshold",
    "fit_upper_bound_constant",
    "rotated_constraint_matrix",
    "RootConfig",
    "rational_sqrt_exact",
    "merge_complex_pairs",
    "reflect_negative_roots",
    "raise_small_roots",
    "clamp_large_roots",
    "pad_degree",
    "normalize_root_config",
    "exact_objective_config",
]

RANK_STATUS = "exact under cited-iff assumption"

# Descent schedule shared by both kernel backends; changing any of these
# changes seeded outputs.
_SEARCH_TOL = 1e-7
_SEARCH_SHRINK = 0.5
_SEARCH_MAX_SWEEPS = 20000
_SNAP_DENOMINATOR = 1 << 30


def constraint_value(R: Iterable[int], I: Iterable[int], n: int):
    """g_R(x_I) = |N \\ (R symm-diff I)| - 1/2."""
    N = set(range(1, n + 1))
    R = set(R)
    I = set(I)
    if not (R <= N and I <= N):
        raise ValueError("R and I must be subsets of {1..n}")
    return Q(2 * len(N - (R ^ I)) - 1, 2)


@dataclass(frozen=True)
class PolytopeK:
    """The empty polytope on n variables; one constraint per R subset of N."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def constraint(self, R: Iterable[int], I: Iterable[int]):
        return constraint_value(R, I, self.n)

    def full_set_weights(self) -> SymmetricAssignment:
        return uniform_constraint_weights(self.n)


def uniform_constraint_weights(n: int) -> SymmetricAssignment:
    """Weights of the R = N constraint under the uniform solution: (k-1/2)/2^n."""
    return SymmetricAssignment(n, [Q(2 * k - 1, 2 ** (n + 1)) for k in range(n + 1)])


def symmetric_feasibility(n: int, t: int) -> ReducedVerdict:
    """Hankel criterion for the uniform solution at level t.

    The plain moment matrix (level t+1) has all-positive symmetric weights and
    is PSD without computation; only the R = N constraint matrix can fail.
    """
    if not 1 <= t <= n:
        raise ValueError(f"level t={t} out of range for n={n}")
    return check_reduced(build_reduced(uniform_constraint_weights(n), t))


def upper_bound_certificate(n: int, t: int):
    """Margin of the fixed polynomial with roots n, n-1, ..., n-t+1:

    sum_{k=1}^{n-t} C(n,k)(k-1/2) (fall(n-t,k)/fall(n,k))^2 - 1/2.

    Negative margin is an unconditional infeasibility certificate for level t
    (the polynomial itself violates the constraint-matrix quadratic form).
    """
    if not 1 <= t <= n:
        raise ValueError(f"level t={t} out of range for n={n}")
    total = Q(0)
    for k in range(1, n - t + 1):
        ratio = falling_factorial(n - t, k) / falling_factorial(n, k)
        total += comb(n, k) * Q(2 * k - 1, 2) * ratio * ratio
    return total - Q(1, 2)


def first_negative_margin(n: int) -> Optional[int]:
    """Smallest t with a negative certificate margin; None if all t <= n pass."""
    for t in range(1, n + 1):
        if upper_bound_certificate(n, t) < 0:
            return t
    return None


def fit_upper_bound_constant(n_max: int = 60, n_min: int = 8) -> float:
    """Least-squares c in (n - t*(n)) ~ c * n^(1/3) over the margin table."""
    num = 0.0
    den = 0.0
    for n in range(n_min, n_max + 1):
        t_star = first_negative_margin(n)
        x = n ** (1.0 / 3.0)
        num += x * (n - t_star)
        den += x * x
    return num / den


# ---------------------------------------------------------------------------
# Root-form objective and the numeric lower-bound search


def exact_objective(roots: Iterable, n: int):
    """sum_{k=1}^{n} C(n,k)(k-1/2) prod_i ((k-r_i)/r_i)^2, exactly."""
    rs = [Q(r) for r in roots]
    if any(r == 0 for r in rs):
        raise ValueError("roots must be nonzero")
    total = Q(0)
    for k in range(1, n + 1):
        p = comb(n, k) * Q(2 * k - 1, 2)
        for r in rs:
            u = (k - r) / r
            p *= u * u
        total += p
    return total


def _float_weights(n: int) -> np.ndarray:
    w = np.zeros(n + 1)
    for k in range(1, n + 1):
        w[k] = float(Q(comb(n, k) * (2 * k - 1), 2))
    return w


def _structured_starts(n: int, t: int) -> list[list[float]]:
    all_at_n = [float(n)] * t
    equispaced = [min(max(i * n / (t + 1.0), 1.0), float(n)) for i in range(1, t + 1)]
    top_band = [min(max(float(k), 1.0), float(n)) for k in range(n - t + 1, n + 1)]
    return [all_at_n, equispaced, top_band]


def _snap(x: float, n: int):
    r = Q(round(x * _SNAP_DENOMINATOR), _SNAP_DENOMINATOR)
    return min(max(r, Q(1)), Q(n))


@dataclass
class SearchResult:
    n: int
    t: int
    restarts: int
    seed: int
    value: float  # float image of exact_value
    exact_value: object
    roots: tuple  # snapped rational roots achieving exact_value
    backend: str

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "restarts": self.restarts,
            "seed": self.seed,
            "value": self.value,
            "exact_value": rat_str(self.exact_value),
            "roots": [rat_str(r) for r in self.roots],
            "backend": self.backend,
        }


def lower_bound_search(
    n: int, t: int, restarts: int = 64, seed: int = 0
) -> SearchResult:
    """Multi-start coordinate descent over root vectors in [1, n]^t.

    Structured starts (all roots at n; equispaced; the top band n-t+1..n) plus
    seeded uniform restarts.  Every final root vector is snapped to rationals
    and the objective re-evaluated exactly; the reported value is the smallest
    exact one.  A value >= 1/2 everywhere is feasibility evidence, not proof;
    a value < 1/2 is an exact infeasibility witness for the uniform solution.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if t < 0 or t > n:
        raise ValueError(f"level t={t} out of range for n={n}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if t == 0:
        value = sum((comb(n, k) * Q(2 * k - 1, 2) for k in range(1, n + 1)), Q(0))
        return SearchResult(
            n=n,
            t=t,
            restarts=restarts,
            seed=seed,
            value=float(value),
            exact_value=value,
            roots=(),
            backend=SEARCH_BACKEND,
        )
    structured = _structured_starts(n, t)[:restarts]
    extra = restarts - len(structured)
    rng = np.random.default_rng(seed)
    starts = np.array(structured, dtype=float)
    if extra > 0:
        starts = np.vstack([starts, rng.uniform(1.0, float(n), size=(extra, t))])
    roots, _values = descend_batch(
        starts,
        n,
        _float_weights(n),
        (n - 1) / 2.0,
        _SEARCH_SHRINK,
        _SEARCH_TOL,
        _SEARCH_MAX_SWEEPS,
    )
    best_exact = None
    best_roots: tuple = ()
    for row in roots:
        snapped = tuple(_snap(x, n) for x in row)
        value = exact_objective(snapped, n)
        if best_exact is None or value < best_exact:
            best_exact = value
            best_roots = snapped
    return SearchResult(
        n=n,
        t=t,
        restarts=restarts,
        seed=seed,
        value=float(best_exact),
        exact_value=best_exact,
        roots=best_roots,
        backend=SEARCH_BACKEND,
    )


# ---------------------------------------------------------------------------
# Rank reports


@dataclass
class LevelReport:
    t: int
    feasible: bool
    margin: object  # upper_bound_certificate(n, t)
    search: Optional[SearchResult] = None

    def to_json_dict(self) -> dict:
        out = {
            "t": self.t,
            "feasible": self.feasible,
            "upper_cert_margin": rat_str(self.margin),
        }
        if self.search is not None:
            out["lower_search"] = self.search.to_json_dict()
        return out


@dataclass
class RankReport:
    n: int
    rank: int
    levels: list[LevelReport]
    status: str = RANK_STATUS

    @property
    def rank_ratio(self) -> float:
        return self.rank / self.n

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "rank": self.rank,
            "rank_over_n": self.rank_ratio,
            "status": self.status,
            "levels": [lv.to_json_dict() for lv in self.levels],
        }


def sos_rank(n: int, restarts: int = 0, seed: int = 0) -> RankReport:
    """Smallest level at which the uniform solution fails the exact criterion.

    Under the symmetrization lemma plus the cited iff direction this is the
    SoS rank of K; the report carries that epistemic label rather than
    asserting it.  rank <= n always: the t = n certificate margin is the
    empty sum minus 1/2.  With restarts > 0 each level also gets a seeded
    numeric search (per-level seed derived from the master seed).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    levels: list[LevelReport] = []
    rank = None
    for t in range(1, n + 1):
        verdict = symmetric_feasibility(n, t)
        search = None
        if restarts > 0:
            search = lower_bound_search(n, t, restarts=restarts, seed=seed + t)
        levels.append(
            LevelReport(
                t=t,
                feasible=verdict.is_psd,
                margin=upper_bound_certificate(n, t),
                search=search,
            )
        )
        if not verdict.is_psd:
            rank = t
            break
    if rank is None:
        raise RuntimeError(
            f"criterion still feasible at t = n = {n}; the empty-sum "
            "certificate guarantees this cannot happen"
        )
    return RankReport(n=n, rank=rank, levels=levels)


def theoretical_bounds(n: int, c: float = 1.0) -> tuple[float, float]:
    """Asymptotic advisory bracket (sqrt(n)/4, n - c*n^(1/3)).

    The constant c is free in the analysis; the default 1.0 can be replaced by
    fit_upper_bound_constant() output.  The lower bound's derivation only
    kicks in once lower_bound_condition_holds(n); report, don't assume.
    """
    if n < 4:
        raise ValueError("n must be >= 4")
    return math.sqrt(n) / 4.0, n - c * n ** (1.0 / 3.0)


def lower_bound_condition_holds(n: int) -> bool:
    """Whether 4^(-sqrt(n)) sqrt(n)^(sqrt(n)/2) >= 1/2 (checked in log space)."""
    s = math.sqrt(n)
    return -s * math.log(4.0) + (s / 2.0) * math.log(s) >= math.log(0.5)


def lower_bound_condition_threshold(limit: int = 100000) -> int:
    """Smallest n >= 4 from which the sufficient condition holds onward."""
    holds_from = None
    for n in range(4, limit + 1):
        if lower_bound_condition_holds(n):
            if holds_from is None:
                holds_from = n
        else:
            holds_from = None
    if holds_from is None:
        raise RuntimeError(f"condition never stabilizes below {limit}")
    return holds_from


# ---------------------------------------------------------------------------
# Explicit rotated constraint matrices (symmetrization regression; small n)


def rotated_constraint_matrix(
    n: int, R: Iterable[int], S: Iterable[int], q: int
) -> MomentMatrix:
    """sum_I (1/2^n) g_R(x_I) Z_(I rot S) Z_(I rot S)^T by explicit enumeration.

    Brute force over all 2^n subsets; intended for the small-n symmetrization
    cross-checks only.
    """
    if n > 16:
        raise ValueError("explicit enumeration is for n <= 16")
    order = subsets_up_to(n, q)
    index = {frozenset(J): i for i, J in enumerate(order)}
    dim = len(order)
    rows = [[Q(0)] * dim for _ in range(dim)]
    S = frozenset(S)
    universe = list(range(1, n + 1))
    scale = Q(1, 2**n)
    for size in range(n + 1):
        for I in combinations(universe, size):
            weight = scale * constraint_value(R, I, n)
            if weight == 0:
                continue
            rotated = tuple(sorted(frozenset(I) ^ S))
            support = [
                index[frozenset(J)]
                for sub_size in range(min(q, len(rotated)) + 1)
                for J in combinations(rotated, sub_size)
            ]
            for a in support:
                row = rows[a]
                for b in support:
                    row[b] += weight
    return MomentMatrix(n=n, q=q, order=order, rows=rows)


# ---------------------------------------------------------------------------
# Root-location normalizations (the five objective-non-increasing replacements)


def rational_sqrt_exact(x):
    """Square root of a rational that is a perfect square; ValueError otherwise."""
    x = Q(x)
    if x < 0:
        raise ValueError("negative input")
    p, q = int(x.numerator), int(x.denominator)
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp != p or rq * rq != q:
        raise ValueError(f"{x} is not a perfect rational square")
    return Q(rp, rq)


@dataclass(frozen=True)
class RootConfig:
    """Root multiset of a real polynomial: real roots plus conjugate pairs a+-bi."""

    real_roots: tuple
    complex_pairs: tuple = ()

    def __init__(self, real_roots: Iterable = (), complex_pairs: Iterable = ()):
        rs = tuple(Q(r) for r in real_roots)
        ps = tuple((Q(a), Q(b)) for a, b in complex_pairs)
        if any(r == 0 for r in rs) or any(a == 0 and b == 0 for a, b in ps):
            raise ValueError("roots must be nonzero")
        object.__setattr__(self, "real_roots", rs)
        object.__setattr__(self, "complex_pairs", ps)

    @property
    def degree(self) -> int:
        return len(self.real_roots) + 2 * len(self.complex_pairs)


def exact_objective_config(cfg: RootConfig, n: int):
    """Root-form objective for a possibly-complex configuration.

    A conjugate pair a+-bi contributes |(k-r)/r|^4 = (((k-a)^2+b^2)/(a^2+b^2))^2
    to the squared polynomial.
    """
    total = Q(0)
    for k in range(1, n + 1):
        p = comb(n, k) * Q(2 * k - 1, 2)
        for r in cfg.real_roots:
            u = (k - r) / r
            p *= u * u
        for a, b in cfg.complex_pairs:
            u = ((k - a) * (k - a) + b * b) / (a * a + b * b)
            p *= u * u
        total += p
    return total


def merge_complex_pairs(cfg: RootConfig) -> RootConfig:
    """Replace each conjugate pair with a double real root at its modulus."""
    real = list(cfg.real_roots)
    for a, b in cfg.complex_pairs:
        r = rational_sqrt_exact(a * a + b * b)
        real.extend([r, r])
    return RootConfig(real, ())


def reflect_negative_roots(cfg: RootConfig) -> RootConfig:
    """Replace each negative real root -a by a."""
    return RootConfig(
        [abs(r) for r in cfg.real_roots], cfg.complex_pairs
    )


def raise_small_roots(cfg: RootConfig) -> RootConfig:
    """Raise real roots in (0, 1) to 1."""
    return RootConfig(
        [Q(1) if 0 < r < 1 else r for r in cfg.real_roots],
        cfg.complex_pairs,
    )


def clamp_large_roots(cfg: RootConfig, n: int) -> RootConfig:
    """Lower real roots above n to n."""
    return RootConfig(
        [min(r, Q(n)) for r in cfg.real_roots], cfg.complex_pairs
    )


def pad_degree(cfg: RootConfig, t: int, n: int) -> RootConfig:
    """Pad with roots at n up to degree exactly t."""
    missing = t - cfg.degree
    if missing < 0:
        raise ValueError("configuration degree already exceeds t")
    return RootConfig(
        list(cfg.real_roots) + [Q(n)] * missing, cfg.complex_pairs
    )


def normalize_root_config(cfg: RootConfig, n: int, t: int) -> RootConfig:
    """All five replacements in order; never increases the objective."""
    out = merge_complex_pairs(cfg)
    out = reflect_negative_roots(out)
    out = raise_small_roots(out)
    out = clamp_large_roots(out, n)
    return pad_degree(out, t, n)

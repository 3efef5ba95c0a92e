"""Full moment matrices for symmetric assignments, and exact PSD decisions.

A symmetric assignment gives every subset I of {1..n} the weight w_{|I|}.  The
level-q moment matrix is sum_I w_{|I|} Z_I Z_I^T, indexed by subsets J of size
at most q (Z_I has entry 1 at J iff J is a subset of I).  Entries therefore
only depend on u = |J1 union J2|:

    entry(J1, J2) = sum_{k >= u} C(n-u, k-u) w_k

which counts supersets by cardinality instead of enumerating 2^n subsets.

PSD is decided in exact rational arithmetic.  The certificate constructions
sit exactly on the feasibility boundary, where floating point cannot decide;
psd_float exists only as an advisory pre-screen.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional, Sequence

import numpy as np

from .exactnum import Q, rat_str

__all__ = [
    "MAX_DIMENSION",
    "SymmetricAssignment",
    "MomentMatrix",
    "PsdVerdict",
    "subsets_up_to",
    "build_moment_matrix",
    "build_constraint_matrix",
    "psd_exact",
    "psd_float",
]

# Hard guardrail on moment-matrix dimension (sum of C(n,i), i <= q).
MAX_DIMENSION = 5000


@dataclass(frozen=True)
class SymmetricAssignment:
    """Per-cardinality weights w_0..w_n standing for y_I = w_{|I|}."""

    n: int
    weights: tuple

    def __init__(self, n: int, weights: Sequence):
        if n < 1:
            raise ValueError("n must be >= 1")
        ws = tuple(Q(w) for w in weights)
        if len(ws) != n + 1:
            raise ValueError(f"need {n + 1} weights, got {len(ws)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "weights", ws)

    def scaled(self, factor) -> "SymmetricAssignment":
        f = Q(factor)
        return SymmetricAssignment(self.n, [f * w for w in self.weights])

    def binomial_sum(self):
        """sum_k C(n,k) w_k, the total mass over the cube."""
        return sum(
            (comb(self.n, k) * w for k, w in enumerate(self.weights)), Q(0)
        )

    def to_json_dict(self) -> dict:
        return {"n": self.n, "weights": [rat_str(w) for w in self.weights]}


def subsets_up_to(n: int, q: int) -> list[tuple[int, ...]]:
    """All subsets of {1..n} with size <= q, sorted by size then lexicographically."""
    out: list[tuple[int, ...]] = []
    for size in range(q + 1):
        out.extend(combinations(range(1, n + 1), size))
    return out


@dataclass
class MomentMatrix:
    n: int
    q: int
    order: list[tuple[int, ...]]
    rows: list[list]

    @property
    def dimension(self) -> int:
        return len(self.order)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "order": [list(J) for J in self.order],
            "entries": [[rat_str(x) for x in row] for row in self.rows],
        }


@dataclass
class PsdVerdict:
    is_psd: bool
    witness: Optional[list] = None  # rational v with v^T M v < 0

    def __bool__(self) -> bool:
        return self.is_psd

    def to_json_dict(self) -> dict:
        out: dict = {"is_psd": self.is_psd}
        if self.witness is not None:
            out["witness"] = [rat_str(x) for x in self.witness]
        return out


def _superset_sums(w: SymmetricAssignment, q: int) -> list:
    """S[u] = sum_{k=u}^{n} C(n-u, k-u) w_k for u = 0..min(2q, n)."""
    n = w.n
    return [
        sum((comb(n - u, k - u) * w.weights[k] for k in range(u, n + 1)), Q(0))
        for u in range(min(2 * q, n) + 1)
    ]


def _build(w: SymmetricAssignment, q: int) -> MomentMatrix:
    n = w.n
    if not 0 <= q <= n:
        raise ValueError(f"level q={q} out of range for n={n}")
    order = subsets_up_to(n, q)
    dim = len(order)
    if dim > MAX_DIMENSION:
        raise ValueError(f"moment matrix dimension {dim} exceeds {MAX_DIMENSION}")
    S = _superset_sums(w, q)
    masks = [0] * dim
    for i, J in enumerate(order):
        m = 0
        for e in J:
            m |= 1 << e
        masks[i] = m
    rows = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        mi = masks[i]
        ri = rows[i]
        for j in range(i, dim):
            u = (mi | masks[j]).bit_count()
            ri[j] = rows[j][i] = S[u]
    return MomentMatrix(n=n, q=q, order=order, rows=rows)


def build_moment_matrix(w: SymmetricAssignment, q: int) -> MomentMatrix:
    """sum_I w_{|I|} Z_I Z_I^T over subsets J of size <= q."""
    return _build(w, q)


def build_constraint_matrix(
    w: SymmetricAssignment, g: Sequence, q: int
) -> MomentMatrix:
    """Same matrix with weights w_k * g_k (symmetric constraint g per cardinality)."""
    g = [Q(x) for x in g]
    if len(g) != w.n + 1:
        raise ValueError(f"need {w.n + 1} constraint values, got {len(g)}")
    return _build(
        SymmetricAssignment(w.n, [wk * gk for wk, gk in zip(w.weights, g)]), q
    )


def _as_rows(M) -> list[list]:
    return M.rows if isinstance(M, MomentMatrix) else [list(r) for r in M]


def _quadratic_form(rows: list[list], v: list):
    total = Q(0)
    for i, vi in enumerate(v):
        if vi == 0:
            continue
        ri = rows[i]
        total += vi * sum((ri[j] * vj for j, vj in enumerate(v) if vj != 0), Q(0))
    return total


def psd_exact(M) -> PsdVerdict:
    """Decide PSD by exact LDL^T elimination with diagonal pivoting.

    Accepts a MomentMatrix or a raw symmetric list-of-lists of rationals.
    A zero pivot is sound only when its whole remaining row is zero;
    otherwise (or on a negative pivot) a rational witness v with
    v^T M v < 0 is reconstructed by back-substitution through the
    eliminated pivots and verified before returning.
    """
    orig = _as_rows(M)
    dim = len(orig)
    for i in range(dim):
        if len(orig[i]) != dim:
            raise ValueError("matrix is not square")
        for j in range(i + 1, dim):
            if orig[i][j] != orig[j][i]:
                raise ValueError("matrix is not symmetric")
    A = [[Q(x) for x in row] for row in orig]
    active = list(range(dim))
    # (pivot index, pivot value, pivot row restricted to the then-remaining set)
    history: list[tuple[int, object, dict]] = []

    def lift(u: dict) -> PsdVerdict:
        v = dict(u)
        for p, piv, row in reversed(history):
            s = sum((c * v[l] for l, c in row.items() if l in v), Q(0))
            if s != 0:
                v[p] = -s / piv
        vec = [v.get(i, Q(0)) for i in range(dim)]
        value = _quadratic_form(orig, vec)
        if not value < 0:
            raise AssertionError("witness reconstruction failed")
        return PsdVerdict(is_psd=False, witness=vec)

    while active:
        pivot_pos = None
        for pos, i in enumerate(active):
            d = A[i][i]
            if d < 0:
                return lift({i: Q(1)})
            if d > 0 and pivot_pos is None:
                pivot_pos = pos
        if pivot_pos is None:
            # all remaining diagonal entries are zero
            for i in active:
                Ai = A[i]
                for j in active:
                    if Ai[j] != 0:
                        # q(x e_i + e_j) = 2 A[i][j] x, take x = -sign
                        x = Q(-1) if Ai[j] > 0 else Q(1)
                        return lift({i: x, j: Q(1)})
            return PsdVerdict(is_psd=True)
        i = active.pop(pivot_pos)
        Ai = A[i]
        piv = Ai[i]
        history.append((i, piv, {l: Ai[l] for l in active if Ai[l] != 0}))
        for j in active:
            aij = Ai[j]
            if aij == 0:
                continue
            f = aij / piv
            Aj = A[j]
            for l in active:
                ail = Ai[l]
                if ail != 0:
                    Aj[l] -= f * ail
    return PsdVerdict(is_psd=True)


def psd_float(M, tol: float = 1e-9) -> bool:
    """Advisory float pre-screen: smallest eigenvalue >= -tol."""
    if tol <= 0:
        raise ValueError("tol must be > 0")
    rows = _as_rows(M)
    if not rows:
        return True
    arr = np.array([[float(x) for x in row] for row in rows], dtype=float)
    return bool(np.linalg.eigvalsh(arr)[0] >= -tol)

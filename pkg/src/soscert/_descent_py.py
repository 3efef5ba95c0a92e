"""Pure-Python (numpy) twin of the compiled coordinate-descent kernel.

Selected at import time by soscert._backend when the Cython extension is not
built.  The two implementations must stay bit-identical: same evaluation
order (accumulate over k outermost, square each factor before multiplying),
same clamp/accept logic, same shrink schedule.  The extension is compiled
with -ffp-contract=off to keep that contract, and test_descent_backends pins
it.  Restarts are vectorized along the batch axis; elementwise IEEE double
ops are identical to the scalar C loop, so trajectories match per restart.
"""

from __future__ import annotations

import numpy as np

__all__ = ["descend_batch", "objective_batch"]


def objective_batch(r: np.ndarray, n: int, weights: np.ndarray) -> np.ndarray:
    """F(r) = sum_{k=1}^{n} w_k prod_i ((k - r_i)/r_i)^2 for each row of r."""
    batch, t = r.shape
    acc = np.zeros(batch)
    for k in range(1, n + 1):
        p = np.full(batch, weights[k])
        for i in range(t):
            u = (k - r[:, i]) / r[:, i]
            p = p * (u * u)
        acc = acc + p
    return acc


def descend_batch(
    starts: np.ndarray,
    n: int,
    weights: np.ndarray,
    init_step: float,
    shrink: float,
    tol: float,
    max_sweeps: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate descent on [1, n]^t from each start row; greedy, shrinking steps.

    Returns (roots, values) with one row/value per restart.
    """
    r = np.array(starts, dtype=float, copy=True)
    batch, t = r.shape
    if t == 0:
        return r, objective_batch(r, n, weights)
    hi = float(n)
    f = objective_batch(r, n, weights)
    step = np.full(batch, float(init_step))
    for _ in range(max_sweeps):
        live = step >= tol
        if not live.any():
            break
        improved = np.zeros(batch, dtype=bool)
        for i in range(t):
            for sgn in (1.0, -1.0):
                cand = np.minimum(np.maximum(r[:, i] + sgn * step, 1.0), hi)
                rc = r.copy()
                rc[:, i] = cand
                fc = objective_batch(rc, n, weights)
                better = live & (fc < f)
                r[better, i] = cand[better]
                f = np.where(better, fc, f)
                improved |= better
        step = np.where(improved, step, step * shrink)
    return r, f

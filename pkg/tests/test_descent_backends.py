"""Twin-kernel contract: compiled and numpy descent must agree bit-for-bit."""

from __future__ import annotations

import numpy as np
import pytest

from soscert import _descent_py
from soscert._backend import SEARCH_BACKEND
from soscert.exactnum import Q
from soscert.laurentk import _float_weights, exact_objective

try:
    from soscert import _descent
except ImportError:
    _descent = None


def _starts(n, t, batch, seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(1.0, float(n), size=(batch, t))


def test_objective_batch_matches_exact():
    n, t = 8, 3
    starts = _starts(n, t, 12, 5)
    w = _float_weights(n)
    got = _descent_py.objective_batch(starts, n, w)
    for row, val in zip(starts, got):
        snapped = [Q(round(x * 2**40), 2**40) for x in row]
        assert abs(float(exact_objective(snapped, n)) - val) < 1e-6


@pytest.mark.skipif(_descent is None, reason="compiled kernel not built")
def test_backends_bit_identical():
    for n, t, seed in [(6, 2, 0), (9, 5, 1), (12, 7, 2), (12, 11, 3)]:
        starts = _starts(n, t, 24, seed)
        w = _float_weights(n)
        args = (starts, n, w, (n - 1) / 2.0, 0.5, 1e-7, 20000)
        rc, vc = _descent.descend_batch(*args)
        rp, vp = _descent_py.descend_batch(*args)
        assert np.array_equal(rc, rp)
        assert np.array_equal(vc, vp)


@pytest.mark.skipif(_descent is None, reason="compiled kernel not built")
def test_backends_bit_identical_degree_zero():
    starts = np.empty((4, 0))
    w = _float_weights(5)
    args = (starts, 5, w, 2.0, 0.5, 1e-7, 100)
    _, vc = _descent.descend_batch(*args)
    _, vp = _descent_py.descend_batch(*args)
    assert np.array_equal(vc, vp)


def test_selected_backend_is_reported():
    assert SEARCH_BACKEND in ("compiled", "python")
    if _descent is not None:
        assert SEARCH_BACKEND == "compiled"


def test_descent_improves_from_structured_start():
    n, t = 9, 5
    w = _float_weights(n)
    start = np.full((1, t), float(n))
    roots, values = _descent_py.descend_batch(
        start, n, w, (n - 1) / 2.0, 0.5, 1e-7, 20000
    )
    assert values[0] <= _descent_py.objective_batch(start, n, w)[0]
    assert np.all(roots >= 1.0) and np.all(roots <= n)

"""Reduced Hankel criterion: block shapes, verdicts, witness reconstruction."""

from __future__ import annotations

import random

from soscert.certificates import Instance, z_solution
from soscert.exactnum import Q
from soscert.moments import SymmetricAssignment, build_moment_matrix, psd_exact
from soscert.symsos import (
    GPolySpec,
    build_reduced,
    check_reduced,
    eval_condition,
    interval_root_product,
)
from soscert.unipoly import UniPoly


def _random_assignment(rng: random.Random, n: int) -> SymmetricAssignment:
    return SymmetricAssignment(
        n, [Q(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(n + 1)]
    )


def test_build_example_n3_t1_uniform():
    w = SymmetricAssignment(3, [Q(1, 8)] * 4)
    crit = build_reduced(w, 1)
    a0 = next(b for b in crit.blocks if b.h == 0 and b.kind == "A")
    assert a0.rows == [[1, Q(3, 2)], [Q(3, 2), 3]]


def test_h_range_cut_at_half_n():
    # n=4, t=3: h runs 0..2 only, and B blocks vanish when t-h = 0
    crit = build_reduced(SymmetricAssignment(4, [1] * 5), 3)
    hs = {(b.h, b.kind) for b in crit.blocks}
    assert hs == {(0, "A"), (0, "B"), (1, "A"), (1, "B"), (2, "A"), (2, "B")}
    crit2 = build_reduced(SymmetricAssignment(4, [1] * 5), 2)
    assert (2, "A") in {(b.h, b.kind) for b in crit2.blocks}
    assert (2, "B") not in {(b.h, b.kind) for b in crit2.blocks}


def test_zero_weights_zero_blocks():
    crit = build_reduced(SymmetricAssignment(5, [0] * 6), 2)
    assert all(x == 0 for b in crit.blocks for row in b.rows for x in row)
    assert check_reduced(crit).is_psd


def test_uniform_weights_pass():
    for n in range(2, 8):
        for t in range(1, n // 2 + 1):
            w = SymmetricAssignment(n, [Q(1, 2**n)] * (n + 1))
            assert check_reduced(build_reduced(w, t)).is_psd


def test_certificate_weights_pass_at_level():
    w = z_solution(Instance(5, 1))
    assert check_reduced(build_reduced(w, 2)).is_psd


def test_negative_mass_fails_with_unit_witness():
    w = SymmetricAssignment(4, [-1, 0, 0, 0, 0])
    verdict = check_reduced(build_reduced(w, 1))
    assert not verdict.is_psd
    assert verdict.failing_h == 0 and verdict.failing_kind == "A"
    g = verdict.violating
    # the violating polynomial is the constant square 1
    assert g.sigma_p == UniPoly([1]) and g.sigma_q.is_zero()
    assert eval_condition(w, g) == -1


def test_witness_reconstruction_random_failures():
    rng = random.Random(808)
    failures = 0
    for _ in range(60):
        n = rng.randint(2, 8)
        t = rng.randint(1, min(4, n))
        w = _random_assignment(rng, n)
        verdict = check_reduced(build_reduced(w, t))
        if verdict.is_psd:
            continue
        failures += 1
        g = verdict.violating
        assert g.verify_membership()
        assert eval_condition(w, g) < 0
    assert failures >= 20


def test_eval_condition_normalization_sum():
    rng = random.Random(11)
    w = _random_assignment(rng, 6)
    g = GPolySpec(n=6, t=2, h=0, sigma_p=UniPoly([1]), sigma_q=UniPoly())
    assert eval_condition(w, g) == w.binomial_sum()


def test_eval_condition_nonnegative_on_certificate():
    inst = Instance(7, 2)
    w = z_solution(inst)
    rng = random.Random(5150)
    t = inst.t
    for _ in range(25):
        h = rng.randint(0, min(t, inst.n // 2))
        p = UniPoly([Q(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(t - h + 1)])
        q = UniPoly([Q(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(t - h)])
        g = GPolySpec(n=inst.n, t=t, h=h, sigma_p=p, sigma_q=q)
        assert eval_condition(w, g) >= 0


def test_eval_condition_h_positive_ignores_w0():
    rng = random.Random(6)
    base = _random_assignment(rng, 6)
    changed = SymmetricAssignment(6, (Q(99),) + base.weights[1:])
    g = GPolySpec(
        n=6, t=2, h=1, sigma_p=UniPoly([2, 1]), sigma_q=UniPoly([Q(1, 3)])
    )
    assert eval_condition(base, g) == eval_condition(changed, g)


def test_interval_root_product_zeros_and_sign():
    n, h = 7, 2
    pi = interval_root_product(n, h)
    for k in [0, 1, 6, 7]:
        assert pi(k) == 0
    for k in range(h, n - h + 1):
        assert pi(k) > 0
    assert interval_root_product(5, 0) == UniPoly([1])


def test_membership_rejects_overdegree():
    g = GPolySpec(n=5, t=1, h=0, sigma_p=UniPoly([0, 0, 1]), sigma_q=UniPoly())
    assert not g.verify_membership()


def test_soundness_small_random():
    # criterion PASS must imply the full level-t moment matrix is PSD
    rng = random.Random(321)
    passes = 0
    for _ in range(40):
        n = rng.randint(2, 7)
        t = rng.randint(1, min(3, n))
        w = (
            _random_assignment(rng, n)
            if rng.random() < 0.5
            else SymmetricAssignment(
                n, [Q(rng.randint(0, 6), rng.randint(1, 6)) for _ in range(n + 1)]
            )
        )
        if check_reduced(build_reduced(w, t)).is_psd:
            passes += 1
            assert psd_exact(build_moment_matrix(w, t)).is_psd
    assert passes >= 10


def test_reduced_criterion_json():
    w = SymmetricAssignment(3, [Q(1, 8)] * 4)
    d = build_reduced(w, 1).to_json_dict()
    assert d["n"] == 3 and d["t"] == 1
    kinds = {(b["h"], b["kind"]) for b in d["blocks"]}
    assert (0, "A") in kinds and (1, "A") in kinds
    a0 = next(b for b in d["blocks"] if b["h"] == 0 and b["kind"] == "A")
    assert a0["entries"] == [["1", "3/2"], ["3/2", "3"]]

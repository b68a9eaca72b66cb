import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relucalc import Network, NetworkError, affine_net, identity_net, metrics, realize
from relucalc.analysis import (
    TargetFunction, bump_d, bump_one_sided, bump_two_sided, count_pieces, eval_target,
    exact_line_trace, growth_bound, growth_bound_check, max_error_on_box, max_error_on_points,
    oscillation_witnesses_product, oscillation_witnesses_sum, piece_bound, product_lower_bound,
    sampled_kinks, sampled_pieces, shallow_incapacity_certificate, shallow_param_requirement,
    witness_count, box_samples, box_corners,
)
from relucalc.constructors import ContractError, TargetSpec, build, sawtooth_net

from conftest import random_net
import oracles


def relu_net():
    return Network([(np.array([[1.0]]), np.zeros(1)), (np.array([[1.0]]), np.zeros(1))])


def check_trace_against_sampling(net, p, q, samples):
    tr = exact_line_trace(net, p, q)
    t = np.linspace(0, 1, samples)
    vals = realize(net, tr.point(t))[:, 0]
    dev = np.abs(tr(t) - vals) / np.maximum(1.0, np.abs(vals))
    return tr, float(dev.max()), sampled_kinks(vals) + 1


# tracing

def test_trace_examples():
    assert count_pieces(exact_line_trace(identity_net(1), [-1.0], [1.0])) == 1
    tr = exact_line_trace(relu_net(), [-1.0], [1.0])
    assert count_pieces(tr) == 2
    assert tr.breakpoints[1] == 0.5
    np.testing.assert_array_equal(tr.slopes, [0.0, 2.0])
    assert count_pieces(exact_line_trace(sawtooth_net(1.0, 2), [0.0], [1.0])) == oracles.SAWTOOTH_1_2_PIECES


@pytest.mark.parametrize("n", range(0, 7))
def test_sawtooth_piece_counts(n):
    net = sawtooth_net(1.0, n)
    tr, dev, oracle = check_trace_against_sampling(net, [0.0], [1.0], 100_000)
    assert count_pieces(tr) == 2 ** (n + 1) == oracle
    assert dev <= 1e-9


def test_affine_trace_is_one_piece(rng):
    net = affine_net(rng.normal(size=(1, 4)), [0.3])
    assert count_pieces(exact_line_trace(net, rng.normal(size=4), rng.normal(size=4))) == 1


def test_shallow_piece_count_at_most_width_plus_one(rng):
    for _ in range(100):
        w = int(rng.integers(1, 40))
        d = int(rng.integers(1, 5))
        net = random_net(rng, [d, w, 1])
        p, q = rng.uniform(-10, 10, d), rng.uniform(-10, 10, d)
        assert count_pieces(exact_line_trace(net, p, q)) <= w + 1


def test_trace_errors():
    with pytest.raises(NetworkError):
        exact_line_trace(identity_net(1), [1.0], [1.0])
    with pytest.raises(NetworkError):
        exact_line_trace(identity_net(2), [0.0, 0.0], [1.0, 1.0])
    with pytest.raises(NetworkError):
        exact_line_trace(identity_net(1), [0.0, 1.0], [1.0, 0.0])


def test_trace_matches_sampling_oracle(rng):
    for _ in range(100):
        H = int(rng.integers(1, 5))
        d = int(rng.integers(1, 5))
        dims = [d] + [int(rng.integers(1, 33)) for _ in range(H)] + [1]
        net = random_net(rng, dims)
        p, q = rng.uniform(-3, 3, d), rng.uniform(-3, 3, d)
        tr, dev, oracle = check_trace_against_sampling(net, p, q, 100_000)
        assert count_pieces(tr) >= oracle
        assert dev <= 1e-9
        assert np.all(np.diff(tr.breakpoints) > 0)
        assert tr.breakpoints[0] == 0.0 and tr.breakpoints[-1] == 1.0
        m = metrics(net)
        assert count_pieces(tr) <= piece_bound(m.param_count, m.hidden_length)


def test_trace_adjacent_pieces_differ(rng):
    net = random_net(rng, [2, 20, 20, 1])
    tr = exact_line_trace(net, [-4.0, 1.0], [5.0, -2.0])
    same = (tr.slopes[1:] == tr.slopes[:-1]) & (tr.intercepts[1:] == tr.intercepts[:-1])
    assert not same.any()


def test_trace_chunking_matches_unchunked(rng):
    net = sawtooth_net(1.0, 6)
    a = exact_line_trace(net, [0.0], [1.0])
    b = exact_line_trace(net, [0.0], [1.0], budget=16)
    assert count_pieces(a) == count_pieces(b)
    np.testing.assert_allclose(a.breakpoints, b.breakpoints, atol=1e-12)


def test_sampled_kinks_threshold():
    assert sampled_kinks(np.linspace(0, 1, 50)) == 0
    f = np.abs(np.linspace(-1, 1, 101))
    assert sampled_kinks(f) == 1


# formulas

def test_piece_bound_examples():
    assert piece_bound(8, 2) == oracles.PIECE_BOUND_P8_H2
    assert piece_bound(13, 0) == 13
    assert piece_bound(13, 1) == 13


def test_product_lower_bound_examples():
    assert product_lower_bound(10, 1, 1.0) == pytest.approx(oracles.PRODUCT_LB_D10, rel=1e-15)
    assert product_lower_bound(1, 1, 1.0) == oracles.PRODUCT_LB_D1
    vals = [product_lower_bound(d, 2, 1.0) for d in range(1, 15)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    with pytest.raises(ContractError):
        product_lower_bound(3, 1, 8.0)


def test_shallow_param_requirement():
    assert shallow_param_requirement(10, 1) == 1024.0
    assert shallow_param_requirement(10, 2) == 64.0


# growth

def test_growth_examples(rng):
    res = growth_bound_check(identity_net(3), -1.0, 1.0)
    assert res.bound == pytest.approx(oracles.GROWTH_BOUND_ID3, rel=1e-12)
    assert res.measured <= 1.0 and res.passed
    zero = affine_net(np.zeros((1, 2)))
    res = growth_bound_check(zero, -3, 3)
    assert res.measured == 0.0 and res.passed
    for _ in range(100):
        dims = [int(rng.integers(1, 5))] + [int(rng.integers(1, 9)) for _ in range(int(rng.integers(0, 4)))] + [1]
        net = random_net(rng, dims, scale=float(rng.uniform(0.1, 4)))
        a = float(rng.uniform(-5, 0))
        assert growth_bound_check(net, a, a + float(rng.uniform(0, 5))).passed


def test_growth_bound_overflow_is_infinite():
    net = Network([(np.full((50, 1), 1e6), np.zeros(50))] + [(np.full((50, 50), 1e6), np.zeros(50))] * 60
                  + [(np.ones((1, 50)), np.zeros(1))])
    assert growth_bound(net, -1, 1) == math.inf


# targets and bumps

def test_eval_target_examples():
    t = TargetFunction(TargetSpec("product", 3))
    assert eval_target(t, [2.0, 3.0, -1.0]) == -6.0
    s = TargetSpec("sin_sum", 2, 0.0, 1.0)
    tb = TargetFunction(s, delta=0.5)
    assert eval_target(tb, [1.6, 0.2]) == 0.0
    assert eval_target(tb, [-0.7, 0.5]) == 0.0
    mid = [0.5, 0.5]
    assert eval_target(tb, mid) == eval_target(TargetFunction(s), mid)
    assert bump_two_sided(0.5, 0.0, 1.0, 0.3) == 1.0
    with pytest.raises(NetworkError):
        eval_target(t, [1.0, 2.0])


def test_target_families():
    x = np.array([[0.5, 2.0]])
    sp = TargetSpec("sin_product", 2, gamma=0.5, beta=2.0, kappa=3.0, phi=0.1)
    assert eval_target(TargetFunction(sp), x)[0] == pytest.approx(3 * math.sin(0.5 * 4 * 1.0 + 0.1))
    ss = TargetSpec("sin_sum", 2, gamma=2.0, kappa=0.5, phi=-0.2)
    assert eval_target(TargetFunction(ss), x)[0] == pytest.approx(0.5 * math.sin(2 * 4 * 2.5 - 0.2))
    pg = TargetSpec("periodic_generic", 1, gamma=0.5, beta=4.0, phi=1.0)
    assert eval_target(TargetFunction(pg), [[0.3]])[0] == pytest.approx(math.sin(0.6 + 1.0))


@pytest.mark.parametrize("delta", [0.1, 1.0, 10.0])
def test_bump_one_sided(delta):
    x = np.linspace(-delta, 2 * delta, 200_001)
    y = bump_one_sided(x, delta)
    assert np.all(y[x <= 0] == 0) and np.all(y[x >= delta] == 1)
    assert np.all(np.diff(y) >= 0)
    assert np.max(np.abs(np.diff(y)) / np.diff(x)) <= 48 / delta + 1e-6


def test_bump_d_lipschitz(rng):
    for d in (1, 2, 5):
        for delta in (0.1, 1.0, 10.0):
            a, b = -1.0, 1.0
            for _ in range(20):
                p = rng.uniform(a - delta, b + delta, d)
                v = rng.normal(size=d)
                v /= np.linalg.norm(v)
                t = np.linspace(-2 * delta, 2 * delta, 4001)
                vals = bump_d(p + np.outer(t, v), a, b, delta)
                assert np.max(np.abs(np.diff(vals)) / np.diff(t)) <= 48 * d / delta + 1e-6


def test_bump_d_support(rng):
    a, b, delta, d = 0.0, 2.0, 0.5, 3
    inside = rng.uniform(a, b, (1000, d))
    assert np.all(bump_d(inside, a, b, delta) == 1.0)
    far = rng.uniform(a - delta, b + delta, (1000, d))
    far[:, 1] = rng.choice([a - delta - 1, b + delta + 0.01], 1000)
    assert np.all(bump_d(far, a, b, delta) == 0.0)


# error measurement

def test_max_error_examples():
    net = identity_net(2)
    assert max_error_on_box(net, TargetFunction(kind="identity"), -1, 1, 1000) == 0.0
    with pytest.raises(NetworkError):
        max_error_on_points(net, TargetFunction(kind="identity"), np.ones((3, 3)))


def test_samples_deterministic_and_inside():
    X = box_samples(3, -2.0, 5.0, 1000, seed=4)
    assert np.array_equal(X, box_samples(3, -2.0, 5.0, 1000, seed=4))
    assert not np.array_equal(X, box_samples(3, -2.0, 5.0, 1000, seed=5))
    assert X.min() >= -2 and X.max() <= 5
    C = box_corners(3, -2.0, 5.0)
    assert C.shape == (8, 3) and len({tuple(r) for r in C}) == 8
    assert box_corners(14, 0, 1).shape == (4096, 14)


def test_thread_count_does_not_change_result(monkeypatch, rng):
    net = random_net(rng, [3, 16, 1])
    t = TargetFunction(TargetSpec("product", 3))
    X = rng.normal(size=(120_000, 3))
    monkeypatch.setenv("RELU_CALC_THREADS", "1")
    one = max_error_on_points(net, t, X)
    monkeypatch.setenv("RELU_CALC_THREADS", "4")
    assert max_error_on_points(net, t, X) == one


# witnesses

def test_witness_counts():
    for d, S in oracles.WITNESS_COUNTS.items():
        assert witness_count(d) == S


def test_witness_product_examples():
    w1 = oscillation_witnesses_product(TargetSpec("sin_product", 1, 0, 7))
    assert w1.S == 1
    w5 = oscillation_witnesses_product(TargetSpec("sin_product", 5, 0, 7))
    assert w5.S == 65
    assert np.all(np.abs(np.abs(np.diff(w5.values)) - 2.0) <= 1e-9)
    assert w5.points.min() >= 0 and w5.points.max() <= 7


@pytest.mark.parametrize("d", range(3, 9))
def test_witness_product_invariants(d):
    spec = TargetSpec("sin_product", d, 0.0, 7.0, 1.0, 1.0, 1.5, 0.3)
    W = oscillation_witnesses_product(spec)
    assert W.S == 2 ** (d + 1) + 1
    steps = np.diff(W.points, axis=0)
    assert np.all(np.abs(steps - W.step) <= 1e-12)
    diffs = np.diff(W.values)
    assert np.all(np.abs(np.abs(diffs) - 2 * spec.kappa) <= 1e-9)
    assert np.all(np.sign(diffs[1:]) == -np.sign(diffs[:-1]))
    assert np.all((W.points >= spec.a) & (W.points <= spec.b))


def test_witness_product_negative_box():
    spec = TargetSpec("sin_product", 4, -9.0, -2.0, 0.8, 1.2, 1.0, -1.0)
    W = oscillation_witnesses_product(spec)
    assert np.all(np.abs(np.abs(np.diff(W.values)) - 2) <= 1e-9)
    assert np.all((W.points >= -9) & (W.points <= -2))


def test_witness_sum_examples():
    spec = TargetSpec("sin_sum", 3, 0.0, math.pi)
    W = oscillation_witnesses_sum(spec)
    assert W.S == 17
    assert np.all(W.step == W.step[0])
    assert np.all(np.abs(np.abs(np.diff(W.values)) - 2) <= 1e-9)
    assert np.all(W.points[:, 0:1] == W.points)


@pytest.mark.parametrize("d", range(3, 9))
def test_witness_sum_invariants(d):
    spec = TargetSpec("sin_sum", d, -1.0, 3.0, 2.0, 1.0, 0.7, 2.0)
    W = oscillation_witnesses_sum(spec)
    assert W.S == 2 ** (d + 1) + 1
    diffs = np.diff(W.values)
    assert np.all(np.abs(np.abs(diffs) - 1.4) <= 1e-9)
    assert np.all(np.sign(diffs[1:]) == -np.sign(diffs[:-1]))
    assert np.all((W.points >= -1) & (W.points <= 3))


def test_witness_contracts():
    with pytest.raises(ContractError):
        oscillation_witnesses_product(TargetSpec("sin_product", 3, 0.0, 1.0))
    with pytest.raises(ContractError):
        oscillation_witnesses_sum(TargetSpec("sin_sum", 3, 0.0, 1.0))
    with pytest.raises(ContractError):
        oscillation_witnesses_sum(TargetSpec("sin_product", 3, 0.0, 7.0))


# certificates

def test_certificate_affine_net():
    spec = TargetSpec("sin_product", 3, 0.0, 7.0)
    W = oscillation_witnesses_product(spec)
    net = affine_net([[0.1, -0.2, 0.05]], [0.3])
    cert = shallow_incapacity_certificate(net, W, 0.5)
    assert cert.pieces == 1 and cert.needed == 8 and cert.certified
    err = abs(realize(net, cert.violating_point)[0] - eval_target(TargetFunction(spec), cert.violating_point))
    assert err == cert.error_at_point > 0.5


def test_certificate_wide_shallow_net():
    rng = np.random.default_rng(5)
    spec = TargetSpec("sin_product", 10, 0.0, 7.0)
    W = oscillation_witnesses_product(spec)
    net = random_net(rng, [10, 512, 1])
    cert = shallow_incapacity_certificate(net, W, 0.5)
    assert cert.pieces <= 513 < 1024
    assert cert.certified
    err = abs(realize(net, cert.violating_point)[0] - eval_target(TargetFunction(spec), cert.violating_point))
    assert err > 0.5


def test_certificate_soundness_on_random_shallow_nets():
    rng = np.random.default_rng(8)
    for spec in (TargetSpec("sin_product", 4, 0.0, 7.0, kappa=2.0), TargetSpec("sin_sum", 4, 0.0, math.pi)):
        W = oscillation_witnesses_product(spec) if spec.family == "sin_product" else oscillation_witnesses_sum(spec)
        for _ in range(20):
            net = random_net(rng, [4, int(rng.integers(1, 15)), 1], scale=float(rng.uniform(0.1, 3)))
            cert = shallow_incapacity_certificate(net, W, 0.9 * spec.kappa)
            assert cert.pieces < 16 and cert.certified
            err = abs(realize(net, cert.violating_point)[0] - eval_target(TargetFunction(spec), cert.violating_point))
            assert err > 0.9 * spec.kappa


def test_certificate_contracts():
    W3 = oscillation_witnesses_product(TargetSpec("sin_product", 3, 0.0, 7.0))
    W2 = oscillation_witnesses_product(TargetSpec("sin_product", 2, 0.0, 7.0))
    net = affine_net([[1.0, 1.0, 1.0]])
    with pytest.raises(ContractError):
        shallow_incapacity_certificate(affine_net([[1.0, 1.0]]), W2, 0.5)
    with pytest.raises(ContractError):
        shallow_incapacity_certificate(net, W3, 1.0)
    with pytest.raises(NetworkError):
        shallow_incapacity_certificate(identity_net(3), W3, 0.5)


@pytest.mark.slow
def test_certificate_on_deep_construction():
    spec = TargetSpec("sin_product", 5, 0.0, 7.0)
    net, rep = build("sin_product", spec=spec, eps=0.25)
    W = oscillation_witnesses_product(spec)
    cert = shallow_incapacity_certificate(net, W, 0.25)
    assert cert.pieces >= 2 ** 5
    assert not cert.certified and cert.violating_point is None


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), width=st.integers(1, 24), depth=st.integers(1, 3))
def test_piece_bound_property(seed, width, depth):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 4))
    net = random_net(rng, [d] + [width] * depth + [1])
    p, q = rng.uniform(-10, 10, d), rng.uniform(-10, 10, d)
    if np.array_equal(p, q):
        return
    m = metrics(net)
    assert count_pieces(exact_line_trace(net, p, q)) <= piece_bound(m.param_count, m.hidden_length)

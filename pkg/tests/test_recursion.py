import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_branch, werner_entropy
from purecode.bell import BellDiagonal, entropy, werner_state
from purecode.recursion import (ThresholdBracketError, branch_update, entropy_recursive,
                                expected_entropy, leaf_states, solve_threshold, yield_at,
                                yield_curve)

TABLE_II = {1: .8107, 2: .8115, 3: .8099, 4: .8101, 5: .8096, 6: .8100, 7: .8098,
            8: .8101, 9: .8101, 10: .8103, 11: .8104, 12: .8106, 13: .8107, 14: .8108}

states = st.lists(st.floats(0, 1), min_size=4, max_size=4).filter(lambda v: sum(v) > 1e-3).map(
    BellDiagonal.from_unnormalized)
fids = st.floats(0, 1)


def test_branch_noiseless():
    up = branch_update(werner_state(1.0), 1.0)
    assert up.p0 == 1.0
    assert up.m0.allclose(werner_state(1.0))
    assert up.reachable == (True, False)


@pytest.mark.parametrize("f", [0.3, 0.81, 0.95])
def test_branch_uniform_source(f):
    g = (1 - f) / 3
    up = branch_update(werner_state(0.25), f)
    assert up.p0 == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(up.m0.probs, [(f + g) / 2, g, (f + g) / 2, g], atol=1e-12)


def test_branch_werner_source():
    f = 0.81
    g = (1 - f) / 3
    up = branch_update(werner_state(f), f)
    assert up.p0 == pytest.approx((f + g) ** 2 + 4 * g ** 2, abs=1e-12)
    u0, u1 = brute_force_branch(werner_state(f).probs, f)
    assert up.p0 == pytest.approx(u0.sum(), abs=1e-12)


@given(states, fids)
def test_branch_matches_brute_force(m, f):
    up = branch_update(m, f)
    u0, u1 = brute_force_branch(m.probs, f)
    assert up.p0 + up.p1 == pytest.approx(1.0, abs=1e-12)
    assert abs(sum(up.m0) - 1) < 1e-12 and abs(sum(up.m1) - 1) < 1e-12
    assert up.p0 == pytest.approx(u0.sum(), abs=1e-12)
    if up.reachable[0]:
        assert np.allclose(up.p0 * up.m0.probs, u0, atol=1e-12)
    if up.reachable[1]:
        assert np.allclose(up.p1 * up.m1.probs, u1, atol=1e-12)


def test_expected_entropy_noiseless(backend):
    for k in (1, 2, 7, 12):
        assert expected_entropy(k, 1.0).s_value == 0.0


def test_expected_entropy_table_values(backend):
    assert expected_entropy(1, 0.8107).s_value == pytest.approx(1.0, abs=2e-4)
    assert expected_entropy(5, 0.8096).s_value == pytest.approx(1.0, abs=2e-4)


def test_expected_entropy_rejects():
    with pytest.raises(ValueError):
        expected_entropy(0, 0.9)
    with pytest.raises(ValueError):
        expected_entropy(25, 0.9)
    with pytest.raises(ValueError):
        expected_entropy(30, 0.9, max_k=24)


def test_k1_closed_form(backend):
    rng = np.random.default_rng(11)
    for f in rng.uniform(0, 1, 100):
        assert expected_entropy(1, f).s_value == pytest.approx(werner_entropy(f), abs=1e-12)
        assert expected_entropy(1, f).s_value == pytest.approx(entropy(werner_state(f)), abs=1e-12)


@pytest.mark.parametrize("k", range(1, 15))
def test_leaf_mass(backend, k):
    res = expected_entropy(k, 0.83)
    assert res.leaf_count == 2 ** (k - 1)
    assert res.leaf_mass == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("k", range(1, 9))
def test_kernel_matches_direct_recursion(backend, k):
    for f in (0.8, 0.85, 0.9):
        assert expected_entropy(k, f).s_value == pytest.approx(
            entropy_recursive(k, werner_state(f), f), abs=1e-12)


def test_leaf_states_partition():
    leaves = leaf_states(4, 0.85)
    assert sorted(leaves) == [format(i, "03b") for i in range(8)]
    assert sum(v.sum() for v in leaves.values()) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("k", range(1, 8))
def test_entropy_nonincreasing_in_f(backend, k):
    fs = np.round(np.arange(0.80, 1.0 + 5e-4, 1e-3), 10)
    s = [expected_entropy(k, f).s_value for f in fs]
    assert all(b <= a + 1e-9 for a, b in zip(s, s[1:]))


@pytest.mark.parametrize("k, expected", sorted(TABLE_II.items()))
def test_solve_threshold_table(backend, k, expected):
    assert solve_threshold(k) == pytest.approx(expected, abs=2e-4)


def test_solve_threshold_bisection_width():
    f = solve_threshold(1)
    assert werner_entropy(f - 1e-7) > 1.0 > werner_entropy(f + 1e-7)


def test_solve_threshold_bracket_failure():
    with pytest.raises(ThresholdBracketError):
        solve_threshold(1, lo=0.9, hi=0.99)


def test_yield_at():
    assert yield_at(3, 1.0).d_value == pytest.approx(1 / 3, abs=1e-15)
    assert yield_at(1, 0.8107).d_value == pytest.approx(0.0, abs=2e-4)
    # threshold for k=5 solves to about 0.80964, so 0.8100 is inside the positive region
    d = yield_at(5, 0.8100).d_value
    assert d > 0
    assert d == pytest.approx((1 - expected_entropy(5, 0.81).s_value) / 5, abs=1e-15)


def test_yield_curve_order_and_values():
    pts = yield_curve(range(1, 8), 0.80, 1.00, 0.005)
    assert len(pts) == 7 * 41
    assert [p.k for p in pts[:41]] == [1] * 41
    assert pts[40].f == 1.0 and pts[40].d_value == 1.0
    at_one = [p.d_value for p in pts if p.f == 1.0]
    assert at_one == pytest.approx([1 / k for k in range(1, 8)], abs=1e-15)
    p = next(p for p in pts if p.k == 1 and abs(p.f - 0.85) < 1e-12)
    assert p.d_value == pytest.approx(1 - werner_entropy(0.85), abs=1e-12)


def test_yield_curve_rejects():
    with pytest.raises(ValueError):
        yield_curve([], 0.8, 1.0, 0.01)
    with pytest.raises(ValueError):
        yield_curve([1], 0.9, 0.8, 0.01)
    with pytest.raises(ValueError):
        yield_curve([1], 0.8, 0.9, 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 10), st.floats(0.5, 1.0))
def test_yield_clamped(k, f):
    d = yield_at(k, f).d_value
    assert 0.0 <= d <= 1.0 / k + 1e-15

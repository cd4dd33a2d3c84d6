from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import product
from math import floor

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mkdistill.bec import be_state
from mkdistill.bell import violates_mk
from mkdistill.dense import PT, densify, is_npt
from mkdistill.errors import IndexRangeError
from mkdistill.family import delta, ghz_state, new_lambda_state
from mkdistill.splits import (Split, distillation_probability_bound, enumerate_distillable,
                              find_distillable_pair, is_pair_distillable, is_split_distillable,
                              min_distillable_bound, separating_splits, split_from_groups,
                              split_from_index)

from oracles import edge_states, stressed_states

ANY_STATE = st.one_of(stressed_states(2, 9), edge_states(2, 10))

BALANCED3 = new_lambda_state(3, Fraction(1, 2), Fraction(1, 2), {})


@pytest.mark.parametrize("n, j, with_last, other", [
    (6, 3, {1, 2, 3, 6}, {4, 5}),
    (3, 1, {1, 3}, {2}),
    (4, 7, {4}, {1, 2, 3}),
    (6, 24, {3, 4, 5, 6}, {1, 2}),
])
def test_split_groups(n, j, with_last, other):
    sp = split_from_index(n, j)
    assert sp.side_with_last == with_last
    assert sp.other_side == other


@pytest.mark.parametrize("n, j", [(3, 0), (3, 4), (1, 1)])
def test_split_range(n, j):
    with pytest.raises(IndexRangeError):
        split_from_index(n, j)


@settings(max_examples=200)
@given(st.integers(2, 16).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, 2 ** (n - 1) - 1))))
def test_split_round_trip(nj):
    n, j = nj
    sp = split_from_index(n, j)
    assert sp.side_with_last | sp.other_side == set(range(1, n + 1))
    assert not sp.side_with_last & sp.other_side
    assert sp.other_side and n in sp.side_with_last
    assert split_from_groups(n, sp.other_side) == sp


def test_split_bijection_small():
    for n in range(2, 7):
        seen = {split_from_index(n, j).other_side for j in range(1, 2 ** (n - 1))}
        assert len(seen) == 2 ** (n - 1) - 1


def test_is_split_distillable_examples(rho6):
    assert not is_split_distillable(rho6, 3)
    assert is_split_distillable(rho6, 1)
    assert not any(is_split_distillable(BALANCED3, j) for j in (1, 2, 3))
    with pytest.raises(IndexRangeError):
        is_split_distillable(rho6, 32)


def test_enumerate_examples(rho6):
    rep = enumerate_distillable(rho6)
    assert rep.count == 27 and rep.total == 31 and rep.bound == 27
    assert rep.undistillable == (3, 6, 12, 24)
    assert rep.distillable_set == set(range(1, 32)) - {3, 6, 12, 24}
    assert enumerate_distillable(ghz_state(4)).count == 7
    assert enumerate_distillable(BALANCED3).count == 0


def test_enumerate_is_sparse_for_large_n():
    rep = enumerate_distillable(be_state(30))
    assert rep.count == 2 ** 29 - 1 - 28
    assert len(rep.undistillable) == 28


@pytest.mark.parametrize("n, expected", [(2, 1), (3, 3), (4, 6), (5, 13), (6, 27)])
def test_min_bound_values(n, expected):
    assert min_distillable_bound(n) == expected


def test_min_bound_against_high_precision():
    with localcontext() as ctx:
        ctx.prec = 80
        for n in range(2, 100):
            a = Decimal(2) ** (n - 1)
            assert min_distillable_bound(n) == floor(a - a.sqrt() + 1)


def test_probability_bound_values():
    assert distillation_probability_bound(3) == pytest.approx(2 / 3, abs=1e-15)
    assert distillation_probability_bound(5) == pytest.approx(0.8, abs=1e-15)
    vals = [distillation_probability_bound(n) for n in range(2, 60)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1
    for n in range(2, 30):
        a = 2 ** (n - 1)
        assert distillation_probability_bound(n) == pytest.approx((a - a ** 0.5) / (a - 1), rel=1e-12)


def test_separating_examples():
    assert separating_splits(3, 1, 3) == {2, 3}
    assert separating_splits(3, 1, 2) == {1, 2}
    with pytest.raises(IndexRangeError):
        separating_splits(3, 2, 2)
    with pytest.raises(IndexRangeError):
        separating_splits(3, 1, 4)


@pytest.mark.parametrize("n", range(2, 8))
def test_separating_matches_group_oracle(n):
    for k in range(1, n + 1):
        for kp in range(k + 1, n + 1):
            got = separating_splits(n, k, kp)
            assert len(got) == 2 ** (n - 2)
            brute = set()
            for j in range(1, 2 ** (n - 1)):
                groups = Split(n, j)
                if (k in groups.other_side) != (kp in groups.other_side):
                    brute.add(j)
            assert got == brute


def test_pair_examples(rho6):
    assert all(is_pair_distillable(ghz_state(4), k, kp) for k in range(1, 5) for kp in range(k + 1, 5))
    assert not any(is_pair_distillable(rho6, k, kp) for k in range(1, 7) for kp in range(k + 1, 7))
    assert not is_pair_distillable(BALANCED3, 1, 2)
    assert find_distillable_pair(rho6) is None
    assert find_distillable_pair(ghz_state(3)) == (1, 2)
    assert find_distillable_pair(BALANCED3) is None


@settings(max_examples=150, deadline=None)
@given(st.one_of(stressed_states(2, 7), edge_states(2, 7)))
def test_pair_is_and_over_separating_splits(state):
    n = state.n_qubits
    for k in range(1, n + 1):
        for kp in range(k + 1, n + 1):
            expected = all(is_split_distillable(state, j) for j in separating_splits(n, k, kp))
            assert is_pair_distillable(state, k, kp) == expected


@settings(max_examples=600, deadline=None)
@given(ANY_STATE)
def test_counting_bound(state):
    rep = enumerate_distillable(state)  # raises TheoremViolation on failure
    brute = sum(2 * state.lam(j) < abs(delta(state)) for j in range(1, 2 ** (state.n_qubits - 1)))
    assert rep.count == brute
    if violates_mk(state):
        assert rep.count >= min_distillable_bound(state.n_qubits)


@settings(max_examples=600, deadline=None)
@given(ANY_STATE)
def test_few_distillable_splits_means_no_violation(state):
    n = state.n_qubits
    a = 2 ** (n - 1)
    m = enumerate_distillable(state).count
    # m <= a - sqrt(a)  <=>  (a - m)**2 >= a, all integers
    assume((a - m) ** 2 >= a)
    d = abs(delta(state))
    assert d * d * a <= 1


def test_tight_case_reaches_bound():
    """N=5: two boundary splits still allow violation (count 13 = bound), three do not."""
    d = Fraction(3, 10)
    rest = (1 - 3 * d) / 2 / 13
    lam = {j: rest for j in range(3, 16)}
    lam.update({1: d / 2, 2: d / 2})
    s = new_lambda_state(5, d, 0, lam)
    assert violates_mk(s)
    assert enumerate_distillable(s).count == 13 == min_distillable_bound(5)
    # three undistillable splits need delta + 3 * delta <= 1, i.e. delta <= 1/4
    d = Fraction(1, 4)
    s = new_lambda_state(5, d, 0, {1: d / 2, 2: d / 2, 3: d / 2})
    assert enumerate_distillable(s).count == 12 and not violates_mk(s)


@settings(max_examples=60, deadline=None)
@given(stressed_states(2, 6))
def test_criterion_matches_dense_oracle(state):
    c = abs(delta(state))
    n = state.n_qubits
    assume(all(abs(2 * state.lam(j) - c) > 1e-6 for j in range(1, 2 ** (n - 1))))
    rho = densify(state)
    for j in range(1, 2 ** (n - 1)):
        assert (is_npt(rho, j) is PT.NPT) == is_split_distillable(state, j)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_forward_direction_on_stressed_states(n):
    """Every violating state for N <= 5 has a distillable pair (exhaustive over small supports)."""
    top = 2 ** (n - 1) - 1
    for weights in product([0, 1, 2], repeat=min(top, 7)):
        w = list(weights) + [0] * (top - len(weights))
        d = 2
        total = d + 2 * sum(w)
        s = new_lambda_state(n, Fraction(d, total), 0,
                             {j: Fraction(x, total) for j, x in enumerate(w, start=1)})
        if violates_mk(s):
            assert find_distillable_pair(s) is not None


@settings(max_examples=300, deadline=None)
@given(edge_states(3, 5))
def test_forward_direction_on_edge_states(state):
    if violates_mk(state):
        assert find_distillable_pair(state) is not None

from fractions import Fraction

import numpy as np
import pytest

from mkdistill.bec import (Verdict, be_state, certify, certify_state, j_set, verify_pair_blocking,
                           violation_cutoff)
from mkdistill.bell import canonical_mk_operator, mk_expectation, violates_mk
from mkdistill.dense import PT, densify, is_npt
from mkdistill.errors import IndexRangeError
from mkdistill.family import delta, ghz_state
from mkdistill.splits import min_distillable_bound, separating_splits


def test_j_set_examples():
    assert j_set(6) == {3, 6, 12, 24}
    assert j_set(3) == {3}
    assert j_set(8) == {3, 6, 12, 24, 48, 96}
    assert max(j_set(8)) < 2 ** 7
    with pytest.raises(IndexRangeError):
        j_set(2)


@pytest.mark.parametrize("n", range(3, 21))
def test_j_set_size_and_range(n):
    js = j_set(n)
    assert len(js) == n - 2
    assert all(1 <= j < 2 ** (n - 1) for j in js)


def test_be_state_examples(rho6):
    assert be_state(6) == rho6
    s = be_state(3)
    assert (s.lambda0_plus, s.lambda0_minus, dict(s.lambdas)) == (Fraction(1, 2), 0, {3: Fraction(1, 4)})


@pytest.mark.parametrize("n", range(3, 25))
def test_be_state_delta_on_boundary(n):
    s = be_state(n)
    assert delta(s) == Fraction(1, n - 1)
    assert all(2 * s.lam(j) == delta(s) for j in j_set(n))


def test_pair_blocking_fixtures():
    # J_3 = {3} = 0b11 puts parties 1 and 2 on the same side, so (1, 2) is not blocked
    assert not verify_pair_blocking(3)
    assert not (separating_splits(3, 1, 2) & j_set(3))
    for n in range(4, 13):
        assert verify_pair_blocking(n)


@pytest.mark.parametrize("n", range(4, 13))
def test_pair_blocking_uses_adjacent_splits(n):
    """Each pair is cut by a split isolating {p-1, p} or {p, p+1} for p = k or k'."""
    js = j_set(n)
    for k in range(1, n):
        for kp in range(k + 1, n + 1):
            candidates = {3 << s for p in (k, kp) for s in (n - 2 - p, n - 1 - p) if s >= 0} & js
            assert any(j in separating_splits(n, k, kp) for j in candidates)


def test_certify_examples():
    six = certify(6)
    assert six.verdict is Verdict.BOUND_ENTANGLED_VIOLATING
    assert six.mk_value == pytest.approx(2 ** 2.5 / 5, abs=1e-12)
    assert six.witness_kind == "dense" and six.inseparable_witness == 1
    assert certify(5).verdict is Verdict.NOT_VIOLATING
    assert certify(7).verdict is Verdict.BOUND_ENTANGLED_VIOLATING


@pytest.mark.parametrize("n", range(3, 21))
def test_violation_cutoff(n):
    cert = certify(n, use_dense=False)
    assert cert.mk_violated == (n >= 6) == violation_cutoff(n) == violates_mk(be_state(n))


@pytest.mark.parametrize("n", range(3, 13))
def test_undistillable_set_is_j_set(n):
    assert set(certify(n, use_dense=False).undistillable_splits) == j_set(n)


def test_dense_cross_check_six():
    rho = densify(be_state(6))
    assert any(is_npt(rho, j) is PT.NPT for j in range(1, 32))
    assert all(is_npt(rho, j) is not PT.NPT for j in j_set(6))
    assert mk_expectation(canonical_mk_operator(6), rho) == pytest.approx(2 ** 2.5 / 5, abs=1e-10)
    assert 31 - len(j_set(6)) == 27 == min_distillable_bound(6)


def test_certify_state_distillable_verdict():
    cert = certify_state(ghz_state(4))
    assert cert.verdict is Verdict.DISTILLABLE and not cert.all_pairs_blocked


def test_large_n_witness_falls_back_to_criterion():
    cert = certify(14)
    assert cert.witness_kind == "criterion"
    assert cert.verdict is Verdict.BOUND_ENTANGLED_VIOLATING


@pytest.mark.parametrize("n", [3, 4, 5])
def test_small_be_states_report(n):
    """Findings for the non-violating members; no claim about bound entanglement."""
    cert = certify(n)
    assert cert.verdict is Verdict.NOT_VIOLATING
    assert cert.all_pairs_blocked == (n >= 4)
    assert cert.witness_kind == "dense"
    rho = densify(be_state(n))
    assert np.linalg.eigvalsh(rho)[0] > -1e-12

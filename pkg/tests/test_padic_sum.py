from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from gevrey.exact import PAdicValue
from gevrey.guess import InsufficientCoefficients
from gevrey.padic_sum import (
    FactorialSeriesSpec,
    GuesserFailure,
    example33_pipeline,
    example33_series,
    normalize_shifted_factorial,
    padic_sum,
    padic_sums,
    partial_sum_oracle,
    telescope_decompose,
    truncation_index,
    verify_universal,
)
from gevrey.poly import Poly
from gevrey.series import FormalSeries

N_TIMES = Poly([0, 1])
SIXTH = normalize_shifted_factorial(Poly([0, 0, 0, 0, 0, 1]), 1)


def test_normalization_of_shifted_factorials():
    assert SIXTH == Poly([0, 0, 0, 0, 0, 1, 1])
    assert normalize_shifted_factorial(Poly([1]), 2) == Poly([2, 3, 1])
    with pytest.raises(ValueError):
        normalize_shifted_factorial(Poly([1]), -1)


def test_telescope_examples():
    r = telescope_decompose(N_TIMES)
    assert (r.Q, r.c, r.universal_value) == (Poly([1]), 0, -1)
    r = telescope_decompose(Poly([1]))
    assert r.c == 1 and r.universal_value is None
    assert telescope_decompose(Poly()).c == 0


@given(st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=7), max_size=7))
def test_telescope_identity(coeffs):
    P = Poly(coeffs)
    r = telescope_decompose(P)
    assert Poly([1, 1]) * r.Q.shift(1) - r.Q + r.c == P
    # uniqueness: the image of the telescope map never contains a nonzero constant
    assert r.Q.degree <= max(P.degree - 1, -1)


IMAGE = Poly([1, 1]) * Poly([2, -1, 3]).shift(1) - Poly([2, -1, 3])


@pytest.mark.parametrize("P", [N_TIMES, SIXTH, IMAGE])
def test_telescoped_partial_sums(P):
    r = telescope_decompose(P)
    assert r.c == 0
    total = 0
    for N in range(301):
        total += P(N) * factorial(N)
        if N % 50 == 0 or N < 5:
            assert total == r.Q(N + 1) * factorial(N + 1) - r.Q(0)


def test_padic_sum_examples():
    assert padic_sum(FactorialSeriesSpec(N_TIMES), 7, 30).congruent(-1)
    assert padic_sum(FactorialSeriesSpec(Poly()), 3, 10).exact_zero
    assert padic_sum(FactorialSeriesSpec(SIXTH), 5, 25).congruent(26)


def test_padic_sum_against_stabilization_oracle():
    spec = FactorialSeriesSpec(Poly([1]))
    for p in (2, 3):
        oracle = partial_sum_oracle(spec, p, 15)
        assert padic_sum(spec, p, 15).congruent(oracle)


def test_padic_sum_with_xi_and_weight():
    spec = FactorialSeriesSpec(Poly([1, 2]), s=2, xi=Fraction(3, 5))
    for p in (2, 3, 7):
        assert padic_sum(spec, p, 12).congruent(partial_sum_oracle(spec, p, 12))


def test_padic_sum_rational_coefficients():
    spec = FactorialSeriesSpec(Poly([0, Fraction(1, 4)]))
    v = padic_sum(spec, 2, 10)
    assert v.congruent(Fraction(-1, 4))
    assert v.valuation == -2


@pytest.mark.parametrize("p", [2, 5, 13])
def test_precision_monotone(p):
    spec = FactorialSeriesSpec(Poly([1, 0, 3]))
    hi = padic_sum(spec, p, 30)
    lo = padic_sum(spec, p, 20)
    assert hi.reduce(20) == lo


def test_tail_bound_soundness():
    spec = FactorialSeriesSpec(Poly([1]))
    for p in (2, 3, 5):
        k = 12
        N = truncation_index(spec, p, k)
        short = PAdicValue.from_rational(spec.partial_sum(N - 1), p, k)
        longer = PAdicValue.from_rational(spec.partial_sum(N + 50), p, k)
        assert short == longer == padic_sum(spec, p, k)


def test_padic_sum_preconditions():
    with pytest.raises(ValueError):
        padic_sum(FactorialSeriesSpec(N_TIMES, xi=Fraction(1, 2)), 2, 10)
    with pytest.raises(ValueError):
        padic_sum(FactorialSeriesSpec(N_TIMES), 4, 10)
    with pytest.raises(ValueError):
        padic_sum(FactorialSeriesSpec(N_TIMES), 2, 0)
    with pytest.raises(ValueError):
        FactorialSeriesSpec(N_TIMES, s=0)


def test_verify_universal_reports():
    rep = verify_universal(FactorialSeriesSpec(N_TIMES), [2, 3, 5, 7], 20)
    assert rep.ok and rep.to_json()["universal_value"] == "-1"
    rep = verify_universal(FactorialSeriesSpec(Poly([1])), [2, 3], 20)
    assert not rep.ok and "no universal value" in rep.note
    assert len(rep.values) == 2
    rep = verify_universal(FactorialSeriesSpec(N_TIMES), [], 20)
    assert rep.values == [] and rep.to_json()["results"] == []


def test_parallel_matches_serial():
    spec = FactorialSeriesSpec(SIXTH)
    primes = [2, 3, 5, 7, 11]
    assert padic_sums(spec, primes, 15, jobs=3) == padic_sums(spec, primes, 15)


def test_example33_pipeline():
    res = example33_pipeline()
    assert res.verdict == "PASS" and res.dimension == 2
    assert res.operator.order <= 2
    with pytest.raises(InsufficientCoefficients, match="insufficient coefficients"):
        example33_pipeline(30)


def test_example33_negative_control():
    c = list(example33_series(120).coeffs)
    c[40] += 1
    try:
        res = example33_pipeline(120, FormalSeries(c))
    except GuesserFailure:
        return
    assert res.verdict == "FAIL"

import math

import numpy as np
import pytest

from tmethod import distributions as D
from tmethod.convergence import (closed_form, convergence_report, edgeworth_residual,
                                 hazard_remainder, j_eval, norming, tail_ratio, uniform_error,
                                 w_rate)
from tmethod.errors import DomainError, NotApplicableError

EXP, NORM, GUM = D.exponential(), D.normal(), D.gumbel()


def j_exp(x):
    return -math.log(-math.expm1(-1 / x))


def test_auxiliary_function_exponential():
    assert j_eval(EXP, 100) == pytest.approx(j_exp(100), rel=1e-12)
    assert j_eval(EXP, 100) == pytest.approx(4.6101660, abs=1e-6)
    # analytic derivative of -log(1 - exp(-1/x))
    want = 1 / (100 ** 2 * math.expm1(1 / 100))
    assert j_eval(EXP, 100, 1) == pytest.approx(want, rel=1e-7)


@pytest.mark.parametrize("x", [3.0, 50.0, 1e4])
def test_auxiliary_function_gumbel_is_log(x):
    assert j_eval(GUM, x) == pytest.approx(math.log(x), rel=1e-12)


def test_norming_exponential():
    a, b = norming(EXP, 100)
    assert a == pytest.approx(100 / (100 ** 2 * math.expm1(0.01)), rel=1e-7)
    assert b == pytest.approx(4.6101660, abs=1e-6)


def test_norming_normal_location():
    nt = 1e6 / math.sqrt(2 * math.pi)
    _, b = norming(NORM, 1e6)
    assert b == pytest.approx(math.sqrt(2 * math.log(nt) - math.log(2 * math.log(nt))), rel=0.01)


def test_norming_rayleigh_location():
    _, b = norming(D.rayleigh(2.0), 1e4)
    assert b == pytest.approx(math.sqrt(math.log(1e4)), rel=0.02)


def test_w_rate_values():
    assert w_rate(EXP, 100) == pytest.approx(1 / 200, rel=0.05)
    assert abs(w_rate(GUM, 100)) < 1e-6
    w = w_rate(NORM, 1e6)
    assert w < 0 and abs(w) == pytest.approx(1 / (2 * math.log(1e6)), rel=0.15)


def test_uniform_error_exponential_scaling():
    nd = [n * uniform_error(EXP, n) for n in (10, 100, 1000)]
    assert max(nd) / min(nd) < 1.3
    assert uniform_error(GUM, 50) < 1e-9


@pytest.mark.parametrize("dist", [EXP, NORM, D.lognormal(), D.rayleigh(2.0), D.gamma(0.5)],
                         ids=lambda d: d.name)
def test_uniform_error_decreases(dist):
    d = [uniform_error(dist, n) for n in (100, 1000, 10_000)]
    assert d[0] >= d[1] >= d[2]


def test_hazard_remainder_values():
    # series e^-x/2 + e^-2x/3 + e^-3x/4 + ...
    series = sum(math.exp(-k * 3.0) / (k + 1) for k in range(1, 30))
    assert hazard_remainder(EXP, 3.0) == pytest.approx(series, rel=1e-6)
    for x in (2.0, 4.0, 6.0):
        assert 0 < hazard_remainder(EXP, x) < math.exp(-x)
    assert abs(hazard_remainder(GUM, 1.0)) < 1e-9


@pytest.mark.parametrize("dist", [EXP, NORM, D.rayleigh(2.0)], ids=lambda d: d.name)
def test_hazard_remainder_vanishes_in_tail(dist):
    xs = [float(D.isf(dist, q)) for q in (1e-2, 1e-5, 1e-10)]
    h = [abs(hazard_remainder(dist, x)) for x in xs]
    assert h[0] > h[1] > h[2]


def test_hazard_remainder_outside_support():
    with pytest.raises(DomainError):
        hazard_remainder(EXP, -1.0)


def test_tail_ratio():
    assert tail_ratio(EXP, 100, 5.0, norming_constants="closed") == pytest.approx(1.0, abs=1e-2)
    L = [tail_ratio(NORM, 100, x) for x in np.linspace(2, 8, 13)]
    assert all(a > b for a, b in zip(L, L[1:])) and L[-1] < 0.5
    assert tail_ratio(GUM, 100, 3.0) == pytest.approx(1.0, abs=1e-9)


def test_edgeworth_residual():
    r = [edgeworth_residual(EXP, n, -1.0) for n in (10, 100, 1000)]
    assert r[0] > r[1] > r[2] and r[2] < 0.1
    assert np.isfinite(edgeworth_residual(NORM, 1e4, 0.0))
    assert edgeworth_residual(NORM, 1e4, 0.0) < edgeworth_residual(NORM, 100, 0.0)
    with pytest.raises(NotApplicableError):
        edgeworth_residual(GUM, 100, -1.0)


def test_closed_forms_close_to_numeric():
    for dist, n in [(EXP, 1000), (NORM, 1e6), (D.rayleigh(2.0), 1e6), (D.gamma(0.5), 1e6)]:
        cf = closed_form(dist, n)
        assert w_rate(dist, n) == pytest.approx(cf.w_n, rel=0.2)


def test_report_row():
    rep = convergence_report(EXP, 100).to_dict()
    assert rep["n"] == 100 and rep["w_n"] == pytest.approx(0.005, rel=0.05)

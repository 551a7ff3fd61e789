import math

import pytest

import oracle_values as O
from scopuc.algebra import DOUBLE, Precision
from scopuc.errors import QuadratureFailure
from scopuc.quadrature import QuadratureMeta, tanh_sinh_moments, trapezoid_moments

NUM = DOUBLE.num


def test_trapezoid_bessel_moments():
    mu, meta = trapezoid_moments(lambda th: math.exp(math.cos(th)), 0.0, 5, NUM)
    for got, ref in zip(mu, O.BESSEL_RAW_MOMENTS_T1):
        assert abs(got - ref) < 1e-13
    assert meta.rule == "trapezoid" and meta.error_estimate < 1e-13


def test_trapezoid_trig_polynomial_exact():
    # w = 1 + cos(2 theta): mu_0 = 2 pi, mu_2 = pi, others zero
    mu, _ = trapezoid_moments(lambda th: 1 + math.cos(2 * th), 0.0, 4, NUM)
    assert abs(mu[0] - 2 * math.pi) < 1e-14
    assert abs(mu[2] - math.pi) < 1e-14
    assert max(abs(mu[k]) for k in (1, 3, 4)) < 1e-14


def test_trapezoid_failure_on_rough_weight():
    with pytest.raises(QuadratureFailure):
        trapezoid_moments(lambda th: abs(math.sin(th)) ** 0.1, 0.0, 2, NUM, max_nodes=256)


@pytest.mark.parametrize("lam", sorted(O.CJACOBI_RAW_MASS))
def test_tanh_sinh_endpoint_singularity(lam):
    # the singular end is theta = 0 on the left half and 2 pi on the right half
    def left(th, dl, dr):
        return math.sin(dl / 2) ** (2 * lam)

    def right(th, dl, dr):
        return math.sin(dr / 2) ** (2 * lam)

    total = 0.0
    for w, lo, hi in ((left, 0.0, math.pi), (right, math.pi, 2 * math.pi)):
        mu, meta = tanh_sinh_moments(w, lo, hi, 0, NUM)
        total += mu[0].real
    assert abs(total - O.CJACOBI_RAW_MASS[lam]) < 1e-12
    assert meta.rule == "tanh-sinh"


def test_trapezoid_extended():
    num = Precision.extended(50).num
    mu, _ = trapezoid_moments(lambda th: num.exp(num.cos(th)), num.zero.real, 1, num)
    import mpmath
    with mpmath.workdps(50):
        assert abs(mu[1] - 2 * mpmath.pi * mpmath.besseli(1, 1)) < mpmath.mpf(10) ** -42


def test_meta_round_trip():
    m = QuadratureMeta("trapezoid", 64, 2, 1e-15)
    assert QuadratureMeta.from_dict(m.to_dict()) == m

import cmath

import pytest

import oracle_values as O
from catalog import CATALOG, spec_id
from scopuc.algebra import ComplexPoly, Precision, pochhammer
from scopuc.errors import MomentRangeExceeded, NoClosedForm, NumericalBreakdown
from scopuc.moments import compute_moments, inner_product
from scopuc.mopuc import (chain_residuals, fato1_check, mopuc_closed_form, sequence_from_alphas,
                          szego_sequence, verblunsky_closed_form)
from scopuc.weights import (Bessel, CircularJacobi, ExpSine, GeneralizedJacobi, HalfPlanePole,
                            JacobiOPUC, Lebesgue, RotatedCos, SriRanga)


def moment_alphas(spec, n, prec=None):
    T = compute_moments(spec, n + 1) if prec is None else compute_moments(spec, n + 1, prec)
    return szego_sequence(T, n)


ORACLES = [
    (Bessel(0.5), O.BESSEL_ALPHAS[0.5]),
    (Bessel(1.0), O.BESSEL_ALPHAS[1.0]),
    (Bessel(2.0), O.BESSEL_ALPHAS[2.0]),
    (ExpSine(0.3 + 0.4j), O.EXPSINE_03_04_ALPHAS),
    (GeneralizedJacobi(0.3, 0.2, 0.5), O.GENJACOBI_03_02_05_ALPHAS),
    (HalfPlanePole(0.8, 0.5j), O.HALFPLANE_08_05I_ALPHAS),
    (RotatedCos(1 + 0.5j), O.ROTCOS_1_05I_ALPHAS),
]


@pytest.mark.parametrize("spec,ref", ORACLES, ids=[spec_id(s) for s, _ in ORACLES])
def test_moment_route_against_toeplitz_oracle(spec, ref):
    seq = moment_alphas(spec, len(ref) - 1)
    assert max(abs(a - b) for a, b in zip(seq.alphas, ref)) < 1e-13


def test_expsine_imaginary_half_is_bessel_one():
    a = moment_alphas(ExpSine(0.5j), 8).alphas
    b = moment_alphas(Bessel(1.0), 8).alphas
    assert max(abs(x - y) for x, y in zip(a, b)) < 1e-14


@pytest.mark.parametrize("spec", [SriRanga(1 + 0.5j), SriRanga(0.3 - 0.7j), CircularJacobi(3.0),
                                  JacobiOPUC(1.0, 0.5), RotatedCos(1 + 0.5j), Lebesgue()],
                         ids=spec_id)
def test_closed_form_matches_moments(spec):
    seq = moment_alphas(spec, 12)
    cf = verblunsky_closed_form(spec, 12)
    assert max(abs(a - b) for a, b in zip(seq.alphas, cf)) < 1e-10


def test_sri_ranga_closed_form_pochhammer():
    b = 0.3 - 0.7j
    cf = verblunsky_closed_form(SriRanga(b), 6)
    for n, a in enumerate(cf):
        assert abs(a + pochhammer(b, n + 1) / pochhammer(b.conjugate() + 1, n + 1)) < 1e-14


def test_jacobi_closed_form_values():
    cf = verblunsky_closed_form(JacobiOPUC(1.0, 0.5), 3)
    # alpha_0 = -(lam - beta)/(1 + lam + beta), alpha_1 = -(lam + beta)/(2 + lam + beta)
    assert abs(cf[0] + 0.5 / 2.5) < 1e-15
    assert abs(cf[1] + 1.5 / 3.5) < 1e-15


def test_no_closed_form():
    with pytest.raises(NoClosedForm):
        verblunsky_closed_form(Bessel(1.0), 3)
    with pytest.raises(NoClosedForm):
        mopuc_closed_form(Bessel(1.0), 3, 0.5)


@pytest.mark.parametrize("spec", [SriRanga(1 + 0.5j), CircularJacobi(1.0), RotatedCos(0.7 - 0.4j)],
                         ids=spec_id)
def test_hypergeometric_polynomials(spec):
    seq = sequence_from_alphas(verblunsky_closed_form(spec, 8))
    for n in range(9):
        for z in (0.3 + 0.2j, cmath.exp(1.1j), -0.9 + 0.1j):
            assert abs(mopuc_closed_form(spec, n, z) - seq.phi(n)(z)) < 1e-12


def test_lebesgue_monomials():
    seq = moment_alphas(Lebesgue(), 20)
    for n in range(21):
        assert seq.phi(n).max_abs_diff(ComplexPoly.monomial(n)) == 0
    assert all(a == 0 for a in seq.alphas)


def test_sequence_from_alphas_matches_szego():
    spec = SriRanga(1 + 0.5j)
    seq = moment_alphas(spec, 8)
    rebuilt = sequence_from_alphas(seq.alphas)
    for n in range(9):
        assert seq.phi(n).max_abs_diff(rebuilt.phi(n)) < 1e-12
        assert abs(seq.norm_sq(n) - rebuilt.norm_sq(n)) < 1e-12


def test_orthogonality():
    spec = GeneralizedJacobi(0.3, 0.2, 0.5)
    T = compute_moments(spec, 8)
    seq = szego_sequence(T, 7)
    for n in range(8):
        for k in range(n):
            assert abs(inner_product(T, seq.phi(n), ComplexPoly.monomial(k))) < 1e-13
        assert abs(inner_product(T, seq.phi(n), seq.phi(n)) - seq.norm_sq(n)) < 1e-14


def test_alpha_indexing():
    seq = moment_alphas(Bessel(1.0), 4)
    assert seq.alpha(-1) == -1
    assert seq.records[1].alpha == seq.alpha(0)
    assert abs(seq.phi(3).coeff(0) + seq.alpha(2).conjugate()) < 1e-15
    with pytest.raises(IndexError):
        seq.alpha(5)


def test_star_is_reciprocal():
    seq = moment_alphas(SriRanga(1 + 0.5j), 5)
    z = 0.4 - 0.3j
    expected = z ** 5 * seq.phi(5)(1 / z.conjugate()).conjugate()
    assert abs(seq.phi_star(5)(z) - expected) < 1e-13


def test_breakdown():
    with pytest.raises(NumericalBreakdown) as exc:
        sequence_from_alphas([0.5, 1.0, 0.1])
    assert exc.value.index == 1


def test_moment_range():
    T = compute_moments(Bessel(1.0), 3)
    with pytest.raises(MomentRangeExceeded):
        szego_sequence(T, 3)


@pytest.mark.parametrize("spec", CATALOG, ids=spec_id)
def test_chain_residuals(spec):
    T = compute_moments(spec, 14)
    seq = szego_sequence(T, 13)
    for n in range(1, 13):
        res = chain_residuals(seq, T, n)
        assert set(res) == {"norm_ratio", "gamma_recursion", "beta_formula", "fato1"}
        assert max(res.values()) < 1e-10, (n, res)


def test_chain_range():
    T = compute_moments(Bessel(1.0), 5)
    seq = szego_sequence(T, 4)
    with pytest.raises(ValueError):
        chain_residuals(seq, T, 4)
    with pytest.raises(ValueError):
        fato1_check(seq, T, 0)


def test_extended_closed_form_agreement():
    prec = Precision.extended(50)
    spec = SriRanga(1 + 0.5j)
    seq = moment_alphas(spec, 20, prec)
    cf = verblunsky_closed_form(spec, 20, prec)
    assert max(abs(a - b) for a, b in zip(seq.alphas, cf)) < 1e-40


def test_exports():
    seq = moment_alphas(Bessel(1.0), 3)
    lines = seq.to_csv().splitlines()
    assert lines[0].startswith("n,re_alpha") and len(lines) == 5
    d = seq.to_dict()
    assert d["precision"] == "double" and len(d["alphas"]) == 4
    assert '"records"' in seq.to_json()

import cmath

import numpy as np
import pytest

from catalog import CATALOG, catalog_pairs, spec_id
from scopuc.algebra import ComplexPoly
from scopuc.classify import (ORDER_HIGH, ORDER_LOW, Deg0, Deg1, Deg2, build_system,
                             catalog_membership, classify_report, imaginary_part_sup,
                             membership_check, pair_system, poly_from_unknowns, report_json,
                             roots_case, solve_system, unknowns_from_poly)
from scopuc.errors import DegreeMismatch, Infeasible
from scopuc.weights import Bessel, RotatedCos

RNG = np.random.default_rng(7)


def sample_B(space, k=3):
    for c in RNG.normal(size=(k, max(space.dimension, 1))):
        yield space.B(c[:space.dimension])


def test_roots_case():
    assert roots_case([]) == Deg0()
    assert roots_case([0.5]) == Deg1(0.5)
    assert roots_case([1, -1]).roots == (1, -1)
    with pytest.raises(DegreeMismatch):
        roots_case([1, 2, 3])


@pytest.mark.parametrize("degree", [0, 1, 2])
def test_unknown_ordering_round_trip(degree):
    B = ComplexPoly([1 + 2j, -3 + 0.5j, 0.25 - 1j])
    x = unknowns_from_poly(B, degree)
    assert poly_from_unknowns(x, degree).max_abs_diff(B) == 0
    order = ORDER_HIGH if degree == 2 else ORDER_LOW
    assert x[order.index("Im b0")] == 2 and x[order.index("Re b2")] == 0.25


def test_deg1_origin():
    space = solve_system(build_system(Deg1(0)))
    assert space.rank == 3 and space.dimension == 3
    for B in sample_B(space):
        assert abs(B.coeff(2) - B.coeff(0).conjugate()) < 1e-12
        assert abs(B.coeff(1).imag - 1) < 1e-12


def test_deg1_unit_modulus_root():
    r = cmath.exp(0.7j)
    space = solve_system(build_system(Deg1(r)))
    for B in sample_B(space):
        assert abs(B.coeff(2)) < 1e-12
        assert abs(B.coeff(1) - (-r * B.coeff(0).conjugate() + 1j)) < 1e-12


@pytest.mark.parametrize("r", [0.5 + 0.3j, 2 - 1j, 0.4j])
def test_deg1_off_circle_with_boundary_is_lebesgue(r):
    space = solve_system(build_system(Deg1(r), boundary=True))
    assert space.dimension == 0
    assert space.B().max_abs_diff(ComplexPoly([0, 1j])) < 1e-12


def test_deg2_symmetric_roots_contain_generalized_jacobi():
    space = solve_system(build_system(Deg2(1, -1)))
    lam, beta, eta = 0.3, 0.2, 0.5
    B = ComplexPoly([1j * (lam + beta - 1j * eta), 2j * (lam - beta), 1j * (lam + beta + 1j * eta + 2)])
    assert space.contains(unknowns_from_poly(B, 2))


def test_deg2_generic():
    r1, r2 = 0.5 + 0.2j, -1.7 + 0.3j
    space = solve_system(build_system(Deg2(r1, r2)))
    assert space.rank == 5 and space.dimension == 1
    for B in sample_B(space):
        re2 = B.coeff(2).real
        assert abs(B.coeff(2) - (re2 + 2j)) < 1e-12
        assert abs(B.coeff(1) + (r1 + r2) * (re2 + 1j)) < 1e-12
        assert abs(B.coeff(0) - r1 * r2 * re2) < 1e-12


def test_deg2_inverse_pair():
    r = 0.5 + 0.4j
    space = solve_system(build_system(Deg2(r, 1 / r.conjugate())))
    assert "inverse_pair" in space.system.flags
    for B in sample_B(space):
        assert abs(B.coeff(2) - (r / r.conjugate()) * B.coeff(0).conjugate() - 2j) < 1e-12


def test_deg0_is_real_polynomial_shift():
    space = solve_system(build_system(Deg0()))
    assert space.dimension == 1
    assert space.B().max_abs_diff(ComplexPoly([0])) < 1e-14


@pytest.mark.parametrize("case", [Deg0(), Deg1(0.3), Deg1(cmath.exp(1j)), Deg2(0.5 + 0.2j, -1.7 + 0.3j),
                                  Deg2(1, -1), Deg2(cmath.exp(1j), cmath.exp(1j)),
                                  Deg2(0, cmath.exp(0.4j))])
@pytest.mark.parametrize("boundary", [False, True])
def test_solutions_give_real_log_derivative(case, boundary):
    space = solve_system(build_system(case, boundary))
    for B in sample_B(space):
        assert imaginary_part_sup(case, B) < 1e-10


def test_boundary_row_only_when_A1_nonzero():
    assert build_system(Deg1(1), True).F.shape == (5, 6)
    assert build_system(Deg1(0.3), True).F.shape == (6, 6)
    assert build_system(Deg1(0.3), True).boundary


def test_flags():
    assert set(build_system(Deg2(1j, 1j)).flags) >= {"root_on_circle", "double_root"}
    assert "root_at_origin" in build_system(Deg1(0)).flags
    assert "subcase_boundary" in build_system(Deg2(1, -1)).flags


def test_infeasible():
    # with r = 0 the first two rows of F vanish, so a nonzero right side is inconsistent
    sys = build_system(Deg1(0))
    sys = type(sys)(sys.F, sys.g + np.array([1.0, 0, 0, 0, 0]), sys.case, sys.order)
    with pytest.raises(Infeasible):
        solve_system(sys)


PAIRS = list(catalog_pairs())


@pytest.mark.parametrize("spec,idx,pair", PAIRS,
                         ids=[f"{spec_id(s)}-{p.label}" for s, _, p in PAIRS])
def test_catalog_pairs_are_members(spec, idx, pair):
    assert membership_check(pair, pair_system(pair))


def test_rotated_cos_excluded_by_boundary_row():
    # its domain ends at z = -1, so the row written for z = 1 does not apply
    pair = RotatedCos(1 + 0.5j).pearson_pairs()[0]
    assert pair.label == "z+1"
    assert not membership_check(pair, pair_system(pair, boundary=True))


def test_membership_degree_mismatch():
    pair = Bessel(1.0).pearson_pairs()[0]
    with pytest.raises(DegreeMismatch):
        membership_check(pair, build_system(Deg2(1, -1)))


def test_catalog_membership_filter_and_report():
    rows = catalog_membership(CATALOG, Deg1(1))
    assert rows and all(r["member"] for r in rows)
    assert {r["family"] for r in rows} == {"SriRanga", "CircularJacobi"}
    rep = classify_report(Deg1(0), specs=CATALOG)
    assert rep["rank"] == 3 and rep["nullspace_dimension"] == 3
    assert all(m["member"] for m in rep["membership"])
    assert '"order"' in report_json(rep)


@pytest.mark.parametrize("r2", [0, 1e-9, 1.5e-7j, 3e-6 - 2e-6j, 1e-3])
def test_deg2_near_coincident_roots_with_boundary(r2):
    # nearly double pole inside the disk: residues must not cancel to noise
    space = solve_system(build_system(Deg2(0, r2), boundary=True))
    assert space.dimension == 0
    expected = ComplexPoly([0, -1j * r2, 2j])
    assert space.B().max_abs_diff(expected) < 1e-8

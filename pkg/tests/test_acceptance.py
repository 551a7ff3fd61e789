"""Primary acceptance criteria, one test each.

Every criterion collects ``(label, value, tolerance)`` checks; it passes when
each value is within its tolerance.  A one-line verdict per criterion is
printed and repeated in the terminal summary.  Run directly with
``python tests/test_acceptance.py`` for the verdicts alone.
"""
from __future__ import annotations

import cmath
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from catalog import CATALOG, catalog_pairs  # noqa: E402
from scopuc.algebra import ComplexPoly, Precision, pochhammer  # noqa: E402
from scopuc.classify import (Deg1, Deg2, build_system, membership_check, pair_system,  # noqa: E402
                             solve_system, unknowns_from_poly)
from scopuc.differences import DifferenceEquation, EqId, difference_residual  # noqa: E402
from scopuc.moments import compute_moments  # noqa: E402
from scopuc.mopuc import (chain_residuals, sequence_from_alphas, szego_sequence,  # noqa: E402
                          verblunsky_closed_form)
from scopuc.relations import (Variant, family_identities, parts_identity_residual,  # noqa: E402
                              s_nn_first, s_nn_second, specialized_relation, structure_residual)
from scopuc.weights import (Bessel, CircularJacobi, ExpSine, JacobiOPUC, Lebesgue,  # noqa: E402
                            SriRanga, pearson_residual)

EXTENDED = Precision.extended(50)
_seq_cache: dict = {}


def moment_seq(spec, n_max, prec=None):
    key = (repr(spec), n_max, str(prec))
    if key not in _seq_cache:
        T = compute_moments(spec, n_max + 3) if prec is None else compute_moments(spec, n_max + 3, prec)
        _seq_cache[key] = (T, szego_sequence(T, n_max + 2))
    return _seq_cache[key]


def dev(a, b) -> float:
    return float(abs(a - b))


# ---------------------------------------------------------------------------


def lebesgue_sanity():
    out = []
    _, seq = moment_seq(Lebesgue(), 20)
    for n in range(21):
        out.append((f"|alpha_{n}|", float(abs(seq.alpha(n))), 1e-12))
        out.append((f"Phi_{n} - z^{n}", seq.phi(n).max_abs_diff(ComplexPoly.monomial(n)), 0.0))
    return out


def sri_ranga_closed_form():
    out = []
    for b in (1, 1 + 0.5j, 0.3 - 0.7j):
        for prec, n_max, tol in ((None, 12, 1e-8), (EXTENDED, 30, 1e-20)):
            _, seq = moment_seq(SriRanga(b), n_max, prec)
            bb = b if prec is None else EXTENDED.num.c(b)
            for n in range(n_max + 1):
                ref = -pochhammer(bb, n + 1) / pochhammer(bb.conjugate() + 1, n + 1)
                out.append((f"b={b} {prec or 'double'} n={n}", dev(seq.alpha(n), ref), tol))
    return out


def circular_jacobi():
    out = []
    for lam in (0.25, 1.0, 3.0):
        spec = CircularJacobi(lam)
        _, seq = moment_seq(spec, 12)
        for n in range(13):
            out.append((f"lam={lam} alpha_{n}", dev(seq.alpha(n), -lam / (n + 1 + lam)), 1e-8))
        for n in range(2, 13):
            rep = specialized_relation(spec, "CJ_magnus", seq, n, grid_size=256)
            out.append((f"lam={lam} (z-1) relation n={n}", rep.sup, 1e-8))
    return out


def jacobi_opuc():
    out = []
    for lam, beta in ((1.0, 0.5), (0.3, 1.7), (-0.2, 0.4)):
        _, seq = moment_seq(JacobiOPUC(lam, beta), 12)
        for n in range(13):
            ref = -(lam + (-1) ** (n + 1) * beta) / (n + 1 + lam + beta)
            a = seq.alpha(n)
            out.append((f"({lam},{beta}) alpha_{n}", dev(a, ref), 1e-8))
            out.append((f"({lam},{beta}) Im alpha_{n}", abs(a.imag), 1e-10))
            if n >= 2:
                r = (lam + beta + n + 1) * a - (lam + beta + n - 1) * seq.alpha(n - 2)
                out.append((f"({lam},{beta}) two-term n={n}", float(abs(r)), 1e-9))
    return out


def bessel_dpii():
    out = []
    for t in (0.5, 1.0, 2.0):
        spec = Bessel(t)
        _, seq = moment_seq(spec, 10)
        eq = DifferenceEquation(EqId.DPII, {"t": t})
        for n in range(2, 11):
            out.append((f"t={t} dPII n={n}", difference_residual(eq, seq, n), 1e-8))
            for rid in ("Bessel_derivative", "Bessel_z"):
                out.append((f"t={t} {rid} n={n}", specialized_relation(spec, rid, seq, n).sup, 1e-8))
        for n in range(11):
            out.append((f"t={t} Im alpha_{n}", abs(seq.alpha(n).imag), 1e-10))
    return out


def complex_dpii():
    out = []
    for u in (0.5j, 0.3 + 0.4j):
        spec = ExpSine(u)
        _, seq = moment_seq(spec, 10)
        eq = DifferenceEquation(EqId.COMPLEX_DPII, {"u": u})
        for n in range(2, 11):
            out.append((f"u={u} complex dPII n={n}", difference_residual(eq, seq, n), 1e-8))
        for n in range(1, 11):
            out.append((f"u={u} Re(u conj(a_n) a_n-1) n={n}",
                        family_identities(spec, seq, n)["re_u_alpha"], 1e-9))
    return out


def structure_generality():
    out = []
    for spec, _, pair in catalog_pairs():
        _, seq = moment_seq(spec, 10)
        tag = f"{spec.family}{tuple(spec.params().values())} A={pair.label}"
        for n in range(2, 11):
            for v in Variant:
                out.append((f"{tag} {v.value} n={n}", structure_residual(pair, seq, n, 256, v).sup, 1e-8))
            out.append((f"{tag} s_nn n={n}", dev(s_nn_first(pair, seq, n), s_nn_second(pair, seq, n)), 1e-8))
            for eq_id in (EqId.GEN_2_10, EqId.GEN_2_11):
                eq = DifferenceEquation(eq_id, {"pair": pair})
                out.append((f"{tag} {eq_id.value} n={n}", difference_residual(eq, seq, n), 1e-8))
    return out


def sri_ranga_difference_suite():
    out = []
    ids = (EqId.RANGA_4_6, EqId.RANGA_4_7, EqId.RANGA_4_8, EqId.RANGA_4_9,
           EqId.RANGA_4_10, EqId.RANGA_4_11, EqId.RANGA_4_14)
    for b in (1 + 1j, 2 - 0.5j):
        spec = SriRanga(b)
        seq = sequence_from_alphas(verblunsky_closed_form(spec, 22))
        for eq_id in ids:
            eq = DifferenceEquation(eq_id, {"b": b})
            for n in range(eq.min_n, 21):
                out.append((f"b={b} {eq_id.value} n={n}", difference_residual(eq, seq, n), 1e-9))
        for n in range(1, 21):
            ids_n = family_identities(spec, seq, n)
            out.append((f"b={b} gamma_n n={n}", ids_n["gamma_closed"], 1e-9))
            out.append((f"b={b} alpha product n={n}", ids_n["alpha_product"], 1e-9))
    return out


def classifier_fidelity():
    out = []
    rng = np.random.default_rng(11)
    space = solve_system(build_system(Deg1(0)))
    for c in rng.normal(size=(4, space.dimension)):
        B = space.B(c)
        out.append(("Deg1(0) b2 = conj b0", dev(B.coeff(2), B.coeff(0).conjugate()), 1e-10))
        out.append(("Deg1(0) Im b1 = 1", abs(B.coeff(1).imag - 1), 1e-10))
    for r in (0.5 + 0.3j, 2 - 1j, 0.4j):
        space = solve_system(build_system(Deg1(r), boundary=True))
        out.append((f"Deg1({r}) + boundary unique", float(space.dimension), 0.0))
        out.append((f"Deg1({r}) + boundary B = iz", space.B().max_abs_diff(ComplexPoly([0, 1j])), 1e-10))
    lam, beta, eta = 0.3, 0.2, 0.5
    B = ComplexPoly([1j * (lam + beta - 1j * eta), 2j * (lam - beta), 1j * (lam + beta + 1j * eta + 2)])
    sys_ = build_system(Deg2(1, -1))
    out.append(("Deg2(1,-1) contains the generalized Jacobi pair",
                sys_.residual(unknowns_from_poly(B, 2)), 1e-10))
    r1, r2 = 0.5 + 0.2j, -1.7 + 0.3j
    space = solve_system(build_system(Deg2(r1, r2)))
    out.append(("Deg2 generic solution dimension", abs(space.dimension - 1.0), 0.0))
    for c in rng.normal(size=(4, 1)):
        B = space.B(c)
        re2 = B.coeff(2).real
        worst = max(dev(B.coeff(2), re2 + 2j), dev(B.coeff(1), -(r1 + r2) * (re2 + 1j)),
                    dev(B.coeff(0), r1 * r2 * re2))
        out.append(("Deg2 generic displayed solution", worst, 1e-10))
    for spec, _, pair in catalog_pairs():
        sys_ = pair_system(pair)
        ok = membership_check(pair, sys_)
        out.append((f"membership {spec.family} A={pair.label}", 0.0 if ok else 1.0, 0.0))
    return out


def pearson_verification():
    out = []
    for spec, _, pair in catalog_pairs():
        tag = f"{spec.family}{tuple(spec.params().values())} A={pair.label}"
        out.append((f"{tag} pearson", pearson_residual(spec, pair, 128).sup, 1e-8))
        T, seq = moment_seq(spec, 10)
        worst = max(parts_identity_residual(pair, seq, T, n, k)
                    for n in range(9) for k in range(n + 1))
        out.append((f"{tag} integration by parts", worst, 1e-8))
    return out


def invariant_chain():
    out = []
    for spec in CATALOG:
        T, seq = moment_seq(spec, 12)
        for n in range(1, 13):
            for key, v in chain_residuals(seq, T, n).items():
                out.append((f"{spec.family}{tuple(spec.params().values())} {key} n={n}", v, 1e-8))
        # n = 0: the norm ratio alone
        out.append((f"{spec.family} norm_ratio n=0",
                    float(abs(seq.norm_sq(1) / seq.norm_sq(0) - (1 - abs(seq.alpha(0)) ** 2))), 1e-8))
    return out


CRITERIA = [
    ("C1", "Lebesgue sanity", lebesgue_sanity),
    ("C2", "SriRanga closed-form agreement (double n<=12, extended n<=30)", sri_ranga_closed_form),
    ("C3", "Circular Jacobi coefficients and (z-1) structure relation", circular_jacobi),
    ("C4", "Jacobi OPUC real coefficients and two-term recursion", jacobi_opuc),
    ("C5", "Bessel dPII and its structure relations", bessel_dpii),
    ("C6", "ExpSine complex dPII", complex_dpii),
    ("C7", "Structure relations and general difference equations over the catalog", structure_generality),
    ("C8", "SriRanga difference equations and coefficient identities", sri_ranga_difference_suite),
    ("C9", "Classifier fidelity", classifier_fidelity),
    ("C10", "Pearson residuals and integration by parts", pearson_verification),
    ("C11", "Invariant chain", invariant_chain),
]

VERDICTS: dict = {}


def evaluate(cid, title, fn) -> tuple[bool, str]:
    checks = fn()
    failed = [(lab, v, tol) for lab, v, tol in checks if not v <= tol]
    worst = max(checks, key=lambda c: c[1] / c[2] if c[2] else (0.0 if c[1] == 0 else np.inf))
    status = "PASS" if not failed else "FAIL"
    line = (f"{status} {cid:<4} {title}: {len(checks)} checks, "
            f"worst {worst[1]:.2e} (tol {worst[2]:.0e}) at {worst[0]}")
    if failed:
        line += f"; {len(failed)} failed, first: {failed[0][0]} = {failed[0][1]:.3e}"
    return not failed, line


@pytest.mark.acceptance
@pytest.mark.parametrize("cid,title,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(cid, title, fn):
    ok, line = evaluate(cid, title, fn)
    VERDICTS[cid] = line
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)

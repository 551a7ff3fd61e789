"""Structure relations A(z) Phi_n'(z) = combination of neighbouring polynomials."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .algebra import ComplexPoly
from .errors import OutOfTheoremRange, UnknownRelation
from .moments import MomentTable, inner_product
from .mopuc import OpucSequence
from .report import ResidualReport, half_offset_grid
from .weights import (
    Bessel,
    CircularJacobi,
    ExpSine,
    GeneralizedJacobi,
    HalfPlanePole,
    JacobiOPUC,
    PearsonPair,
    SriRanga,
    WeightSpec,
)

__all__ = [
    "ResidualReport", "StructureCoefficients", "Variant", "structure_coefficients",
    "structure_residual", "specialized_relation", "RELATION_IDS", "structure_rhs",
    "parts_identity_residual", "annihilation_residual",
]


class Variant(str, Enum):
    THM21 = "Thm21"
    COR_MAGNUS = "CorMagnus"
    COR_RECIPROCAL = "CorReciprocal"


@dataclass(frozen=True)
class StructureCoefficients:
    n: int
    lead: complex
    s_nn: complex
    s_nn1: complex
    t_n: complex
    variant: Variant = Variant.THM21


def _coeffs(pair: PearsonPair):
    return [pair.A.coeff(k) for k in range(3)], [pair.B.coeff(k) for k in range(3)]


def s_nn_first(pair: PearsonPair, seq: OpucSequence, n: int):
    """n a1 - a2 gamma_n + [i b2 - (n-1) a2] conj(alpha_n) alpha_{n-1}."""
    (a0, a1, a2), (b0, b1, b2) = _coeffs(pair)
    an, an1 = seq.alpha(n), seq.alpha(n - 1)
    return n * a1 - a2 * seq.gamma(n) + (1j * b2 - (n - 1) * a2) * an.conjugate() * an1


def s_nn_second(pair: PearsonPair, seq: OpucSequence, n: int):
    """i b1 + (n+1) a1 - a0 conj(gamma_n) - [i b0 + (n+1) a0] alpha_n conj(alpha_{n-1})."""
    (a0, a1, a2), (b0, b1, b2) = _coeffs(pair)
    an, an1 = seq.alpha(n), seq.alpha(n - 1)
    return (1j * b1 + (n + 1) * a1 - a0 * seq.gamma(n).conjugate()
            - (1j * b0 + (n + 1) * a0) * an * an1.conjugate())


def structure_coefficients(pair: PearsonPair, seq: OpucSequence, n: int,
                           form: str = "eq2_8") -> StructureCoefficients:
    """Coefficients of A Phi_n' = lead Phi_{n+1} + s_nn Phi_n + s_nn1 Phi_{n-1} + t_n Phi_n^*.

    ``form`` picks which of the two equivalent expressions gives s_nn:
    ``"eq2_8"`` uses gamma_n and a2, ``"eq2_9"`` uses conj(gamma_n) and a0.
    """
    if n < 2:
        raise OutOfTheoremRange("structure relations are stated for n >= 2")
    if n + 1 > seq.n_max:
        raise IndexError(f"sequence must reach degree {n + 1}")
    (a0, a1, a2), (b0, b1, b2) = _coeffs(pair)
    an, an1 = seq.alpha(n), seq.alpha(n - 1)
    if form == "eq2_8":
        s_nn = s_nn_first(pair, seq, n)
    elif form == "eq2_9":
        s_nn = s_nn_second(pair, seq, n)
    else:
        raise ValueError(f"unknown form {form!r}; use eq2_8 or eq2_9")
    return StructureCoefficients(
        n=n,
        lead=n * a2,
        s_nn=s_nn,
        s_nn1=(1j * b0 + n * a0) * (1 - abs(an1) ** 2),
        t_n=(1j * b2 + a2) * an.conjugate(),
    )


def structure_rhs(pair: PearsonPair, seq: OpucSequence, n: int,
                  variant: Variant | str = Variant.THM21) -> ComplexPoly:
    """Right-hand side polynomial of the chosen structure relation."""
    variant = Variant(variant)
    sc = structure_coefficients(pair, seq, n)
    (a0, a1, a2), (b0, b1, b2) = _coeffs(pair)
    an, an1 = seq.alpha(n), seq.alpha(n - 1)
    phi_next, phi, phi_prev = seq.phi(n + 1), seq.phi(n), seq.phi(n - 1)
    if variant is Variant.THM21:
        return (sc.lead * phi_next + sc.s_nn * phi + sc.s_nn1 * phi_prev
                + sc.t_n * seq.phi_star(n))
    if variant is Variant.COR_MAGNUS:
        # eliminate Phi_n^* with the Szegő recursion for Phi_{n+1}^*
        rho = 1 - abs(an) ** 2
        c_next = (n * a2 + (1j * b2 - (n - 1) * a2) * abs(an) ** 2) / rho
        c_star = (1j * b2 + a2) * an.conjugate() / rho
        return (c_next * phi_next + sc.s_nn * phi + sc.s_nn1 * phi_prev
                + c_star * seq.phi_star(n + 1))
    # reciprocal form: Phi_n^* = Phi_{n-1}^* - alpha_{n-1} z Phi_{n-1}
    c_phi = n * a1 - a2 * seq.gamma(n) - n * a2 * an.conjugate() * an1
    c_star = (1j * b2 + a2) * an.conjugate() * (1 - abs(an1) ** 2)
    return (sc.lead * phi_next + c_phi * phi + sc.s_nn1 * phi_prev
            + c_star * seq.phi_star(n - 1))


def _residual_report(lhs: ComplexPoly, rhs: ComplexPoly, grid_size: int, tolerance: float,
                     label: str, num) -> ResidualReport:
    grid = half_offset_grid(grid_size)
    res, scale = [], 0.0
    for th in grid:
        z = num.expj(num.r(th))
        left = lhs(z)
        scale = max(scale, float(abs(left)))
        res.append(float(abs(left - rhs(z))))
    return ResidualReport(grid, res, tolerance, label, scale)


def structure_residual(pair: PearsonPair, seq: OpucSequence, n: int, grid_size: int = 256,
                       variant: Variant | str = Variant.THM21,
                       tolerance: float = 1e-8) -> ResidualReport:
    """Sup over the circle grid of |A Phi_n' - RHS| for the chosen variant."""
    variant = Variant(variant)
    lhs = pair.A * seq.phi(n).derivative()
    rhs = structure_rhs(pair, seq, n, variant)
    return _residual_report(lhs, rhs, grid_size, tolerance,
                            f"structure {variant.value} A={pair.label} n={n}",
                            seq.precision.num)


# ---------------------------------------------------------------------------
# Relations with the coefficients written out for specific weights
# ---------------------------------------------------------------------------


def _rho(seq, k):
    return 1 - abs(seq.alpha(k)) ** 2


def _sri_ranga_b(spec, num):
    if isinstance(spec, SriRanga):
        return num.c(spec.b)
    if isinstance(spec, CircularJacobi):
        return num.c(spec.lam)
    raise UnknownRelation("relation needs a SriRanga or CircularJacobi weight")


def _lhs(roots, seq, n):
    return ComplexPoly.from_roots(roots) * seq.phi(n).derivative()


def _sr_general(spec, seq, n, r):
    num = seq.precision.num
    b = _sri_ranga_b(spec, num)
    bc = b.conjugate()
    r = num.c(r)
    rhs = (n * seq.phi(n + 1) - (bc + n * (r + 1)) * seq.phi(n)
           + r * (bc + n) * _rho(seq, n - 1) * seq.phi(n - 1)
           - (b + 1) * seq.alpha(n).conjugate() * seq.phi_star(n))
    return _lhs([num.one, r], seq, n), rhs


def _sr1(spec, seq, n, r=None):
    num = seq.precision.num
    b = _sri_ranga_b(spec, num)
    rhs = -(b.conjugate() + n) * _rho(seq, n - 1) * seq.phi(n - 1) + n * seq.phi(n)
    return _lhs([num.one], seq, n), rhs


def _sr2(spec, seq, n, r=None):
    num = seq.precision.num
    b = _sri_ranga_b(spec, num)
    bc = b.conjugate()
    rhs = (n * seq.phi(n + 1) - bc * seq.phi(n) - (bc + n) * _rho(seq, n - 1) * seq.phi(n - 1)
           - (b + 1) * seq.alpha(n).conjugate() * seq.phi_star(n))
    return _lhs([num.one, -num.one], seq, n), rhs


def _sr3(spec, seq, n, r=None):
    num = seq.precision.num
    b = _sri_ranga_b(spec, num)
    bc = b.conjugate()
    rhs = (n * seq.phi(n + 1) - (bc + 2 * n) * seq.phi(n)
           + (bc + n) * _rho(seq, n - 1) * seq.phi(n - 1)
           - (b + 1) * seq.alpha(n).conjugate() * seq.phi_star(n))
    return _lhs([num.one, num.one], seq, n), rhs


def _sr4(spec, seq, n, r=None):
    num = seq.precision.num
    b = _sri_ranga_b(spec, num)
    rhs = (n * seq.phi(n + 1) - (b.conjugate() + n) * seq.phi(n)
           - (b + 1) * seq.alpha(n).conjugate() * seq.phi_star(n))
    return _lhs([0 * num.one, num.one], seq, n), rhs


def _sr_r(spec, seq, n, r=None):
    if r is None:
        raise UnknownRelation("relation SR_r needs the root r")
    return _sr_general(spec, seq, n, r)


def _cj_lambda(spec, num):
    if not isinstance(spec, CircularJacobi):
        raise UnknownRelation("relation needs a CircularJacobi weight")
    return num.r(spec.lam)


def _cj_prev(lam, n):
    return n * (n + 2 * lam) / (n + lam)


def _cj_star(lam, n):
    return lam * (lam + 1) / (n + 1 + lam)


def _cj_magnus(spec, seq, n, r=None):
    num = seq.precision.num
    lam = _cj_lambda(spec, num)
    rhs = n * seq.phi(n) - _cj_prev(lam, n) * seq.phi(n - 1)
    return _lhs([num.one], seq, n), rhs


def _cj_z(spec, seq, n, r=None):
    num = seq.precision.num
    lam = _cj_lambda(spec, num)
    rhs = -(lam + n) * seq.phi(n) + n * seq.phi(n + 1) + _cj_star(lam, n) * seq.phi_star(n)
    return _lhs([0 * num.one, num.one], seq, n), rhs


def _cj_double(spec, seq, n, r=None):
    num = seq.precision.num
    lam = _cj_lambda(spec, num)
    rhs = (_cj_prev(lam, n) * seq.phi(n - 1) - (lam + 2 * n) * seq.phi(n)
           + n * seq.phi(n + 1) + _cj_star(lam, n) * seq.phi_star(n))
    return _lhs([num.one, num.one], seq, n), rhs


def _cj_sym(spec, seq, n, r=None):
    num = seq.precision.num
    lam = _cj_lambda(spec, num)
    rhs = (-_cj_prev(lam, n) * seq.phi(n - 1) - lam * seq.phi(n)
           + n * seq.phi(n + 1) + _cj_star(lam, n) * seq.phi_star(n))
    return _lhs([num.one, -num.one], seq, n), rhs


def _exp_sine(spec, seq, n, r=None):
    if not isinstance(spec, ExpSine):
        raise UnknownRelation("relation needs an ExpSine weight")
    num = seq.precision.num
    u = num.c(spec.u)
    an, an1 = seq.alpha(n), seq.alpha(n - 1)
    rhs = (1j * u.conjugate() * _rho(seq, n - 1) * seq.phi(n - 1)
           + (n + 1j * u * an.conjugate() * an1) * seq.phi(n)
           + 1j * u * an.conjugate() * seq.phi_star(n))
    return _lhs([0 * num.one], seq, n), rhs


def _half_plane(spec, seq, n, r=None):
    if not isinstance(spec, HalfPlanePole):
        raise UnknownRelation("relation needs a HalfPlanePole weight")
    num = seq.precision.num
    u, r = num.c(spec.u), num.c(spec.r)
    rb = r.conjugate()
    an, an1 = seq.alpha(n), seq.alpha(n - 1)
    s_prev = (n * r - 1j * u.conjugate()) / rb * _rho(seq, n - 1)
    s_nn = -(n * (abs(r) ** 2 + 1) / rb + seq.gamma(n)
             + (n + 1 + 1j * u / rb) * an.conjugate() * an1)
    rhs = (n * seq.phi(n + 1) + s_nn * seq.phi(n) + s_prev * seq.phi(n - 1)
           - (1 + 1j * u / rb) * an.conjugate() * seq.phi_star(n))
    return _lhs([r, 1 / rb], seq, n), rhs


def _gen_jacobi(spec, seq, n, r=None):
    if not isinstance(spec, GeneralizedJacobi):
        raise UnknownRelation("relation needs a GeneralizedJacobi weight")
    num = seq.precision.num
    d = num.c(complex(spec.lam + spec.beta, spec.eta))
    an, an1 = seq.alpha(n), seq.alpha(n - 1)
    s_prev = -(d.conjugate() + n) * _rho(seq, n - 1)
    s_nn = -((d + n + 1) * an.conjugate() * an1 + seq.gamma(n))
    rhs = (s_prev * seq.phi(n - 1) + s_nn * seq.phi(n) + n * seq.phi(n + 1)
           - (d + 1) * an.conjugate() * seq.phi_star(n))
    return _lhs([num.one, -num.one], seq, n), rhs


def _jacobi(spec, seq, n, r=None):
    if not isinstance(spec, JacobiOPUC):
        raise UnknownRelation("relation needs a JacobiOPUC weight")
    num = seq.precision.num
    s = num.r(spec.lam) + num.r(spec.beta)
    an, an1 = seq.alpha(n), seq.alpha(n - 1)
    s_prev = -(s + n) * (1 - an1 ** 2)
    s_nn = -((s + n + 1) * an * an1 + seq.gamma(n))
    rhs = (s_prev * seq.phi(n - 1) + s_nn * seq.phi(n) + n * seq.phi(n + 1)
           - (s + 1) * an * seq.phi_star(n))
    return _lhs([num.one, -num.one], seq, n), rhs


def _bessel_t(spec, num):
    if not isinstance(spec, Bessel):
        raise UnknownRelation("relation needs a Bessel weight")
    return num.r(spec.t)


def _bessel_derivative(spec, seq, n, r=None):
    """Phi_n' = n Phi_{n-1} + (t/2)(||Phi_n||^2/||Phi_{n-2}||^2) Phi_{n-2}."""
    num = seq.precision.num
    t = _bessel_t(spec, num)
    ratio = seq.norm_sq(n) / seq.norm_sq(n - 2)
    rhs = n * seq.phi(n - 1) + t / 2 * ratio * seq.phi(n - 2)
    return seq.phi(n).derivative(), rhs


def _bessel_z(spec, seq, n, r=None):
    """z Phi_n' = n Phi_n + (t/2)(||Phi_n||^2/||Phi_{n-1}||^2)[Phi_{n-1} - alpha_n Phi_{n-1}^*]."""
    num = seq.precision.num
    t = _bessel_t(spec, num)
    ratio = seq.norm_sq(n) / seq.norm_sq(n - 1)
    rhs = n * seq.phi(n) + t / 2 * ratio * (seq.phi(n - 1) - seq.alpha(n) * seq.phi_star(n - 1))
    return _lhs([0 * num.one], seq, n), rhs


RELATIONS = {
    "SR1": _sr1,
    "SR2": _sr2,
    "SR3": _sr3,
    "SR4": _sr4,
    "SR_r": _sr_r,
    "CJ_magnus": _cj_magnus,
    "CJ_z": _cj_z,
    "CJ_double": _cj_double,
    "CJ_sym": _cj_sym,
    "ExpSine": _exp_sine,
    "HalfPlanePole": _half_plane,
    "GenJacobi": _gen_jacobi,
    "JacobiOPUC": _jacobi,
    "Bessel_derivative": _bessel_derivative,
    "Bessel_z": _bessel_z,
}
RELATION_IDS = tuple(RELATIONS)


def relations_for(spec: WeightSpec) -> list:
    """Relation ids with written-out coefficients for this weight."""
    if isinstance(spec, CircularJacobi):
        return ["SR1", "SR2", "SR3", "SR4", "CJ_magnus", "CJ_z", "CJ_double", "CJ_sym"]
    if isinstance(spec, SriRanga):
        return ["SR1", "SR2", "SR3", "SR4"]
    if isinstance(spec, ExpSine):
        return ["ExpSine"]
    if isinstance(spec, HalfPlanePole):
        return ["HalfPlanePole"]
    if isinstance(spec, JacobiOPUC):
        return ["GenJacobi", "JacobiOPUC"]
    if isinstance(spec, GeneralizedJacobi):
        return ["GenJacobi"]
    if isinstance(spec, Bessel):
        return ["Bessel_derivative", "Bessel_z"]
    return []


def specialized_relation(spec: WeightSpec, relation_id: str, seq: OpucSequence, n: int,
                         grid_size: int = 256, tolerance: float = 1e-8,
                         r: complex | None = None) -> ResidualReport:
    """Residual of a relation whose coefficients are written for a specific weight."""
    fn = RELATIONS.get(relation_id)
    if fn is None:
        raise UnknownRelation(f"unknown relation id {relation_id!r}")
    if n < 2:
        raise OutOfTheoremRange("structure relations are stated for n >= 2")
    lhs, rhs = fn(spec, seq, n, r)
    return _residual_report(lhs, rhs, grid_size, tolerance, f"{relation_id} n={n}",
                            seq.precision.num)


def parts_identity_residual(pair: PearsonPair, seq: OpucSequence, T: MomentTable,
                            n: int, k: int) -> float:
    """|<A Phi_n', z^k> - <Phi_n (iB + (k+1)A), z^{k+1}>|, valid when no boundary term arises."""
    num = T.precision.num
    phi = seq.phi(n)
    lhs = inner_product(T, pair.A * phi.derivative(), ComplexPoly.monomial(k, num.one))
    weight_poly = pair.B * (1j * num.one) + pair.A * (k + 1)
    rhs = inner_product(T, phi * weight_poly, ComplexPoly.monomial(k + 1, num.one))
    return float(abs(lhs - rhs))


def annihilation_residual(pair: PearsonPair, seq: OpucSequence, T: MomentTable, n: int) -> float:
    """max over 1 <= k <= n-2 of |<A Phi_n', z^k>|."""
    num = T.precision.num
    lhs = pair.A * seq.phi(n).derivative()
    return max((float(abs(inner_product(T, lhs, ComplexPoly.monomial(k, num.one))))
                for k in range(1, n - 1)), default=0.0)


def family_identities(spec: WeightSpec, seq: OpucSequence, n: int) -> dict:
    """Residuals of the scalar identities the catalog families satisfy at index n >= 1.

    Empty for families without recorded identities.
    """
    num = seq.precision.num
    a, g = seq.alpha, seq.gamma
    out = {}
    if isinstance(spec, (SriRanga, CircularJacobi)):
        b = _sri_ranga_b(spec, num)
        bb = b.conjugate()
        out["gamma_closed"] = abs(g(n) - n * bb / (b + n))
        out["alpha_product"] = abs(a(n) * a(n - 1).conjugate()
                                   - abs(b) ** 2 / ((bb + n) * (bb + n + 1)))
        out["gamma_from_alphas"] = abs(g(n) - (bb - (b + n - 1) * a(n - 1).conjugate() * a(n - 2)))
    elif isinstance(spec, ExpSine):
        u = num.c(spec.u)
        out["re_u_alpha"] = abs((u * a(n).conjugate() * a(n - 1)).real)
        a1 = a(1)
        if abs(a1) > 0:
            phase = (a1 / a1.conjugate()) * (-u / u.conjugate()) ** (n - 1)
            out["phase"] = abs(a(n) - phase * a(n).conjugate())
    elif isinstance(spec, HalfPlanePole):
        u, r = num.c(spec.u), num.c(spec.r)
        lhs = (r.conjugate() * g(n) + ((n + 1) * r.conjugate() + 1j * u)
               * a(n).conjugate() * a(n - 1)).imag
        out["im_identity"] = abs(lhs + (u * r).real)
    elif isinstance(spec, GeneralizedJacobi):
        lam, beta = num.r(spec.lam), num.r(spec.beta)
        d = lam + beta + 1j * num.r(spec.eta)
        out["real_part"] = abs((g(n) + (d + n + 1) * a(n).conjugate() * a(n - 1)).real
                               - (lam - beta))
    return {k: float(v) for k, v in out.items()}

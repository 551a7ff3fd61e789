"""Non-linear difference equations for Verblunsky coefficients.

Every equation is stored as a pair ``(lhs, rhs)`` of callables of
``(alpha, gamma, n)``, where ``alpha(k)`` and ``gamma(n)`` are accessors; the
signed residual is ``lhs - rhs``.  Equations that come as a displayed pair
report the larger of their two residuals.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum

from .algebra import DOUBLE, Precision
from .errors import NotEvaluable, OutOfRange, UnsolvableStep
from .mopuc import OpucSequence
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

RHO_FLOOR = 1e-10


class EqId(str, Enum):
    GEN_2_10 = "Gen_2_10"
    GEN_2_11 = "Gen_2_11"
    RANGA_4_6 = "Ranga_4_6"
    RANGA_4_7 = "Ranga_4_7"
    RANGA_4_8 = "Ranga_4_8"
    RANGA_4_9 = "Ranga_4_9"
    RANGA_4_10 = "Ranga_4_10"
    RANGA_4_11 = "Ranga_4_11"
    RANGA_4_14 = "Ranga_4_14"
    DPII = "dPII"
    COMPLEX_DPII = "ComplexdPII"
    HALF_PLANE_PAIR = "HalfPlanePole_pair"
    GEN_JACOBI_PAIR = "GenJacobi_pair"
    JACOBI_PAIR = "Jacobi_pair"
    # intermediate forms for the Sri Ranga weight, used to cross-check the above
    RANGA_AUX_1A = "Ranga_aux_1a"
    RANGA_AUX_4A = "Ranga_aux_4a"
    RANGA_AUX_3B = "Ranga_aux_3b"
    RANGA_AUX_2B = "Ranga_aux_2b"


MIN_N = {
    EqId.RANGA_4_6: 0,
    EqId.RANGA_4_7: 1,
    EqId.RANGA_4_14: 1,
    EqId.RANGA_AUX_4A: 1,
}

_NEEDS = {
    EqId.GEN_2_10: ("pair",), EqId.GEN_2_11: ("pair",),
    EqId.DPII: ("t",), EqId.COMPLEX_DPII: ("u",),
    EqId.HALF_PLANE_PAIR: ("u", "r"),
    EqId.GEN_JACOBI_PAIR: ("lam", "beta", "eta"),
    EqId.JACOBI_PAIR: ("lam", "beta"),
}


@dataclass(frozen=True)
class DifferenceEquation:
    """An equation id with the parameters it needs (b, t, u, r, lam, beta, eta or pair)."""

    id: EqId
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "id", EqId(self.id))
        needed = _NEEDS.get(self.id, ("b",))
        missing = [p for p in needed if p not in self.params]
        if missing:
            raise ValueError(f"{self.id.value} needs parameters {missing}")

    @property
    def min_n(self) -> int:
        return MIN_N.get(self.id, 2)

    @classmethod
    def for_spec(cls, eq_id, spec: WeightSpec, pair: PearsonPair | None = None):
        """Fill parameters from a catalog weight."""
        eq_id = EqId(eq_id)
        params: dict = {}
        if pair is not None:
            params["pair"] = pair
        if isinstance(spec, SriRanga):
            params["b"] = spec.b
        elif isinstance(spec, CircularJacobi):
            params["b"] = complex(spec.lam)
        elif isinstance(spec, Bessel):
            params["t"] = spec.t
        elif isinstance(spec, ExpSine):
            params["u"] = spec.u
        elif isinstance(spec, HalfPlanePole):
            params.update(u=spec.u, r=spec.r)
        elif isinstance(spec, GeneralizedJacobi):
            params.update(lam=spec.lam, beta=spec.beta, eta=spec.eta)
        return cls(eq_id, params)


# ---------------------------------------------------------------------------
# Equation bodies
# ---------------------------------------------------------------------------


def _inv_rho(alpha, k):
    rho = 1 - abs(alpha(k)) ** 2
    if rho < RHO_FLOOR:
        raise NotEvaluable(f"1 - |alpha_{k}|^2 = {float(rho):.3e} is below {RHO_FLOOR}")
    return 1 / rho


def _rho(alpha, k):
    return 1 - abs(alpha(k)) ** 2


def _gen_2_10(p, a, g, n):
    A, B = p["pair"].A, p["pair"].B
    a0, a1, a2 = (A.coeff(k).conjugate() for k in range(3))
    b0, b1, b2 = (B.coeff(k).conjugate() for k in range(3))
    gn = g(n)
    lhs = ((n - 1) * a2 + 1j * b2) * a(n) + ((n - 1) * a0 - 1j * b0) * a(n - 2)
    rhs = -(n * a1 - gn * a0 - gn.conjugate() * a2) * a(n - 1) * _inv_rho(a, n - 1)
    return [(lhs, rhs)]


def _gen_2_11(p, a, g, n):
    A, B = p["pair"].A, p["pair"].B
    a0, a1, a2 = (A.coeff(k).conjugate() for k in range(3))
    b0, b1, b2 = (B.coeff(k).conjugate() for k in range(3))
    inv = _inv_rho(a, n - 1)
    lhs = ((n - 1) * a2 + 1j * b2) * a(n) * inv + ((n - 1) * a0 - 1j * b0) * a(n - 2)
    brace = ((1j * b0 - (n + 1) * a0) * a(n - 1) * a(n).conjugate()
             - 1j * b1 + (n + 1) * a1 - 2 * g(n) * a0)
    return [(lhs, -brace * a(n - 1) * inv)]


def _b(p):
    return p["b"]


def _ranga_4_6(p, a, g, n):
    b = _b(p)
    an, an1 = a(n), a(n + 1)
    lhs = (b + n + 1) * an
    rhs = (n + 2 + b.conjugate() - (b + n + 1) * an1.conjugate() * an) * an1 * _inv_rho(a, n + 1)
    return [(lhs, rhs)]


def _ranga_4_7(p, a, g, n):
    b = _b(p)
    return [((b.conjugate() + n + 1) * a(n), (b + n) * a(n - 1))]


def _ranga_4_8(p, a, g, n):
    b = _b(p)
    lhs = (b.conjugate() + n + 1) * a(n) + (b + n - 1) * a(n - 2)
    rhs = 2 * (g(n).real + n) * a(n - 1) * _inv_rho(a, n - 1)
    return [(lhs, rhs)]


def _ranga_4_9(p, a, g, n):
    b = _b(p)
    lhs = (b.conjugate() + n + 1) * a(n) - (b + n - 1) * a(n - 2)
    rhs = -2j * g(n).imag * a(n - 1) * _inv_rho(a, n - 1)
    return [(lhs, rhs)]


def _ranga_gamma(b, n):
    return n * b.conjugate() / (b + n)


def _ranga_4_10(p, a, g, n):
    b = _b(p)
    lhs = (b.conjugate() + n + 1) * a(n) + (b + n - 1) * _rho(a, n - 1) * a(n - 2)
    return [(lhs, (_ranga_gamma(b, n) + b + 2 * n) * a(n - 1))]


def _ranga_4_11(p, a, g, n):
    b = _b(p)
    lhs = (b.conjugate() + n + 1) * a(n) - (b + n - 1) * _rho(a, n - 1) * a(n - 2)
    return [(lhs, -(_ranga_gamma(b, n) - b) * a(n - 1))]


def _ranga_4_14(p, a, g, n):
    b = _b(p)
    an, an1 = a(n), a(n - 1)
    return [(an.conjugate() * (an1 + an), (b.conjugate() + n) * (abs(an1) ** 2 - abs(an) ** 2))]


def _aux_1a(p, a, g, n):
    b = _b(p)
    return [((b + n - 1) * a(n - 2), (n + g(n)) * a(n - 1) * _inv_rho(a, n - 1))]


def _aux_4a(p, a, g, n):
    b = _b(p)
    return [((b.conjugate() + n + 1) * a(n), (n + g(n).conjugate()) * a(n - 1) * _inv_rho(a, n - 1))]


def _aux_3b(p, a, g, n):
    b = _b(p)
    lhs = (b.conjugate() + n + 1) * a(n) + (b + n - 1) * _rho(a, n - 1) * a(n - 2)
    return [(lhs, (g(n) + b + 2 * n) * a(n - 1))]


def _aux_2b(p, a, g, n):
    b = _b(p)
    lhs = (b.conjugate() + n + 1) * a(n) - (b + n - 1) * _rho(a, n - 1) * a(n - 2)
    return [(lhs, -(g(n) - b) * a(n - 1))]


def _dpii(p, a, g, n):
    t = p["t"]
    an1 = a(n - 1)
    _inv_rho(a, n - 1)
    return [(a(n) + a(n - 2), -(2 * n / t) * an1 / (1 - an1 ** 2))]


def _complex_dpii(p, a, g, n):
    iu = 1j * p["u"]
    lhs = iu.conjugate() * a(n) + iu * a(n - 2)
    return [(lhs, n * a(n - 1) * _inv_rho(a, n - 1))]


def _half_plane_pair(p, a, g, n):
    u, r = p["u"], p["r"]
    rb = r.conjugate()
    an, an1, an2 = a(n), a(n - 1), a(n - 2)
    gn = g(n)
    c_n = (n + 1) * r - 1j * u.conjugate()
    c_n2 = (n - 1) * rb + 1j * u
    first = (c_n * an + c_n2 * an2,
             (n * (abs(r) ** 2 + 1) + 2 * (r * gn.conjugate()).real) * an1 * _inv_rho(a, n - 1))
    brace = (n * (abs(r) ** 2 + 1) + 2j * (u * r).real
             + ((n + 1) * rb + 1j * u) * an.conjugate() * an1 + 2 * rb * gn)
    second = (c_n * an + c_n2 * _rho(a, n - 1) * an2, brace * an1)
    return [first, second]


def _gen_jacobi_pair(p, a, g, n):
    lam, beta, eta = p["lam"], p["beta"], p["eta"]
    d = lam + beta + 1j * eta
    an, an1, an2 = a(n), a(n - 1), a(n - 2)
    gn = g(n)
    first = ((d.conjugate() + n + 1) * an - (d + n - 1) * an2,
             -2j * gn.imag * an1 * _inv_rho(a, n - 1))
    second = ((d.conjugate() + n + 1) * an - (d + n - 1) * _rho(a, n - 1) * an2,
              -(2 * gn + (d + n + 1) * an.conjugate() * an1 - 2 * (lam - beta)) * an1)
    return [first, second]


def _jacobi_pair(p, a, g, n):
    lam, beta = p["lam"], p["beta"]
    s = lam + beta
    an, an1, an2 = a(n), a(n - 1), a(n - 2)
    first = ((s + n + 1) * an - (s + n - 1) * an2 * (1 - an1 ** 2),
             -(2 * g(n) + (s + n + 1) * an * an1 - 2 * (lam - beta)) * an1)
    second = ((s + n + 1) * an, (s + n - 1) * an2)
    return [first, second]


_BODIES = {
    EqId.GEN_2_10: _gen_2_10,
    EqId.GEN_2_11: _gen_2_11,
    EqId.RANGA_4_6: _ranga_4_6,
    EqId.RANGA_4_7: _ranga_4_7,
    EqId.RANGA_4_8: _ranga_4_8,
    EqId.RANGA_4_9: _ranga_4_9,
    EqId.RANGA_4_10: _ranga_4_10,
    EqId.RANGA_4_11: _ranga_4_11,
    EqId.RANGA_4_14: _ranga_4_14,
    EqId.DPII: _dpii,
    EqId.COMPLEX_DPII: _complex_dpii,
    EqId.HALF_PLANE_PAIR: _half_plane_pair,
    EqId.GEN_JACOBI_PAIR: _gen_jacobi_pair,
    EqId.JACOBI_PAIR: _jacobi_pair,
    EqId.RANGA_AUX_1A: _aux_1a,
    EqId.RANGA_AUX_4A: _aux_4a,
    EqId.RANGA_AUX_3B: _aux_3b,
    EqId.RANGA_AUX_2B: _aux_2b,
}


_REAL_PARAMS = ("t", "lam", "beta", "eta")


def _working_params(params: dict, precision: Precision) -> dict:
    """Parameters converted to the working precision (pairs pass through)."""
    num = precision.num
    out = {}
    for k, v in params.items():
        if k == "pair":
            out[k] = v
        elif k in _REAL_PARAMS:
            out[k] = num.r(v)
        else:
            out[k] = num.c(v)
    return out


def _accessors(seq: OpucSequence):
    def alpha(k):
        try:
            return seq.alpha(k)
        except IndexError as exc:
            raise OutOfRange(str(exc)) from None

    def gamma(n):
        if n > seq.n_max:
            raise OutOfRange(f"gamma_{n} needs Phi_{n}; sequence ends at {seq.n_max}")
        return seq.gamma(n)

    return alpha, gamma


def signed_residuals(eq: DifferenceEquation, seq: OpucSequence, n: int) -> list:
    """LHS - RHS for each equation in ``eq`` (one, or two for the displayed pairs)."""
    if n < eq.min_n:
        raise OutOfRange(f"{eq.id.value} holds for n >= {eq.min_n}, got n = {n}")
    alpha, gamma = _accessors(seq)
    params = _working_params(eq.params, seq.precision)
    return [lhs - rhs for lhs, rhs in _BODIES[eq.id](params, alpha, gamma, n)]


def difference_residual(eq: DifferenceEquation, seq: OpucSequence, n: int) -> float:
    """|LHS - RHS| (the larger one for a displayed pair of equations)."""
    return max(float(abs(r)) for r in signed_residuals(eq, seq, n))


def rd_caso1_check(seq: OpucSequence, b: complex, n: int) -> float:
    """|conj(alpha_n)(alpha_{n-1} + alpha_n) - (conj(b) + n)(|alpha_{n-1}|^2 - |alpha_n|^2)|."""
    return difference_residual(DifferenceEquation(EqId.RANGA_4_14, {"b": b}), seq, n)


def equations_for(spec: WeightSpec, pairs: list | None = None) -> list:
    """Every difference equation that applies to a catalog weight."""
    pairs = spec.pearson_pairs() if pairs is None else pairs
    out = []
    for pr in pairs:
        out.append(DifferenceEquation.for_spec(EqId.GEN_2_10, spec, pr))
        out.append(DifferenceEquation.for_spec(EqId.GEN_2_11, spec, pr))
    extra = []
    if isinstance(spec, (SriRanga, CircularJacobi)):
        extra = [EqId.RANGA_4_6, EqId.RANGA_4_7, EqId.RANGA_4_8, EqId.RANGA_4_9,
                 EqId.RANGA_4_10, EqId.RANGA_4_11, EqId.RANGA_4_14]
    elif isinstance(spec, Bessel):
        extra = [EqId.DPII]
    elif isinstance(spec, ExpSine):
        extra = [EqId.COMPLEX_DPII]
    elif isinstance(spec, HalfPlanePole):
        extra = [EqId.HALF_PLANE_PAIR]
    elif isinstance(spec, JacobiOPUC):
        extra = [EqId.GEN_JACOBI_PAIR, EqId.JACOBI_PAIR]
    elif isinstance(spec, GeneralizedJacobi):
        extra = [EqId.GEN_JACOBI_PAIR]
    out.extend(DifferenceEquation.for_spec(e, spec) for e in extra)
    return out


# ---------------------------------------------------------------------------
# Propagation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Propagation:
    """alpha_0..alpha_m (m <= n_max) and the first index with |alpha| >= 1, if any."""

    alphas: tuple
    violation: int | None = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "re_alpha", "im_alpha", "abs_alpha"])
        for n, a in enumerate(self.alphas):
            w.writerow([n, f"{float(a.real) + 0.0:.17g}", f"{float(a.imag) + 0.0:.17g}",
                        f"{float(abs(a)):.17g}"])
        return buf.getvalue()


def _seed_list(seeds, count: int) -> list:
    if isinstance(seeds, dict):
        vals = [seeds[k] for k in range(count) if k in seeds]
    else:
        vals = list(seeds)
    if len(vals) < count:
        raise ValueError(f"propagation needs {count} seed values")
    return vals[:count]


def propagate(eq: DifferenceEquation, seeds, n_max: int,
              precision: Precision = DOUBLE) -> Propagation:
    """Iterate an explicitly solvable equation.

    Seeds: ``Ranga_4_7`` starts from alpha_{-1} (a mapping ``{-1: value}`` or
    nothing for -1); ``Ranga_4_6`` runs backward from ``{n_max: value}``;
    ``dPII``, ``ComplexdPII`` and ``Gen_2_10`` need alpha_0 and alpha_1.
    """
    p = _working_params(eq.params, precision)
    num = precision.num
    one = num.one
    out: list = []

    def done(violation=None):
        return Propagation(tuple(out), violation)

    if eq.id is EqId.RANGA_4_7:
        b = _b(p)
        prev = (seeds or {}).get(-1, -one) if isinstance(seeds, dict) or seeds is None else seeds[0]
        prev = num.c(prev)
        for n in range(n_max + 1):
            prev = (b + n) * prev / (b.conjugate() + n + 1)
            out.append(prev)
            if abs(prev) >= 1:
                return done(n)
        return done()

    if eq.id is EqId.RANGA_4_6:
        b = _b(p)
        top = num.c(seeds[n_max] if isinstance(seeds, dict) else seeds[0])
        back = [top]
        for n in range(n_max - 1, -1, -1):
            nxt = back[-1]
            rho = 1 - abs(nxt) ** 2
            # (b+n+1) alpha_n (1 + |alpha_{n+1}|^2 / rho) = (n+2+conj b) alpha_{n+1} / rho
            back.append((n + 2 + b.conjugate()) * nxt / (rho + abs(nxt) ** 2) / (b + n + 1))
        out.extend(reversed(back))
        bad = [k for k, v in enumerate(out) if abs(v) >= 1]
        return done(bad[0] if bad else None)

    out.extend(num.c(v) for v in _seed_list(seeds, 2))
    for k, v in enumerate(out):
        if abs(v) >= 1:
            return done(k)

    def alpha(k):
        return -one if k == -1 else out[k]

    gamma = -out[0].conjugate()  # gamma_1 = conj(alpha_0) alpha_{-1}
    for n in range(2, n_max + 1):
        an1, an2 = out[n - 1], out[n - 2]
        gamma = gamma + an1.conjugate() * an2
        rho = 1 - abs(an1) ** 2
        if eq.id is EqId.DPII:
            t = p["t"]
            new = -an2 - (2 * n / t) * an1 / (1 - an1 ** 2)
        elif eq.id is EqId.COMPLEX_DPII:
            iu = 1j * p["u"]
            new = (n * an1 / rho - iu * an2) / iu.conjugate()
        elif eq.id is EqId.GEN_2_10:
            A, B = p["pair"].A, p["pair"].B
            a0, a1, a2 = (A.coeff(k).conjugate() for k in range(3))
            b0, b1, b2 = (B.coeff(k).conjugate() for k in range(3))
            lead = (n - 1) * a2 + 1j * b2
            if lead == 0:
                raise UnsolvableStep(f"coefficient of alpha_{n} vanishes")
            rhs = -(n * a1 - gamma * a0 - gamma.conjugate() * a2) * an1 / rho
            new = (rhs - ((n - 1) * a0 - 1j * b0) * an2) / lead
        else:
            raise ValueError(f"{eq.id.value} cannot be propagated")
        out.append(new)
        if abs(new) >= 1:
            return done(n)
    return done()


def residual_table_csv(rows) -> str:
    """rows of (n, residual)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "residual"])
    for n, r in rows:
        w.writerow([n, f"{float(r):.17g}"])
    return buf.getvalue()

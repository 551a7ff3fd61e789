"""Catalog of semi-classical weights on the unit circle and their Pearson pairs.

A weight is written as ``w(theta) = exp(S(theta)) * prod_j [sin^2((theta - phi_j)/2)]^{e_j}``
with a smooth exponent ``S`` and algebraic factors at the angles ``phi_j``.
Each family knows its analytic log-derivative ``w'/w`` and every pair
``(A, B)`` for which ``d/dtheta [A(e^{i theta}) w] = B(e^{i theta}) w``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from typing import ClassVar

from .algebra import DOUBLE, ComplexPoly, Precision, bessel_i0, log_gamma_complex
from .errors import DomainError, GridOnSingularity, SingularPoint
from .report import ResidualReport, half_offset_grid

# ---------------------------------------------------------------------------
# Pearson pairs
# ---------------------------------------------------------------------------


def _is_negligible(c, scale) -> bool:
    return abs(c) <= 1e-13 * max(1.0, float(scale))


def _numeric_degree(p: ComplexPoly) -> int | None:
    """Degree ignoring leading coefficients at round-off level; None for 0."""
    scale = max(float(abs(c)) for c in p.coeffs)
    for k in range(p.degree, -1, -1):
        if not _is_negligible(p.coeffs[k], scale) and p.coeffs[k] != 0:
            return k
    return None


def class_label(A: ComplexPoly, B: ComplexPoly) -> tuple:
    """(p, q) with p = deg A and q = max(p - 1, deg((p - 1) A + i B))."""
    p = A.degree
    d = _numeric_degree((p - 1) * A + 1j * B)
    q = p - 1 if d is None else max(p - 1, d)
    return p, q


@dataclass(frozen=True)
class PearsonPair:
    """Polynomials A (monic) and B of the Pearson-type equation.

    ``roots`` lists the roots of A, which the classifier needs to pick the
    matching linear system.
    """

    A: ComplexPoly
    B: ComplexPoly
    roots: tuple = ()
    label: str = ""

    def __post_init__(self):
        if self.A.degree > 2 or self.B.degree > 2:
            raise ValueError("Pearson pairs are limited to degree 2")
        if not self.A.is_monic():
            raise ValueError("A must be monic")
        if len(self.roots) != self.A.degree:
            raise ValueError("roots must list every root of A")

    @property
    def class_pq(self) -> tuple:
        return class_label(self.A, self.B)

    def a(self, k: int):
        return self.A.coeff(k)

    def b(self, k: int):
        return self.B.coeff(k)


def _pair(roots, B_coeffs, label, one=1) -> PearsonPair:
    A = ComplexPoly.from_roots(roots) if roots else ComplexPoly([one])
    return PearsonPair(A, ComplexPoly(B_coeffs), tuple(roots), label)


def _sri_ranga_pairs(b, one) -> list:
    """Pairs for e^{-eta theta} sin^{2 lam}(theta/2), b = lam + i eta."""
    i = 1j * one
    bc = b.conjugate()
    return [
        _pair([one], [i * bc, i * (b + 1)], "z-1"),
        _pair([one, -one], [i * bc, i * (b + bc), i * (b + 2)], "z^2-1"),
        _pair([one, one], [-i * bc, i * (bc - b - 2), i * (b + 2)], "(z-1)^2"),
        _pair([0 * one, one], [0 * one, i * (bc - 1), i * (b + 2)], "z(z-1)"),
    ]


def sri_ranga_general_pair(b, r, one=1) -> PearsonPair:
    """A = (z - 1)(z - r) for any complex r."""
    i = 1j * one
    bc = b.conjugate()
    return _pair([one, r], [-i * r * bc, i * (bc - 1 - r * (b + 1)), i * (b + 2)],
                 "(z-1)(z-r)")


def rotated_cos_general_pair(c, r, one=1, label="(z+1)(z-r)") -> PearsonPair:
    """A = (z + 1)(z - r) for e^{-eta theta} cos^{2 beta}(theta/2) on [-pi, pi]."""
    i = 1j * one
    cc = c.conjugate()
    return _pair([-one, r], [i * r * cc, -i * (cc - 1 + r * (c + 1)), i * (c + 2)], label)


# ---------------------------------------------------------------------------
# Weight families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightSpec:
    """Base class; concrete families below.

    ``singular_points`` yields ``(k, e)`` meaning a factor
    ``[sin^2((theta - k pi)/2)]^e``.  ``domain_start`` is the left end of the
    angle interval in units of pi.
    """

    family: ClassVar[str] = ""
    domain_start: ClassVar[int] = 0
    periodic_smooth: ClassVar[bool] = False
    normalized: bool = field(default=True, kw_only=True)

    # -- family interface -------------------------------------------------
    def singular_points(self) -> list:
        return []

    def log_smooth(self, theta, num):
        return 0 * theta

    def log_derivative(self, theta, num):
        raise NotImplementedError

    def pearson_pairs(self, precision: Precision = DOUBLE) -> list:
        raise NotImplementedError

    def closed_form_tau(self, precision: Precision):
        return None

    def closed_form_moments(self, N: int, precision: Precision):
        """Exact mu_0..mu_N of the raw weight when known, else None."""
        return None

    def params(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "normalized"}

    # -- shared behaviour -------------------------------------------------
    def domain(self, num):
        a = self.domain_start * num.pi
        return a, a + 2 * num.pi

    def raw_value(self, theta, num, dists: dict | None = None):
        """Unnormalized w(theta).

        ``dists`` maps the index of a singular point to the exact distance
        of ``theta`` from it, used near interval ends.
        """
        val = num.exp(self.log_smooth(theta, num))
        for j, (k, e) in enumerate(self.singular_points()):
            if e == 0:
                continue
            if dists is not None and j in dists:
                s = abs(num.sin(dists[j] / 2))
            else:
                s = abs(num.sin((theta - k * num.pi) / 2))
            if s == 0:
                if e < 0:
                    raise SingularPoint(f"weight is infinite at theta = {k} pi")
                return 0 * val
            val = val * num.power(s, 2 * num.r(e))
        return val


def _real(x, name):
    try:
        v = float(x)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be real") from None
    return v


def _above_minus_half(v, name):
    if not v > -0.5:
        raise DomainError(f"{name} must exceed -1/2, got {v}")


def _cot_half(theta, num):
    return num.cos(theta / 2) / num.sin(theta / 2)


def _tan_half(theta, num):
    return num.sin(theta / 2) / num.cos(theta / 2)


def _log_sri_ranga_tau(b, num):
    """log of e^{pi eta} 2^{2 lam} |Gamma(b+1)|^2 / (2 pi Gamma(2 lam + 1))."""
    prec = Precision(num.digits if num.extended else None)
    lam, eta = b.real, b.imag
    lg = log_gamma_complex(b + 1, prec)
    return (num.pi * eta + 2 * lam * num.log(num.r(2)) + 2 * lg.real
            - num.log(2 * num.pi) - log_gamma_complex(2 * lam + 1, prec).real)


@dataclass(frozen=True)
class Lebesgue(WeightSpec):
    family: ClassVar[str] = "Lebesgue"
    periodic_smooth: ClassVar[bool] = True

    def log_smooth(self, theta, num):
        return -num.log(2 * num.pi) + 0 * theta

    def log_derivative(self, theta, num):
        return 0 * theta

    def pearson_pairs(self, precision=DOUBLE):
        one = precision.num.one
        i = 1j * one
        return [_pair([], [0 * one], "1", one),
                _pair([one / 2], [0 * one, i], "z-1/2")]

    def closed_form_tau(self, precision):
        return precision.num.r(1)

    def closed_form_moments(self, N, precision):
        num = precision.num
        return [num.c(1)] + [num.c(0)] * N


@dataclass(frozen=True)
class ExpSine(WeightSpec):
    """exp(2 |u| sin(theta + arg u)) = exp(2 Im(u e^{i theta}))."""

    u: complex
    family: ClassVar[str] = "ExpSine"
    periodic_smooth: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "u", complex(self.u))
        if self.u == 0:
            raise DomainError("ExpSine needs u != 0 (u = 0 is the Lebesgue weight)")

    def log_smooth(self, theta, num):
        return 2 * (num.c(self.u) * num.expj(theta)).imag

    def log_derivative(self, theta, num):
        return 2 * (num.c(self.u) * num.expj(theta)).real

    def pearson_pairs(self, precision=DOUBLE):
        num = precision.num
        u = num.c(self.u)
        return [_pair([0 * num.one], [u.conjugate(), 1j * num.one, u], "z")]


@dataclass(frozen=True)
class Bessel(WeightSpec):
    """exp(t cos theta)."""

    t: float
    family: ClassVar[str] = "Bessel"
    periodic_smooth: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "t", _real(self.t, "t"))
        if not self.t > 0:
            raise DomainError("Bessel needs t > 0")

    def log_smooth(self, theta, num):
        return num.r(self.t) * num.cos(theta)

    def log_derivative(self, theta, num):
        return -num.r(self.t) * num.sin(theta)

    def pearson_pairs(self, precision=DOUBLE):
        num = precision.num
        h = 1j * num.r(self.t) / 2
        return [_pair([0 * num.one], [-h, 1j * num.one, h], "z")]

    def closed_form_tau(self, precision):
        num = precision.num
        return 1 / (2 * num.pi * bessel_i0(self.t, precision))


@dataclass(frozen=True)
class SriRanga(WeightSpec):
    """e^{-eta theta} [sin^2(theta/2)]^lam with b = lam + i eta."""

    b: complex
    family: ClassVar[str] = "SriRanga"

    def __post_init__(self):
        object.__setattr__(self, "b", complex(self.b))
        _above_minus_half(self.b.real, "Re b")

    def singular_points(self):
        return [(0, self.b.real)]

    def log_smooth(self, theta, num):
        return -num.r(self.b.imag) * theta

    def log_derivative(self, theta, num):
        return num.r(self.b.real) * _cot_half(theta, num) - num.r(self.b.imag)

    def pearson_pairs(self, precision=DOUBLE):
        return _sri_ranga_pairs(precision.num.c(self.b), precision.num.one)

    def closed_form_tau(self, precision):
        num = precision.num
        return num.exp(_log_sri_ranga_tau(num.c(self.b), num))


@dataclass(frozen=True)
class CircularJacobi(WeightSpec):
    """[sin^2(theta/2)]^lam."""

    lam: float
    family: ClassVar[str] = "CircularJacobi"

    def __post_init__(self):
        object.__setattr__(self, "lam", _real(self.lam, "lambda"))
        _above_minus_half(self.lam, "lambda")

    def singular_points(self):
        return [(0, self.lam)]

    def log_derivative(self, theta, num):
        return num.r(self.lam) * _cot_half(theta, num)

    def pearson_pairs(self, precision=DOUBLE):
        return _sri_ranga_pairs(precision.num.c(self.lam), precision.num.one)

    def closed_form_tau(self, precision):
        num = precision.num
        return num.exp(_log_sri_ranga_tau(num.c(self.lam), num))


@dataclass(frozen=True)
class GeneralizedJacobi(WeightSpec):
    """e^{-eta theta} [sin^2(theta/2)]^lam [cos^2(theta/2)]^beta."""

    lam: float
    beta: float
    eta: float = 0.0
    family: ClassVar[str] = "GeneralizedJacobi"

    def __post_init__(self):
        for name, label in (("lam", "lambda"), ("beta", "beta"), ("eta", "eta")):
            object.__setattr__(self, name, _real(getattr(self, name), label))
        _above_minus_half(self.lam, "lambda")
        _above_minus_half(self.beta, "beta")

    def singular_points(self):
        return [(0, self.lam), (1, self.beta)]

    def log_smooth(self, theta, num):
        return -num.r(self.eta) * theta

    def log_derivative(self, theta, num):
        return (num.r(self.lam) * _cot_half(theta, num)
                - num.r(self.beta) * _tan_half(theta, num) - num.r(self.eta))

    def pearson_pairs(self, precision=DOUBLE):
        num = precision.num
        one = num.one
        d = num.c(complex(self.lam + self.beta, self.eta))
        i = 1j * one
        lb = num.r(self.lam) - num.r(self.beta)
        return [_pair([one, -one], [i * d.conjugate(), 2 * i * lb, i * (d + 2)], "z^2-1")]


@dataclass(frozen=True)
class JacobiOPUC(GeneralizedJacobi):
    """[sin^2(theta/2)]^lam [cos^2(theta/2)]^beta (real Verblunsky coefficients)."""

    family: ClassVar[str] = "JacobiOPUC"

    def __init__(self, lam: float, beta: float, *, normalized: bool = True):
        object.__setattr__(self, "normalized", normalized)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "eta", 0.0)
        self.__post_init__()

    def params(self) -> dict:
        return {"lam": self.lam, "beta": self.beta}


@dataclass(frozen=True)
class RotatedCos(WeightSpec):
    """e^{-eta theta} [cos^2(theta/2)]^beta on [-pi, pi], c = beta + i eta."""

    c: complex
    family: ClassVar[str] = "RotatedCos"
    domain_start: ClassVar[int] = -1

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        _above_minus_half(self.c.real, "Re c")

    def singular_points(self):
        return [(1, self.c.real)]

    def log_smooth(self, theta, num):
        return -num.r(self.c.imag) * theta

    def log_derivative(self, theta, num):
        return -num.r(self.c.real) * _tan_half(theta, num) - num.r(self.c.imag)

    def pearson_pairs(self, precision=DOUBLE):
        num = precision.num
        one = num.one
        c = num.c(self.c)
        i = 1j * one
        pairs = [_pair([-one], [-i * c.conjugate(), i * (c + 1)], "z+1")]
        for r, label in ((one, "z^2-1"), (-one, "(z+1)^2"), (0 * one, "z(z+1)")):
            pairs.append(rotated_cos_general_pair(c, r, one, label))
        return pairs


@dataclass(frozen=True)
class HalfPlanePole(WeightSpec):
    """exp(P arg(1 - r e^{-i theta})) |e^{i theta} - r|^Q with 0 < |r| < 1.

    With ``b0 = -conj(u)/conj(r)`` the exponents are ``P = -2 Re(b0 conj(r)/r)``
    and ``Q = -2 Im(b0 conj(r)/r)``; both parameterizations are accepted.
    """

    u: complex
    r: complex
    family: ClassVar[str] = "HalfPlanePole"
    periodic_smooth: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "u", complex(self.u))
        object.__setattr__(self, "r", complex(self.r))
        if not 0 < abs(self.r) < 1:
            raise DomainError("HalfPlanePole needs 0 < |r| < 1 for a continuous periodic weight")

    @classmethod
    def from_b0(cls, b0: complex, r: complex, normalized: bool = True) -> "HalfPlanePole":
        b0, r = complex(b0), complex(r)
        return cls(-b0.conjugate() * r, r, normalized=normalized)

    @property
    def b0(self) -> complex:
        return -(self.u / self.r).conjugate()

    def _exponents(self, num):
        b0 = num.c(self.b0)
        r = num.c(self.r)
        q = b0 * r.conjugate() / r
        return -2 * q.real, -2 * q.imag

    def log_smooth(self, theta, num):
        P, Q = self._exponents(num)
        w = 1 - num.c(self.r) * num.expj(-theta)
        return P * num.atan2(w.imag, w.real) + Q / 2 * num.log(w.real ** 2 + w.imag ** 2)

    def log_derivative(self, theta, num):
        P, Q = self._exponents(num)
        r = num.c(self.r)
        z = num.expj(theta)
        return ((Q - 1j * P) * 1j * r / (z - r)).real

    def pearson_pairs(self, precision=DOUBLE):
        num = precision.num
        one = num.one
        u, r = num.c(self.u), num.c(self.r)
        rb = r.conjugate()
        i = 1j * one
        B = [-u.conjugate() / rb,
             (2 * (u * r).real - (abs(r) ** 2 + 1) * i) / rb,
             2 * i - u / rb]
        return [_pair([r, 1 / rb], B, "(z-r)(z-1/conj r)")]


FAMILIES = {cls.family: cls for cls in
            (Lebesgue, ExpSine, Bessel, SriRanga, CircularJacobi, GeneralizedJacobi,
             JacobiOPUC, RotatedCos, HalfPlanePole)}

# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def normalization_constant(spec: WeightSpec, precision: Precision = DOUBLE):
    """tau with mu_0 = 1: closed form when known, else 1 / quadrature of w."""
    tau = spec.closed_form_tau(precision)
    if tau is not None:
        return tau
    from .moments import raw_moments

    mu, _ = raw_moments(spec, 0, precision)
    return 1 / mu[0].real


def weight_eval(spec: WeightSpec, theta, precision: Precision = DOUBLE):
    """w(theta), including tau when ``spec.normalized``."""
    num = precision.num
    th = num.r(theta)
    a, b = spec.domain(num)
    slack = 1e-12
    if th < a - slack or th > b + slack:
        raise DomainError(f"theta = {theta} outside the weight's domain")
    val = spec.raw_value(th, num)
    if spec.normalized:
        val = val * normalization_constant(spec, precision)
    return val


def pearson_pairs(spec: WeightSpec, precision: Precision = DOUBLE) -> list:
    return spec.pearson_pairs(precision)


def pearson_rhs(pair: PearsonPair, z):
    """(B(z) - i z A'(z)) / A(z)."""
    return (pair.B(z) - 1j * z * pair.A.derivative()(z)) / pair.A(z)


def pearson_residual(spec: WeightSpec, pair: PearsonPair, grid_size: int = 128,
                     tolerance: float = 1e-8, precision: Precision = DOUBLE) -> ResidualReport:
    """Sup over a grid of |w'/w - (B - i z A')/A| using the analytic log-derivative."""
    num = precision.num
    start = float(spec.domain_start) * 3.141592653589793
    grid = half_offset_grid(grid_size, start)
    res = []
    for th in grid:
        t = num.r(th)
        z = num.expj(t)
        if abs(pair.A(z)) <= 1e3 * float(num.eps):
            raise GridOnSingularity(f"A vanishes at grid angle {th}")
        lhs = spec.log_derivative(t, num)
        res.append(float(abs(lhs - pearson_rhs(pair, z))))
    return ResidualReport(grid, res, tolerance, f"pearson {spec.family} A={pair.label}")


def boundary_check(spec: WeightSpec, pair: PearsonPair, tolerance: float = 1e-12,
                   precision: Precision = DOUBLE) -> bool:
    """A vanishes exactly at the domain's end point, or w takes equal values there."""
    num = precision.num
    z_end = num.one if spec.domain_start % 2 == 0 else -num.one
    if pair.A(z_end) == 0:
        return True
    a, b = spec.domain(num)
    at_end = {j: 0 * a for j, (k, _) in enumerate(spec.singular_points())
              if (k - spec.domain_start) % 2 == 0}
    try:
        wa = spec.raw_value(a, num, at_end)
        wb = spec.raw_value(b, num, at_end)
    except SingularPoint:
        return False
    return float(abs(wb - wa)) <= tolerance * max(1.0, float(abs(wa)))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _encode(v):
    c = complex(v)
    return [repr(c.real), repr(c.imag)]


def spec_to_dict(spec: WeightSpec, pair_index: int | None = None) -> dict:
    return {
        "family": spec.family,
        "params": {k: _encode(v) for k, v in spec.params().items()},
        "normalized": spec.normalized,
        "pair_index": pair_index,
    }


def spec_from_dict(d: dict):
    """Inverse of :func:`spec_to_dict`; returns (spec, pair_index)."""
    cls = FAMILIES.get(d["family"])
    if cls is None:
        raise DomainError(f"unknown weight family {d['family']!r}")
    params = {}
    for k, (re, im) in d.get("params", {}).items():
        re, im = float(re), float(im)
        params[k] = complex(re, im) if k in ("u", "r", "b", "c") else re
    spec = cls(**params, normalized=bool(d.get("normalized", True)))
    return spec, d.get("pair_index")


def spec_to_json(spec: WeightSpec, pair_index: int | None = None) -> str:
    return json.dumps(spec_to_dict(spec, pair_index), indent=2)


def spec_from_json(text: str):
    return spec_from_dict(json.loads(text))

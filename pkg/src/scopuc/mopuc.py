"""Monic orthogonal polynomials on the unit circle and Verblunsky coefficients."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .algebra import DOUBLE, ComplexPoly, Precision, hyp2f1_terminating, pochhammer
from .errors import MomentRangeExceeded, NoClosedForm, NumericalBreakdown
from .moments import MomentTable, inner_product
from .weights import CircularJacobi, JacobiOPUC, Lebesgue, RotatedCos, SriRanga, WeightSpec


def breakdown_margin(precision: Precision) -> float:
    return 1e-12 if precision.is_extended else 1e-6


@dataclass(frozen=True)
class OpucRecord:
    """Data of Phi_n; ``alpha`` is alpha_{n-1} (alpha_{-1} = -1 at n = 0)."""

    n: int
    phi: ComplexPoly
    alpha: complex
    gamma: complex
    beta: complex
    norm_sq: float


@dataclass(frozen=True)
class OpucSequence:
    """Records for n = 0..n_max plus the Verblunsky coefficients alpha_0..alpha_{n_max}."""

    records: tuple
    alphas: tuple
    precision: Precision = DOUBLE

    @property
    def n_max(self) -> int:
        return len(self.records) - 1

    def phi(self, n: int) -> ComplexPoly:
        return self.records[n].phi

    def phi_star(self, n: int) -> ComplexPoly:
        return self.records[n].phi.reciprocal(n)

    def alpha(self, k: int):
        """alpha_k for -1 <= k <= n_max."""
        if k == -1:
            return -self.precision.num.one
        if not 0 <= k < len(self.alphas):
            raise IndexError(f"alpha_{k} not available (have up to {len(self.alphas) - 1})")
        return self.alphas[k]

    def gamma(self, n: int):
        return self.records[n].gamma

    def beta(self, n: int):
        return self.records[n].beta

    def norm_sq(self, n: int):
        return self.records[n].norm_sq

    # -- export -----------------------------------------------------------
    def to_csv(self) -> str:
        fmt = self.precision.num.fmt
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "re_alpha", "im_alpha", "re_gamma", "im_gamma",
                    "re_beta", "im_beta", "norm_sq"])
        for rec in self.records:
            a = self.alphas[rec.n] if rec.n < len(self.alphas) else None
            w.writerow([rec.n,
                        fmt(a.real) if a is not None else "", fmt(a.imag) if a is not None else "",
                        fmt(rec.gamma.real), fmt(rec.gamma.imag),
                        fmt(rec.beta.real), fmt(rec.beta.imag), fmt(rec.norm_sq)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        fmt = self.precision.num.fmt
        return {
            "precision": str(self.precision),
            "alphas": [[fmt(a.real), fmt(a.imag)] for a in self.alphas],
            "records": [
                {"n": r.n, "phi": r.phi.to_pairs(fmt),
                 "gamma": [fmt(r.gamma.real), fmt(r.gamma.imag)],
                 "beta": [fmt(r.beta.real), fmt(r.beta.imag)],
                 "norm_sq": fmt(r.norm_sq)}
                for r in self.records
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _record(n: int, phi: ComplexPoly, prev_alpha, norm_sq, num) -> OpucRecord:
    gamma = phi.coeff(n - 1) if n >= 1 else num.zero
    beta = phi.coeff(1) if n >= 1 else num.zero
    return OpucRecord(n, phi, prev_alpha, gamma, beta, norm_sq)


def _check(alpha, n, precision):
    if not abs(alpha) < 1 - breakdown_margin(precision):
        raise NumericalBreakdown(
            f"|alpha_{n}| = {float(abs(alpha)):.17g} reached 1; precision exhausted or weight invalid",
            index=n)


def szego_sequence(T: MomentTable, n_max: int) -> OpucSequence:
    """Phi_0..Phi_{n_max} and alpha_0..alpha_{n_max} from the moments.

    Each conj(alpha_n) is fixed by <Phi_{n+1}, 1> = 0, i.e.
    conj(alpha_n) = <z Phi_n, 1> / <Phi_n^*, 1>.
    """
    if T.N < n_max + 1:
        raise MomentRangeExceeded(f"need moments up to {n_max + 1}, table has {T.N}")
    prec = T.precision
    num = prec.num
    phi = ComplexPoly([num.one])
    one = ComplexPoly([num.one])
    records = [_record(0, phi, -num.one, inner_product(T, phi, phi).real, num)]
    alphas = []
    for n in range(n_max + 1):
        star = phi.reciprocal(n)
        zphi = phi.shift(1)
        abar = inner_product(T, zphi, one) / inner_product(T, star, one)
        alpha = abar.conjugate()
        _check(alpha, n, prec)
        alphas.append(alpha)
        if n == n_max:
            break
        phi = zphi - abar * star
        records.append(_record(n + 1, phi, alpha, inner_product(T, phi, phi).real, num))
    return OpucSequence(tuple(records), tuple(alphas), prec)


def sequence_from_alphas(alphas, precision: Precision = DOUBLE, mu0=1) -> OpucSequence:
    """Build Phi_n by the Szegő recursion from given Verblunsky coefficients.

    Norms follow from ||Phi_{n+1}||^2 = (1 - |alpha_n|^2) ||Phi_n||^2 with
    ||Phi_0||^2 = mu0.
    """
    num = precision.num
    alphas = [num.c(a) for a in alphas]
    phi = ComplexPoly([num.one])
    norm = num.r(mu0)
    records = [_record(0, phi, -num.one, norm, num)]
    for n, a in enumerate(alphas[:-1]):
        _check(a, n, precision)
        phi = phi.shift(1) - a.conjugate() * phi.reciprocal(n)
        norm = norm * (1 - abs(a) ** 2)
        records.append(_record(n + 1, phi, a, norm, num))
    return OpucSequence(tuple(records), tuple(alphas), precision)


def verblunsky_closed_form(spec: WeightSpec, n_max: int, precision: Precision = DOUBLE) -> list:
    """alpha_0..alpha_{n_max} for the families with explicit formulas."""
    num = precision.num
    out = []
    if isinstance(spec, Lebesgue):
        return [num.zero] * (n_max + 1)
    if isinstance(spec, SriRanga):
        b = num.c(spec.b)
        ratio = num.one
        for n in range(n_max + 1):
            ratio = ratio * (b + n) / (b.conjugate() + 1 + n)
            out.append(-ratio)
        return out
    if isinstance(spec, RotatedCos):
        c = num.c(spec.c)
        ratio = num.one
        for n in range(n_max + 1):
            ratio = ratio * (c + n) / (c.conjugate() + 1 + n)
            out.append(ratio if n % 2 == 0 else -ratio)
        return out
    if isinstance(spec, CircularJacobi):
        lam = num.r(spec.lam)
        return [num.c(-lam / (n + 1 + lam)) for n in range(n_max + 1)]
    if isinstance(spec, JacobiOPUC):
        lam, beta = num.r(spec.lam), num.r(spec.beta)
        return [num.c(-(lam + (-1) ** (n + 1) * beta) / (n + 1 + lam + beta))
                for n in range(n_max + 1)]
    raise NoClosedForm(f"no closed-form Verblunsky coefficients for {spec.family}")


def mopuc_closed_form(spec: WeightSpec, n: int, z, precision: Precision = DOUBLE):
    """Phi_n(z) from the terminating hypergeometric representation."""
    num = precision.num
    if isinstance(spec, SriRanga):
        b, x, sign = num.c(spec.b), 1 - num.c(z), 1
    elif isinstance(spec, CircularJacobi):
        b, x, sign = num.c(spec.lam), 1 - num.c(z), 1
    elif isinstance(spec, RotatedCos):
        b, x, sign = num.c(spec.c), 1 + num.c(z), (-1) ** n
    else:
        raise NoClosedForm(f"no hypergeometric form for {spec.family}")
    s = b + b.conjugate() + 1
    return sign * pochhammer(s, n) / pochhammer(b + 1, n) * hyp2f1_terminating(n, b + 1, s, x)


def fato1_check(seq: OpucSequence, T: MomentTable, n: int) -> float:
    """|<Phi_{n-1}, z^n> + conj(gamma_n) ||Phi_{n-1}||^2|."""
    if n < 1:
        raise ValueError("fato1_check needs n >= 1")
    num = T.precision.num
    zn = ComplexPoly.monomial(n, num.one)
    lhs = inner_product(T, seq.phi(n - 1), zn)
    return float(abs(lhs + seq.gamma(n).conjugate() * seq.norm_sq(n - 1)))


def chain_residuals(seq: OpucSequence, T: MomentTable, n: int) -> dict:
    """Residuals of the identities tying norms, gamma, beta and alpha together at degree n >= 1."""
    if not 1 <= n < seq.n_max:
        raise ValueError(f"need 1 <= n < {seq.n_max}")
    a = seq.alpha
    return {
        "norm_ratio": float(abs(seq.norm_sq(n + 1) / seq.norm_sq(n) - (1 - abs(a(n)) ** 2))),
        "gamma_recursion": float(abs(seq.gamma(n) - (seq.gamma(n - 1) + a(n - 1).conjugate() * a(n - 2)))),
        "beta_formula": float(abs(seq.beta(n) + (a(n - 2).conjugate()
                                                  + a(n - 1).conjugate() * seq.gamma(n - 1).conjugate()))),
        "fato1": fato1_check(seq, T, n),
    }

"""Polynomial arithmetic, special functions and the precision abstraction.

Every numerical routine in the package takes a :class:`Precision` and asks it
for a numeric backend (``prec.num``).  The double backend wraps :mod:`math`
and :mod:`cmath`; the extended backend wraps a private :class:`mpmath.MPContext`
so that several precisions can coexist without touching ``mpmath.mp``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

from .errors import DegreeMismatch, GammaPole, ParameterPole

# ---------------------------------------------------------------------------
# Precision and numeric backends
# ---------------------------------------------------------------------------


class _DoubleNum:
    extended = False
    digits = 16
    eps = 2.0 ** -52
    pi = math.pi
    zero = 0j
    one = 1 + 0j

    def c(self, x) -> complex:
        return complex(x)

    def r(self, x) -> float:
        return float(x)

    exp = staticmethod(math.exp)
    log = staticmethod(math.log)
    sin = staticmethod(math.sin)
    cos = staticmethod(math.cos)
    tan = staticmethod(math.tan)
    sinh = staticmethod(math.sinh)
    cosh = staticmethod(math.cosh)
    sqrt = staticmethod(math.sqrt)
    atan2 = staticmethod(math.atan2)
    cexp = staticmethod(cmath.exp)
    clog = staticmethod(cmath.log)
    csin = staticmethod(cmath.sin)

    def expj(self, theta):
        return complex(math.cos(theta), math.sin(theta))

    def power(self, x, y):
        return x ** y

    def fmt(self, x) -> str:
        return repr(float(x) + 0.0)


class _MpNum:
    extended = True

    def __init__(self, digits: int):
        ctx = mpmath.MPContext()
        ctx.dps = digits
        self.ctx = ctx
        self.digits = digits
        self.eps = ctx.eps
        self.pi = ctx.pi
        self.zero = ctx.mpc(0)
        self.one = ctx.mpc(1)
        self.exp = self.cexp = ctx.exp
        self.log = self.clog = ctx.log
        self.sin = self.csin = ctx.sin
        self.cos = ctx.cos
        self.tan = ctx.tan
        self.sinh = ctx.sinh
        self.cosh = ctx.cosh
        self.sqrt = ctx.sqrt
        self.atan2 = ctx.atan2
        self.expj = ctx.expj

    def c(self, x):
        return self.ctx.mpc(x)

    def r(self, x):
        return self.ctx.mpf(x)

    def power(self, x, y):
        return self.ctx.power(x, y)

    def fmt(self, x) -> str:
        return self.ctx.nstr(x, self.digits, strip_zeros=False)


@lru_cache(maxsize=None)
def _backend(digits: int | None):
    return _DoubleNum() if digits is None else _MpNum(digits)


@dataclass(frozen=True)
class Precision:
    """Working precision: IEEE double (``digits=None``) or extended.

    >>> Precision.parse("extended:60").digits
    60
    """

    digits: int | None = None

    def __post_init__(self):
        if self.digits is not None and self.digits < 50:
            raise ValueError("extended precision needs at least 50 digits")

    @classmethod
    def double(cls) -> "Precision":
        return cls(None)

    @classmethod
    def extended(cls, digits: int = 50) -> "Precision":
        return cls(digits)

    @classmethod
    def parse(cls, text: str) -> "Precision":
        text = text.strip().lower()
        if text == "double":
            return cls.double()
        if text == "extended":
            return cls.extended()
        if text.startswith("extended:"):
            return cls.extended(int(text.split(":", 1)[1]))
        raise ValueError(f"unknown precision {text!r}; use double or extended:<digits>")

    @property
    def is_extended(self) -> bool:
        return self.digits is not None

    @property
    def num(self):
        return _backend(self.digits)

    def __str__(self) -> str:
        return "double" if self.digits is None else f"extended:{self.digits}"


DOUBLE = Precision.double()

# ---------------------------------------------------------------------------
# Complex polynomials
# ---------------------------------------------------------------------------


def _conj(x):
    return x.conjugate()


@dataclass(frozen=True)
class ComplexPoly:
    """Polynomial sum(coeffs[k] * z**k); trailing exact zeros are dropped."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable):
        cs = list(coeffs)
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [0]
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, n: int, one=1):
        return cls([0] * n + [one])

    @classmethod
    def from_roots(cls, roots: Sequence):
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0

    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, z):
        return poly_eval(self, z)

    def derivative(self) -> "ComplexPoly":
        return poly_derivative(self)

    def reciprocal(self, n: int | None = None) -> "ComplexPoly":
        return reciprocal(self, self.degree if n is None else n)

    def shift(self, k: int = 1) -> "ComplexPoly":
        """Multiply by z**k."""
        if self.is_zero():
            return self
        return ComplexPoly([0] * k + list(self.coeffs))

    def __add__(self, other):
        if not isinstance(other, ComplexPoly):
            other = ComplexPoly([other])
        m = max(len(self.coeffs), len(other.coeffs))
        return ComplexPoly(self.coeff(k) + other.coeff(k) for k in range(m))

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, ComplexPoly):
            other = ComplexPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ComplexPoly):
            out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return ComplexPoly(out)
        return ComplexPoly(c * other for c in self.coeffs)

    __rmul__ = __mul__

    def max_abs_diff(self, other: "ComplexPoly") -> float:
        m = max(len(self.coeffs), len(other.coeffs))
        return max(float(abs(self.coeff(k) - other.coeff(k))) for k in range(m))

    def to_pairs(self, fmt=repr) -> list:
        return [[fmt(c.real), fmt(c.imag)] for c in self.coeffs]

    def __repr__(self) -> str:
        return f"ComplexPoly({list(self.coeffs)!r})"


def poly_eval(p: ComplexPoly, z):
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def poly_derivative(p: ComplexPoly) -> ComplexPoly:
    if p.degree == 0:
        return ComplexPoly([0 * p.coeffs[0]])
    return ComplexPoly((k + 1) * p.coeffs[k + 1] for k in range(p.degree))


def reciprocal(p: ComplexPoly, n: int) -> ComplexPoly:
    """z**n * conj(p(1/conj(z))): conjugate-reversed coefficients."""
    if p.degree > n:
        raise DegreeMismatch(f"degree {p.degree} exceeds reciprocal order {n}")
    padded = list(p.coeffs) + [0 * p.coeffs[0]] * (n + 1 - len(p.coeffs))
    return ComplexPoly(_conj(c) for c in reversed(padded))


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def pochhammer(a, n: int):
    """Rising factorial a(a+1)...(a+n-1); (a)_0 = 1."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    out = 1
    for k in range(n):
        out = out * (a + k)
    return out


def hyp2f1_terminating(n: int, b, c, x):
    """2F1(-n, b; c; x) as the finite sum over k = 0..n."""
    if n < 0:
        raise ValueError("terminating series needs n >= 0")
    for k in range(n):
        if c + k == 0:
            raise ParameterPole(f"c + {k} vanishes in 2F1 denominator")
    total = 1
    term = 1
    for k in range(n):
        term = term * (k - n) * (b + k) / ((c + k) * (k + 1)) * x
        total = total + term
    return total


_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _is_pole(z) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == int(z.real)


def _lanczos_lgamma(z: complex) -> complex:
    if z.real < 0.5:
        return cmath.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - _lanczos_lgamma(1 - z)
    z -= 1
    s = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        s += _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (z + 0.5) * cmath.log(t) - t + cmath.log(s)


@lru_cache(maxsize=None)
def _bernoulli_even(count: int) -> tuple:
    """B_2, B_4, ..., B_{2*count} as Fractions (Akiyama-Tanigawa)."""
    m_max = 2 * count
    a = [Fraction(0)] * (m_max + 1)
    out = []
    for m in range(m_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return tuple(out)


def _stirling_lgamma(z, num):
    ctx = num.ctx
    z = ctx.mpc(z)
    if z.real < 0.5:
        return ctx.log(ctx.pi) - ctx.log(ctx.sin(ctx.pi * z)) - _stirling_lgamma(1 - z, num)
    shift_to = num.digits
    correction = ctx.mpc(0)
    while abs(z) < shift_to:
        correction += ctx.log(z)
        z += 1
    terms = _bernoulli_even(num.digits)
    total = (z - ctx.mpf(0.5)) * ctx.log(z) - z + ctx.log(2 * ctx.pi) / 2
    zpow = z
    z2 = z * z
    for k, b2k in enumerate(terms, start=1):
        term = ctx.mpf(b2k.numerator) / b2k.denominator / (2 * k * (2 * k - 1)) / zpow
        total += term
        if abs(term) < num.eps * abs(total):
            break
        zpow *= z2
    return total - correction


def log_gamma_complex(z, precision: Precision = DOUBLE):
    """log Gamma(z); Lanczos in double, shifted Stirling series in extended."""
    num = precision.num
    zc = num.c(z)
    if _is_pole(zc):
        raise GammaPole(f"Gamma has a pole at {z}")
    if zc.imag == 0 and zc.real == int(zc.real) and zc.real <= 1000:
        n = int(zc.real)
        acc = num.r(0)
        for k in range(2, n):
            acc += num.log(num.r(k))
        return num.c(acc)
    if num.extended:
        return _stirling_lgamma(zc, num)
    return _lanczos_lgamma(zc)


def bessel_i0(t, precision: Precision = DOUBLE):
    """Modified Bessel function I_0 by its power series."""
    num = precision.num
    t = num.r(t)
    q = (t / 2) ** 2
    term = num.r(1)
    total = num.r(1)
    k = 0
    while True:
        k += 1
        term = term * q / (k * k)
        total += term
        if term <= num.eps * total / 4:
            return total

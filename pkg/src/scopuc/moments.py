"""Trigonometric moments and the moment-based inner product."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .algebra import DOUBLE, ComplexPoly, Precision
from .errors import MomentRangeExceeded
from .quadrature import QuadratureMeta, tanh_sinh_moments, trapezoid_moments
from .weights import WeightSpec, spec_from_dict, spec_to_dict


def _breakpoints(spec: WeightSpec) -> list:
    """Interval ends in units of pi: the domain ends plus interior singular angles."""
    start = spec.domain_start
    pts = {start, start + 2}
    for k, e in spec.singular_points():
        if e == 0:
            continue
        k = start + (k - start) % 2
        pts.add(k)
    return sorted(pts)


def raw_moments(spec: WeightSpec, N: int, precision: Precision = DOUBLE, tol=None):
    """Unnormalized moments mu_0..mu_N and the quadrature record."""
    num = precision.num
    exact = spec.closed_form_moments(N, precision)
    if exact is not None:
        return exact, QuadratureMeta("closed-form", 0, 0, 0.0)
    if spec.periodic_smooth:
        a, _ = spec.domain(num)
        return trapezoid_moments(lambda th: spec.raw_value(th, num), a, N, num, tol)

    sing = [(j, k) for j, (k, e) in enumerate(spec.singular_points())]
    breaks = _breakpoints(spec)
    total = [num.zero] * (N + 1)
    nodes, level, err = 0, 0, 0.0
    for lo, hi in zip(breaks, breaks[1:]):
        left = [j for j, k in sing if (k - lo) % 2 == 0]
        right = [j for j, k in sing if (k - hi) % 2 == 0]

        def w(th, dl, dr, left=left, right=right):
            d = {j: dl for j in left}
            for j in right:
                d[j] = min(d[j], dr) if j in d else dr
            return spec.raw_value(th, num, d)

        part, meta = tanh_sinh_moments(w, lo * num.pi, hi * num.pi, N, num, tol)
        total = [s + p for s, p in zip(total, part)]
        nodes += meta.nodes
        level = max(level, meta.level)
        err += meta.error_estimate
    return total, QuadratureMeta("tanh-sinh", nodes, level, err)


@dataclass(frozen=True)
class MomentTable:
    """Moments mu_k, |k| <= N, of a weight; negative indices by conjugation."""

    N: int
    values: tuple
    precision: Precision = DOUBLE
    quadrature_meta: QuadratureMeta | None = None
    weight: WeightSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.values) != self.N + 1:
            raise ValueError("values must hold mu_0..mu_N")

    def mu(self, k: int):
        if abs(k) > self.N:
            raise MomentRangeExceeded(f"moment index {k} outside table of order {self.N}")
        v = self.values[abs(k)]
        return v if k >= 0 else v.conjugate()

    __getitem__ = mu

    def to_dict(self) -> dict:
        num = self.precision.num
        return {
            "N": self.N,
            "precision": str(self.precision),
            "mu": [[k, num.fmt(self.mu(k).real), num.fmt(self.mu(k).imag)]
                   for k in range(-self.N, self.N + 1)],
            "quadrature_meta": self.quadrature_meta.to_dict() if self.quadrature_meta else None,
            "weight": spec_to_dict(self.weight) if self.weight is not None else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "MomentTable":
        prec = Precision.parse(d["precision"])
        if prec.is_extended:
            make = prec.num.ctx.mpc
        else:
            def make(re, im):
                return complex(float(re), float(im))
        by_k = {int(k): make(re, im) for k, re, im in d["mu"]}
        N = int(d["N"])
        values = tuple(by_k[k] for k in range(N + 1))
        meta = QuadratureMeta.from_dict(d["quadrature_meta"]) if d.get("quadrature_meta") else None
        weight = spec_from_dict(d["weight"])[0] if d.get("weight") else None
        return cls(N, values, prec, meta, weight)

    @classmethod
    def from_json(cls, text: str) -> "MomentTable":
        return cls.from_dict(json.loads(text))


def compute_moments(spec: WeightSpec, N: int, precision: Precision = DOUBLE,
                    tol=None) -> MomentTable:
    """mu_k = int e^{-ik theta} w(theta) d theta for 0 <= k <= N.

    Smooth periodic weights use the trapezoid rule; the others use tanh-sinh
    split at the algebraic singularities.  Normalization divides by the
    closed-form or quadrature value of the total mass.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    raw, meta = raw_moments(spec, N, precision, tol)
    if spec.normalized:
        tau = spec.closed_form_tau(precision)
        if tau is None:
            tau = 1 / raw[0].real
        raw = [tau * m for m in raw]
        meta = QuadratureMeta(meta.rule, meta.nodes, meta.level,
                              float(meta.error_estimate * abs(tau)))
    num = precision.num
    # mu_0 of a real weight is real
    raw[0] = num.c(raw[0].real)
    return MomentTable(N, tuple(raw), precision, meta, spec)


def inner_product(T: MomentTable, f: ComplexPoly, g: ComplexPoly):
    """<f, g> = sum_j sum_k f_j conj(g_k) mu_{k - j}."""
    if max(f.degree, g.degree) > T.N:
        raise MomentRangeExceeded(
            f"degrees {f.degree}, {g.degree} need moments beyond order {T.N}")
    total = 0
    for j, fj in enumerate(f.coeffs):
        if fj == 0:
            continue
        inner = 0
        for k, gk in enumerate(g.coeffs):
            if gk != 0:
                inner += gk.conjugate() * T.mu(k - j)
        total += fj * inner
    return total

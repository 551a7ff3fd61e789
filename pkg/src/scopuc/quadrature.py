"""Quadrature rules for trigonometric moments.

Both rules integrate the vector ``[e^{-ik theta} w(theta) for k in 0..N]`` so a
single weight evaluation per node serves every moment.  Refinement halves the
step and reuses the previous level; the reported error estimate is the
largest change between the last two levels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import QuadratureFailure


@dataclass(frozen=True)
class QuadratureMeta:
    rule: str
    nodes: int
    level: int
    error_estimate: float

    def to_dict(self) -> dict:
        return {"rule": self.rule, "nodes": self.nodes, "level": self.level,
                "error_estimate": self.error_estimate}

    @classmethod
    def from_dict(cls, d: dict) -> "QuadratureMeta":
        return cls(d["rule"], int(d["nodes"]), int(d["level"]), float(d["error_estimate"]))


def _accumulate(acc, theta, value, N, num):
    step = num.expj(-theta)
    p = value
    for k in range(N + 1):
        acc[k] += p
        p *= step


def _max_change(new, old) -> float:
    return max(float(abs(a - b)) for a, b in zip(new, old))


def default_tolerance(num) -> float:
    if num.extended:
        return 10.0 ** (-(num.digits - 6))
    return 1e-14


def trapezoid_moments(weight: Callable, a, N: int, num, tol: float | None = None,
                      start: int = 32, max_nodes: int | None = None):
    """Periodic trapezoid rule over [a, a + 2 pi] with node doubling."""
    tol = default_tolerance(num) if tol is None else tol
    if max_nodes is None:
        max_nodes = 2 ** 17 if not num.extended else 2 ** 14
    two_pi = 2 * num.pi
    M = max(start, 4 * (N + 1))
    M = 1 << (M - 1).bit_length()
    acc = [num.zero] * (N + 1)
    for j in range(M):
        th = a + two_pi * j / M
        _accumulate(acc, th, weight(th), N, num)
    prev = [s * two_pi / M for s in acc]
    level = 0
    while True:
        level += 1
        M2 = 2 * M
        for j in range(1, M2, 2):
            th = a + two_pi * j / M2
            _accumulate(acc, th, weight(th), N, num)
        cur = [s * two_pi / M2 for s in acc]
        err = _max_change(cur, prev)
        scale = max(1.0, float(abs(cur[0])))
        M = M2
        if err <= tol * scale:
            return cur, QuadratureMeta("trapezoid", M, level, err)
        if M >= max_nodes:
            raise QuadratureFailure(
                f"trapezoid rule did not converge: change {err:.3e} with {M} nodes")
        prev = cur


def _ts_node(t, h, num):
    """Node data for tanh-sinh at parameter t >= 0.

    Returns (d, weight) where d = distance of the node from the interval end it
    approaches, as a fraction of the interval length, and weight is the
    Jacobian factor for an interval of length 1.
    """
    s = num.pi / 2 * num.sinh(t)
    e = num.exp(-2 * s)
    d = e / (1 + e)
    w = num.pi * num.cosh(t) * e / (1 + e) ** 2 * h
    return d, w


def tanh_sinh_moments(weight: Callable, a, b, N: int, num, tol: float | None = None,
                      max_level: int = 11):
    """Double-exponential rule on the open interval (a, b).

    ``weight(theta, dl, dr)`` receives the node together with its distances to
    both ends, computed without cancellation, so algebraic endpoint factors can
    be evaluated accurately right up to the boundary.
    """
    tol = default_tolerance(num) if tol is None else tol
    length = b - a
    d_min = 1e-300 if not num.extended else num.r(10) ** (-8 * num.digits)

    def add_nodes(acc, h, odd_only):
        count = 0
        j = 1
        while True:
            if odd_only and j % 2 == 0:
                j += 1
                continue
            t = j * h
            d, wt = _ts_node(t, h, num)
            if d < d_min or wt == 0:
                return count
            dist = d * length
            far = length - dist
            wt = wt * length
            _accumulate(acc, b - dist, wt * weight(b - dist, far, dist), N, num)
            _accumulate(acc, a + dist, wt * weight(a + dist, dist, far), N, num)
            count += 2
            j += 1

    h = num.r(1)
    acc = [num.zero] * (N + 1)
    mid = (a + b) / 2
    _accumulate(acc, mid, num.pi / 4 * h * length * weight(mid, length / 2, length / 2), N, num)
    nodes = 1 + add_nodes(acc, h, False)
    prev = list(acc)
    for level in range(1, max_level + 1):
        # halving h: old sum scales by 1/2, new odd nodes carry the new h
        h = h / 2
        acc = [s / 2 for s in acc]
        nodes += add_nodes(acc, h, True)
        err = _max_change(acc, prev)
        scale = max(1.0, float(abs(acc[0])))
        if level >= 3 and err <= tol * scale:
            return list(acc), QuadratureMeta("tanh-sinh", nodes, level, err)
        prev = list(acc)
    raise QuadratureFailure(
        f"tanh-sinh did not converge: change {err:.3e} after level {max_level}")

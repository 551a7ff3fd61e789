"""Positivity systems that determine B for a given A of degree at most 2.

For A with prescribed zeros, w'/w = (B - i z A')/A must be real on the unit
circle.  Writing out the imaginary part of the numerator
(B - i z A') conj(A) as a trigonometric polynomial of order 2 gives five real
linear conditions on the six real unknowns of B.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .algebra import ComplexPoly
from .errors import DegreeMismatch, Infeasible
from .weights import PearsonPair, WeightSpec

ROOT_TOL = 1e-12
RANK_TOL = 1e-10
MEMBERSHIP_TOL = 1e-10


@dataclass(frozen=True)
class Deg0:
    """A(z) = 1."""

    @property
    def roots(self) -> tuple:
        return ()


@dataclass(frozen=True)
class Deg1:
    """A(z) = z - r."""

    r: complex

    @property
    def roots(self) -> tuple:
        return (complex(self.r),)


@dataclass(frozen=True)
class Deg2:
    """A(z) = (z - r1)(z - r2)."""

    r1: complex
    r2: complex

    @property
    def roots(self) -> tuple:
        return (complex(self.r1), complex(self.r2))


def roots_case(roots) -> Deg0 | Deg1 | Deg2:
    roots = [complex(r) for r in roots]
    if len(roots) == 0:
        return Deg0()
    if len(roots) == 1:
        return Deg1(roots[0])
    if len(roots) == 2:
        return Deg2(*roots)
    raise DegreeMismatch("only deg A <= 2 is classified")


# deg 0 and deg 1 share one ordering, deg 2 the reversed one
ORDER_LOW = ("Re b2", "Im b2", "Re b1", "Im b1", "Re b0", "Im b0")
ORDER_HIGH = ("Im b0", "Re b0", "Im b1", "Re b1", "Im b2", "Re b2")


@dataclass(frozen=True)
class PositivitySystem:
    """F x = g with the unknowns of B in ``order``; a sixth row is the boundary condition."""

    F: np.ndarray = field(compare=False)
    g: np.ndarray = field(compare=False)
    case: Deg0 | Deg1 | Deg2
    order: tuple
    boundary: bool = False
    flags: tuple = ()

    @property
    def degree(self) -> int:
        return len(self.case.roots)

    def residual(self, x) -> float:
        return float(np.max(np.abs(self.F @ np.asarray(x, float) - self.g)))


def unknowns_from_poly(B: ComplexPoly, degree: int) -> np.ndarray:
    """Stack the real and imaginary parts of b0, b1, b2 in the system's order."""
    b0, b1, b2 = (complex(B.coeff(k)) for k in range(3))
    if B.degree > 2:
        raise DegreeMismatch("B must have degree <= 2")
    if degree == 2:
        return np.array([b0.imag, b0.real, b1.imag, b1.real, b2.imag, b2.real])
    return np.array([b2.real, b2.imag, b1.real, b1.imag, b0.real, b0.imag])


def poly_from_unknowns(x, degree: int) -> ComplexPoly:
    x = [float(v) for v in x]
    if degree == 2:
        b0, b1, b2 = complex(x[1], x[0]), complex(x[3], x[2]), complex(x[5], x[4])
    else:
        b2, b1, b0 = complex(x[0], x[1]), complex(x[2], x[3]), complex(x[4], x[5])
    return ComplexPoly([b0, b1, b2])


def _numerator(case, B: ComplexPoly) -> ComplexPoly:
    """B(z) - i z A'(z)."""
    A = ComplexPoly.from_roots(list(case.roots)) if case.roots else ComplexPoly([1.0])
    return B - A.derivative().shift(1) * 1j


def _drift_row(case) -> tuple[np.ndarray, float]:
    """Row c, constant d with c.x + d = mean of w'/w over a period.

    The mean equals the sum of residues of (B - i z A')/(z A) inside the disk;
    poles on the circle count with half weight (principal value).
    """
    A = ComplexPoly.from_roots(list(case.roots)) if case.roots else ComplexPoly([1.0])
    denom = A.shift(1)
    clusters = _pole_clusters([0.0] + list(case.roots))

    def mean(P: ComplexPoly) -> complex:
        total = 0j
        for center, members, radius in clusters:
            mod = abs(center)
            if mod > 1 + ROOT_TOL:
                continue
            weight = 0.5 if abs(mod - 1) <= ROOT_TOL else 1.0
            total += weight * _cluster_residue(P, denom, center, members, radius)
        return total

    degree = len(case.roots)
    const = mean(_numerator(case, ComplexPoly([0.0])))
    row = np.empty(6)
    for j in range(6):
        e = np.zeros(6)
        e[j] = 1.0
        P = _numerator(case, poly_from_unknowns(e, degree))
        row[j] = (mean(P) - const).real
    return row, const.real


# poles closer than this are summed together by one contour integral, which
# avoids the cancellation between the large residues of nearly equal poles
CLUSTER_TOL = 1e-4


def _pole_clusters(points) -> list:
    """Group poles; each entry is (center, members, contour radius)."""
    groups: list = []
    for p in (complex(x) for x in points):
        for g in groups:
            if any(abs(p - q) <= CLUSTER_TOL for q in g):
                g.append(p)
                break
        else:
            groups.append([p])
    out = []
    for g in groups:
        center = sum(g) / len(g)
        others = [abs(center - q) for h in groups if h is not g for q in h]
        spread = max(abs(q - center) for q in g)
        radius = max(1e-3 * max(1.0, abs(center)), 10 * spread)
        if others:
            radius = min(radius, 0.5 * min(others))
        out.append((center, g, radius))
    return out


def _cluster_residue(P: ComplexPoly, D: ComplexPoly, center: complex, members: list,
                     radius: float) -> complex:
    """Sum of the residues of P/D at the poles in ``members``."""
    if len(members) == 1 and radius > 0:
        p = members[0]
        Q = _deflate(D, p)
        q = complex(Q(p))
        if abs(q) > 1e-8:
            return complex(P(p)) / q
    # contour integral around the cluster, periodic trapezoid rule
    m = 64
    acc = 0j
    for k in range(m):
        step = radius * np.exp(2j * np.pi * k / m)
        z = center + step
        acc += complex(P(z)) / complex(D(z)) * step
    return acc / m


def _deflate(D: ComplexPoly, p: complex) -> ComplexPoly:
    """D / (z - p) by synthetic division, for a root p of D."""
    coeffs = [complex(c) for c in D.coeffs]
    out = [0j] * (len(coeffs) - 1)
    carry = 0j
    for k in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[k] + carry * p
        out[k - 1] = carry
    return ComplexPoly(out)


def _flags(case) -> tuple:
    roots = case.roots
    out = []
    if any(abs(abs(r) - 1) <= ROOT_TOL for r in roots):
        out.append("root_on_circle")
    if any(abs(r) <= ROOT_TOL for r in roots):
        out.append("root_at_origin")
    if len(roots) == 2:
        r1, r2 = roots
        if abs(r1 - r2) <= ROOT_TOL:
            out.append("double_root")
        if abs(r1 * r2.conjugate() - 1) <= ROOT_TOL:
            out.append("inverse_pair")
        if abs(r1 + r2.conjugate()) <= ROOT_TOL or abs(r1 + r2) <= ROOT_TOL:
            out.append("subcase_boundary")
    return tuple(out)


def build_system(case, boundary: bool = False) -> PositivitySystem:
    """The 5x6 system for ``case`` (Deg0, Deg1 or Deg2), plus the boundary row on request.

    The boundary row expresses w(2 pi) = w(0) and is added only when A(1) != 0.
    """
    if not isinstance(case, (Deg0, Deg1, Deg2)):
        case = roots_case(case)
    if isinstance(case, Deg0):
        # Im(b2 z^2 + b1 z + b0) = 0 termwise
        F = np.array([
            [0, 1, 0, 0, 0, 0],
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 1, 0, 0, 0],
            [0, 0, 0, 0, 0, 1],
        ], float)
        g = np.zeros(5)
        order = ORDER_LOW
    elif isinstance(case, Deg1):
        a, b = complex(case.r).real, complex(case.r).imag
        F = np.array([
            [-a, -b, 0, 0, 0, 0],
            [b, -a, 0, 0, 0, 0],
            [0, 0, 0, 1, b, -a],
            [1, 0, -a, -b, -1, 0],
            [0, 1, b, -a, 0, 1],
        ], float)
        g = np.array([0, 0, 1, -b, -a], float)
        order = ORDER_LOW
    else:
        r1, r2 = complex(case.r1), complex(case.r2)
        p, s = r1 * r2, r1 + r2
        F = np.array([
            [1, 0, 0, 0, p.real, -p.imag],
            [0, -1, 0, 0, p.imag, p.real],
            [p.real, -p.imag, -s.real, s.imag, 1, 0],
            [-s.real, s.imag, p.real + 1, -p.imag, -s.real, s.imag],
            [s.imag, s.real, p.imag, p.real - 1, -s.imag, -s.real],
        ], float)
        g = np.array([
            2 * p.real,
            2 * p.imag,
            2 + abs(s) ** 2,
            -3 * s.real - abs(r1) ** 2 * r2.real - abs(r2) ** 2 * r1.real,
            -3 * s.imag - abs(r1) ** 2 * r2.imag - abs(r2) ** 2 * r1.imag,
        ])
        order = ORDER_HIGH
    added = False
    if boundary:
        A1 = np.prod([1 - r for r in case.roots]) if case.roots else 1.0
        if abs(A1) > ROOT_TOL:
            row, const = _drift_row(case)
            F = np.vstack([F, row])
            g = np.append(g, -const)
            added = True
    return PositivitySystem(F, g, case, order, added, _flags(case))


@dataclass(frozen=True)
class SolutionSpace:
    """x = particular + span(nullspace_basis)."""

    particular: np.ndarray = field(compare=False)
    nullspace_basis: tuple = field(compare=False)
    rank: int
    system: PositivitySystem = field(compare=False)

    @property
    def dimension(self) -> int:
        return len(self.nullspace_basis)

    def point(self, coords=()) -> np.ndarray:
        x = self.particular.copy()
        for c, v in zip(coords, self.nullspace_basis):
            x = x + c * v
        return x

    def contains(self, x, tol: float = MEMBERSHIP_TOL) -> bool:
        return self.system.residual(x) <= tol

    def B(self, coords=()) -> ComplexPoly:
        return poly_from_unknowns(self.point(coords), self.system.degree)

    def to_dict(self) -> dict:
        sys = self.system
        return {
            "roots": [[r.real, r.imag] for r in sys.case.roots],
            "boundary": sys.boundary,
            "order": list(sys.order),
            "rank": self.rank,
            "particular": [float(v) for v in self.particular],
            "nullspace_dimension": self.dimension,
            "nullspace_basis": [[float(v) for v in b] for b in self.nullspace_basis],
            "flags": list(sys.flags),
        }


def solve_system(sys: PositivitySystem) -> SolutionSpace:
    """Minimum-norm particular solution and nullspace basis via the SVD."""
    U, s, Vt = np.linalg.svd(sys.F)
    scale = max(float(s[0]) if s.size else 0.0, 1.0)
    rank = int(np.sum(s > RANK_TOL * scale))
    inv = np.zeros_like(s)
    inv[:rank] = 1 / s[:rank]
    particular = Vt[: len(s)].T @ (inv * (U.T @ sys.g)[: len(s)])
    if sys.residual(particular) > RANK_TOL * max(1.0, float(np.max(np.abs(sys.g)))):
        raise Infeasible(f"system for roots {sys.case.roots} has no solution")
    basis = tuple(Vt[k] for k in range(rank, Vt.shape[0]))
    return SolutionSpace(particular, basis, rank, sys)


def membership_check(pair: PearsonPair, sys: PositivitySystem,
                     tol: float = MEMBERSHIP_TOL) -> bool:
    """True when the pair's B solves the system within ``tol``."""
    if pair.A.degree != sys.degree:
        raise DegreeMismatch(f"deg A = {pair.A.degree} but the system is for degree {sys.degree}")
    return sys.residual(unknowns_from_poly(pair.B, sys.degree)) <= tol


def pair_system(pair: PearsonPair, boundary: bool = False) -> PositivitySystem:
    return build_system(roots_case(pair.roots), boundary)


def imaginary_part_sup(case, B: ComplexPoly, grid_size: int = 256) -> float:
    """sup over a circle grid of |Im (B - i z A') conj(A)|.

    w'/w = (B - i z A') conj(A) / |A|^2, so this vanishes exactly when w'/w is real.
    """
    A = ComplexPoly.from_roots(list(case.roots)) if case.roots else ComplexPoly([1.0])
    P = _numerator(case, B)
    z = np.exp(2j * np.pi * (np.arange(grid_size) + 0.5) / grid_size)
    vals = [(complex(P(zk)) * complex(A(zk)).conjugate()).imag for zk in z]
    return float(np.max(np.abs(vals)))


def catalog_membership(specs: list[WeightSpec], case=None, boundary: bool = False) -> list:
    """Membership of every catalog pair, optionally only those whose zeros match ``case``."""
    out = []
    for spec in specs:
        for pair in spec.pearson_pairs():
            if case is not None and not _same_roots(pair.roots, case.roots):
                continue
            sys = pair_system(pair, boundary)
            out.append({
                "family": spec.family,
                "params": {k: str(v) for k, v in spec.params().items()},
                "A": pair.label,
                "residual": sys.residual(unknowns_from_poly(pair.B, sys.degree)),
                "member": membership_check(pair, sys),
            })
    return out


def _same_roots(a, b) -> bool:
    a, b = [complex(x) for x in a], [complex(x) for x in b]
    if len(a) != len(b):
        return False
    rest = list(b)
    for x in a:
        for k, y in enumerate(rest):
            if abs(x - y) <= 1e-9:
                del rest[k]
                break
        else:
            return False
    return True


def classify_report(case, boundary: bool = False, specs=None) -> dict:
    space = solve_system(build_system(case, boundary))
    out = space.to_dict()
    if specs is not None:
        out["membership"] = catalog_membership(specs, space.system.case, boundary)
    return out


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2)

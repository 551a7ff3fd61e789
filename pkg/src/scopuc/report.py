"""Residual reports shared by the Pearson and structure-relation checks."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ResidualReport:
    """Pointwise absolute residuals on an angle grid.

    ``scale`` optionally records the sup of the left-hand side on the same
    grid, so a caller can judge the residual relative to the terms involved.
    """

    grid: tuple
    residuals: tuple
    tolerance: float
    label: str = ""
    scale: float | None = None
    sup: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(t) for t in self.grid))
        object.__setattr__(self, "residuals", tuple(float(r) for r in self.residuals))
        sup = max(self.residuals) if self.residuals else 0.0
        object.__setattr__(self, "sup", sup)
        object.__setattr__(self, "passed", bool(sup <= self.tolerance))

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "sup": self.sup,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "scale": self.scale,
            "grid": list(self.grid),
            "residuals": list(self.residuals),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "ResidualReport":
        return cls(d["grid"], d["residuals"], d["tolerance"], d.get("label", ""), d.get("scale"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta", "residual"])
        for t, r in zip(self.grid, self.residuals):
            w.writerow([f"{t:.17g}", f"{r:.17g}"])
        return buf.getvalue()

    def to_svg(self, width: int = 640, height: int = 320) -> str:
        return svg_polyline(self.grid, self.residuals, width, height,
                            title=self.label or "residual", x_label="theta")


def svg_polyline(xs, ys, width: int = 640, height: int = 320, title: str = "",
                 x_label: str = "x", log_scale: bool = True) -> str:
    """Minimal SVG line plot; the y axis is log10 unless disabled."""
    if not xs:
        raise ValueError("nothing to plot")
    pad = 40
    if log_scale:
        floor = 1e-300
        yv = [math.log10(max(abs(y), floor)) for y in ys]
    else:
        yv = [float(y) for y in ys]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(yv), max(yv)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, yv))
    ylab = "log10 |value|" if log_scale else "value"
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        f'<text x="{width / 2}" y="20" text-anchor="middle">{title}</text>\n'
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>\n'
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>\n'
        f'<text x="{width / 2}" y="{height - 8}" text-anchor="middle">{x_label}</text>\n'
        f'<text x="12" y="{height / 2}" transform="rotate(-90 12 {height / 2})" '
        f'text-anchor="middle">{ylab}</text>\n'
        f'<text x="{pad - 4}" y="{py(y1):.2f}" text-anchor="end" font-size="10">{y1:.3g}</text>\n'
        f'<text x="{pad - 4}" y="{py(y0):.2f}" text-anchor="end" font-size="10">{y0:.3g}</text>\n'
        f'<polyline fill="none" stroke="steelblue" points="{pts}"/>\n'
        "</svg>\n"
    )


def svg_disk_scatter(points, size: int = 400, title: str = "") -> str:
    """Complex points inside the unit disk, with the unit circle and axes drawn."""
    points = [complex(p) for p in points]
    if not points:
        raise ValueError("nothing to plot")
    pad = 30
    half = (size - 2 * pad) / 2
    cx = cy = size / 2

    def px(z):
        return cx + z.real * half, cy - z.imag * half

    dots = "\n".join(
        f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="crimson"><title>{k}</title></circle>'
        for k, (x, y) in enumerate(px(z) for z in points))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">\n'
        f'<rect width="{size}" height="{size}" fill="white"/>\n'
        f'<text x="{cx}" y="18" text-anchor="middle">{title}</text>\n'
        f'<circle cx="{cx}" cy="{cy}" r="{half}" fill="none" stroke="black"/>\n'
        f'<line x1="{pad}" y1="{cy}" x2="{size - pad}" y2="{cy}" stroke="gray"/>\n'
        f'<line x1="{cx}" y1="{pad}" x2="{cx}" y2="{size - pad}" stroke="gray"/>\n'
        f"{dots}\n"
        "</svg>\n"
    )


def half_offset_grid(size: int, start: float = 0.0) -> list:
    """``size`` equispaced angles on [start, start + 2 pi), shifted by half a step."""
    if size < 1:
        raise ValueError("grid size must be positive")
    h = 2 * math.pi / size
    return [start + (j + 0.5) * h for j in range(size)]

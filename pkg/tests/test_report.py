import math
import xml.etree.ElementTree as ET

import pytest

from scopuc.report import ResidualReport, half_offset_grid, svg_disk_scatter, svg_polyline

SVG = "{http://www.w3.org/2000/svg}"


def test_report_pass_and_sup():
    rep = ResidualReport([0.1, 0.2], [1e-12, 3e-9], 1e-8, "x")
    assert rep.sup == 3e-9 and rep.passed
    assert not ResidualReport([0.1], [2e-8], 1e-8).passed


def test_report_round_trip():
    rep = ResidualReport([0.1, 0.2], [1e-12, 3e-9], 1e-8, "x", scale=2.0)
    assert ResidualReport.from_dict(rep.to_dict()) == rep
    assert '"pass": true' in rep.to_json()
    assert rep.to_csv().splitlines()[0] == "theta,residual"


def test_report_svg_parses():
    rep = ResidualReport(half_offset_grid(16), [10.0 ** -k for k in range(16)], 1e-8)
    root = ET.fromstring(rep.to_svg())
    assert root.find(f"{SVG}polyline") is not None


def test_polyline_constant_values():
    root = ET.fromstring(svg_polyline([1, 2, 3], [1.0, 1.0, 1.0], log_scale=False))
    assert len(root.find(f"{SVG}polyline").get("points").split()) == 3


def test_disk_scatter():
    root = ET.fromstring(svg_disk_scatter([0, 0.5j, -0.3 + 0.1j], title="t"))
    dots = [c for c in root.iter(f"{SVG}circle") if c.get("fill") == "crimson"]
    assert len(dots) == 3
    # the origin lands at the centre
    assert dots[0].get("cx") == "200.00" and dots[0].get("cy") == "200.00"


@pytest.mark.parametrize("fn", [lambda: svg_disk_scatter([]), lambda: svg_polyline([], []),
                                lambda: half_offset_grid(0)])
def test_empty_input(fn):
    with pytest.raises(ValueError):
        fn()


def test_half_offset_grid():
    g = half_offset_grid(4, -math.pi)
    assert g[0] == pytest.approx(-math.pi + math.pi / 4)
    assert g[-1] < math.pi

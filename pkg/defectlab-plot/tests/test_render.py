"""Render every figure kind from the checked-in sample tables."""

from pathlib import Path

import numpy as np
import pytest

from defectlab_plot import FigureSpec, SchemaError, load_table, render
from defectlab_plot.figures import SITE_COLUMNS

DATA = Path(__file__).parent / "data"
RADIAL = DATA / "radial_profile.csv"
SITE_CUT = DATA / "site_map_corecut.csv"
PANELS = [DATA / f"site_map_alpha{a}.csv" for a in (75, 50, 25)]


def test_radial_heatmap_renders(tmp_path):
    out = render(FigureSpec(kind="radial_heatmap", inputs=[RADIAL],
                            output=tmp_path / "radial.png"))
    assert out.exists() and out.stat().st_size > 1000


def test_site_map_renders(tmp_path):
    out = render(FigureSpec(kind="site_map", inputs=[SITE_CUT],
                            output=tmp_path / "map.png"))
    assert out.exists() and out.stat().st_size > 1000


def test_site_map_corecut_has_empty_central_disk(tmp_path):
    # the sample was produced with sites of radius < 2.5 removed; in the
    # (x1, x2) projection the cone shrinks radii by alpha = 3/4, so the
    # map must show an empty disk of radius 2.5 * 3/4 around the origin
    table = load_table(SITE_CUT, SITE_COLUMNS)
    assert np.min(table["radius"]) >= 2.5
    assert np.min(np.hypot(table["x1"], table["x2"])) >= 2.5 * 0.75
    render(FigureSpec(kind="site_map", inputs=[SITE_CUT],
                      output=tmp_path / "map.png"))


def test_panel_grid_renders(tmp_path):
    out = render(FigureSpec(kind="panel_grid", inputs=PANELS,
                            output=tmp_path / "grid.png", shared_scale=True))
    assert out.exists() and out.stat().st_size > 1000


def test_panel_grid_independent_scales(tmp_path):
    out = render(FigureSpec(kind="panel_grid", inputs=PANELS,
                            output=tmp_path / "grid.png"))
    assert out.exists()


def test_log_scale_and_vmax(tmp_path):
    out = render(FigureSpec(kind="site_map", inputs=[SITE_CUT],
                            output=tmp_path / "log.png", log_scale=True,
                            vmax=5.0))
    assert out.exists()


def test_schema_mismatch_names_columns(tmp_path):
    with pytest.raises(SchemaError, match="site_id"):
        render(FigureSpec(kind="site_map", inputs=[RADIAL],
                          output=tmp_path / "bad.png"))
    with pytest.raises(SchemaError, match="R_bin"):
        render(FigureSpec(kind="radial_heatmap", inputs=[SITE_CUT],
                          output=tmp_path / "bad.png"))


def test_missing_input_rejected(tmp_path):
    with pytest.raises(FileNotFoundError):
        render(FigureSpec(kind="site_map", inputs=[DATA / "nope.csv"],
                          output=tmp_path / "x.png"))


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError, match="figure kind"):
        FigureSpec(kind="pie", inputs=[SITE_CUT], output=tmp_path / "x.png")


def test_rendering_is_deterministic(tmp_path):
    spec_a = FigureSpec(kind="radial_heatmap", inputs=[RADIAL],
                        output=tmp_path / "a.png")
    spec_b = FigureSpec(kind="radial_heatmap", inputs=[RADIAL],
                        output=tmp_path / "b.png")
    assert render(spec_a).read_bytes() == render(spec_b).read_bytes()


def test_cli_end_to_end(tmp_path, capsys):
    from defectlab_plot.cli import main
    out = tmp_path / "cli.png"
    code = main(["--kind", "site_map", "--in", str(SITE_CUT),
                 "--out", str(out), "--log"])
    assert code == 0 and out.exists()
    code = main(["--kind", "radial_heatmap", "--in", str(SITE_CUT),
                 "--out", str(tmp_path / "bad.png")])
    assert code == 2
    assert "R_bin" in capsys.readouterr().err

"""Render defectlab CSV artifacts into figures.

Three figure kinds, matching the two CSV schemas the simulation package
emits:

* ``radial_heatmap`` -- from a radial profile table
  (``E,R_bin,ldos_mean,count``): intensity over (distance to tip, energy).
* ``site_map``       -- from a per-site table
  (``E,site_id,radius,x1,x2,ldos``): zero-energy intensity over the
  lattice, one marker per site.
* ``panel_grid``     -- a row of site maps from several input tables,
  optionally on one shared color scale so intensities are comparable.

Inputs are read-only; rendering the same spec twice produces identical
files (fixed backend, dpi and no timestamps).  If a JSON metadata sidecar
(``<name>.meta.json``) sits next to an input, its parameters are folded
into the figure title.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import LogNorm, Normalize

__all__ = ["FigureSpec", "SchemaError", "KINDS", "load_table", "render"]

RADIAL_COLUMNS = ("E", "R_bin", "ldos_mean", "count")
SITE_COLUMNS = ("E", "site_id", "radius", "x1", "x2", "ldos")
KINDS = ("radial_heatmap", "site_map", "panel_grid")

_DPI = 150


class SchemaError(ValueError):
    """Input table does not carry the columns the figure kind needs."""


@dataclass
class FigureSpec:
    """What to draw: input table(s), figure kind, color scale, output path."""

    kind: str
    inputs: list
    output: Path
    vmax: float | None = None
    log_scale: bool = False
    shared_scale: bool = False
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"expected one of {KINDS}")
        self.inputs = [Path(p) for p in (
            self.inputs if isinstance(self.inputs, (list, tuple))
            else [self.inputs])]
        self.output = Path(self.output)
        if not self.inputs:
            raise ValueError("at least one input table is required")
        if self.vmax is not None and not np.isfinite(self.vmax):
            raise ValueError("vmax must be finite")


def load_table(path, required) -> dict:
    """Read a CSV into float columns, checking the schema column by column."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    with path.open() as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(
                f"{path.name}: missing column(s) {', '.join(missing)} "
                f"(found: {', '.join(header)})")
        rows = list(reader)
    return {c: np.array([float(r[c]) for r in rows]) for c in required}


def _sidecar_text(path: Path) -> str:
    """Compact parameter string from a metadata sidecar, if one exists."""
    for candidate in (path.with_suffix(".meta.json"),
                      path.parent / "manifest.json"):
        if candidate.exists():
            try:
                with candidate.open() as fh:
                    meta = json.load(fh)
            except (OSError, json.JSONDecodeError):
                continue
            src = meta.get("spec", meta)
            keys = ("alpha", "mass", "M", "r_max", "core_cut", "epsilon")
            parts = [f"{k}={src[k]}" for k in keys
                     if k in src and not isinstance(src[k], (dict, list))]
            if parts:
                return ", ".join(parts)
    return ""


def _norm(values, vmax, log_scale):
    top = vmax if vmax is not None else float(np.nanmax(values))
    if log_scale:
        positive = values[values > 0]
        floor = float(positive.min()) if positive.size else 1e-6
        return LogNorm(vmin=max(floor, top * 1e-4), vmax=top)
    return Normalize(vmin=0.0, vmax=top)


def _radial_heatmap(ax, table, norm):
    energies = np.unique(table["E"])
    bins = np.unique(table["R_bin"])
    grid = np.full((len(energies), len(bins)), np.nan)
    ie = np.searchsorted(energies, table["E"])
    ib = np.searchsorted(bins, table["R_bin"])
    grid[ie, ib] = table["ldos_mean"]
    mesh = ax.pcolormesh(bins, energies, np.ma.masked_invalid(grid),
                         norm=norm, shading="nearest", cmap="inferno")
    ax.set_xlabel("distance to tip R")
    ax.set_ylabel("energy E")
    return mesh


def _site_map(ax, table, norm):
    # draw the energy slice nearest zero (tables may carry several)
    e0 = table["E"][np.argmin(np.abs(table["E"]))]
    sel = table["E"] == e0
    sc = ax.scatter(table["x1"][sel], table["x2"][sel],
                    c=table["ldos"][sel], s=14, norm=norm, cmap="inferno")
    ax.set_aspect("equal")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    return sc


def render(spec: FigureSpec) -> Path:
    """Draw the requested figure and write the image file.

    Raises
    ------
    SchemaError
        If an input lacks the columns its figure kind requires.
    """
    if spec.kind == "radial_heatmap":
        table = load_table(spec.inputs[0], RADIAL_COLUMNS)
        fig, ax = plt.subplots(figsize=(6.0, 4.2))
        norm = _norm(table["ldos_mean"], spec.vmax, spec.log_scale)
        mesh = _radial_heatmap(ax, table, norm)
        fig.colorbar(mesh, ax=ax, label="LDOS")
        title = spec.title or "radial LDOS"
        extra = _sidecar_text(spec.inputs[0])
        fig.suptitle(f"{title}  [{extra}]" if extra else title, fontsize=10)

    elif spec.kind == "site_map":
        table = load_table(spec.inputs[0], SITE_COLUMNS)
        fig, ax = plt.subplots(figsize=(5.2, 4.6))
        norm = _norm(table["ldos"], spec.vmax, spec.log_scale)
        sc = _site_map(ax, table, norm)
        fig.colorbar(sc, ax=ax, label="LDOS")
        title = spec.title or "zero-energy LDOS"
        extra = _sidecar_text(spec.inputs[0])
        fig.suptitle(f"{title}  [{extra}]" if extra else title, fontsize=10)

    else:  # panel_grid
        tables = [load_table(p, SITE_COLUMNS) for p in spec.inputs]
        n = len(tables)
        fig, axes = plt.subplots(1, n, figsize=(4.0 * n, 4.2), squeeze=False)
        if spec.shared_scale:
            top = spec.vmax if spec.vmax is not None else max(
                float(np.nanmax(t["ldos"])) for t in tables)
        last = None
        for ax, table, path in zip(axes[0], tables, spec.inputs):
            vmax = top if spec.shared_scale else spec.vmax
            norm = _norm(table["ldos"], vmax, spec.log_scale)
            last = _site_map(ax, table, norm)
            extra = _sidecar_text(path)
            ax.set_title(extra if extra else path.stem, fontsize=9)
            if not spec.shared_scale:
                fig.colorbar(last, ax=ax)
        if spec.shared_scale and last is not None:
            fig.colorbar(last, ax=list(axes[0]), label="LDOS", shrink=0.85)
        if spec.title:
            fig.suptitle(spec.title, fontsize=10)

    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output, dpi=_DPI, metadata={"Software": "defectlab-plot"})
    plt.close(fig)
    return spec.output

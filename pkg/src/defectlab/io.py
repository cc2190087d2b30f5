"""CSV and JSON writers for patterns, operators and LDOS data.

All writers are deterministic: fixed column orders, shortest round-trip
float formatting, sorted JSON keys, no timestamps.  Rerunning a pipeline
with identical inputs reproduces identical bytes.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .assembly import SparseHermitian
from .pattern import Pattern
from .spectral import LdosGrid, RadialProfile

__all__ = [
    "write_pattern_csv",
    "write_adjacency_csv",
    "write_ldos_csv",
    "write_radial_csv",
    "write_operator_csv",
    "write_json",
]


def _fmt(x) -> str:
    """Shortest exact decimal form of a float (round-trips via float())."""
    return repr(float(x))


def write_pattern_csv(pattern: Pattern, path) -> Path:
    """Site table: ``id,n,m,x,y,z,radius,theta0``."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "n", "m", "x", "y", "z", "radius", "theta0"])
        for i in range(pattern.n_sites):
            p = pattern.positions[i]
            w.writerow([i, int(pattern.nm[i, 0]), int(pattern.nm[i, 1]),
                        _fmt(p[0]), _fmt(p[1]), _fmt(p[2]),
                        _fmt(pattern.radii[i]), _fmt(pattern.theta[i])])
    return path


def write_adjacency_csv(pattern: Pattern, path) -> Path:
    """Directed bond table: ``id_from,id_to,ex,ey,ez``."""
    if pattern.adjacency is None:
        raise ValueError("pattern has no adjacency")
    path = Path(path)
    adj = pattern.adjacency
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id_from", "id_to", "ex", "ey", "ez"])
        for i in range(pattern.n_sites):
            ids, bonds = adj.neighbors(i)
            for j, e in zip(ids, bonds):
                w.writerow([i, int(j), _fmt(e[0]), _fmt(e[1]), _fmt(e[2])])
    return path


def write_ldos_csv(grid: LdosGrid, path) -> Path:
    """Per-site LDOS table: ``E,site_id,radius,x1,x2,ldos``."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["E", "site_id", "radius", "x1", "x2", "ldos"])
        for ie, energy in enumerate(grid.energies):
            for js, sid in enumerate(grid.site_ids):
                w.writerow([_fmt(energy), int(sid), _fmt(grid.radii[js]),
                            _fmt(grid.positions[js, 0]),
                            _fmt(grid.positions[js, 1]),
                            _fmt(grid.values[ie, js])])
    return path


def write_radial_csv(profile: RadialProfile, path) -> Path:
    """Radial profile table: ``E,R_bin,ldos_mean,count``.

    Empty bins are omitted (missing, not zero).
    """
    path = Path(path)
    centers = profile.bin_centers
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["E", "R_bin", "ldos_mean", "count"])
        for ie, energy in enumerate(profile.energies):
            for b in range(len(centers)):
                if profile.counts[b] == 0:
                    continue
                w.writerow([_fmt(energy), _fmt(centers[b]),
                            _fmt(profile.values[ie, b]),
                            int(profile.counts[b])])
    return path


def write_operator_csv(op: SparseHermitian, path) -> Path:
    """Nonzero entries as ``row,col,re,im`` triplets (4N-dimensional indexing).

    Debug/cross-check format; entries appear in CSR order.
    """
    path = Path(path)
    coo = op.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["row", "col", "re", "im"])
        for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            w.writerow([int(r), int(c), _fmt(v.real), _fmt(v.imag)])
    return path


def write_json(obj, path) -> Path:
    path = Path(path)
    with path.open("w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path

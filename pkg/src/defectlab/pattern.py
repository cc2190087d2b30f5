"""Conical defect point patterns of the 2D square lattice.

A cone with opening parameter ``alpha = k/4`` (k = 1, 2, 3) is produced by
keeping the sector ``theta in [0, 2*pi*alpha)`` of the square lattice and
gluing the exposed cut edges.  Working in polar coordinates ``(r, theta)``
of a lattice point ``(n, m)``, the embedding into R^3 is

    (n, m)  ->  (r*alpha*cos(theta/alpha), r*alpha*sin(theta/alpha),
                 -r*sqrt(1 - alpha**2)),

which preserves the radius ``r`` and is ``2*pi*alpha``-periodic in theta,
so the seam gluing is automatic in image space.  ``alpha = 1`` reproduces
the flat lattice at z = 0.

The module also supplies the orthonormal frame ``(a1, a2)`` seen far from
the tip at asymptotic angle ``theta0``, which carries a global twist:
walking once around the cone maps ``a1 -> a2 -> -a1``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "PatternParams",
    "Site",
    "Frame",
    "Adjacency",
    "Plaquettes",
    "Pattern",
    "map_point",
    "build_pattern",
    "build_adjacency",
    "build_plaquettes",
    "frame",
    "build_flat_torus",
    "DEFAULT_WINDOW",
]

#: Default nearest-neighbor distance window.  Chords of unit bonds on the
#: cone are <= 1 (approaching 1 away from the tip) while diagonal pairs sit
#: near sqrt(2); the window keeps the former and rejects the latter except
#: for a handful of anomalous pairs on the first ring around the tip.
DEFAULT_WINDOW = (0.5, 1.3)

_DEDUP_DECIMALS = 6  # seam images closer than 1e-6 are identified


@dataclass(frozen=True)
class PatternParams:
    """Geometry parameters of a conical defect pattern.

    Parameters
    ----------
    alpha : float
        Cone parameter in (0, 1]; ``alpha = k/4`` keeps k quadrants of the
        lattice.  ``alpha = 1`` is the flat (defect-free) lattice.
    r_max : float
        Outer radius cutoff in lattice constants.
    core_cut : float
        Sites with radius below this value are deleted (0 disables).
    """

    alpha: float
    r_max: float
    core_cut: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.r_max <= 0.0:
            raise ValueError(f"r_max must be positive, got {self.r_max}")
        if not 0.0 <= self.core_cut < self.r_max:
            raise ValueError(
                f"core_cut must satisfy 0 <= core_cut < r_max, got {self.core_cut}"
            )

    @property
    def sin_xi(self) -> float:
        return self.alpha

    @property
    def cos_xi(self) -> float:
        return float(np.sqrt(1.0 - self.alpha**2))

    @property
    def xi(self) -> float:
        """Tilt angle, with sin(xi) = alpha."""
        return float(np.arcsin(self.alpha))

    @property
    def theta_span(self) -> float:
        """Length ``2*pi*alpha`` of the kept angular sector."""
        return 2.0 * np.pi * self.alpha


@dataclass(frozen=True)
class Site:
    """A single pattern point with its canonical lattice preimage."""

    id: int
    n: int
    m: int
    position: np.ndarray
    radius: float
    theta0: float


@dataclass(frozen=True)
class Frame:
    """Asymptotic lattice frame at angle ``theta0``: two orthonormal
    vectors tangent to the cone plus their normal ``a1 x a2``."""

    theta0: float
    a1: np.ndarray
    a2: np.ndarray
    normal: np.ndarray


@dataclass
class Adjacency:
    """Directed nearest-neighbor lists in CSR layout.

    For site ``x``, ``ids[indptr[x]:indptr[x+1]]`` are its neighbors and
    the matching rows of ``bonds`` hold ``position(y) - position(x)``.
    """

    window: tuple[float, float]
    indptr: np.ndarray
    ids: np.ndarray
    bonds: np.ndarray

    def neighbors(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        sl = slice(self.indptr[i], self.indptr[i + 1])
        return self.ids[sl], self.bonds[sl]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)


@dataclass
class Plaquettes:
    """Ordered pairs (z, y) of distinct neighbors, grouped per site."""

    indptr: np.ndarray
    pairs: np.ndarray  # (P, 2) columns are (z_id, y_id)

    def pairs_of(self, i: int) -> np.ndarray:
        return self.pairs[self.indptr[i] : self.indptr[i + 1]]


class Pattern:
    """An indexed conical defect point set with adjacency and plaquettes.

    Sites are stored as flat arrays ordered canonically by
    ``(radius, theta, n, m)``; the array index is the site id.
    """

    def __init__(self, params: PatternParams, nm: np.ndarray,
                 positions: np.ndarray, radii: np.ndarray, theta: np.ndarray):
        self.params = params
        self.nm = nm
        self.positions = positions
        self.radii = radii
        self.theta = theta
        self.adjacency: Adjacency | None = None
        self.plaquettes: Plaquettes | None = None
        for a in (nm, positions, radii, theta):
            a.setflags(write=False)

    @property
    def n_sites(self) -> int:
        return len(self.radii)

    def __len__(self) -> int:
        return self.n_sites

    def site(self, i: int) -> Site:
        return Site(
            id=i,
            n=int(self.nm[i, 0]),
            m=int(self.nm[i, 1]),
            position=self.positions[i],
            radius=float(self.radii[i]),
            theta0=float(self.theta[i]),
        )

    def __repr__(self) -> str:
        p = self.params
        return (f"Pattern(alpha={p.alpha}, r_max={p.r_max}, "
                f"core_cut={p.core_cut}, n_sites={self.n_sites})")


def _reduce_theta(theta, span):
    """Reduce angles to [0, span) modulo the seam identification."""
    t = np.mod(theta, span)
    # mod can return span itself for values a hair below a multiple of span
    return np.where(t >= span, t - span, t)


def _map_arrays(n, m, params: PatternParams):
    """Vectorized cone embedding of lattice points; returns (pos, r, theta)."""
    n = np.asarray(n, dtype=float)
    m = np.asarray(m, dtype=float)
    r = np.hypot(n, m)
    theta = np.mod(np.arctan2(m, n), 2.0 * np.pi)
    theta = np.where(r == 0.0, 0.0, theta)  # polar angle at the origin
    theta = _reduce_theta(theta, params.theta_span)
    if params.alpha == 1.0:
        # identity embedding at z = 0, kept exact (no trig round-trip)
        pos = np.stack([n, m, np.zeros_like(n)], axis=-1)
        return pos, r, theta
    a = params.alpha
    pos = np.stack(
        [r * a * np.cos(theta / a),
         r * a * np.sin(theta / a),
         -r * params.cos_xi],
        axis=-1,
    )
    return pos, r, theta


def map_point(n: int, m: int, params: PatternParams) -> np.ndarray:
    """Image of the lattice point ``(n, m)`` on the cone.

    The polar angle is reduced to ``[0, 2*pi*alpha)`` first, so lattice
    points identified by the seam map to the same point of R^3.  The
    radius ``sqrt(n^2 + m^2)`` is preserved exactly.
    """
    pos, _, _ = _map_arrays(np.array([n]), np.array([m]), params)
    return pos[0]


def build_pattern(params: PatternParams,
                  window: tuple[float, float] = DEFAULT_WINDOW,
                  with_adjacency: bool = True,
                  with_plaquettes: bool = True) -> Pattern:
    """Enumerate, embed and index the conical defect pattern.

    All lattice points with ``core_cut <= r <= r_max`` and polar angle in
    ``[0, 2*pi*alpha)`` are mapped to the cone; seam duplicates (images
    closer than 1e-6) are collapsed onto the representative with the
    smaller angle.  Site ids follow the ``(r, theta, n, m)`` sort order,
    so identical parameters always produce the identical pattern.

    Raises
    ------
    ValueError
        If the parameters produce an empty point set.
    """
    nmax = int(np.floor(params.r_max))
    rng = np.arange(-nmax, nmax + 1)
    n, m = np.meshgrid(rng, rng, indexing="ij")
    n = n.ravel()
    m = m.ravel()
    r = np.hypot(n, m)
    theta_full = np.mod(np.arctan2(m, n), 2.0 * np.pi)
    theta_full = np.where(r == 0.0, 0.0, theta_full)
    keep = (r <= params.r_max) & (r >= params.core_cut)
    keep &= theta_full < params.theta_span
    n, m = n[keep], m[keep]
    if n.size == 0:
        raise ValueError(f"degenerate input: pattern is empty for {params}")

    pos, r, theta = _map_arrays(n, m, params)

    order = np.lexsort((m, n, theta, r))
    n, m, r, theta, pos = n[order], m[order], r[order], theta[order], pos[order]

    # collapse seam images that survived the angular filter (float edge cases)
    key = np.round(pos * 10.0**_DEDUP_DECIMALS).astype(np.int64)
    _, first = np.unique(key, axis=0, return_index=True)
    if len(first) != len(n):
        sel = np.sort(first)
        n, m, r, theta, pos = n[sel], m[sel], r[sel], theta[sel], pos[sel]

    pat = Pattern(
        params,
        nm=np.stack([n, m], axis=1).astype(np.int64),
        positions=np.ascontiguousarray(pos),
        radii=np.ascontiguousarray(r),
        theta=np.ascontiguousarray(theta),
    )
    if with_adjacency:
        pat.adjacency = build_adjacency(pat, window)
        if with_plaquettes:
            pat.plaquettes = build_plaquettes(pat)
    return pat


def build_adjacency(pattern: Pattern,
                    window: tuple[float, float] = DEFAULT_WINDOW) -> Adjacency:
    """Nearest-neighbor lists from the distance window ``d_min <= |e| <= d_max``.

    The result is symmetric by construction.  A warning is emitted when a
    site acquires more than 4 neighbors, which happens only on the first
    ring around the tip where chords of diagonal pairs contract below the
    window's upper edge.
    """
    d_min, d_max = window
    if not 0.0 < d_min < d_max:
        raise ValueError(f"invalid window {window}")
    tree = cKDTree(pattern.positions)
    pairs = tree.query_pairs(d_max, output_type="ndarray")
    if pairs.size:
        dist = np.linalg.norm(
            pattern.positions[pairs[:, 1]] - pattern.positions[pairs[:, 0]], axis=1
        )
        pairs = pairs[dist >= d_min]
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.searchsorted(src, np.arange(pattern.n_sites + 1))
    bonds = pattern.positions[dst] - pattern.positions[src]
    adj = Adjacency(window=(d_min, d_max), indptr=indptr,
                    ids=dst.astype(np.int64), bonds=bonds)
    n_anom = int(np.count_nonzero(adj.degrees > 4))
    if n_anom:
        warnings.warn(
            f"{n_anom} site(s) have more than 4 neighbors "
            "(geometry anomaly near the tip)",
            RuntimeWarning,
            stacklevel=2,
        )
    return adj


def build_plaquettes(pattern: Pattern) -> Plaquettes:
    """All ordered pairs (z, y) of distinct neighbors of each site.

    Collinear pairs are retained; their cross product vanishes, so they
    contribute nothing downstream.  A site of degree d yields d*(d-1)
    ordered pairs.
    """
    adj = pattern.adjacency
    if adj is None:
        raise ValueError("pattern has no adjacency; run build_adjacency first")
    deg = adj.degrees
    counts = deg * (deg - 1)
    indptr = np.concatenate([[0], np.cumsum(counts)])
    pairs = np.empty((int(indptr[-1]), 2), dtype=np.int64)
    for d in np.unique(deg):
        if d < 2:
            continue
        sites = np.where(deg == d)[0]
        rows = adj.indptr[sites][:, None] + np.arange(d)[None, :]
        nb = adj.ids[rows]  # (S, d)
        iz, iy = np.nonzero(~np.eye(d, dtype=bool))
        block = np.stack([nb[:, iz], nb[:, iy]], axis=-1)  # (S, d(d-1), 2)
        starts = indptr[sites]
        idx = starts[:, None] + np.arange(d * (d - 1))[None, :]
        pairs[idx.ravel()] = block.reshape(-1, 2)
    return Plaquettes(indptr=indptr, pairs=pairs)


def frame(theta0: float, params: PatternParams) -> Frame:
    """Asymptotic frame vectors at angle ``theta0``.

    Both vectors are unit length and mutually orthogonal for every
    ``theta0``; at the seam they satisfy the twist relations
    ``a1(2*pi*alpha) = a2(0)`` and ``a2(2*pi*alpha) = -a1(0)``.
    """
    sx, cx = params.sin_xi, params.cos_xi
    c, s = np.cos(theta0), np.sin(theta0)
    big = theta0 / params.alpha
    C, S = np.cos(big), np.sin(big)
    a1 = np.array([sx * c * C + s * S, sx * c * S - s * C, -cx * c])
    a2 = np.array([sx * s * C - c * S, sx * s * S + c * C, -cx * s])
    return Frame(theta0=float(theta0), a1=a1, a2=a2, normal=np.cross(a1, a2))


def build_flat_torus(size: int) -> Pattern:
    """Flat ``size x size`` square lattice with periodic identifications.

    Bond vectors are minimum-image displacements, i.e. exactly the four
    unit vectors.  Serves as the translation-invariant oracle geometry for
    the real-space assembler; requires ``size >= 3`` so the four neighbors
    of a site are distinct.
    """
    if size < 3:
        raise ValueError("torus size must be at least 3")
    params = PatternParams(alpha=1.0, r_max=float(size))
    n, m = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    n = n.ravel()
    m = m.ravel()
    pos = np.stack([n, m, np.zeros_like(n)], axis=1).astype(float)
    pat = Pattern(
        params,
        nm=np.stack([n, m], axis=1).astype(np.int64),
        positions=pos,
        radii=np.hypot(n, m).astype(float),
        theta=np.zeros(size * size),
    )
    idx = {(int(a), int(b)): i for i, (a, b) in enumerate(zip(n, m))}
    src, dst, bonds = [], [], []
    for i in range(size * size):
        for step in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            j = idx[((int(n[i]) + step[0]) % size, (int(m[i]) + step[1]) % size)]
            src.append(i)
            dst.append(j)
            bonds.append((float(step[0]), float(step[1]), 0.0))
    src = np.asarray(src)
    order = np.argsort(src, kind="stable")
    indptr = np.searchsorted(src[order], np.arange(size * size + 1))
    pat.adjacency = Adjacency(
        window=DEFAULT_WINDOW,
        indptr=indptr,
        ids=np.asarray(dst, dtype=np.int64)[order],
        bonds=np.asarray(bonds)[order],
    )
    return pat

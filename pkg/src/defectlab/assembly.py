"""Real-space assembly of the defect Hamiltonian on a conical pattern.

Each site carries four orbitals.  The operator is a sum of three pieces:

* onsite mass ``M * gamma_4``;
* a hopping block ``(1/2) [i e_yx . gamma_vec + gamma_4]`` on every
  directed bond, where ``e_yx = position(y) - position(x)``;
* an onsite plaquette sum over ordered pairs (z, y) of neighbors of x,

    (1/8) sum_(z,y) [ (ey . w)(w . gamma_vec)/cos(xi)
                      + (ez . w)(ex . w) gamma_4 / (sin(xi) cos(xi)) ],

  with ``w = (z - x) x (y - x)`` and ex, ey, ez the fixed global axes.

Far from the tip the plaquette sum converges to
``sin(theta0/alpha) (a1 x a2) . gamma_vec + cos(theta0/alpha) gamma_4``,
so the assembled operator approaches the asymptotic Bloch model at the
same mass M; ``asymptotic_residual`` measures the distance, which decays
like 1/r.  For the flat lattice (alpha = 1) every cross product points
along z and the plaquette term vanishes identically, so it is omitted
(its written form has a 0/0 at cos(xi) = 0).

Hermiticity needs no symmetrization: the bond sum runs over ordered pairs
and ``e_xy = -e_yx`` pairs the blocks up.  Chiral anticommutation with
``J (+) ... (+) J`` is exact because every term is a gamma matrix with a
real coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .clifford import CliffordSet, make_clifford
from .pattern import Pattern, PatternParams, frame as _frame

__all__ = [
    "SparseHermitian",
    "GeometryError",
    "assemble_defect",
    "asymptotic_residual",
]

_FLAT_ALPHA_TOL = 1e-12


class GeometryError(RuntimeError):
    """The local pattern geometry does not support the requested operation."""


@dataclass
class SparseHermitian:
    """Block-sparse Hermitian operator on C^4 x l^2(pattern).

    ``matrix`` is a BSR matrix with 4x4 blocks; block row/column i belongs
    to site id i.  Immutable by convention: share freely across threads.
    """

    matrix: sp.bsr_matrix
    pattern: Pattern
    mass: float
    clifford: CliffordSet

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_sites(self) -> int:
        return self.pattern.n_sites

    def chiral_diagonal(self) -> np.ndarray:
        """Diagonal of the grading J on the full 4N-dimensional space."""
        return np.tile(np.array([1.0, 1.0, -1.0, -1.0]), self.n_sites)

    def chiral_operator(self) -> sp.dia_matrix:
        return sp.diags(self.chiral_diagonal())

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def site_block(self, row: int, col: int) -> np.ndarray:
        """The 4x4 block coupling site ``col`` into site ``row``."""
        m = self.matrix
        lo, hi = m.indptr[row], m.indptr[row + 1]
        hits = np.where(m.indices[lo:hi] == col)[0]
        if len(hits) == 0:
            return np.zeros((4, 4), dtype=complex)
        return np.array(m.data[lo + hits[0]])


def _hop_block(e, cl: CliffordSet) -> np.ndarray:
    """Hopping block for bond vector ``e = position(y) - position(x)``."""
    return 0.5 * (1j * cl.gamma_dot(e) + cl.gamma[3])


def _plaquette_coefficients(pattern: Pattern):
    """Per-site coefficients (V, c4) of the plaquette sum.

    The onsite plaquette block is ``V . gamma_vec + c4 * gamma_4`` with

        V  = sum_pairs w_y * w / (8 cos xi)
        c4 = sum_pairs w_z * w_x / (8 sin xi cos xi).
    """
    params = pattern.params
    plq = pattern.plaquettes
    if plq is None:
        raise ValueError("pattern has no plaquettes; run build_plaquettes first")
    n = pattern.n_sites
    V = np.zeros((n, 3))
    c4 = np.zeros(n)
    counts = np.diff(plq.indptr)
    x = np.repeat(np.arange(n), counts)
    if x.size:
        pos = pattern.positions
        w = np.cross(pos[plq.pairs[:, 0]] - pos[x], pos[plq.pairs[:, 1]] - pos[x])
        np.add.at(V, x, w[:, 1:2] * w)
        np.add.at(c4, x, w[:, 2] * w[:, 0])
    V /= 8.0 * params.cos_xi
    c4 /= 8.0 * params.sin_xi * params.cos_xi
    return V, c4


def assemble_defect(pattern: Pattern, mass: float,
                    clifford: CliffordSet | None = None) -> SparseHermitian:
    """Assemble the defect Hamiltonian on a built pattern.

    ``mass`` is the bulk mass M of the momentum-space models: the far
    field of the assembled operator carries exactly that mass.  The block
    layout is deterministic (sorted by block row, then column), so equal
    inputs give bit-identical sparse structure.

    Raises
    ------
    ValueError
        If adjacency (or, for alpha < 1, plaquettes) has not been built.
    """
    cl = clifford or make_clifford()
    params = pattern.params
    adj = pattern.adjacency
    if adj is None:
        raise ValueError("pattern has no adjacency; run build_adjacency first")
    flat = params.alpha >= 1.0 - _FLAT_ALPHA_TOL
    n = pattern.n_sites

    onsite = np.tile(mass * cl.gamma[3], (n, 1, 1))
    if not flat:
        V, c4 = _plaquette_coefficients(pattern)
        onsite = onsite + np.einsum("ni,ijk->njk", V, cl.gamma_vec)
        onsite = onsite + c4[:, None, None] * cl.gamma[3]

    src = np.repeat(np.arange(n), adj.degrees)
    hop = 0.5 * (1j * np.einsum("bi,ijk->bjk", adj.bonds, cl.gamma_vec)
                 + cl.gamma[3])

    rows = np.concatenate([np.arange(n), adj.ids])
    cols = np.concatenate([np.arange(n), src])
    blocks = np.concatenate([onsite, hop])
    order = np.lexsort((cols, rows))
    rows, cols, blocks = rows[order], cols[order], blocks[order]
    indptr = np.searchsorted(rows, np.arange(n + 1))
    matrix = sp.bsr_matrix((blocks, cols, indptr), shape=(4 * n, 4 * n))
    return SparseHermitian(matrix=matrix, pattern=pattern, mass=float(mass),
                           clifford=cl)


def _local_blocks(pattern: Pattern, site: int, mass: float, cl: CliffordSet):
    """Onsite block and per-neighbor hop blocks at one site.

    Same formulas as ``assemble_defect``, evaluated locally; used by the
    far-field residual so that huge patterns never need full assembly.
    """
    params = pattern.params
    ids, bonds = pattern.adjacency.neighbors(site)
    onsite = mass * cl.gamma[3].copy()
    if params.alpha < 1.0 - _FLAT_ALPHA_TOL:
        V = np.zeros(3)
        c4 = 0.0
        for a in range(len(ids)):
            for b in range(len(ids)):
                if a == b:
                    continue
                w = np.cross(bonds[a], bonds[b])
                V += w[1] * w
                c4 += w[2] * w[0]
        onsite = onsite + cl.gamma_dot(V / (8.0 * params.cos_xi))
        onsite = onsite + c4 / (8.0 * params.sin_xi * params.cos_xi) * cl.gamma[3]
    hops = [_hop_block(e, cl) for e in bonds]
    return onsite, list(zip(ids, bonds, hops))


def _model_blocks(theta0: float, params: PatternParams, mass: float,
                  cl: CliffordSet):
    """Asymptotic-model coefficients at angle theta0: onsite block and the
    hop blocks keyed by (axis, sign) for the bonds +-a1, +-a2."""
    if params.alpha >= 1.0 - _FLAT_ALPHA_TOL:
        a1 = np.array([1.0, 0.0, 0.0])
        a2 = np.array([0.0, 1.0, 0.0])
        onsite = mass * cl.gamma[3]
    else:
        f = _frame(theta0, params)
        a1, a2 = f.a1, f.a2
        big = theta0 / params.alpha
        onsite = (np.sin(big) * cl.gamma_dot(f.normal)
                  + (mass + np.cos(big)) * cl.gamma[3])
    hops = {(axis, sgn): _hop_block(sgn * a, cl)
            for axis, a in ((1, a1), (2, a2)) for sgn in (+1, -1)}
    return onsite, hops, (a1, a2)


def asymptotic_residual(pattern: Pattern, mass: float, r0: float,
                        theta0: float,
                        clifford: CliffordSet | None = None) -> float:
    """Max-norm distance between local blocks and the far-field model.

    Picks the site nearest to preimage polar coordinates ``(r0, theta0)``,
    reads off its onsite and hopping blocks, and compares them with the
    asymptotic-model coefficients evaluated at that site's own angle.
    The result decays like O(1/r0); for the flat lattice it vanishes.

    Raises
    ------
    ValueError
        If ``r0 + 5 >= r_max`` (no full neighborhood exists).
    GeometryError
        If the surrounding sites do not form a 3x3 square patch.
    """
    params = pattern.params
    if r0 + 5.0 >= params.r_max:
        raise ValueError(
            f"need r0 + 5 < r_max for a full neighborhood, got r0={r0}, "
            f"r_max={params.r_max}"
        )
    if pattern.adjacency is None:
        raise ValueError("pattern has no adjacency; run build_adjacency first")
    cl = clifford or make_clifford()

    span = params.theta_span
    dth = np.abs(pattern.theta - theta0 % span)
    dth = np.minimum(dth, span - dth)
    site = int(np.argmin((pattern.radii - r0) ** 2 + (r0 * dth) ** 2))

    # the closed neighborhood must be a 3x3 patch: 9 sites within the
    # diagonal chord distance (diagonals ~ sqrt(2), next shell ~ 2)
    from scipy.spatial import cKDTree

    tree = cKDTree(pattern.positions)
    patch = tree.query_ball_point(pattern.positions[site], 1.9)
    if len(patch) != 9:
        raise GeometryError(
            f"site {site} (r={pattern.radii[site]:.2f}) has a "
            f"{len(patch)}-point neighborhood, not a 3x3 patch"
        )

    theta_site = float(pattern.theta[site])
    onsite, hops = _local_blocks(pattern, site, mass, cl)[0:2]
    m_onsite, m_hops, (a1, a2) = _model_blocks(theta_site, params, mass, cl)
    if len(hops) != 4:
        raise GeometryError(f"site {site} has {len(hops)} neighbors, expected 4")

    residual = float(np.max(np.abs(onsite - m_onsite)))
    matched = set()
    for _, e, blk in hops:
        d1, d2 = np.dot(e, a1), np.dot(e, a2)
        axis = 1 if abs(d1) >= abs(d2) else 2
        sgn = 1 if (d1 if axis == 1 else d2) > 0 else -1
        matched.add((axis, sgn))
        residual = max(residual, float(np.max(np.abs(blk - m_hops[(axis, sgn)]))))
    if len(matched) != 4:
        raise GeometryError(
            f"bonds at site {site} do not align with the frame directions"
        )
    return residual

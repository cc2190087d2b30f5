"""Spectra near zero, resolvent LDOS maps, and the chiral index diagnostic.

The local density of states of an assembled operator H is

    LDOS(E, x) = sum_orbitals Im <x,o| (H - E - i eps)^(-1) |x,o>
               = sum_n |psi_n(x)|^2 * eps / ((E - lambda_n)^2 + eps^2),

i.e. the site-traced diagonal of the resolvent taken on the side of the
complex plane that makes it nonnegative.  Two engines evaluate it:

* ``dense-eig`` -- one full eigendecomposition, then all energies and
  sites at once; the reference path, capped by matrix dimension.
* ``shifted-solve`` -- a sparse LU factorization of ``H - (E + i eps)``
  per energy, solving only for the requested sites; scales to patterns
  the dense path cannot touch and is the fast route to E = 0 maps.

Both must agree to solver precision; the test suite enforces it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .assembly import SparseHermitian

__all__ = [
    "LdosRequest",
    "LdosGrid",
    "RadialProfile",
    "NearZeroModes",
    "ldos",
    "radial_profile",
    "eigs_near_zero",
    "chiral_index",
]

_DENSE_CAP = 12000
_RHS_CHUNK = 512


@dataclass
class LdosRequest:
    """What to compute: energies, broadening, site selection and engine.

    ``sites`` is either the string ``"all"`` or an array of site ids.
    """

    energies: np.ndarray
    epsilon: float = 0.06
    sites: object = "all"
    method: str = "dense-eig"  # dense-eig | shifted-solve
    dense_cap: int = _DENSE_CAP

    def __post_init__(self):
        self.energies = np.atleast_1d(np.asarray(self.energies, dtype=float))
        if not np.all(np.isfinite(self.energies)):
            raise ValueError("energies must be finite")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.method not in ("dense-eig", "shifted-solve"):
            raise ValueError(f"unknown method {self.method!r}")

    def site_ids(self, n_sites: int) -> np.ndarray:
        if isinstance(self.sites, str):
            if self.sites != "all":
                raise ValueError(f"unknown site selection {self.sites!r}")
            return np.arange(n_sites)
        ids = np.asarray(self.sites, dtype=np.int64)
        if ids.size and (ids.min() < 0 or ids.max() >= n_sites):
            raise ValueError("site ids out of range")
        return ids


@dataclass
class LdosGrid:
    """LDOS values on an (energy, site) grid plus run metadata."""

    values: np.ndarray  # (n_energies, n_sites_selected), nonnegative
    energies: np.ndarray
    site_ids: np.ndarray
    positions: np.ndarray  # (n_sites_selected, 3)
    radii: np.ndarray
    metadata: dict = field(default_factory=dict)


@dataclass
class RadialProfile:
    """Radially binned LDOS: mean over sites per bin, NaN where empty."""

    energies: np.ndarray
    bin_edges: np.ndarray  # (n_bins + 1,)
    values: np.ndarray     # (n_energies, n_bins)
    counts: np.ndarray     # (n_bins,) sites per bin

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


def _ldos_dense(op: SparseHermitian, req: LdosRequest, ids: np.ndarray):
    if op.dim > req.dense_cap:
        raise ValueError(
            f"dimension {op.dim} exceeds the dense cap {req.dense_cap}; "
            "use method='shifted-solve'"
        )
    evals, evecs = sla.eigh(op.to_dense())
    rows = (4 * ids[:, None] + np.arange(4)[None, :]).ravel()
    w = np.abs(evecs[rows]) ** 2  # (4*nsel, dim)
    w = w.reshape(len(ids), 4, -1).sum(axis=1)  # site-traced weights
    eps = req.epsilon
    lor = eps / ((req.energies[:, None] - evals[None, :]) ** 2 + eps**2)
    return lor @ w.T  # (nE, nsel)


def _ldos_solve(op: SparseHermitian, req: LdosRequest, ids: np.ndarray):
    n_sel = len(ids)
    rows = (4 * ids[:, None] + np.arange(4)[None, :]).ravel()
    values = np.empty((len(req.energies), n_sel))
    csr = op.matrix.tocsr()
    eye = sp.identity(op.dim, format="csr")
    for ie, energy in enumerate(req.energies):
        lu = spla.splu((csr - (energy + 1j * req.epsilon) * eye).tocsc())
        diag = np.empty(len(rows))
        for start in range(0, len(rows), _RHS_CHUNK):
            chunk = rows[start : start + _RHS_CHUNK]
            rhs = np.zeros((op.dim, len(chunk)), dtype=complex)
            rhs[chunk, np.arange(len(chunk))] = 1.0
            sol = lu.solve(rhs)
            diag[start : start + len(chunk)] = sol[chunk, np.arange(len(chunk))].imag
        values[ie] = diag.reshape(n_sel, 4).sum(axis=1)
    return values


def ldos(op: SparseHermitian, req: LdosRequest) -> LdosGrid:
    """Local density of states of an assembled operator.

    Returns one value per (energy, site): the imaginary part of the
    site-traced resolvent diagonal, nonnegative by construction.
    """
    ids = req.site_ids(op.n_sites)
    if req.method == "dense-eig":
        values = _ldos_dense(op, req, ids)
    else:
        values = _ldos_solve(op, req, ids)
    pat = op.pattern
    return LdosGrid(
        values=values,
        energies=req.energies.copy(),
        site_ids=ids,
        positions=pat.positions[ids],
        radii=pat.radii[ids],
        metadata={
            "mass": op.mass,
            "alpha": pat.params.alpha,
            "r_max": pat.params.r_max,
            "core_cut": pat.params.core_cut,
            "epsilon": req.epsilon,
            "method": req.method,
        },
    )


def radial_profile(grid: LdosGrid, bin_width: float = 1.0) -> RadialProfile:
    """Average LDOS over sites in radial bins ``[k*w, (k+1)*w)``.

    Empty bins are reported as NaN (missing), never as zero.
    """
    if bin_width <= 0:
        raise ValueError(f"bin_width must be positive, got {bin_width}")
    r_max = float(grid.metadata.get("r_max", grid.radii.max()))
    n_bins = int(np.ceil(r_max / bin_width))
    edges = bin_width * np.arange(n_bins + 1)
    which = np.minimum((grid.radii / bin_width).astype(np.int64), n_bins - 1)
    counts = np.bincount(which, minlength=n_bins)
    sums = np.zeros((len(grid.energies), n_bins))
    for b in range(n_bins):
        mask = which == b
        if counts[b]:
            sums[:, b] = grid.values[:, mask].sum(axis=1)
    with np.errstate(invalid="ignore"):
        values = sums / counts[None, :]
    values[:, counts == 0] = np.nan
    return RadialProfile(energies=grid.energies, bin_edges=edges,
                         values=values, counts=counts)


@dataclass
class NearZeroModes:
    """Eigenvalues closest to zero with per-site weight profiles."""

    eigenvalues: np.ndarray   # sorted by |lambda|
    site_weights: np.ndarray  # (count, n_sites), rows sum to 1


def _eig_pairs_near_zero(op: SparseHermitian, count: int, dense_cap: int):
    """(eigenvalues, eigenvectors) of the `count` smallest-|lambda| pairs."""
    if op.dim <= dense_cap or count >= op.dim - 2:
        evals, evecs = sla.eigh(op.to_dense())
        sel = np.argsort(np.abs(evals), kind="stable")[:count]
        return evals[sel], evecs[:, sel]
    try:
        evals, evecs = spla.eigsh(op.matrix.tocsc(), k=count, sigma=0.0,
                                  which="LM")
    except RuntimeError:
        # H itself singular (exact zero modes): nudge the shift
        evals, evecs = spla.eigsh(op.matrix.tocsc(), k=count, sigma=1e-6,
                                  which="LM")
    sel = np.argsort(np.abs(evals), kind="stable")
    return evals[sel], evecs[:, sel]


def eigs_near_zero(op: SparseHermitian, count: int,
                   dense_cap: int = 2000) -> NearZeroModes:
    """The ``count`` eigenvalues smallest in magnitude with site weights.

    Dense diagonalization below ``dense_cap``; shift-invert Lanczos at 0
    above it.  Warns when returned eigenvalues are degenerate to 1e-10.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    evals, evecs = _eig_pairs_near_zero(op, count, dense_cap)
    gaps = np.abs(np.diff(np.sort(evals)))
    if len(evals) > 1 and np.any(gaps < 1e-10):
        warnings.warn("near-zero spectrum contains degeneracies (gap < 1e-10)",
                      RuntimeWarning, stacklevel=2)
    weights = np.abs(evecs.T) ** 2
    weights = weights.reshape(len(evals), op.n_sites, 4).sum(axis=2)
    return NearZeroModes(eigenvalues=evals, site_weights=weights)


def chiral_index(op: SparseHermitian, delta: float,
                 dense_cap: int = 2000) -> float:
    """Chirality-weighted count of states in the energy window [-delta, delta].

    Computes ``Tr(J P)`` with P the spectral projector onto the window: a
    finite-volume stand-in for the index pairing.  Its value depends on
    delta whenever the near-zero spectrum is not isolated; treat it as a
    diagnostic, not a certified integer.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if op.dim <= dense_cap:
        evals, evecs = sla.eigh(op.to_dense())
    else:
        count = 16
        while True:
            evals, evecs = _eig_pairs_near_zero(op, count, dense_cap)
            if np.abs(evals).max() > delta or count >= op.dim - 2:
                break
            count = min(2 * count, op.dim - 2)
    if np.any(np.abs(np.abs(evals) - delta) < 1e-8):
        warnings.warn(
            f"eigenvalues within 1e-8 of the window edge +-{delta}; "
            "the projector is ill-conditioned",
            RuntimeWarning, stacklevel=2)
    inside = np.abs(evals) <= delta
    if not np.any(inside):
        return 0.0
    j_diag = op.chiral_diagonal()
    psi = evecs[:, inside]
    return float(np.einsum("in,i,in->", psi.conj(), j_diag, psi).real)

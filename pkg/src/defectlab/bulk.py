"""Momentum-space bulk models, gap scans and the 3D winding invariant.

Three variants of the same 4-band chiral Hamiltonian are available:

* ``torus3d`` -- the full 3D model
  ``h(k) = sum_i sin(k_i) gamma_i + (M + sum_i cos(k_i)) gamma_4``
  on the Brillouin 3-torus (shift operators enter as ``S -> e^{ik}``).
* ``cylinder`` -- the 2D reduction where the third momentum is frozen to
  an external angle ``beta``.
* ``asymptotic`` -- the far-field model of the conical defect at angle
  ``theta0``: the first two generators are contracted with the rotated
  frame vectors ``a1, a2``, the third with their normal, and the frozen
  angle is ``theta0 / alpha``.

All variants anticommute with the chiral grading, so the spectrum at each
momentum is ``{+-|d(k)|}`` (twofold each).  The gapped phases are labeled
by the winding number of the flat-band unitary ``u(k) = q(k)/|d(k)|``,
computed as the discretized integral ``(1/24 pi^2) int tr[(u^dag du)^3]``
over the 3-torus; as the mass decreases from +inf to -inf the invariant
steps through 0, +1, -2, +1, 0 at the critical masses +-3, +-1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import CliffordSet, make_clifford
from .pattern import Frame, PatternParams, frame as _frame

__all__ = [
    "BlochModel",
    "WindingResult",
    "GapClosedError",
    "torus3d_model",
    "cylinder_model",
    "asymptotic_model",
    "bloch_h",
    "gap_scan",
    "flat_band_unitary",
    "winding3d",
    "ssh_chain_hamiltonian",
    "ssh_spectra",
]

#: Fixed so that the phase at mass 2 carries winding +1.
_ORIENTATION = -1.0

_GAP_REFUSAL = 1e-3
_SINGULAR_TOL = 1e-8


class GapClosedError(RuntimeError):
    """Raised when a spectral-flattening step meets a (nearly) closed gap."""


@dataclass(frozen=True)
class BlochModel:
    """A 4x4 Bloch Hamiltonian family; build via the factory functions."""

    mass: float
    variant: str  # torus3d | cylinder | asymptotic
    clifford: CliffordSet
    beta: float | None = None       # cylinder: frozen third momentum
    frame: Frame | None = None      # asymptotic: rotated lattice frame
    axis_angle: float | None = None  # asymptotic: theta0 / alpha

    @property
    def n_axes(self) -> int:
        """Number of free momentum components."""
        return 3 if self.variant == "torus3d" else 2


def torus3d_model(mass: float, clifford: CliffordSet | None = None) -> BlochModel:
    """The 3D bulk model at the given mass."""
    return BlochModel(mass=float(mass), variant="torus3d",
                      clifford=clifford or make_clifford())


def cylinder_model(mass: float, beta: float,
                   clifford: CliffordSet | None = None) -> BlochModel:
    """The 2D model with the third momentum frozen to ``beta``."""
    return BlochModel(mass=float(mass), variant="cylinder",
                      clifford=clifford or make_clifford(), beta=float(beta))


def asymptotic_model(mass: float, theta0: float, params: PatternParams,
                     clifford: CliffordSet | None = None) -> BlochModel:
    """The far-field defect model at asymptotic angle ``theta0``."""
    return BlochModel(
        mass=float(mass),
        variant="asymptotic",
        clifford=clifford or make_clifford(),
        frame=_frame(theta0, params),
        axis_angle=float(theta0) / params.alpha,
    )


def _basis(model: BlochModel) -> np.ndarray:
    """The four generators contracted with the model's frame, (4, 4, 4)."""
    cl = model.clifford
    if model.variant == "asymptotic":
        f = model.frame
        return np.stack([
            cl.gamma_dot(f.a1),
            cl.gamma_dot(f.a2),
            cl.gamma_dot(f.normal),
            cl.gamma[3],
        ])
    return cl.gamma_all


def _frozen_angle(model: BlochModel) -> float:
    return model.beta if model.variant == "cylinder" else model.axis_angle


def _d_components(model: BlochModel, k: np.ndarray) -> np.ndarray:
    """Coefficient 4-vector(s) d(k); k has shape (..., n_axes)."""
    k = np.asarray(k, dtype=float)
    M = model.mass
    if model.variant == "torus3d":
        d123 = np.sin(k)
        d4 = M + np.cos(k).sum(axis=-1)
    else:
        ang = _frozen_angle(model)
        d123 = np.concatenate(
            [np.sin(k), np.full(k.shape[:-1] + (1,), np.sin(ang))], axis=-1
        )
        d4 = M + np.cos(k).sum(axis=-1) + np.cos(ang)
    return np.concatenate([d123, d4[..., None]], axis=-1)


def bloch_h(model: BlochModel, k) -> np.ndarray:
    """Evaluate the Bloch Hamiltonian; returns (..., 4, 4) for batched k."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.shape[-1] != model.n_axes:
        raise ValueError(
            f"variant {model.variant!r} takes {model.n_axes} momentum "
            f"components, got {k.shape[-1]}"
        )
    d = _d_components(model, k)
    return np.einsum("...i,ijk->...jk", d, _basis(model))


def _k_grid(model: BlochModel, grid_n: int) -> np.ndarray:
    """Uniform periodic grid over the Brillouin torus, shape (grid_n^dim, dim)."""
    k1 = 2.0 * np.pi * np.arange(grid_n) / grid_n
    axes = np.meshgrid(*([k1] * model.n_axes), indexing="ij")
    return np.stack([a.ravel() for a in axes], axis=-1)


def gap_scan(model: BlochModel, grid_n: int) -> float:
    """Minimum of the half-gap ``min_k |eigenvalues of h(k)|`` over the grid.

    The reported number is the half-gap (distance from 0 to the nearest
    band), not the full gap width.
    """
    if grid_n < 8:
        raise ValueError(f"grid_n must be at least 8, got {grid_n}")
    h = bloch_h(model, _k_grid(model, grid_n))
    ev = np.linalg.eigvalsh(h)
    return float(np.abs(ev).min())


def flat_band_unitary(model: BlochModel, k) -> np.ndarray:
    """The 2x2 unitary ``u(k)``: polar factor of the off-diagonal block.

    In the chiral grading ``h = [[0, q^dag], [q, 0]]``; for these models
    ``q^dag q`` is a multiple of the identity, so the polar factor equals
    ``q/|d|``.

    Raises
    ------
    GapClosedError
        If the smallest singular value of ``q`` is below 1e-8.
    """
    h = bloch_h(model, k)
    q = h[..., 2:, :2]
    uu, sv, vh = np.linalg.svd(q)
    if np.min(sv) < _SINGULAR_TOL:
        raise GapClosedError(
            f"gap closed at k={k}: smallest singular value {np.min(sv):.3e}"
        )
    return uu @ vh


@dataclass(frozen=True)
class WindingResult:
    """Discretized 3D winding integral and its integer rounding."""

    grid_n: int
    raw: float
    rounded: int


def winding3d(model: BlochModel, grid_n: int = 40) -> WindingResult:
    """Winding number of the flat-band unitary over the Brillouin 3-torus.

    Central differences on a periodic ``grid_n^3`` grid; the error of the
    raw integral is O(1/grid_n^2).  The orientation is fixed so that the
    mass-2 phase yields +1.

    Raises
    ------
    GapClosedError
        If the half-gap on the grid is below 1e-3 (integral ill-defined
        near criticality).
    ValueError
        For non-3D variants: the invariant lives on the 3-torus.
    """
    if model.variant != "torus3d":
        raise ValueError("winding3d is defined for the torus3d variant")
    gap = gap_scan(model, grid_n)
    if gap < _GAP_REFUSAL:
        raise GapClosedError(
            f"half-gap {gap:.2e} below {_GAP_REFUSAL}; mass {model.mass} "
            "is at or too close to a critical value"
        )

    n = grid_n
    d = _d_components(model, _k_grid(model, n)).reshape(n, n, n, 4)
    dn = np.linalg.norm(d, axis=-1)
    sig = model.clifford.sigma
    q = np.einsum("...i,ijk->...jk", d[..., :3], np.stack(sig[:3]))
    q = q + 1j * d[..., 3, None, None] * np.eye(2)
    u = q / dn[..., None, None]

    ud = u.conj().swapaxes(-1, -2)
    h = 2.0 * np.pi / n
    a = [ud @ ((np.roll(u, -1, axis=ax) - np.roll(u, 1, axis=ax)) / (2.0 * h))
         for ax in range(3)]
    t = np.trace(a[0] @ (a[1] @ a[2] - a[2] @ a[1]), axis1=-2, axis2=-1)
    raw = _ORIENTATION * float(t.real.sum()) * h**3 / (8.0 * np.pi**2)
    return WindingResult(grid_n=n, raw=raw, rounded=int(np.rint(raw)))


def ssh_chain_hamiltonian(chain_len: int) -> np.ndarray:
    """Open chain ``[[0, S^dag], [S, 0]]`` built from the truncated shift.

    Ordering is orbital-major: components 0..N-1 are the first orbital,
    N..2N-1 the second.  The truncation leaves one zero mode on each end,
    carried by opposite orbitals (hence opposite chirality).
    """
    if chain_len < 4:
        raise ValueError(f"chain_len must be at least 4, got {chain_len}")
    shift = np.zeros((chain_len, chain_len))
    rows = np.arange(chain_len - 1)
    shift[rows, rows + 1] = 1.0  # maps |i> to |i-1>, kills |0>
    h = np.zeros((2 * chain_len, 2 * chain_len))
    h[:chain_len, chain_len:] = shift.T
    h[chain_len:, :chain_len] = shift
    return h


def ssh_spectra(chain_len: int, k_points: int = 181):
    """Bulk spectrum of the shift-operator toy model and its open chain.

    Returns
    -------
    bulk : ndarray
        Eigenvalues of the 2x2 Bloch matrix ``[[0, e^{-ik}], [e^{ik}, 0]]``
        over a uniform k-grid; all of them are -1 or +1.
    chain : ndarray
        Eigenvalues of the open chain of length ``chain_len``: the bulk
        values plus one zero mode per end.
    """
    k = 2.0 * np.pi * np.arange(k_points) / k_points
    hk = np.zeros((k_points, 2, 2), dtype=complex)
    hk[:, 0, 1] = np.exp(-1j * k)
    hk[:, 1, 0] = np.exp(1j * k)
    bulk = np.linalg.eigvalsh(hk).ravel()
    chain = np.linalg.eigvalsh(ssh_chain_hamiltonian(chain_len))
    return bulk, chain

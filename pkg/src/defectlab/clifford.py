"""Fixed 4x4 representation of the four-generator Clifford algebra.

Every Hamiltonian in this package is written in terms of the same four
Hermitian 4x4 generators ``gamma[0..3]`` and the chiral grading ``J``.
The representation is pinned once and for all so that signs of the
topological invariants are reproducible:

    sigma_1 = [[0, 1], [1, 0]]      sigma_2 = [[0, -i], [i, 0]]
    sigma_3 = [[1, 0], [0, -1]]     sigma_4 = i * I_2

    gamma_i = [[0, sigma_i^dag], [sigma_i, 0]]      J = diag(1, 1, -1, -1)

All entries are 0, +-1 or +-i, so every algebraic identity below holds
exactly in floating point, not just to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["CliffordSet", "make_clifford"]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CliffordSet:
    """The four 2x2 sigma blocks, the 4x4 generators, and the grading.

    Attributes
    ----------
    sigma : tuple of four (2, 2) arrays
        The three Pauli matrices followed by ``sigma_4 = i * I_2``.
    gamma : tuple of four (4, 4) arrays
        Hermitian generators with ``{gamma_i, gamma_j} = 2 delta_ij I_4``.
    chiral : (4, 4) array
        The grading ``J = diag(1, 1, -1, -1)``; ``J gamma_i J = -gamma_i``.
    """

    sigma: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    gamma: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    chiral: np.ndarray

    @property
    def gamma_vec(self) -> np.ndarray:
        """The first three generators stacked to shape (3, 4, 4)."""
        return np.stack(self.gamma[:3])

    @property
    def gamma_all(self) -> np.ndarray:
        """All four generators stacked to shape (4, 4, 4)."""
        return np.stack(self.gamma)

    def gamma_dot(self, v) -> np.ndarray:
        """Contract a real 3-vector with the first three generators."""
        v = np.asarray(v)
        return v[0] * self.gamma[0] + v[1] * self.gamma[1] + v[2] * self.gamma[2]


def make_clifford() -> CliffordSet:
    """Construct the fixed representation described in the module docstring."""
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    s4 = 1j * np.eye(2, dtype=complex)
    sigmas = (s1, s2, s3, s4)

    gammas = []
    for s in sigmas:
        g = np.zeros((4, 4), dtype=complex)
        g[:2, 2:] = s.conj().T
        g[2:, :2] = s
        gammas.append(_readonly(g))

    chiral = _readonly(np.diag([1.0, 1.0, -1.0, -1.0]))
    return CliffordSet(
        sigma=tuple(_readonly(s) for s in sigmas),
        gamma=tuple(gammas),
        chiral=chiral,
    )

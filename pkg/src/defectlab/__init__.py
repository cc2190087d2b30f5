"""defectlab: conical lattice defects of the 2D square lattice.

A numerical laboratory for a 4-orbital chiral tight-binding model on
conical defect patterns: cone geometry and asymptotic frames, bulk Bloch
models with gap scans and 3D winding numbers, real-space assembly of the
defect Hamiltonian, and resolvent-based local density of states at the
defect core.
"""

from .assembly import (GeometryError, SparseHermitian, assemble_defect,
                       asymptotic_residual)
from .bulk import (BlochModel, GapClosedError, WindingResult, asymptotic_model,
                   bloch_h, cylinder_model, flat_band_unitary, gap_scan,
                   ssh_chain_hamiltonian, ssh_spectra, torus3d_model,
                   winding3d)
from .clifford import CliffordSet, make_clifford
from .experiments import (CAMPAIGNS, ExperimentSpec, LdosSettings, Manifest,
                          default_spec, run_campaign)
from .pattern import (DEFAULT_WINDOW, Adjacency, Frame, Pattern, PatternParams,
                      Plaquettes, Site, build_adjacency, build_flat_torus,
                      build_pattern, build_plaquettes, frame, map_point)
from .spectral import (LdosGrid, LdosRequest, NearZeroModes, RadialProfile,
                       chiral_index, eigs_near_zero, ldos, radial_profile)

__version__ = "0.1.0"

__all__ = [
    "CliffordSet", "make_clifford",
    "PatternParams", "Site", "Frame", "Adjacency", "Plaquettes", "Pattern",
    "map_point", "build_pattern", "build_adjacency", "build_plaquettes",
    "frame", "build_flat_torus", "DEFAULT_WINDOW",
    "BlochModel", "WindingResult", "GapClosedError", "torus3d_model",
    "cylinder_model", "asymptotic_model", "bloch_h", "gap_scan",
    "flat_band_unitary", "winding3d", "ssh_chain_hamiltonian", "ssh_spectra",
    "SparseHermitian", "GeometryError", "assemble_defect",
    "asymptotic_residual",
    "LdosRequest", "LdosGrid", "RadialProfile", "NearZeroModes", "ldos",
    "radial_profile", "eigs_near_zero", "chiral_index",
    "ExperimentSpec", "LdosSettings", "Manifest", "CAMPAIGNS", "default_spec",
    "run_campaign",
    "__version__",
]

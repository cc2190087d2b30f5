"""Campaign orchestration: parameter sweeps producing CSV/JSON artifacts.

Four campaigns are available:

* ``m_sweep`` -- radial LDOS profiles over an energy window for a list of
  masses at fixed cone parameter; the zero-energy intensity at small
  radius switches on as the mass crosses the critical value 3.
* ``core_removal`` -- zero-energy site maps with the innermost sites
  deleted, for a list of outer radii; shows the core states surviving
  removal of the tip region.
* ``defect_sequence`` -- zero-energy site maps for a sequence of cone
  parameters at fixed mass; the core intensity grows as the cone sharpens.
* ``phase_diagram`` -- bulk gap and winding number over a mass grid.

Each campaign isolates per-item failures, records everything in a
``manifest.json`` (full parameter set, produced files, per-job status)
and never writes timestamps, so reruns are byte-identical.
"""

from __future__ import annotations

import json
import traceback
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io as dio
from .assembly import assemble_defect
from .bulk import GapClosedError, gap_scan, torus3d_model, winding3d
from .pattern import PatternParams, build_pattern
from .spectral import LdosRequest, ldos, radial_profile

__all__ = [
    "LdosSettings",
    "ExperimentSpec",
    "Manifest",
    "run_m_sweep",
    "run_core_removal",
    "run_defect_sequence",
    "run_phase_diagram",
    "run_campaign",
    "CAMPAIGNS",
    "default_spec",
]

#: Radius of the "core" disk used for summary statistics.
CORE_RADIUS = 5.0


@dataclass
class LdosSettings:
    """Energy grid, broadening and engine for LDOS-producing campaigns."""

    energies: np.ndarray = field(
        default_factory=lambda: np.linspace(-3.0, 3.0, 121))
    epsilon: float = 0.06
    method: str = "dense-eig"

    @classmethod
    def from_config(cls, cfg: dict) -> "LdosSettings":
        cfg = dict(cfg)
        energies = cfg.pop("energies", None)
        if energies is None:
            energies = np.linspace(-3.0, 3.0, 121)
        elif isinstance(energies, dict):
            energies = np.linspace(energies["start"], energies["stop"],
                                   int(energies["num"]))
        else:
            energies = np.asarray(energies, dtype=float)
        return cls(energies=energies,
                   epsilon=float(cfg.pop("epsilon", 0.06)),
                   method=cfg.pop("method", "dense-eig"))

    def to_config(self) -> dict:
        return {"energies": [float(e) for e in self.energies],
                "epsilon": self.epsilon, "method": self.method}


@dataclass
class ExperimentSpec:
    """Complete description of one campaign run; mirrors the JSON config."""

    campaign: str
    alpha: list = field(default_factory=lambda: [0.75])
    M: list = field(default_factory=lambda: [2.0])
    r_max: list = field(default_factory=lambda: [30.0])
    core_cut: float = 0.0
    ldos: LdosSettings = field(default_factory=LdosSettings)
    output_dir: str = "out"
    gap_grid_n: int = 60
    winding_grid_n: int = 40

    @classmethod
    def from_config(cls, cfg: dict) -> "ExperimentSpec":
        cfg = dict(cfg)
        campaign = cfg.pop("campaign")
        spec = default_spec(campaign, cfg.pop("output_dir", "out"))
        if "alpha" in cfg:
            spec.alpha = [float(a) for a in cfg.pop("alpha")]
        if "M" in cfg:
            spec.M = [float(m) for m in cfg.pop("M")]
        if "r_max" in cfg:
            spec.r_max = [float(r) for r in cfg.pop("r_max")]
        if "core_cut" in cfg:
            spec.core_cut = float(cfg.pop("core_cut"))
        if "ldos" in cfg:
            spec.ldos = LdosSettings.from_config(cfg.pop("ldos"))
        if "gap_grid_n" in cfg:
            spec.gap_grid_n = int(cfg.pop("gap_grid_n"))
        if "winding_grid_n" in cfg:
            spec.winding_grid_n = int(cfg.pop("winding_grid_n"))
        if cfg:
            raise ValueError(f"unknown config keys: {sorted(cfg)}")
        return spec

    @classmethod
    def from_json(cls, path) -> "ExperimentSpec":
        with Path(path).open() as fh:
            return cls.from_config(json.load(fh))

    def to_config(self) -> dict:
        return {
            "campaign": self.campaign,
            "alpha": [float(a) for a in self.alpha],
            "M": [float(m) for m in self.M],
            "r_max": [float(r) for r in self.r_max],
            "core_cut": self.core_cut,
            "ldos": self.ldos.to_config(),
            "output_dir": self.output_dir,
            "gap_grid_n": self.gap_grid_n,
            "winding_grid_n": self.winding_grid_n,
        }


def default_spec(campaign: str, output_dir: str = "out") -> ExperimentSpec:
    """Desk-scale defaults for each campaign (r_max 30; paper scale is 50)."""
    if campaign == "m_sweep":
        return ExperimentSpec(campaign=campaign, alpha=[0.75],
                              M=[4.0, 3.5, 3.0, 2.5, 2.0, 1.5],
                              r_max=[30.0], output_dir=output_dir)
    if campaign == "core_removal":
        return ExperimentSpec(campaign=campaign, alpha=[0.75], M=[2.0],
                              r_max=[20.0, 30.0], core_cut=2.5,
                              ldos=LdosSettings(energies=np.array([0.0]),
                                                method="shifted-solve"),
                              output_dir=output_dir)
    if campaign == "defect_sequence":
        return ExperimentSpec(campaign=campaign, alpha=[0.75, 0.5, 0.25],
                              M=[2.0], r_max=[30.0],
                              ldos=LdosSettings(energies=np.array([0.0]),
                                                method="shifted-solve"),
                              output_dir=output_dir)
    if campaign == "phase_diagram":
        return ExperimentSpec(campaign=campaign,
                              M=[-4.0, -3.0, -2.0, -1.0, 0.0,
                                 1.0, 2.0, 3.0, 4.0],
                              output_dir=output_dir)
    raise ValueError(f"unknown campaign {campaign!r}")


@dataclass
class Manifest:
    """Run record: the spec, one entry per job, and the produced files."""

    campaign: str
    spec: dict
    jobs: list

    @property
    def ok(self) -> bool:
        return all(j["status"] == "ok" for j in self.jobs)

    def write(self, out_dir: Path) -> Path:
        return dio.write_json(
            {"campaign": self.campaign, "spec": self.spec, "jobs": self.jobs},
            out_dir / "manifest.json",
        )


def _run_jobs(spec: ExperimentSpec, keys, worker) -> Manifest:
    """Run one job per key, isolating failures into the manifest."""
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = []
    for key in keys:
        entry = {"key": key, "status": "ok", "files": [], "summary": {}}
        try:
            files, summary = worker(key, out)
            entry["files"] = [str(Path(f).name) for f in files]
            entry["summary"] = summary
        except Exception as exc:  # isolate per-job failures
            entry["status"] = "failed"
            entry["error"] = f"{type(exc).__name__}: {exc}"
            entry["traceback"] = traceback.format_exc()
        jobs.append(entry)
    manifest = Manifest(campaign=spec.campaign, spec=spec.to_config(), jobs=jobs)
    manifest.write(out)
    return manifest


def _core_summary(grid) -> dict:
    """Zero-energy weight inside the core disk: site sum and per-site mean."""
    ie = int(np.argmin(np.abs(grid.energies)))
    mask = grid.radii < CORE_RADIUS
    vals = grid.values[ie, mask]
    return {
        "core_radius": CORE_RADIUS,
        "core_sites": int(mask.sum()),
        "core_ldos_sum": float(vals.sum()),
        "core_ldos_mean": float(vals.mean()) if mask.any() else None,
    }


def run_m_sweep(spec: ExperimentSpec) -> Manifest:
    """Radial LDOS profiles for each mass; one CSV per mass."""
    alpha, r_max = spec.alpha[0], spec.r_max[0]
    pattern = build_pattern(PatternParams(alpha=alpha, r_max=r_max,
                                          core_cut=spec.core_cut))

    def worker(mass, out: Path):
        op = assemble_defect(pattern, mass)
        grid = ldos(op, LdosRequest(energies=spec.ldos.energies,
                                    epsilon=spec.ldos.epsilon,
                                    method=spec.ldos.method))
        prof = radial_profile(grid)
        f = dio.write_radial_csv(prof, out / f"m_sweep_M{mass:g}_radial.csv")
        return [f], _core_summary(grid)

    return _run_jobs(spec, list(spec.M), worker)


def run_core_removal(spec: ExperimentSpec) -> Manifest:
    """Zero-energy site maps with the core removed, one per outer radius."""
    alpha, mass = spec.alpha[0], spec.M[0]

    def worker(r_max, out: Path):
        pattern = build_pattern(PatternParams(alpha=alpha, r_max=r_max,
                                              core_cut=spec.core_cut))
        op = assemble_defect(pattern, mass)
        grid = ldos(op, LdosRequest(energies=spec.ldos.energies,
                                    epsilon=spec.ldos.epsilon,
                                    method=spec.ldos.method))
        f = dio.write_ldos_csv(grid, out / f"core_removal_R{r_max:g}.csv")
        return [f], _core_summary(grid)

    return _run_jobs(spec, list(spec.r_max), worker)


def run_defect_sequence(spec: ExperimentSpec) -> Manifest:
    """Zero-energy site maps for a sequence of cone parameters."""
    mass, r_max = spec.M[0], spec.r_max[0]

    def worker(alpha, out: Path):
        pattern = build_pattern(PatternParams(alpha=alpha, r_max=r_max,
                                              core_cut=spec.core_cut))
        op = assemble_defect(pattern, mass)
        grid = ldos(op, LdosRequest(energies=spec.ldos.energies,
                                    epsilon=spec.ldos.epsilon,
                                    method=spec.ldos.method))
        f = dio.write_ldos_csv(grid, out / f"defect_sequence_alpha{alpha:g}.csv")
        return [f], _core_summary(grid)

    return _run_jobs(spec, list(spec.alpha), worker)


def run_phase_diagram(spec: ExperimentSpec) -> Manifest:
    """Gap and winding table over the mass grid; criticality is recorded."""
    rows = []

    def worker(mass, out: Path):
        model = torus3d_model(mass)
        gap = gap_scan(model, spec.gap_grid_n)
        row = {"M": float(mass), "gap": gap, "raw": None, "winding": None,
               "skipped": False}
        try:
            res = winding3d(model, spec.winding_grid_n)
            row["raw"] = res.raw
            row["winding"] = res.rounded
        except GapClosedError:
            row["skipped"] = True
        rows.append(row)
        return [], {k: row[k] for k in ("gap", "winding", "skipped")}

    manifest = _run_jobs(spec, list(spec.M), worker)
    out = Path(spec.output_dir)
    dio.write_json({"campaign": "phase_diagram", "spec": spec.to_config(),
                    "table": rows}, out / "phase_diagram.json")
    for job in manifest.jobs:
        job["files"] = ["phase_diagram.json"]
    manifest.write(out)
    return manifest


CAMPAIGNS = {
    "m_sweep": run_m_sweep,
    "core_removal": run_core_removal,
    "defect_sequence": run_defect_sequence,
    "phase_diagram": run_phase_diagram,
}


def run_campaign(spec: ExperimentSpec) -> Manifest:
    """Dispatch a spec to its campaign runner."""
    try:
        runner = CAMPAIGNS[spec.campaign]
    except KeyError:
        raise ValueError(f"unknown campaign {spec.campaign!r}") from None
    return runner(spec)

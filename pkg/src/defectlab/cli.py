"""Command-line interface.

Subcommands::

    defectlab pattern    --alpha 0.75 --r-max 30 --out DIR
    defectlab assemble   --alpha 0.75 --r-max 30 --mass 2 --out DIR
    defectlab ldos       --alpha 0.75 --r-max 30 --mass 2 --out DIR
    defectlab gap-scan   --mass 2 [--grid-n 60]
    defectlab winding    --mass 2 [--grid-n 40]
    defectlab campaign   NAME [--config FILE] [--out DIR]

``gap-scan`` and ``winding`` print a single JSON object to stdout; the
file-producing commands write CSVs plus a JSON metadata sidecar.  The
process exits nonzero if any requested job failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as dio
from .assembly import assemble_defect
from .bulk import GapClosedError, gap_scan, torus3d_model, winding3d
from .experiments import CAMPAIGNS, ExperimentSpec, default_spec, run_campaign
from .pattern import DEFAULT_WINDOW, PatternParams, build_pattern
from .spectral import LdosRequest, ldos, radial_profile


def _add_pattern_args(p: argparse.ArgumentParser):
    p.add_argument("--alpha", type=float, required=True,
                   help="cone parameter in (0, 1]")
    p.add_argument("--r-max", type=float, required=True,
                   help="outer radius cutoff")
    p.add_argument("--core-cut", type=float, default=0.0,
                   help="delete sites with radius below this value")
    p.add_argument("--window", type=float, nargs=2, default=DEFAULT_WINDOW,
                   metavar=("DMIN", "DMAX"),
                   help="nearest-neighbor distance window")


def _build(args) -> tuple:
    params = PatternParams(alpha=args.alpha, r_max=args.r_max,
                           core_cut=args.core_cut)
    return params, build_pattern(params, window=tuple(args.window))


def _cmd_pattern(args) -> int:
    _, pattern = _build(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = [dio.write_pattern_csv(pattern, out / "pattern.csv"),
             dio.write_adjacency_csv(pattern, out / "adjacency.csv")]
    print(json.dumps({"n_sites": pattern.n_sites,
                      "files": [str(f) for f in files]}))
    return 0


def _cmd_assemble(args) -> int:
    _, pattern = _build(args)
    op = assemble_defect(pattern, args.mass)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    if args.dump_operator:
        files.append(dio.write_operator_csv(op, out / "operator.csv"))
    meta = {"alpha": args.alpha, "r_max": args.r_max, "core_cut": args.core_cut,
            "mass": args.mass, "dim": op.dim, "n_sites": op.n_sites,
            "nnz_blocks": int(op.matrix.indices.size)}
    files.append(dio.write_json(meta, out / "assemble.meta.json"))
    print(json.dumps({"dim": op.dim, "files": [str(f) for f in files]}))
    return 0


def _cmd_ldos(args) -> int:
    _, pattern = _build(args)
    op = assemble_defect(pattern, args.mass)
    if args.energy is not None:
        energies = np.asarray(args.energy, dtype=float)
    else:
        start, stop, num = args.energies
        energies = np.linspace(start, stop, int(num))
    req = LdosRequest(energies=energies, epsilon=args.epsilon,
                      method=args.method)
    grid = ldos(op, req)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = [dio.write_ldos_csv(grid, out / "ldos.csv")]
    if args.radial:
        files.append(dio.write_radial_csv(radial_profile(grid),
                                          out / "ldos_radial.csv"))
    files.append(dio.write_json(
        {**grid.metadata, "energies": [float(e) for e in energies]},
        out / "ldos.meta.json"))
    print(json.dumps({"files": [str(f) for f in files]}))
    return 0


def _cmd_gap_scan(args) -> int:
    model = torus3d_model(args.mass)
    gap = gap_scan(model, args.grid_n)
    print(json.dumps({"M": args.mass, "grid_n": args.grid_n, "gap": gap}))
    return 0


def _cmd_winding(args) -> int:
    model = torus3d_model(args.mass)
    try:
        res = winding3d(model, args.grid_n)
    except GapClosedError as exc:
        print(json.dumps({"M": args.mass, "error": str(exc)}))
        return 1
    print(json.dumps({"M": args.mass, "raw": res.raw, "winding": res.rounded}))
    return 0


def _cmd_campaign(args) -> int:
    if args.config:
        spec = ExperimentSpec.from_json(args.config)
        if spec.campaign != args.name:
            raise SystemExit(
                f"config is for campaign {spec.campaign!r}, not {args.name!r}")
    else:
        spec = default_spec(args.name)
    if args.out:
        spec.output_dir = args.out
    manifest = run_campaign(spec)
    failed = [j["key"] for j in manifest.jobs if j["status"] != "ok"]
    print(json.dumps({"campaign": spec.campaign, "ok": manifest.ok,
                      "jobs": len(manifest.jobs), "failed": failed,
                      "output_dir": spec.output_dir}))
    return 0 if manifest.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="defectlab",
        description="Conical lattice defects: geometry, bulk invariants, "
                    "defect spectra.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pattern", help="export a defect pattern as CSV")
    _add_pattern_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_pattern)

    p = sub.add_parser("assemble", help="assemble the defect Hamiltonian")
    _add_pattern_args(p)
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--dump-operator", action="store_true",
                   help="write row,col,re,im triplets")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_assemble)

    p = sub.add_parser("ldos", help="compute LDOS maps")
    _add_pattern_args(p)
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--energies", type=float, nargs=3, default=(-3.0, 3.0, 121),
                   metavar=("START", "STOP", "NUM"))
    p.add_argument("--energy", type=float, action="append",
                   help="explicit energy value (repeatable); overrides "
                        "--energies")
    p.add_argument("--epsilon", type=float, default=0.06)
    p.add_argument("--method", choices=("dense-eig", "shifted-solve"),
                   default="dense-eig")
    p.add_argument("--radial", action="store_true",
                   help="also write the radially binned profile")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ldos)

    p = sub.add_parser("gap-scan", help="bulk half-gap over a momentum grid")
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--grid-n", type=int, default=60)
    p.set_defaults(func=_cmd_gap_scan)

    p = sub.add_parser("winding", help="3D winding number of the bulk model")
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--grid-n", type=int, default=40)
    p.set_defaults(func=_cmd_winding)

    p = sub.add_parser("campaign", help="run a parameter-sweep campaign")
    p.add_argument("name", choices=sorted(CAMPAIGNS))
    p.add_argument("--config", help="JSON config mirroring ExperimentSpec")
    p.add_argument("--out", help="output directory (overrides config)")
    p.set_defaults(func=_cmd_campaign)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

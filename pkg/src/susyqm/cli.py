"""Command-line driver.

Exit codes: 0 success, 1 quantitative failure, 2 usage error.  Every command
writes a flat ``key=value`` manifest next to its outputs (or prints it when no
output location is given); it holds no timestamps, so identical flags and seed
give identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .aufbau import (
    CONTEXTS,
    ORBITALS,
    attach_correlation,
    building_block,
    combine,
    context_for,
    regeneration_check,
)
from .diffops import ANALYTIC, NUMERIC, exchange_vector_field
from .geometry import random_shell_points
from .hydrogen import path_tolerance, sector_two_state, verify_consistency
from .helium import PadeJastrowParams
from .sampling import MetropolisConfig, SamplerQualityError, alpha_scan, thread_count

CSV_BANNER = f"# susyqm-kit v{'.'.join(__version__.split('.')[:2])}"
STATES = {"2s": "1,2s", "2px": "1,2p_x", "2py": "1,2p_y", "2pz": "1,2p_z"}
PLANES = {"xy": (0, 1), "xz": (0, 2), "yz": (1, 2), "x": (0,), "y": (1,), "z": (2,)}


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None = None
    version: str = __version__
    outputs: dict = field(default_factory=dict)

    def add_output(self, path: Path) -> None:
        self.outputs[path.name] = hashlib.sha256(path.read_bytes()).hexdigest()

    def render(self) -> str:
        lines = [f"command={self.command}", f"version={self.version}", f"seed={self.seed}"]
        lines += [f"param.{k}={v}" for k, v in sorted(self.parameters.items())]
        lines += [f"output.{k}=sha256:{v}" for k, v in sorted(self.outputs.items())]
        return "\n".join(lines) + "\n"

    def emit(self, path: Path | None) -> None:
        if path is None:
            sys.stdout.write("# manifest\n" + self.render())
        else:
            path.write_text(self.render(), encoding="utf-8", newline="\n")


def fmt(v: float) -> str:
    """Shortest round-trip decimal, independent of locale."""
    return repr(float(v) + 0.0)


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_BANNER + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")


def positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0 or not np.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return v


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def nonnegative_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return v


def alpha_list(text: str) -> list[float]:
    return [positive_float(t) for t in text.split(",") if t.strip()]


def _out_dir(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


# -- verify-hydrogen ----------------------------------------------------------


def cmd_verify_hydrogen(args) -> int:
    scheme = ANALYTIC if args.path == "analytic" else NUMERIC
    tol = path_tolerance(scheme)
    bundle = verify_consistency(scheme, args.points, args.seed)
    failed = False
    rows = []
    print(f"hydrogen checks, path={args.path}, points={args.points}, seed={args.seed}, tolerance={tol:g}")
    print(f"{'check':42s} {'max':>12s} {'mean':>12s}  status")
    for name, rep in bundle.items():
        ok = rep.passes(tol)
        failed |= not ok
        status = "PASS" if ok else "FAIL"
        print(f"{name:42s} {rep.max_relative_residual:12.3e} {rep.mean_relative_residual:12.3e}  {status}")
        rows.append([name, rep.max_relative_residual, rep.mean_relative_residual, status])
    manifest = RunManifest("verify-hydrogen", {"path": args.path, "points": args.points}, args.seed)
    out = _out_dir(args.out)
    if out is not None:
        p = out / "hydrogen_checks.csv"
        write_csv(p, ["check", "max_residual", "mean_residual", "status"], rows)
        manifest.add_output(p)
    manifest.emit(None if out is None else out / "manifest.txt")
    return 1 if failed else 0


# -- sector2-export -----------------------------------------------------------


def grid_axis(half_extent: float, resolution: int) -> np.ndarray:
    """Sample coordinates symmetric about zero to the last bit."""
    if resolution % 2:
        half = np.linspace(0.0, half_extent, (resolution + 1) // 2)
        return np.concatenate([-half[:0:-1], half])
    step = 2 * half_extent / (resolution - 1)
    half = step / 2 + step * np.arange(resolution // 2)
    return np.concatenate([-half[::-1], half])


def grid_points(plane: str, center, half_extent: float, resolution: int):
    axes = PLANES[plane]
    ax = grid_axis(half_extent, resolution)
    if len(axes) == 2:
        uu, vv = np.meshgrid(ax, ax, indexing="ij")
        coords = [uu.ravel(), vv.ravel()]
    else:
        coords = [ax]
    pts = np.tile(np.asarray(center, dtype=float), (len(coords[0]), 1))
    for a, c in zip(axes, coords):
        pts[:, a] = pts[:, a] + c
    return coords, pts


def cmd_sector2_export(args) -> int:
    st = sector_two_state(STATES[args.state])
    coords, pts = grid_points(args.plane, args.center, args.extent, args.resolution)
    values = st.field.value(pts)
    out = _out_dir(args.out)
    params = {
        "state": args.state,
        "plane": args.plane,
        "center": ",".join(fmt(c) for c in args.center),
        "extent": fmt(args.extent),
        "resolution": args.resolution,
    }
    manifest = RunManifest("sector2-export", params)
    header = ["u", "v", "value"] if len(coords) == 2 else ["u", "value"]
    for comp, name in enumerate("xyz"):
        p = out / f"{args.state}_{args.plane}_{name}.csv"
        write_csv(p, header, zip(*coords, values[:, comp]))
        manifest.add_output(p)
        print(f"wrote {p.name}: {len(pts)} rows, component {name} in [{values[:, comp].min():.6g}, {values[:, comp].max():.6g}]")
    manifest.emit(out / "manifest.txt")
    return 0


# -- vmc-helium ---------------------------------------------------------------


def cmd_vmc_helium(args) -> int:
    alphas = args.scan if args.scan else [args.alpha]
    cfg = MetropolisConfig(
        steps_per_walker=args.steps,
        burn_in=args.burn,
        n_walkers=args.walkers,
        step_size=args.step_size,
        seed=args.seed,
    )
    try:
        scan = alpha_scan(alphas, cfg, workers=thread_count())
    except SamplerQualityError as exc:
        print(f"sampler quality failure: {exc}", file=sys.stderr)
        return 1
    print(f"{'alpha':>8s} {'mean (Ha)':>14s} {'std_error':>11s} {'acceptance':>10s} {'blocks':>6s} {'samples':>9s}")
    rows = []
    for a, est in scan.curve:
        print(f"{a:8.4f} {est.mean:14.6f} {est.std_error:11.6f} {est.acceptance_rate:10.4f} {est.blocks:6d} {est.n_samples:9d}")
        rows.append([a, est.mean, est.std_error, est.acceptance_rate, est.blocks, est.n_samples])
    if args.scan:
        print(f"argmin alpha = {scan.argmin:g}")
    params = {
        "alphas": ",".join(fmt(a) for a in alphas),
        "walkers": args.walkers,
        "steps": args.steps,
        "burn": args.burn,
        "step_size": fmt(args.step_size),
    }
    manifest = RunManifest("vmc-helium", params, args.seed)
    if args.out:
        p = Path(args.out)
        p.parent.mkdir(parents=True, exist_ok=True)
        write_csv(p, ["alpha", "mean", "std_error", "acceptance", "blocks", "n_samples"], rows)
        manifest.add_output(p)
        manifest.emit(p.with_name(p.name + ".manifest"))
    else:
        manifest.emit(None)
    return 0


# -- aufbau -------------------------------------------------------------------


def cmd_aufbau(args) -> int:
    ctx = context_for(args.context, args.delta)
    block = building_block(ctx, ORBITALS[args.orbital1](), ORBITALS[args.orbital2]())
    state = combine(block, args.mode)
    if args.correlated:
        state = attach_correlation(state, PadeJastrowParams(args.delta))
    x = random_shell_points(np.random.default_rng(args.seed), args.points, 2, 0.1, 6.0)
    values = state.field.value(x)
    swapped = exchange_vector_field(state.field).value(x)
    sign = -1.0 if args.mode == "triplet" else 1.0
    sym_ok = bool(np.array_equal(swapped, sign * values))
    label = "antisymmetric" if sign < 0 else "symmetric"
    print(f"state={state.kind} context={args.context} points={args.points}")
    print(f"exchange symmetry ({label}): {'PASS' if sym_ok else 'FAIL'}")
    if args.check_regeneration:
        rep = regeneration_check(ctx, combine(block, args.mode), x)
        print(f"regeneration: cosine similarity {rep.cosine_similarity:.12f}, best-fit scale {rep.scale:.12g}")
    params = {
        "mode": args.mode,
        "context": args.context,
        "correlated": args.correlated,
        "delta": fmt(args.delta),
        "points": args.points,
        "orbitals": f"{args.orbital1},{args.orbital2}",
    }
    manifest = RunManifest("aufbau", params, args.seed)
    out = _out_dir(args.out)
    if out is not None:
        p = out / f"aufbau_{state.kind}.csv"
        header = ["x1", "y1", "z1", "x2", "y2", "z2", "F1", "F2", "F3", "F4", "F5", "F6"]
        write_csv(p, header, np.hstack([x, values]))
        manifest.add_output(p)
    manifest.emit(None if out is None else out / "manifest.txt")
    return 0 if sym_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="susyqm", description="SUSY-QM toolkit for hydrogen and helium")
    parser.add_argument("--version", action="version", version=f"susyqm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-hydrogen", help="residual checks for the hydrogen catalog")
    p.add_argument("--path", choices=("analytic", "numeric"), default="analytic")
    p.add_argument("--points", type=positive_int, default=1000)
    p.add_argument("--seed", type=nonnegative_int, default=0)
    p.add_argument("--out", default=None, help="directory for the residual table and manifest")
    p.set_defaults(func=cmd_verify_hydrogen)

    p = sub.add_parser("sector2-export", help="grid export of a sector-two hydrogen state")
    p.add_argument("--state", choices=tuple(STATES), required=True)
    p.add_argument("--plane", choices=tuple(PLANES), default="xy")
    p.add_argument("--center", type=float, nargs=3, default=(0.0, 0.0, 0.0))
    p.add_argument("--extent", type=positive_float, default=10.0, help="half extent in Bohr")
    p.add_argument("--resolution", type=positive_int, default=201)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sector2_export)

    p = sub.add_parser("vmc-helium", help="variational Monte Carlo for the Padé-Jastrow helium state")
    p.add_argument("--alpha", type=positive_float, default=None)
    p.add_argument("--scan", type=alpha_list, default=None, help="comma-separated alpha grid")
    p.add_argument("--walkers", type=positive_int, default=64)
    p.add_argument("--steps", type=positive_int, default=20000)
    p.add_argument("--burn", type=nonnegative_int, default=2000)
    p.add_argument("--step-size", type=positive_float, default=0.5)
    p.add_argument("--seed", type=nonnegative_int, default=0)
    p.add_argument("--out", default=None, help="CSV file for the alpha curve")
    p.set_defaults(func=cmd_vmc_helium)

    p = sub.add_parser("aufbau", help="build singlet/triplet sector-two trial states")
    p.add_argument("--mode", choices=("triplet", "singlet"), required=True)
    p.add_argument("--context", choices=CONTEXTS, default="pj")
    p.add_argument("--correlated", action="store_true")
    p.add_argument("--delta", type=positive_float, default=0.353)
    p.add_argument("--check-regeneration", action="store_true")
    p.add_argument("--orbital1", choices=tuple(ORBITALS), default="alpha_1s")
    p.add_argument("--orbital2", choices=tuple(ORBITALS), default="beta_2s")
    p.add_argument("--points", type=positive_int, default=100)
    p.add_argument("--seed", type=nonnegative_int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_aufbau)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "vmc-helium":
        if args.burn >= args.steps:
            parser.error("--burn must be smaller than --steps")
        if args.alpha is None and not args.scan:
            parser.error("give --alpha or --scan")
    if args.command == "sector2-export" and args.resolution < 2:
        parser.error("--resolution must be at least 2")
    try:
        return args.func(args)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: simulate | sweep | paths | uncertainty.  Config-driven
commands take --config plus optional --out (overrides the output
directory), --seed (overrides paths.seed), and --threads (kernel worker
count; results are identical for any value).

Exit codes: 0 success; 2 unusable input (missing/invalid config file,
schema violation, bad uncertainty arguments); 3 physically invalid
configuration; 4 internal numerical failure.

All artifacts are computed fully before anything is written, and each
file goes through a temp-file + atomic rename, so a failed run leaves
no partial outputs.  Floats are serialized with repr (shortest
round-trip decimal); CSV uses LF line endings; JSON keys keep insertion
order.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, analysis, kernels, scenario
from . import paths as paths_mod
from .apparatus import validate
from .config import RunConfig, load_config
from .errors import (
    ConfigError,
    InvalidArgumentError,
    InvalidStateError,
    NoFringesError,
    NumericalError,
    PhysicsValidationError,
)
from .paths import SpacetimeEvent
from .uncertainty import packet_uncertainties

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PHYSICS = 3
EXIT_NUMERICAL = 4

SCREEN_PATH_TARGETS = 5


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _csv_text(header: Sequence[str], columns: Sequence[np.ndarray]) -> str:
    lines = [",".join(header)]
    n = len(columns[0])
    for i in range(n):
        lines.append(",".join(_fmt(col[i]) for col in columns))
    return "\n".join(lines) + "\n"


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _svg_text(x: np.ndarray, series: dict[str, np.ndarray]) -> str:
    """Minimal multi-polyline plot; cosmetic only."""
    width, height, pad = 800.0, 400.0, 40.0
    x0, x1 = float(x[0]), float(x[-1])
    ymax = max(float(np.max(v)) for v in series.values()) or 1.0
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:g} {height:g}">',
        f'<rect width="{width:g}" height="{height:g}" fill="white"/>',
    ]
    for i, (label, v) in enumerate(series.items()):
        pts = []
        for xi, vi in zip(x, v):
            px = pad + (xi - x0) / (x1 - x0) * (width - 2 * pad)
            py = height - pad - (vi / ymax) * (height - 2 * pad)
            pts.append(f"{px:.2f},{py:.2f}")
        color = colors[i % len(colors)]
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{" ".join(pts)}"/>'
        )
        parts.append(
            f'<text x="{pad + 4:g}" y="{pad + 14 * (i + 1):g}" fill="{color}" '
            f'font-size="12">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _onset_payload(report: analysis.OnsetReport) -> dict:
    return {
        "onset_side": report.onset_side,
        "visibility_centroid_x": report.visibility_centroid_x,
        "asymmetry_index": report.asymmetry_index,
    }


def _validated(cfg: RunConfig) -> None:
    report = validate(cfg.apparatus, cfg.detector, cfg.particle)
    if not report.ok:
        raise PhysicsValidationError(report)


def _simulate_artifacts(cfg: RunConfig) -> dict[str, str]:
    """Compute every simulate artifact as text; raises before writing
    anything on any failure."""
    app, det, part, ana = cfg.apparatus, cfg.detector, cfg.particle, cfg.analysis
    report = validate(app, det, part)
    if not report.ok:
        raise PhysicsValidationError(report)

    two = scenario.two_slit_amplitude(app, part)
    i_two = analysis.intensity(two.field)
    x = i_two.x
    zeros = np.zeros_like(i_two.values)

    summary: dict = {"config_valid": True, "detector_enabled": det.enabled}
    vis: dict = {}
    try:
        summary["fringe_spacing_no_detector"] = analysis.fringe_spacing(i_two)
    except NoFringesError:
        summary["fringe_spacing_no_detector"] = None
    vis["no_detector"] = analysis.visibility(i_two, ana.central_window)

    if det.enabled:
        p_det = scenario.detection_probability(app, det, part)
        null_cf = scenario.null_channel_amplitude(app, det, part)
        det_cf = scenario.detected_channel_amplitude(app, det, part)
        i_null = analysis.intensity(null_cf.field)
        i_det = analysis.intensity(det_cf.field)
        i_comb = scenario.combined_intensity(null_cf, det_cf, p_det)
        i_kick = scenario.kick_reference_intensity(app, det, part)
        vis["null"] = analysis.visibility(i_null, ana.central_window)
        vis["detected"] = analysis.visibility(i_det, ana.central_window)
        vis["combined"] = analysis.visibility(i_comb, ana.central_window)
        vis["kick_reference"] = analysis.visibility(i_kick, ana.central_window)
        i_a = analysis.intensity(scenario.one_slit_amplitude(app, part, "A").field)
        det_base = scenario.detected_channel_amplitude(app, det, part, include_trapped=False)
        i_det_base = analysis.intensity(det_base.field)
        summary["p_det"] = p_det
        summary["onset_null"] = _onset_payload(
            analysis.onset_metrics(i_null, i_a, ana.local_window_width, ana.onset_threshold)
        )
        summary["onset_detected"] = _onset_payload(
            analysis.onset_metrics(i_det, i_det_base, ana.local_window_width, ana.onset_threshold)
        )
        col_null, col_det = i_null.values, i_det.values
        col_comb, col_kick = i_comb.values, i_kick.values
    else:
        # Detector-off runs still emit all columns; the channel columns
        # are zero and the summary says why.
        summary["p_det"] = None
        summary["note"] = "detector disabled: channel columns are zero"
        col_null = col_det = col_comb = col_kick = zeros
    summary["visibility"] = vis
    summary["warnings"] = [
        {"code": issue.code, "message": issue.message} for issue in report.warnings()
    ]

    for name, col in [
        ("I_no_detector", i_two.values),
        ("I_null", col_null),
        ("I_detected", col_det),
        ("I_combined", col_comb),
        ("I_kick_reference", col_kick),
    ]:
        if not bool(np.all(np.isfinite(col))):
            raise NumericalError(f"non-finite values in {name}")

    artifacts: dict[str, str] = {}
    if cfg.output.emit_csv:
        artifacts["intensity.csv"] = _csv_text(
            ["x_bohr", "I_no_detector", "I_null", "I_detected", "I_combined", "I_kick_reference"],
            [x, i_two.values, col_null, col_det, col_comb, col_kick],
        )
    if cfg.output.emit_json:
        artifacts["summary.json"] = _json_text(summary)
    if cfg.output.emit_svg:
        artifacts["intensity.svg"] = _svg_text(
            x,
            {
                "I_no_detector": i_two.values,
                "I_null": col_null,
                "I_detected": col_det,
                "I_combined": col_comb,
                "I_kick_reference": col_kick,
            },
        )
    return artifacts


def cmd_simulate(cfg: RunConfig) -> int:
    artifacts = _simulate_artifacts(cfg)
    out = Path(cfg.output.directory)
    for name, text in artifacts.items():
        _write_atomic(out / name, text)
    return EXIT_OK


def _sweep_artifacts(cfg: RunConfig) -> dict[str, str]:
    if cfg.sweep_d_values is None:
        raise ConfigError("sweep.d_values", "missing required key for the sweep command")
    if len(cfg.sweep_d_values) < 2:
        raise ConfigError("sweep.d_values", "need at least 2 entries")
    _validated(cfg)
    ana = cfg.analysis
    table = analysis.sweep_interslit(
        cfg.apparatus,
        cfg.detector,
        cfg.particle,
        list(cfg.sweep_d_values),
        central_window=ana.central_window,
        local_window_width=ana.local_window_width,
        onset_threshold=ana.onset_threshold,
    )
    cols = analysis.SweepTable.COLUMNS
    lines = [",".join(cols)]
    for row in table.rows:
        lines.append(",".join(_fmt(getattr(row, c)) for c in cols))
    onset_d = None
    for row in table.rows:
        if row.visibility_combined > ana.onset_threshold:
            onset_d = row.d
            break
    digest = {
        "onset_threshold": ana.onset_threshold,
        "onset_d": onset_d,
        "d_values": list(cfg.sweep_d_values),
    }
    artifacts: dict[str, str] = {}
    if cfg.output.emit_csv:
        artifacts["sweep.csv"] = "\n".join(lines) + "\n"
    if cfg.output.emit_json:
        artifacts["sweep_digest.json"] = _json_text(digest)
    return artifacts


def cmd_sweep(cfg: RunConfig) -> int:
    artifacts = _sweep_artifacts(cfg)
    out = Path(cfg.output.directory)
    for name, text in artifacts.items():
        _write_atomic(out / name, text)
    return EXIT_OK


def _bundle_rows(bundle_id: str, bundle: paths_mod.PathBundle, lines: list[str]) -> None:
    for pid, path in enumerate(bundle.paths):
        flag = "true" if path.truncated else "false"
        for k, ev in enumerate(path.events):
            lines.append(f"{bundle_id},{pid},{k},{_fmt(ev.z)},{_fmt(ev.x)},{flag}")


def _paths_artifacts(cfg: RunConfig, seed_override: int | None) -> dict[str, str]:
    if cfg.paths is None:
        raise ConfigError("paths", "missing required section for the paths command")
    _validated(cfg)
    app, det, part = cfg.apparatus, cfg.detector, cfg.particle
    ps = cfg.paths
    seed = ps.seed if seed_override is None else seed_override
    v = part.velocity
    t1 = app.L1 / v
    t2 = app.L2 / v

    source = SpacetimeEvent(x=app.source_x, z=0.0, t=0.0)
    at_a = SpacetimeEvent(x=app.slit_A_center, z=app.L1, t=t1)
    at_b = SpacetimeEvent(x=app.slit_B_center, z=app.L1, t=t1)

    s_to_a = paths_mod.sample_bundle(source, at_a, ps.n_paths, ps.n_slices, part, seed, stream=0)
    if det.enabled:
        # B-bound paths terminate at interaction sites spread across the
        # disc.  A per-path linear tilt moves the endpoint; a bridge plus
        # a linear drift is still a bridge, so statistics are unchanged.
        eps = det.depth_epsilon
        t_disc = (app.L1 + eps) / v
        disc_center = SpacetimeEvent(x=app.slit_B_center, z=app.L1 + eps, t=t_disc)
        base = paths_mod.sample_bundle(
            source, disc_center, ps.n_paths, ps.n_slices, part, seed, stream=1
        )
        n = ps.n_paths
        site_offsets = [det.radius_rho * (2.0 * (j + 0.5) / n - 1.0) for j in range(n)]
        tilted = []
        for u, path in zip(site_offsets, base.paths):
            events = tuple(
                SpacetimeEvent(x=ev.x + u * (ev.t / t_disc), z=ev.z, t=ev.t)
                for ev in path.events
            )
            tilted.append(paths_mod.Path(events=events))
        s_to_b = paths_mod.truncate_bundle(
            paths_mod.PathBundle(
                start=source, end=disc_center, paths=tuple(tilted), seed=seed
            ),
            disc_center_x=app.slit_B_center,
            disc_center_z=app.L1 + eps,
            radius=det.radius_rho,
        )
    else:
        s_to_b = paths_mod.sample_bundle(
            source, at_b, ps.n_paths, ps.n_slices, part, seed, stream=1
        )

    targets = np.linspace(app.screen_min, app.screen_max, SCREEN_PATH_TARGETS)
    a_bundles = []
    b_bundles = []
    for k, xt in enumerate(targets):
        hit = SpacetimeEvent(x=float(xt), z=app.L1 + app.L2, t=t1 + t2)
        a_bundles.append(
            paths_mod.sample_bundle(at_a, hit, ps.n_paths, ps.n_slices, part, seed, stream=2 + k)
        )
        b_bundles.append(
            paths_mod.sample_bundle(
                at_b, hit, ps.n_paths, ps.n_slices, part, seed,
                stream=2 + SCREEN_PATH_TARGETS + k,
            )
        )

    lines = ["bundle_id,path_id,point_index,z_bohr,x_bohr,truncated"]
    _bundle_rows("S_to_A", s_to_a, lines)
    _bundle_rows("S_to_B", s_to_b, lines)
    for k, b in enumerate(a_bundles):
        _bundle_rows(f"A_to_screen_{k}", b, lines)
    for k, b in enumerate(b_bundles):
        _bundle_rows(f"B_to_screen_{k}", b, lines)

    # How often do B-bound paths cross the A-side paths heading for the
    # screen.  Behind the barrier the bundles are well separated unless
    # the slit spacing shrinks to the disc scale, so the total drops to
    # zero exactly when the disc stops seeing A-side amplitude.
    pairs: dict[str, int] = {}
    total = 0
    for k, b in enumerate(a_bundles):
        n, _ = paths_mod.crossing_count(s_to_b, b)
        pairs[f"S_to_B x A_to_screen_{k}"] = n
        total += n
    crossings = {"seed": seed, "pairs": pairs, "total": total}

    artifacts: dict[str, str] = {}
    if cfg.output.emit_csv:
        artifacts["paths.csv"] = "\n".join(lines) + "\n"
    if cfg.output.emit_json:
        artifacts["crossings.json"] = _json_text(crossings)
    return artifacts


def cmd_paths(cfg: RunConfig, seed_override: int | None = None) -> int:
    artifacts = _paths_artifacts(cfg, seed_override)
    out = Path(cfg.output.directory)
    for name, text in artifacts.items():
        _write_atomic(out / name, text)
    return EXIT_OK


def cmd_uncertainty(confinement_size: float, mass: float, kinetic_energy: float) -> int:
    from .apparatus import make_particle

    particle = make_particle(mass=mass, kinetic_energy=kinetic_energy)
    rep = packet_uncertainties(particle, confinement_size)
    payload = {
        "confinement_size": rep.confinement_size,
        "delta_p": rep.delta_p,
        "delta_x": rep.delta_x,
        "delta_E": rep.delta_E,
        "delta_t": rep.delta_t,
    }
    print(json.dumps(payload))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twoslit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"twoslit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("simulate", "sweep", "paths"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to a JSON run config")
        p.add_argument("--out", help="output directory (overrides output.directory)")
        p.add_argument("--seed", type=int, help="RNG seed (overrides paths.seed)")
        p.add_argument("--threads", type=int, help="kernel worker count; does not affect results")

    u = sub.add_parser("uncertainty")
    u.add_argument("D", type=float, help="confinement size in bohr")
    u.add_argument("mass", type=float)
    u.add_argument("kinetic_energy", type=float)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if kernels.BACKEND_ERROR is not None:
        print(f"error: {kernels.BACKEND_ERROR}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "uncertainty":
        try:
            return cmd_uncertainty(args.D, args.mass, args.kinetic_energy)
        except InvalidArgumentError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE

    try:
        cfg = load_config(args.config)
        if args.out is not None:
            from dataclasses import replace

            cfg = replace(cfg, output=replace(cfg.output, directory=args.out))
        if args.threads is not None:
            kernels.set_threads(args.threads)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        return cmd_paths(cfg, seed_override=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PhysicsValidationError as exc:
        print(f"invalid physics configuration: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except (InvalidArgumentError, InvalidStateError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

"""Batch front-end: JSON config ingestion, subcommand dispatch, and
machine-readable outputs.

Results go to stdout as JSON (or to --out FILE); scans can also be written
as RFC-4180 CSV with --csv FILE.  Human-readable diagnostics go to stderr.
Exit codes: 0 success, 1 domain/numerical errors, 2 usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__, linalg, model, resonance, resolvent, spectral
from .model import ConfigError, PointConfig

__all__ = ["RunManifest", "parse_config", "dispatch", "main"]


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility stamp embedded verbatim in every output."""

    command: str
    config_path: str
    parameters: dict
    tool_version: str = __version__
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config_path": self.config_path,
            "parameters": self.parameters,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
        }


def _require_finite_number(value, pointer: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError("must be a number", pointer)
    value = float(value)
    if not np.isfinite(value):
        raise ConfigError("must be finite", pointer)
    return value


def parse_config(path: str) -> PointConfig:
    """Load and validate the JSON config {"alpha": [...], "points": [[x,y,z], ...]}.

    Raises ConfigError with a JSON pointer to the offending field.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}")

    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    for key in ("alpha", "points"):
        if key not in doc:
            raise ConfigError("missing required field", f"/{key}")
    if not isinstance(doc["alpha"], list) or not doc["alpha"]:
        raise ConfigError("must be a non-empty list", "/alpha")
    if not isinstance(doc["points"], list) or not doc["points"]:
        raise ConfigError("must be a non-empty list", "/points")

    alpha = [
        _require_finite_number(a, f"/alpha/{i}") for i, a in enumerate(doc["alpha"])
    ]
    points = []
    for i, row in enumerate(doc["points"]):
        if not isinstance(row, list) or len(row) != 3:
            raise ConfigError("must be a list of three coordinates", f"/points/{i}")
        points.append(
            [_require_finite_number(c, f"/points/{i}/{j}") for j, c in enumerate(row)]
        )
    if len(points) != len(alpha):
        raise ConfigError(
            f"length {len(points)} does not match alpha length {len(alpha)}", "/points"
        )
    return PointConfig(alpha=np.array(alpha), points=np.array(points))


def _c2j(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _matrix2j(m: np.ndarray) -> dict:
    m = np.asarray(m)
    return {
        "re": [[float(v) for v in row] for row in m.real],
        "im": [[float(v) for v in row] for row in m.imag],
    }


def _parse_tuple(text: str, parts: int, flag: str) -> list[float]:
    pieces = text.split(",")
    if len(pieces) != parts:
        raise ConfigError(f"{flag} expects {parts} comma-separated numbers, got {text!r}")
    try:
        return [float(p) for p in pieces]
    except ValueError:
        raise ConfigError(f"{flag} expects numbers, got {text!r}")


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [f"{v:.17g}" if isinstance(v, float) else v for v in row]
            )


def _cmd_spectrum(args) -> dict:
    cfg = parse_config(args.config)
    report = spectral.negative_eigenvalues(cfg, tol=args.tol)
    return {
        "eigenvalues": [
            {
                "lambda": rec.lam,
                "energy": rec.energy,
                "multiplicity": rec.multiplicity,
                "coefficients": [[float(v) for v in c] for c in rec.coefficients],
            }
            for rec in report.eigenvalues
        ]
    }


def _cmd_classify_zero(args) -> dict:
    cfg = parse_config(args.config)
    cls = spectral.classify_zero(cfg, tol=args.tol)
    return {
        "label": cls.label,
        "kernel_dim": cls.kernel_dim,
        "eigenvalue_multiplicity": cls.eigenvalue_multiplicity,
        "resonance_present": cls.resonance_present,
        "kernel": [[float(v) for v in vec] for vec in cls.kernel],
    }


def _cmd_laurent(args) -> dict:
    cfg = parse_config(args.config)
    coeffs = spectral.laurent_at_zero(cfg, radius=args.radius, nodes=args.nodes)
    return {
        "radius": coeffs.radius,
        "nodes": coeffs.nodes,
        "stable": coeffs.stable,
        "A_minus2": _matrix2j(coeffs.A_minus2),
        "A_minus1": _matrix2j(coeffs.A_minus1),
        "norm_A_minus2": float(np.abs(coeffs.A_minus2).max()),
        "norm_A_minus1": float(np.abs(coeffs.A_minus1).max()),
    }


def _cmd_resonances(args) -> dict:
    cfg = parse_config(args.config)
    box = resonance.Box(*args.box)
    found = resonance.find_resonances(cfg, box, tol=args.tol)
    return {
        "box": {
            "re_min": found.searched.re_min,
            "re_max": found.searched.re_max,
            "im_min": found.searched.im_min,
            "im_max": found.searched.im_max,
        },
        "total_count": found.total_count,
        "roots": [
            {
                "z": _c2j(r.z),
                "multiplicity": r.multiplicity,
                "abs_det": r.abs_det,
                "sigma_min": r.sigma_min,
                "kind": r.kind,
            }
            for r in found.roots
        ],
    }


def _cmd_certify(args) -> dict:
    cfg = parse_config(args.config)
    z_max = None
    if args.zmax != "auto":
        try:
            z_max = float(args.zmax)
        except ValueError:
            raise ConfigError(f"--zmax expects 'auto' or a number, got {args.zmax!r}")
    cert = resonance.certify_real_axis(cfg, grid_step=args.grid, z_max=z_max)
    if args.csv:
        _write_csv(
            args.csv,
            ["z", "sigma_min", "cholesky_ok"],
            zip(
                (float(z) for z in cert.z_grid),
                (float(s) for s in cert.sigma_min),
                (int(ok) for ok in cert.cholesky_ok),
            ),
        )
    return {
        "z_star": cert.z_star,
        "verdict": cert.verdict,
        "threshold": cert.threshold,
        "grid_step": cert.grid_step,
        "grid_covers_bound": cert.grid_covers_bound,
        "num_grid_points": int(cert.z_grid.size),
        "min_sigma_min": float(cert.sigma_min.min()) if cert.sigma_min.size else None,
        "all_cholesky_ok": bool(np.all(cert.cholesky_ok)),
        "z_grid": [float(v) for v in cert.z_grid],
        "sigma_min": [float(v) for v in cert.sigma_min],
        "cholesky_ok": [bool(v) for v in cert.cholesky_ok],
    }


def _cmd_resolvent(args) -> dict:
    cfg = parse_config(args.config)
    zre, zim = _parse_tuple(args.z, 2, "--z")
    z = complex(zre, zim)
    x = _parse_tuple(args.x, 3, "--x")
    xp = _parse_tuple(args.xp, 3, "--xp")
    value = resolvent.resolvent_kernel(cfg, z, x, xp)
    out = {
        "z": _c2j(z),
        "x": x,
        "xp": xp,
        "value": _c2j(value),
        "free_kernel": _c2j(model.green_kernel(z, x, xp)),
    }
    if args.check_helmholtz is not None:
        out["helmholtz_residual"] = resolvent.helmholtz_residual(
            cfg, z, x, xp, h=args.check_helmholtz
        )
    return out


def _cmd_scan_det(args) -> dict:
    cfg = parse_config(args.config)
    if args.step <= 0.0:
        raise ConfigError("--step must be positive")
    if args.stop < args.start:
        raise ConfigError("--to must be >= --from")
    count = int(np.floor((args.stop - args.start) / args.step + 1e-12)) + 1
    ts = args.start + args.step * np.arange(count)
    zs = ts.astype(complex) if args.axis == "real" else 1j * ts
    gs = model.gamma_stack(cfg, zs)
    dets = np.linalg.det(gs)
    sigmas = np.linalg.svd(gs, compute_uv=False)[:, -1]
    rows = [
        {
            "z": float(t),
            "re_det": float(d.real),
            "im_det": float(d.imag),
            "abs_det": float(abs(d)),
            "sigma_min": float(s),
        }
        for t, d, s in zip(ts, dets, sigmas)
    ]
    if args.csv:
        _write_csv(
            args.csv,
            ["z", "re_det", "im_det", "abs_det", "sigma_min"],
            (
                (r["z"], r["re_det"], r["im_det"], r["abs_det"], r["sigma_min"])
                for r in rows
            ),
        )
    return {"axis": args.axis, "from": args.start, "to": args.stop, "step": args.step, "rows": rows}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltaspec",
        description="Spectral analysis of the 3D Laplacian with point interactions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("config", help="JSON config file")
        p.add_argument("--out", help="write JSON result to FILE instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("spectrum", _cmd_spectrum, help="negative eigenvalues with multiplicities")
    p.add_argument("--tol", type=float, default=1e-10)

    p = add("classify-zero", _cmd_classify_zero, help="threshold status at z = 0")
    p.add_argument("--tol", type=float, default=1e-10)

    p = add("laurent", _cmd_laurent, help="Laurent coefficients of Gamma^-1 at 0")
    p.add_argument("--radius", type=float, default=1e-2)
    p.add_argument("--nodes", type=int, default=64)

    p = add("resonances", _cmd_resonances, help="zeros of det Gamma in a box")
    p.add_argument(
        "--box",
        type=float,
        nargs=4,
        required=True,
        metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"),
    )
    p.add_argument("--tol", type=float, default=1e-10)

    p = add("certify", _cmd_certify, help="real-axis non-singularity certificate")
    p.add_argument("--zmax", default="auto", help="'auto' (analytic bound) or a number")
    p.add_argument("--grid", type=float, default=None, help="grid step")
    p.add_argument("--csv", help="also write z,sigma_min,cholesky_ok as CSV")

    p = add("resolvent", _cmd_resolvent, help="perturbed resolvent kernel value")
    p.add_argument("--z", required=True, help="spectral parameter RE,IM")
    p.add_argument("--x", required=True, help="evaluation point X,Y,Z")
    p.add_argument("--xp", required=True, help="source point X,Y,Z")
    p.add_argument(
        "--check-helmholtz",
        type=float,
        default=None,
        metavar="H",
        help="also report the finite-difference Helmholtz residual at step H",
    )

    p = add("scan-det", _cmd_scan_det, help="scan det Gamma along an axis")
    p.add_argument("--axis", choices=["real", "imag"], required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--csv", help="also write the scan as CSV")

    return parser


_PARAMETER_KEYS = {
    "spectrum": ["tol"],
    "classify-zero": ["tol"],
    "laurent": ["radius", "nodes"],
    "resonances": ["box", "tol"],
    "certify": ["zmax", "grid"],
    "resolvent": ["z", "x", "xp", "check_helmholtz"],
    "scan-det": ["axis", "start", "stop", "step"],
}


def dispatch(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    params = {k: getattr(args, k) for k in _PARAMETER_KEYS[args.command]}
    manifest = RunManifest(
        command=args.command, config_path=args.config, parameters=params
    )
    try:
        result = args.func(args)
    except (ConfigError, ValueError, linalg.SingularMatrixError, RuntimeError) as exc:
        print(f"deltaspec: error: {exc}", file=sys.stderr)
        return 1
    payload = {"manifest": manifest.to_dict()}
    payload.update(result)
    _emit(payload, args.out)
    return 0


def main(argv=None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())

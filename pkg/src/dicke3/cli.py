"""Command-line driver: figure presets, parameter sweeps, CSV/JSON artifacts.

Exit codes: 0 success, 2 bad arguments or unknown preset, 3 Fock truncation
infeasible, 4 output I/O failure.  The default output directory can be set
with the DICKE3_OUTDIR environment variable.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .core import ParameterError, SystemParams, TruncationError
from .diagnostics import build_report, sweep_ground_diagnostics, write_report
from .fast_oscillator import approx_low_spectrum
from .spectra import DEGENERACY_TOL_FACTOR, certify_truncation, spectrum_sweep

__all__ = ["ExperimentConfig", "run", "compare_adiabatic", "main", "PRESETS"]

_THETAS = {"a": 0.0, "b": math.pi / 6, "c": math.pi / 3}


def _spectrum_preset(e_q, theta, lam_max, steps, k):
    return {
        "kind": "spectrum",
        "e_q": e_q,
        "theta": theta,
        "sweep": (0.0, lam_max, steps),
        "k": k,
    }


def _scalar_preset(delta, quantity, steps=25):
    # cover the squeezing dip / entropy rise / concurrence death for each delta:
    # a couple of critical couplings sqrt(w0*delta)/(2*sqrt(3)), at least 1.2
    lam_max = max(1.2, 2.5 * math.sqrt(delta) / (2.0 * math.sqrt(3.0)))
    return {
        "kind": "scalar_sweep",
        "delta": delta,
        "quantity": quantity,
        "thetas": (0.0, math.pi / 6, math.pi / 3),
        "sweep": (0.0, lam_max, steps),
    }


PRESETS = {}
for _p, _eq, _lm, _st, _k in (("fig3", 1.0, 1.0, 41, 13), ("fig4", 0.1, 1.0, 41, 8), ("fig5", 100.0, 4.5, 31, 8)):
    for _s, _th in _THETAS.items():
        PRESETS[_p + _s] = _spectrum_preset(_eq, _th, _lm, _st, _k)
for _s, _lam in (("a", 0.5), ("b", 1.0), ("c", 1.25)):
    PRESETS["fig6" + _s] = {"kind": "report", "delta": 10.0, "lam": _lam}
    PRESETS["fig6" + chr(ord(_s) + 3)] = {"kind": "report", "delta": 10.0, "lam": _lam}
for _s, _d in (("a", 10.0), ("b", 1.0), ("c", 0.1)):
    PRESETS["fig7" + _s] = _scalar_preset(_d, "s_p")
    PRESETS["fig8" + _s] = _scalar_preset(_d, "entropy")
    PRESETS["fig9" + _s] = _scalar_preset(_d, "concurrence")
PRESETS["fig8d"] = {
    "kind": "critical_entropy",
    "delta": 100.0,
    "sweep_rel": (0.2, 1.6, 15),
}
PRESETS["custom"] = {"kind": "custom"}


@dataclass
class ExperimentConfig:
    """Everything one CLI invocation needs."""

    preset: str = "custom"
    out_dir: str = "."
    fmt: str = "csv"
    jobs: int = 1
    k: int | None = None
    sweep: tuple | None = None  # (min, max, steps)
    n_max: int | None = None
    delta: float | None = None
    epsilon: float | None = None
    theta: float | None = None
    w0: float = 1.0
    lam: float = 0.0
    compare: bool = False


def _custom_params(cfg: ExperimentConfig, lam=None, n_max=60) -> SystemParams:
    delta = cfg.delta if cfg.delta is not None else 1.0
    if cfg.theta is not None:
        eps = delta * math.tan(cfg.theta)
    else:
        eps = cfg.epsilon if cfg.epsilon is not None else 0.0
    return SystemParams(
        delta=delta,
        epsilon=eps,
        w0=cfg.w0,
        lam=cfg.lam if lam is None else lam,
        n_max=cfg.n_max if cfg.n_max is not None else n_max,
    )


def _write_rows(path, header, rows, fmt):
    if fmt == "json":
        payload = {"header": header, "rows": [list(r) for r in rows]}
        with open(path, "w", newline="\n") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")
    else:
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(c if isinstance(c, str) else f"{c:.11e}" for c in row))
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


def _manifest(cfg, out_dir, entries, outputs, t0):
    payload = {
        "preset": cfg.preset,
        "format": cfg.fmt,
        "degeneracy_tolerance_factor": DEGENERACY_TOL_FACTOR,
        "versions": {
            "dicke3": __version__,
            "numpy": np.__version__,
            "python": sys.version.split()[0],
        },
        "runs": entries,
        "outputs": sorted(outputs),
        "wall_time_s": round(time.monotonic() - t0, 3),
    }
    try:
        import scipy

        payload["versions"]["scipy"] = scipy.__version__
    except ImportError:
        pass
    path = os.path.join(out_dir, f"{cfg.preset}_manifest.json")
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return path


def _ext(cfg):
    return "json" if cfg.fmt == "json" else "csv"


def _run_spectrum(cfg, spec, out_dir):
    theta = cfg.theta if cfg.theta is not None else spec["theta"]
    base = SystemParams.from_level_splitting(spec["e_q"], theta, w0=cfg.w0)
    lo, hi, steps = cfg.sweep or spec["sweep"]
    k = cfg.k or spec["k"]
    grid = np.linspace(lo, hi, int(steps))
    table = spectrum_sweep(base, grid, k, jobs=cfg.jobs)
    path = os.path.join(out_dir, f"{cfg.preset}_spectrum.{_ext(cfg)}")
    if cfg.fmt == "json":
        header = ["lambda"] + [f"E{i + 1}" for i in range(k)]
        rows = [[lam] + list(map(float, row)) for lam, row in zip(table.lambda_grid, table.levels)]
        _write_rows(path, header, rows, "json")
    else:
        table.write_csv(path)
    entry = {"params": {"e_q": spec["e_q"], "theta": theta, "w0": cfg.w0}, "k": k, "certified_n_max": table.n_max_used}
    return [path], entry


def _run_report(cfg, spec, out_dir):
    lam = cfg.lam if cfg.lam else spec["lam"]
    params = SystemParams(delta=spec["delta"], epsilon=0.0, w0=cfg.w0, lam=lam)
    report = build_report(params)
    base = os.path.join(out_dir, cfg.preset)
    write_report(report, base)
    paths = [base + "_report.txt", base + "_q.csv", base + "_wigner.csv"]
    entry = {
        "params": {"delta": spec["delta"], "epsilon": 0.0, "w0": cfg.w0, "lambda": lam},
        "certified_n_max": report.params.n_max,
        "wigner_min": report.wigner_min,
        "cat_like": report.cat_like,
    }
    return paths, entry


_QUANTITY_COLUMNS = {"s_p": ("s_x", "s_p", "K"), "entropy": ("entropy",), "concurrence": ("concurrence",)}


def _run_scalar_sweep(cfg, spec, out_dir):
    lo, hi, steps = cfg.sweep or spec["sweep"]
    grid = np.linspace(lo, hi, int(steps))
    cols = _QUANTITY_COLUMNS[spec["quantity"]]
    header = ["lambda", "theta"] + list(cols)
    rows = []
    n_certified = {}
    for theta in spec["thetas"]:
        base = SystemParams.from_bias_angle(spec["delta"], theta, w0=cfg.w0)
        data = sweep_ground_diagnostics(base, grid)
        n_certified[f"theta={theta:.6f}"] = data["n_max_used"]
        for i, lam in enumerate(grid):
            rows.append([float(lam), float(theta)] + [float(data[c][i]) for c in cols])
    name = {"s_p": "squeezing", "entropy": "entropy", "concurrence": "concurrence"}[spec["quantity"]]
    path = os.path.join(out_dir, f"{cfg.preset}_{name}.{_ext(cfg)}")
    _write_rows(path, header, rows, cfg.fmt)
    entry = {"params": {"delta": spec["delta"], "w0": cfg.w0}, "certified_n_max": n_certified}
    return [path], entry


def _run_critical_entropy(cfg, spec, out_dir):
    delta = spec["delta"]
    base = SystemParams(delta=delta, epsilon=0.0, w0=cfg.w0)
    lam_c = math.sqrt(cfg.w0 * delta / 12.0)
    lo, hi, steps = spec["sweep_rel"]
    rel = np.linspace(lo, hi, int(steps))
    data = sweep_ground_diagnostics(base, rel * lam_c)
    header = ["lambda_over_lambda_c", "lambda", "S"]
    rows = [[float(r), float(r * lam_c), float(s)] for r, s in zip(rel, data["entropy"])]
    path = os.path.join(out_dir, f"{cfg.preset}_entropy.{_ext(cfg)}")
    _write_rows(path, header, rows, cfg.fmt)
    entry = {
        "params": {"delta": delta, "w0": cfg.w0, "lambda_c": lam_c},
        "certified_n_max": data["n_max_used"],
    }
    return [path], entry


def _run_custom(cfg, out_dir):
    if cfg.sweep is not None:
        lo, hi, steps = cfg.sweep
        base = _custom_params(cfg, lam=0.0)
        grid = np.linspace(lo, hi, int(steps))
        k = cfg.k or 8
        table = spectrum_sweep(base, grid, k, jobs=cfg.jobs)
        path = os.path.join(out_dir, f"custom_spectrum.{_ext(cfg)}")
        if cfg.fmt == "csv":
            table.write_csv(path)
        else:
            header = ["lambda"] + [f"E{i + 1}" for i in range(k)]
            rows = [[lam] + list(map(float, row)) for lam, row in zip(table.lambda_grid, table.levels)]
            _write_rows(path, header, rows, "json")
        entry = {"params": _params_dict(base), "k": k, "certified_n_max": table.n_max_used}
        return [path], entry
    params = _custom_params(cfg)
    report = build_report(params)
    base = os.path.join(out_dir, "custom")
    write_report(report, base)
    entry = {"params": _params_dict(params), "certified_n_max": report.params.n_max}
    return [base + "_report.txt", base + "_q.csv", base + "_wigner.csv"], entry


def _params_dict(p: SystemParams):
    return {"delta": p.delta, "epsilon": p.epsilon, "w0": p.w0, "lambda": p.lam, "n_max": p.n_max}


def run(cfg: ExperimentConfig) -> int:
    """Execute one experiment; writes artifact files plus a manifest."""
    if cfg.preset not in PRESETS:
        raise ParameterError(f"unknown preset {cfg.preset!r}; choose from {sorted(PRESETS)}")
    if cfg.sweep is not None and cfg.sweep[2] < 2:
        raise ParameterError("sweep needs at least 2 steps")
    t0 = time.monotonic()
    out_dir = cfg.out_dir
    os.makedirs(out_dir, exist_ok=True)
    spec = PRESETS[cfg.preset]
    kind = spec["kind"]
    if kind == "spectrum":
        paths, entry = _run_spectrum(cfg, spec, out_dir)
    elif kind == "report":
        paths, entry = _run_report(cfg, spec, out_dir)
    elif kind == "scalar_sweep":
        paths, entry = _run_scalar_sweep(cfg, spec, out_dir)
    elif kind == "critical_entropy":
        paths, entry = _run_critical_entropy(cfg, spec, out_dir)
    else:
        paths, entry = _run_custom(cfg, out_dir)
    manifest = _manifest(cfg, out_dir, entry, [os.path.basename(p) for p in paths], t0)
    for p in paths + [manifest]:
        print(p)
    return 0


def compare_adiabatic(cfg: ExperimentConfig):
    """Exact-vs-fast-oscillator level table at the configured parameters.

    Returns (rows, path): rows of (level, E_exact, E_approx, |diff|/w0);
    writes `<preset>_compare_adiabatic.csv` when an output dir is set.
    """
    k = cfg.k or 8
    params = _custom_params(cfg)
    n_max = certify_truncation(params, k, 1e-6)
    params = params.with_(n_max=n_max)
    from .hamiltonian import build_full_hamiltonian
    from .spectra import eigenvalues

    exact = eigenvalues(build_full_hamiltonian(params).h_total, k)
    approx = [lev.energy for lev in approx_low_spectrum(params, k)]
    rows = [
        (i + 1, float(e), float(a), abs(e - a) / params.w0)
        for i, (e, a) in enumerate(zip(exact, approx))
    ]
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, f"{cfg.preset}_compare_adiabatic.csv")
    _write_rows(
        path,
        ["level", "E_exact", "E_adiabatic_fast", "abs_diff_over_w0"],
        [[f"{r[0]}", r[1], r[2], r[3]] for r in rows],
        "csv",
    )
    for r in rows:
        print(f"level {r[0]}: exact {r[1]:+.9e}  approx {r[2]:+.9e}  |diff|/w0 {r[3]:.3e}")
    return rows, path


def _parse_sweep(text):
    try:
        lo, hi, steps = text.split(":")
        return (float(lo), float(hi), int(steps))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"sweep must be min:max:steps, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dicke3",
        description="Spectra and ground-state diagnostics for three qubits coupled to an oscillator.",
    )
    parser.add_argument("--preset", default="custom", help="experiment preset (fig3a..fig9c, fig8d, custom)")
    parser.add_argument("--delta", type=float, help="qubit gap (units of w0)")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--epsilon", type=float, help="qubit bias")
    group.add_argument("--theta", type=float, help="mixing angle; sets epsilon = delta*tan(theta)")
    parser.add_argument("--w0", type=float, default=1.0, help="oscillator quantum (default 1)")
    parser.add_argument("--lambda", dest="lam", type=float, default=0.0, help="coupling strength")
    parser.add_argument("--nmax", type=int, help="force the Fock truncation")
    parser.add_argument("--sweep", type=_parse_sweep, help="coupling sweep min:max:steps")
    parser.add_argument("--k", type=int, help="number of levels")
    parser.add_argument("--out", default=os.environ.get("DICKE3_OUTDIR", "."), help="output directory")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    parser.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
    parser.add_argument("--compare-adiabatic", action="store_true", help="exact vs fast-oscillator table")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = ExperimentConfig(
        preset=args.preset,
        out_dir=args.out,
        fmt=args.fmt,
        jobs=args.jobs,
        k=args.k,
        sweep=args.sweep,
        n_max=args.nmax,
        delta=args.delta,
        epsilon=args.epsilon,
        theta=args.theta,
        w0=args.w0,
        lam=args.lam,
        compare=args.compare_adiabatic,
    )
    try:
        if cfg.compare:
            compare_adiabatic(cfg)
            return 0
        return run(cfg)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TruncationError as exc:
        print(f"truncation infeasible: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

"""Run artifacts: delimited time series, summary JSON, and figure panels.

CSV files are the source of truth and are written with 17 significant
digits so values round-trip losslessly; figures are courtesy renderings
of the same data, emitted as SVG through the headless Agg backend so
report generation works without a display.  Each figure panel gets a
data sidecar CSV with exactly the plotted series.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import List, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .metrics import MetricSeries  # noqa: E402
from .sim import Trajectory  # noqa: E402


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _write_csv(path: Path, header: List[str], columns: List[np.ndarray]) -> None:
    rows = len(columns[0])
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(rows):
            fh.write(",".join(_fmt(col[i]) for col in columns) + "\n")


def write_run_csv(path: Path, traj: Trajectory, series: MetricSeries) -> Path:
    """Main time series of a complex-model run:
    t, x_re_*, x_im_*, mod_*, arg_unwrapped_*, r_mod, r_arg[, e_abs]."""
    n = traj.args.shape[1]
    header = (
        ["t"]
        + [f"x_re_{k}" for k in range(n)]
        + [f"x_im_{k}" for k in range(n)]
        + [f"mod_{k}" for k in range(n)]
        + [f"arg_unwrapped_{k}" for k in range(n)]
        + ["r_mod", "r_arg"]
    )
    cols: List[np.ndarray] = [traj.times]
    cols += [traj.xs[:, k].real for k in range(n)]
    cols += [traj.xs[:, k].imag for k in range(n)]
    mods = np.abs(traj.xs)
    cols += [mods[:, k] for k in range(n)]
    cols += [traj.args[:, k] for k in range(n)]
    cols += [series.r_mod, series.r_arg]
    if series.e_abs is not None:
        header.append("e_abs")
        cols.append(series.e_abs)
    _write_csv(path, header, cols)
    return path


def write_real_csv(path: Path, traj: Trajectory, series: MetricSeries) -> Path:
    """Time series of a real-model reference run: t, theta_*, r_mod, r_arg."""
    n = traj.args.shape[1]
    header = ["t"] + [f"theta_{k}" for k in range(n)] + ["r_mod", "r_arg"]
    cols = [traj.times] + [traj.args[:, k] for k in range(n)]
    cols += [series.r_mod, series.r_arg]
    _write_csv(path, header, cols)
    return path


def write_summary_json(path: Path, summary) -> Path:
    payload = dataclasses.asdict(summary)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _new_axes(title: str, ylabel: str):
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.set_xlabel("t (s)")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    return fig, ax


def _save(fig, path: Path) -> Path:
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
    return path


def emit_plots(
    traj: Trajectory,
    series: MetricSeries,
    outdir: Path,
    real_series: Optional[MetricSeries] = None,
) -> List[Path]:
    """Render the four report panels (arguments, magnitudes, |r|, phase
    error) to SVG with one sidecar CSV each.  The |r| panel overlays the
    real-model curve when available; the error panel is omitted when no
    matched real run exists."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    files: List[Path] = []
    n = traj.args.shape[1]
    t = traj.times

    fig, ax = _new_axes("Oscillator arguments", "arg x_k (rad)")
    ax.plot(t, traj.args, lw=0.5, alpha=0.5)
    files.append(_save(fig, outdir / "arguments.svg"))
    _write_csv(
        outdir / "arguments.csv",
        ["t"] + [f"arg_unwrapped_{k}" for k in range(n)],
        [t] + [traj.args[:, k] for k in range(n)],
    )
    files.append(outdir / "arguments.csv")

    if traj.xs is not None:
        mods = np.abs(traj.xs)
        fig, ax = _new_axes("State magnitudes", "|x_k|")
        ax.plot(t, mods, lw=0.5, alpha=0.5)
        files.append(_save(fig, outdir / "magnitudes.svg"))
        _write_csv(
            outdir / "magnitudes.csv",
            ["t"] + [f"mod_{k}" for k in range(n)],
            [t] + [mods[:, k] for k in range(n)],
        )
        files.append(outdir / "magnitudes.csv")

    fig, ax = _new_axes("Order parameter", "|r|")
    ax.plot(t, series.r_mod, color="tab:red", label="complex model")
    rcols = [t, series.r_mod]
    rhead = ["t", "r_mod"]
    if real_series is not None:
        ax.plot(real_series.times, real_series.r_mod, color="black",
                ls="--", label="real model")
        rcols.append(real_series.r_mod)
        rhead.append("r_mod_real")
    ax.set_ylim(0.0, 1.05)
    ax.legend(loc="lower right")
    files.append(_save(fig, outdir / "order_parameter.svg"))
    _write_csv(outdir / "order_parameter.csv", rhead, rcols)
    files.append(outdir / "order_parameter.csv")

    if series.e_abs is not None:
        fig, ax = _new_axes("Mean absolute phase error", "e (rad)")
        ax.plot(t, series.e_abs, color="tab:blue")
        files.append(_save(fig, outdir / "phase_error.svg"))
        _write_csv(outdir / "phase_error.csv", ["t", "e_abs"], [t, series.e_abs])
        files.append(outdir / "phase_error.csv")

    return files

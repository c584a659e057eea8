"""Synchronization and correspondence metrics.

* order parameter r = (1/N) sum_k e^{i theta_k}; |r| = 1 iff all phases
  coincide mod 2pi.
* mean absolute phase error e = (1/N) || phi_x - theta ||_1 between the
  complex model's unwrapped arguments and a matched real-model run.
  Only defined when both runs start from the same phases: the metric
  layer refuses otherwise rather than returning a number that means
  nothing.
* finite reaching-time bounds for the two sliding-mode laws.
* tail-window synchronization verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import MetricsError, PreconditionError
from .sim import Trajectory


@dataclass
class MetricSeries:
    times: np.ndarray
    r_mod: np.ndarray                      # in [0, 1]
    r_arg: np.ndarray
    e_abs: Optional[np.ndarray] = None     # rad, vs matched real run
    freq_est: Optional[np.ndarray] = None  # rad/s, network-mean, per sample


def order_parameter(phases: np.ndarray) -> complex:
    """r = (1/N) sum_k e^{i theta_k}."""
    phases = np.asarray(phases, dtype=np.float64)
    return complex(np.mean(np.exp(1j * phases)))


def mean_abs_error(phi_x: np.ndarray, theta: np.ndarray) -> float:
    """(1/N) sum_k |phi_k - theta_k| on unwrapped inputs."""
    phi_x = np.asarray(phi_x, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    if phi_x.shape != theta.shape:
        raise MetricsError("phase vectors differ in length")
    return float(np.mean(np.abs(phi_x - theta)))


def build_series(
    traj: Trajectory, real_traj: Optional[Trajectory] = None
) -> MetricSeries:
    """Per-sample metrics for a run, with the phase-error series when a
    matched real-model twin is supplied.

    Matching requires identical sample times and identical initial
    phases (the complex model initialized at x0 = m e^{i theta0} with the
    same theta0 the real model integrates).
    """
    z = np.exp(1j * traj.args)
    r = z.mean(axis=1)
    e_abs = None
    if real_traj is not None:
        if real_traj.kind != "real":
            raise MetricsError("second trajectory must be a real-model run")
        if len(real_traj.times) != len(traj.times) or not np.allclose(
            real_traj.times, traj.times, rtol=0.0, atol=1e-12
        ):
            raise MetricsError("runs were not sampled on the same time grid")
        if not np.allclose(
            traj.args[0], real_traj.args[0], rtol=0.0, atol=1e-12
        ):
            raise MetricsError(
                "phase error undefined: runs start from different phases"
            )
        e_abs = np.mean(np.abs(traj.args - real_traj.args), axis=1)
    freq = None
    if len(traj.times) >= 2:
        dt_s = np.diff(traj.times)
        inst = np.diff(traj.args, axis=0) / dt_s[:, None]
        net_mean = inst.mean(axis=1)
        # first-order estimate; repeat the first value so lengths match
        freq = np.concatenate([[net_mean[0]], net_mean])
    return MetricSeries(
        times=traj.times.copy(),
        r_mod=np.abs(r),
        r_arg=np.angle(r),
        e_abs=e_abs,
        freq_est=freq,
    )


def per_oscillator_mean_frequency(
    traj: Trajectory, t_from: float, t_to: Optional[float] = None
) -> np.ndarray:
    """Average phase velocity of each oscillator over [t_from, t_to],
    from the unwrapped argument increments."""
    t_to = traj.times[-1] if t_to is None else t_to
    i0 = int(np.searchsorted(traj.times, t_from, side="left"))
    i1 = int(np.searchsorted(traj.times, t_to, side="right")) - 1
    if i1 <= i0:
        raise MetricsError("frequency window contains fewer than two samples")
    span = traj.times[i1] - traj.times[i0]
    return (traj.args[i1] - traj.args[i0]) / span


def radial_reaching_bound(x0: np.ndarray, alpha: float) -> float:
    """Finite-time bound sqrt(2)/alpha * || |x0| - 1 ||_2 for the
    radial sliding-mode law."""
    if not (alpha > 0.0):
        raise PreconditionError("alpha must be positive")
    x0 = np.asarray(x0, dtype=np.complex128)
    return float(np.sqrt(2.0) / alpha * np.linalg.norm(np.abs(x0) - 1.0))


def lock_reaching_bound(x0: np.ndarray, epsilon2: float) -> float:
    """Finite-time bound sqrt(2)/eps2 * || x0 - 1 ||_2 for the
    prescribed-frequency law; requires a positive gain margin."""
    if not (epsilon2 > 0.0):
        raise PreconditionError(
            "gain margin must be positive (sufficient gain condition violated)"
        )
    x0 = np.asarray(x0, dtype=np.complex128)
    return float(np.sqrt(2.0) / epsilon2 * np.linalg.norm(x0 - 1.0))


@dataclass(frozen=True)
class SyncVerdict:
    synced: bool
    tail_mean_r: float


def sync_verdict(
    series: MetricSeries, tail: float, threshold: float
) -> SyncVerdict:
    """Average |r| over the final ``tail`` seconds against a threshold.

    Defaults used by scenarios: tail = 25% of the horizon, 0.99 to call
    a run synchronized, 0.8 to call it failed.
    """
    duration = series.times[-1] - series.times[0]
    if not (0.0 < tail < duration):
        raise PreconditionError("tail must be positive and shorter than the run")
    cut = series.times[-1] - tail
    sel = series.times >= cut
    tail_mean = float(np.mean(series.r_mod[sel]))
    return SyncVerdict(synced=tail_mean >= threshold, tail_mean_r=tail_mean)

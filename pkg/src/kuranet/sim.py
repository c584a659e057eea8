"""Deterministic fixed-step integration and trajectory recording.

Classical RK4 with a fixed step is used everywhere a differential
equation is integrated: determinism and cross-run comparability matter
more than adaptive efficiency at N ~ 100.  Control inputs are
re-evaluated at every RK stage with the stage time, so explicitly
time-varying laws keep their fourth-order accuracy.

The reset-based strategy takes a different path: its flow is linear, so
each dt step is one cached matrix-exponential application, and the jump
(projection onto the unit circle) fires at window boundaries.  No RK
integration is involved, matching how the method is meant to be run.

Discontinuous laws under a fixed step chatter in an O(gain * dt) band
around their switching surfaces; reaching detection therefore defaults
its tolerance to max(1e-3, 2 * gain * dt).

Runs abort on non-finite states, degenerate moduli, and unwrap
ambiguity; a per-step phase change above pi/2 (the step-size safety
margin) is recorded as a ``guard_trip`` event but does not abort.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .controllers import (
    ComplexSMC,
    ControllerSpec,
    FFSMC,
    HybridReset,
    NoControl,
    Roberts,
    SwitchedFF,
    u_complex_smc,
    u_ff_smc,
    u_roberts,
    u_switched_ff,
)
from .cxmath import csign, matexp, modarg
from .dynamics import (
    ComplexState,
    system_matrix,
    unwrap_step,
)
from .errors import NonFiniteStateError, PreconditionError
from .network import Network, OscParams


@dataclass(frozen=True)
class SimConfig:
    """Fixed-step integration settings."""

    dt: float = 1e-3
    t_end: float = 10.0
    record_stride: int = 1
    boundary_layer_delta: float = 0.0

    def __post_init__(self):
        if not (self.dt > 0.0):
            raise PreconditionError("dt must be positive")
        if self.t_end < self.dt:
            raise PreconditionError("t_end must be at least one step")
        if self.record_stride < 1:
            raise PreconditionError("record_stride must be >= 1")
        if self.boundary_layer_delta < 0.0:
            raise PreconditionError("boundary_layer_delta must be >= 0")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass
class Event:
    time: float
    kind: str                       # "reset" | "reach" | "guard_trip"
    info: Optional[dict] = None


@dataclass
class Trajectory:
    """Time-indexed record of one run.

    ``args`` holds unwrapped arguments for complex runs and the (natively
    unbounded) phases for real runs; ``xs``/``controls`` are None where
    not applicable.
    """

    kind: str                       # "complex" | "real"
    times: np.ndarray               # (S,)
    args: np.ndarray                # (S, N)
    xs: Optional[np.ndarray] = None        # (S, N) complex
    controls: Optional[np.ndarray] = None  # (S, N) complex
    events: List[Event] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def moduli(self) -> np.ndarray:
        if self.xs is None:
            raise PreconditionError("real-model trajectories have no moduli")
        return np.abs(self.xs)


def rk4_step(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    state: np.ndarray,
    t: float,
    dt: float,
) -> np.ndarray:
    """One classical Runge-Kutta step of width dt."""
    k1 = rhs(t, state)
    k2 = rhs(t + 0.5 * dt, state + 0.5 * dt * k1)
    k3 = rhs(t + 0.5 * dt, state + 0.5 * dt * k2)
    k4 = rhs(t + dt, state + dt * k3)
    out = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out.view(np.float64) if np.iscomplexobj(out) else out)):
        raise NonFiniteStateError(f"non-finite state after step at t={t:.6f}")
    return out


def _control_fn(
    ctrl: ControllerSpec, net: Network, params: OscParams, delta: float, dt: float
) -> Optional[Callable[[float, np.ndarray], np.ndarray]]:
    if isinstance(ctrl, NoControl):
        return None
    if isinstance(ctrl, SwitchedFF):
        return lambda t, x: u_switched_ff(x, net, params)
    if isinstance(ctrl, FFSMC):
        # saturate the radial signum inside the one-step travel band
        # (sampled-data sliding mode; see the controllers module docstring)
        band = ctrl.alpha * dt
        return lambda t, x: u_ff_smc(x, net, params, ctrl.alpha, delta, band)
    if isinstance(ctrl, ComplexSMC):
        K = np.broadcast_to(ctrl.K, (net.n,)).astype(np.float64)
        return lambda t, x: u_complex_smc(x, t, K, ctrl.omega_bar, delta)
    if isinstance(ctrl, Roberts):
        mu = np.broadcast_to(ctrl.mu, (net.n,)).astype(np.float64)
        return lambda t, x: u_roberts(x, mu)
    raise PreconditionError(f"no control closure for {ctrl!r}")


def run_complex(
    x0: np.ndarray,
    net: Network,
    params: OscParams,
    ctrl: ControllerSpec,
    cfg: SimConfig,
    unwrapped0: Optional[np.ndarray] = None,
) -> Trajectory:
    """Integrate the controlled complex model from x0.

    ``unwrapped0`` pins the initial phase lift (defaults to principal
    arguments); scenarios pass the drawn phases so the lift matches the
    real-model twin exactly.
    """
    x0 = np.asarray(x0, dtype=np.complex128)
    if not np.all(np.isfinite(x0.view(np.float64))):
        raise NonFiniteStateError("non-finite initial state")
    state = (
        ComplexState.from_x(x0)
        if unwrapped0 is None
        else ComplexState(x=x0, unwrapped_args=np.asarray(unwrapped0, float))
    )
    if isinstance(ctrl, HybridReset):
        return _run_hybrid(state, net, params, ctrl, cfg)

    ufn = _control_fn(ctrl, net, params, cfg.boundary_layer_delta, cfg.dt)
    M = system_matrix(net, params)
    if ufn is None:
        rhs = lambda t, x: M @ x
    else:
        rhs = lambda t, x: M @ x + ufn(t, x)

    n_steps = cfg.n_steps
    sample_idx = _sample_indices(n_steps, cfg.record_stride)
    times, argrows, xrows, urows = [], [], [], []
    events: List[Event] = []

    def record(t: float, st: ComplexState):
        times.append(t)
        xrows.append(st.x.copy())
        argrows.append(st.unwrapped_args.copy())
        urows.append(
            np.zeros(net.n, dtype=np.complex128) if ufn is None else ufn(t, st.x)
        )

    record(0.0, state)
    x = state.x
    args = state.unwrapped_args
    next_sample = 1
    for i in range(n_steps):
        t = i * cfg.dt
        x = rk4_step(rhs, x, t, cfg.dt)
        _, principal = modarg(x)
        new_args = unwrap_step(args, principal)
        step_move = np.max(np.abs(new_args - args))
        if step_move >= 0.5 * np.pi:
            events.append(
                Event(time=t + cfg.dt, kind="guard_trip",
                      info={"max_step_rad": float(step_move)})
            )
        args = new_args
        if next_sample < len(sample_idx) and i + 1 == sample_idx[next_sample]:
            record((i + 1) * cfg.dt, ComplexState(x=x, unwrapped_args=args))
            next_sample += 1

    meta = {
        "controller": ctrl.kind,
        "dt": cfg.dt,
        "boundary_layer_delta": cfg.boundary_layer_delta,
    }
    if isinstance(ctrl, FFSMC):
        meta["radial_saturation_band"] = ctrl.alpha * cfg.dt
    return Trajectory(
        kind="complex",
        times=np.array(times),
        args=np.array(argrows),
        xs=np.array(xrows),
        controls=np.array(urows),
        events=events,
        meta=meta,
    )


def _sample_indices(n_steps: int, stride: int) -> np.ndarray:
    idx = list(range(0, n_steps + 1, stride))
    if idx[-1] != n_steps:
        idx.append(n_steps)
    return np.array(idx, dtype=np.int64)


def _run_hybrid(
    state: ComplexState,
    net: Network,
    params: OscParams,
    ctrl: HybridReset,
    cfg: SimConfig,
) -> Trajectory:
    """Analytic window propagation: x <- exp(M dt) x per step, projection
    onto the unit circle every ``window`` seconds."""
    steps_per_window = int(round(ctrl.window / cfg.dt))
    if steps_per_window < 1:
        raise PreconditionError("hybrid reset window must be at least dt")
    if abs(steps_per_window * cfg.dt - ctrl.window) > 1e-9 * max(1.0, ctrl.window):
        raise PreconditionError("hybrid reset window must be a multiple of dt")

    M = system_matrix(net, params)
    E = matexp(M, cfg.dt)          # one matexp per run; windows reuse it

    n_steps = cfg.n_steps
    sample_idx = _sample_indices(n_steps, cfg.record_stride)
    times, argrows, xrows = [], [], []
    events: List[Event] = []

    x = state.x.copy()
    args = state.unwrapped_args.copy()
    times.append(0.0)
    xrows.append(x.copy())
    argrows.append(args.copy())
    next_sample = 1
    for i in range(n_steps):
        x = E @ x
        if not np.all(np.isfinite(x.view(np.float64))):
            raise NonFiniteStateError(f"non-finite state at step {i + 1}")
        _, principal = modarg(x)
        args = unwrap_step(args, principal)
        if (i + 1) % steps_per_window == 0:
            pre_arg = np.angle(x)
            x = csign(x)
            post_arg = np.angle(x)
            events.append(
                Event(
                    time=(i + 1) * cfg.dt,
                    kind="reset",
                    info={
                        "max_arg_change": float(np.max(np.abs(post_arg - pre_arg))),
                        "max_mod_dev": float(np.max(np.abs(np.abs(x) - 1.0))),
                    },
                )
            )
        if next_sample < len(sample_idx) and i + 1 == sample_idx[next_sample]:
            times.append((i + 1) * cfg.dt)
            xrows.append(x.copy())
            argrows.append(args.copy())
            next_sample += 1

    return Trajectory(
        kind="complex",
        times=np.array(times),
        args=np.array(argrows),
        xs=np.array(xrows),
        controls=None,
        events=events,
        meta={"controller": ctrl.kind, "dt": cfg.dt, "window": ctrl.window},
    )


def run_real(
    theta0: np.ndarray, net: Network, params: OscParams, cfg: SimConfig
) -> Trajectory:
    """Integrate the real Kuramoto model; phases are natively unwrapped."""
    theta0 = np.asarray(theta0, dtype=np.float64)
    if not np.all(np.isfinite(theta0)):
        raise NonFiniteStateError("non-finite initial phases")
    from .dynamics import rhs_real

    rhs = lambda t, th: rhs_real(th, net, params)
    n_steps = cfg.n_steps
    sample_idx = _sample_indices(n_steps, cfg.record_stride)
    times = [0.0]
    rows = [theta0.copy()]
    th = theta0.copy()
    next_sample = 1
    for i in range(n_steps):
        th = rk4_step(rhs, th, i * cfg.dt, cfg.dt)
        if next_sample < len(sample_idx) and i + 1 == sample_idx[next_sample]:
            times.append((i + 1) * cfg.dt)
            rows.append(th.copy())
            next_sample += 1
    return Trajectory(
        kind="real",
        times=np.array(times),
        args=np.array(rows),
        meta={"dt": cfg.dt},
    )


def surface_residual(traj: Trajectory, surface: str, omega_bar: float = 0.0) -> np.ndarray:
    """Per-sample sliding-surface residual:
    ``unit_modulus`` -> || |x| - 1 ||_inf,
    ``prescribed_lock`` -> || x - e^{i wbar t} 1 ||_inf."""
    if traj.xs is None:
        raise PreconditionError("surface residuals need a complex trajectory")
    if surface == "unit_modulus":
        return np.max(np.abs(np.abs(traj.xs) - 1.0), axis=1)
    if surface == "prescribed_lock":
        targets = np.exp(1j * omega_bar * traj.times)[:, None]
        return np.max(np.abs(traj.xs - targets), axis=1)
    raise PreconditionError(f"unknown surface {surface!r}")


def detect_reaching(
    traj: Trajectory, surface: str, tol: float, omega_bar: float = 0.0
) -> Optional[float]:
    """First sample time after which the surface residual stays within
    tol for every later sample; None if that never happens."""
    resid = surface_residual(traj, surface, omega_bar)
    above = np.nonzero(resid > tol)[0]
    if len(above) == 0:
        return float(traj.times[0])
    last = int(above[-1])
    if last == len(resid) - 1:
        return None
    return float(traj.times[last + 1])


def reaching_tolerance(gain: float, dt: float) -> float:
    """Default surface tolerance max(1e-3, 2 * gain * dt): the exact-signum
    chattering band scales with gain * dt, so a fixed tolerance would
    spuriously fail for large gains."""
    return max(1e-3, 2.0 * gain * dt)

"""Scenario configs, seeded execution, presets, and sweeps.

A scenario is a JSON document that pins *everything* a run depends on:

.. code-block:: json

    {
      "name": "fig2",
      "network": {"kind": "er", "n": 100, "p": 0.2, "seed": 101},
      "omega": {"kind": "constant", "value": 6.283185307179586},
      "sigma": 0.25,
      "controller": {"kind": "ff_smc", "alpha": 10.0},
      "init": {"kind": "annulus", "phase_seed": 202,
               "modulus_low": 0.0, "modulus_high": 2.0, "modulus_seed": 303},
      "sim": {"dt": 0.001, "t_end": 10.0, "record_stride": 10,
              "boundary_layer_delta": 0.0},
      "compare_real": true,
      "outputs": ["csv", "plots", "summary"]
    }

Units: frequencies and omega_bar in rad/s, sigma dimensionless coupling
gain, dt / t_end / window in seconds, angles in radians.  Every random
quantity carries an explicit seed -- there are no entropy defaults --
so a config is a complete, hashable description of its run: the summary
records a SHA-256 over the canonical form, and any change to any field
changes the hash.

Initial conditions: phases are drawn uniformly from (-pi, pi) with
``phase_seed``; ``unit_circle`` puts x0 = e^{i theta0} while ``annulus``
draws moduli uniformly from [modulus_low, modulus_high) with
``modulus_seed``.  When ``compare_real`` is set, a real-model twin is
integrated from the same theta0 with the same stepper, which is what
makes the phase-error series meaningful.

Reaching-time guarantees are asserted, not clamped: a run whose
measured reaching time exceeds its theoretical bound (while the gain
condition holds) raises AcceptanceError.
"""

from __future__ import annotations

import copy
import hashlib
import itertools
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from .controllers import (
    ComplexSMC,
    ControllerSpec,
    FFSMC,
    HybridReset,
    NoControl,
    Roberts,
    SwitchedFF,
    gain_margin,
    gain_threshold,
    roberts_mu_degree,
    verify_roberts_spectrum,
)
from .errors import AcceptanceError, ConfigError, KuranetError
from .metrics import build_series, radial_reaching_bound, sync_verdict
from .network import (
    FrequencySpec,
    Network,
    OscParams,
    erdos_renyi,
    is_connected,
    load_adjacency,
    sample_frequencies,
)
from .rng import ALGORITHM as RNG_ALGORITHM
from .rng import SplitMix64, derive_seed
from .sim import (
    SimConfig,
    Trajectory,
    detect_reaching,
    reaching_tolerance,
    run_complex,
    run_real,
)

#: tail fraction of the horizon used for steady-state metrics
TAIL_FRACTION = 0.25
#: |r| thresholds separating "synchronized" from "failed"
SYNC_THRESHOLD = 0.99
FAIL_THRESHOLD = 0.8

VALID_OUTPUTS = ("csv", "plots", "summary")


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def _need(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}: missing required field {key!r}")
    return d[key]


def _as_seed(v, where: str) -> int:
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise ConfigError(f"{where}: seeds must be nonnegative integers, got {v!r}")
    return v


@dataclass(frozen=True)
class Scenario:
    """Validated scenario; ``raw`` is the canonical dict it came from."""

    name: str
    raw: Dict[str, Any]

    @classmethod
    def from_dict(cls, cfg: Dict[str, Any]) -> "Scenario":
        if not isinstance(cfg, dict):
            raise ConfigError("scenario config must be a JSON object")
        cfg = copy.deepcopy(cfg)
        name = cfg.get("name", "scenario")
        if not isinstance(name, str) or not name:
            raise ConfigError("name must be a nonempty string")

        net = _need(cfg, "network", "network")
        kind = _need(net, "kind", "network")
        if kind == "er":
            n = _need(net, "n", "network.er")
            if not isinstance(n, int) or n < 1:
                raise ConfigError("network.n must be a positive integer")
            p = _need(net, "p", "network.er")
            if not (isinstance(p, (int, float)) and 0.0 <= p <= 1.0):
                raise ConfigError("network.p must lie in [0, 1]")
            _as_seed(_need(net, "seed", "network.er"), "network.seed")
        elif kind == "file":
            _need(net, "path", "network.file")
        else:
            raise ConfigError(f"unknown network kind {kind!r}")

        om = _need(cfg, "omega", "omega")
        okind = _need(om, "kind", "omega")
        if okind == "constant":
            _need(om, "value", "omega.constant")
        elif okind == "normal":
            _need(om, "mean", "omega.normal")
            std = _need(om, "std", "omega.normal")
            if std < 0:
                raise ConfigError("omega.std must be nonnegative")
            _as_seed(_need(om, "seed", "omega.normal"), "omega.seed")
        else:
            raise ConfigError(f"unknown omega kind {okind!r}")

        sigma = _need(cfg, "sigma", "sigma")
        if not (isinstance(sigma, (int, float)) and sigma > 0):
            raise ConfigError("sigma must be a positive number")

        ctrl = _need(cfg, "controller", "controller")
        ckind = _need(ctrl, "kind", "controller")
        if ckind == "ff_smc":
            alpha = _need(ctrl, "alpha", "controller.ff_smc")
            if not alpha > 0:
                raise ConfigError("controller.alpha must be positive")
        elif ckind == "complex_smc":
            K = _need(ctrl, "K", "controller.complex_smc")
            Karr = np.atleast_1d(np.asarray(K, dtype=float))
            if np.any(Karr <= 0):
                raise ConfigError("controller.K must be positive")
            _need(ctrl, "omega_bar", "controller.complex_smc")
        elif ckind == "roberts":
            mu = _need(ctrl, "mu", "controller.roberts")
            if not (mu == "degree" or isinstance(mu, list)):
                raise ConfigError("controller.mu must be 'degree' or a list")
        elif ckind == "hybrid_reset":
            window = _need(ctrl, "window", "controller.hybrid_reset")
            if not window > 0:
                raise ConfigError("controller.window must be positive")
        elif ckind not in ("none", "switched_ff"):
            raise ConfigError(f"unknown controller kind {ckind!r}")

        init = _need(cfg, "init", "init")
        ikind = _need(init, "kind", "init")
        _as_seed(_need(init, "phase_seed", "init"), "init.phase_seed")
        if ikind == "annulus":
            lo = _need(init, "modulus_low", "init.annulus")
            hi = _need(init, "modulus_high", "init.annulus")
            if not (lo >= 0 and lo < hi):
                raise ConfigError("init moduli need 0 <= modulus_low < modulus_high")
            _as_seed(_need(init, "modulus_seed", "init.annulus"), "init.modulus_seed")
        elif ikind != "unit_circle":
            raise ConfigError(f"unknown init kind {ikind!r}")

        sim = cfg.setdefault("sim", {})
        sim.setdefault("dt", 1e-3)
        sim.setdefault("t_end", 10.0)
        sim.setdefault("record_stride", 10)
        sim.setdefault("boundary_layer_delta", 0.0)
        try:
            SimConfig(**sim)
        except (TypeError, KuranetError) as exc:
            raise ConfigError(f"sim config invalid: {exc}") from exc

        cfg.setdefault("compare_real", True)
        outputs = cfg.setdefault("outputs", ["csv", "plots", "summary"])
        bad = [o for o in outputs if o not in VALID_OUTPUTS]
        if bad:
            raise ConfigError(f"unknown outputs {bad}; valid: {VALID_OUTPUTS}")

        cfg["name"] = name
        return cls(name=name, raw=cfg)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "Scenario":
        path = Path(path)
        try:
            cfg = json.loads(path.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
        return cls.from_dict(cfg)

    def canonical_json(self) -> str:
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))

    def hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    @property
    def sim(self) -> SimConfig:
        return SimConfig(**self.raw["sim"])


def apply_overrides(
    cfg: Dict[str, Any],
    seed_override: Optional[int] = None,
    dt: Optional[float] = None,
    delta: Optional[float] = None,
) -> Dict[str, Any]:
    """CLI flags that shadow config fields.  ``seed_override`` rebinds
    every seed in the config to streams derived from one master value
    (slots: network=0, omega=1, phases=2, moduli=3)."""
    cfg = copy.deepcopy(cfg)
    if seed_override is not None:
        if cfg.get("network", {}).get("kind") == "er":
            cfg["network"]["seed"] = derive_seed(seed_override, 0)
        if cfg.get("omega", {}).get("kind") == "normal":
            cfg["omega"]["seed"] = derive_seed(seed_override, 1)
        cfg.get("init", {})["phase_seed"] = derive_seed(seed_override, 2)
        if cfg.get("init", {}).get("kind") == "annulus":
            cfg["init"]["modulus_seed"] = derive_seed(seed_override, 3)
    if dt is not None:
        cfg.setdefault("sim", {})["dt"] = dt
    if delta is not None:
        cfg.setdefault("sim", {})["boundary_layer_delta"] = delta
    return cfg


# ---------------------------------------------------------------------------
# scenario materialization
# ---------------------------------------------------------------------------

def build_network(scen: Scenario) -> Network:
    net = scen.raw["network"]
    if net["kind"] == "er":
        return erdos_renyi(net["n"], net["p"], net["seed"])
    return load_adjacency(net["path"])


def build_params(scen: Scenario, n: int) -> OscParams:
    om = scen.raw["omega"]
    if om["kind"] == "constant":
        spec = FrequencySpec(kind="constant", value=om["value"])
        omega = sample_frequencies(n, spec)
    else:
        spec = FrequencySpec(kind="normal", mean=om["mean"], std=om["std"])
        omega = sample_frequencies(n, spec, seed=om["seed"])
    return OscParams(omega=omega, sigma=float(scen.raw["sigma"]))


def build_initial_state(scen: Scenario, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """(x0, theta0): phases from phase_seed, moduli per the init kind."""
    init = scen.raw["init"]
    theta0 = (2.0 * SplitMix64(init["phase_seed"]).uniforms(n) - 1.0) * np.pi
    if init["kind"] == "unit_circle":
        moduli = np.ones(n)
    else:
        lo, hi = init["modulus_low"], init["modulus_high"]
        moduli = lo + (hi - lo) * SplitMix64(init["modulus_seed"]).uniforms(n)
    return moduli * np.exp(1j * theta0), theta0


def resolve_controller(
    scen: Scenario, net: Network, params: OscParams
) -> ControllerSpec:
    ctrl = scen.raw["controller"]
    kind = ctrl["kind"]
    if kind == "none":
        return NoControl()
    if kind == "switched_ff":
        return SwitchedFF()
    if kind == "ff_smc":
        return FFSMC(alpha=float(ctrl["alpha"]))
    if kind == "complex_smc":
        K = np.broadcast_to(
            np.atleast_1d(np.asarray(ctrl["K"], dtype=float)), (net.n,)
        ).copy()
        return ComplexSMC(K=K, omega_bar=float(ctrl["omega_bar"]))
    if kind == "roberts":
        mu = ctrl["mu"]
        if mu == "degree":
            try:
                mu = roberts_mu_degree(net, params)
            except KuranetError as exc:
                raise ConfigError(f"degree-based feedback unavailable: {exc}") from exc
        else:
            mu = np.asarray(mu, dtype=float)
            if mu.shape != (net.n,):
                raise ConfigError("controller.mu length must equal the node count")
        return Roberts(mu=mu)
    if kind == "hybrid_reset":
        return HybridReset(window=float(ctrl["window"]))
    raise ConfigError(f"unknown controller kind {kind!r}")


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

@dataclass
class RunSummary:
    name: str
    scenario_hash: str
    controller: str
    rng_algorithm: str
    n: int
    n_edges: int
    connected: bool
    reaching_measured: Optional[float]
    reaching_bound: Optional[float]
    reaching_tol: Optional[float]
    tail_mean_r: float
    synced: bool
    real_tail_mean_r: Optional[float]
    real_synced: Optional[bool]
    final_e: Optional[float]
    steady_e: Optional[float]
    max_e: Optional[float]
    tail_e_drift: Optional[float]
    gain_margin_eps2: Optional[float]
    gain_condition_ok: Optional[bool]
    n_resets: int
    n_guard_trips: int
    wall_clock_s: float
    outdir: Optional[str] = None
    files: List[str] = field(default_factory=list)


def _tail_mask(times: np.ndarray) -> np.ndarray:
    span = times[-1] - times[0]
    return times >= times[-1] - TAIL_FRACTION * span


def _tail_slope(times: np.ndarray, values: np.ndarray) -> float:
    sel = _tail_mask(times)
    A = np.vstack([times[sel], np.ones(int(sel.sum()))]).T
    coef, *_ = np.linalg.lstsq(A, values[sel], rcond=None)
    return float(coef[0])


def execute(scen: Scenario, outdir: Optional[Path] = None) -> RunSummary:
    """Run one scenario end to end; write declared artifacts under
    ``outdir`` when given."""
    t_start = time.perf_counter()
    cfg = scen.sim
    net = build_network(scen)
    params = build_params(scen, net.n)
    ctrl = resolve_controller(scen, net, params)
    x0, theta0 = build_initial_state(scen, net.n)

    traj = run_complex(x0, net, params, ctrl, cfg, unwrapped0=theta0)
    real_traj: Optional[Trajectory] = None
    if scen.raw["compare_real"]:
        real_traj = run_real(theta0, net, params, cfg)

    series = build_series(traj, real_traj)
    real_series = build_series(real_traj) if real_traj is not None else None

    tail = TAIL_FRACTION * (traj.times[-1] - traj.times[0])
    verdict = sync_verdict(series, tail=tail, threshold=SYNC_THRESHOLD)
    real_tail_r = None
    real_synced = None
    if real_series is not None:
        rv = sync_verdict(real_series, tail=tail, threshold=SYNC_THRESHOLD)
        real_tail_r, real_synced = rv.tail_mean_r, rv.synced

    reaching = bound = tol = None
    eps2 = cond_ok = None
    if isinstance(ctrl, FFSMC):
        tol = reaching_tolerance(ctrl.alpha, cfg.dt)
        reaching = detect_reaching(traj, "unit_modulus", tol)
        bound = radial_reaching_bound(x0, ctrl.alpha)
        cond_ok = True
    elif isinstance(ctrl, ComplexSMC):
        diag = gain_margin(ctrl.K, params, net.n, ctrl.omega_bar, x0=x0)
        eps2 = diag.epsilon2
        cond_ok = not diag.condition_violated
        tol = reaching_tolerance(float(np.min(ctrl.K)), cfg.dt)
        reaching = detect_reaching(traj, "prescribed_lock", tol,
                                   omega_bar=ctrl.omega_bar)
        if cond_ok:
            bound = diag.reaching_bound
    if (
        reaching is not None
        and bound is not None
        and (cond_ok is None or cond_ok)
        and reaching > bound
    ):
        raise AcceptanceError(
            f"measured reaching time {reaching:.4f}s exceeds the "
            f"theoretical bound {bound:.4f}s"
        )

    summary = RunSummary(
        name=scen.name,
        scenario_hash=scen.hash(),
        controller=traj.meta["controller"],
        rng_algorithm=RNG_ALGORITHM,
        n=net.n,
        n_edges=net.n_edges,
        connected=is_connected(net),
        reaching_measured=reaching,
        reaching_bound=bound,
        reaching_tol=tol,
        tail_mean_r=verdict.tail_mean_r,
        synced=verdict.synced,
        real_tail_mean_r=real_tail_r,
        real_synced=real_synced,
        final_e=float(series.e_abs[-1]) if series.e_abs is not None else None,
        steady_e=(
            float(np.mean(series.e_abs[_tail_mask(traj.times)]))
            if series.e_abs is not None else None
        ),
        max_e=float(np.max(series.e_abs)) if series.e_abs is not None else None,
        tail_e_drift=(
            _tail_slope(traj.times, series.e_abs)
            if series.e_abs is not None else None
        ),
        gain_margin_eps2=eps2,
        gain_condition_ok=cond_ok,
        n_resets=sum(1 for e in traj.events if e.kind == "reset"),
        n_guard_trips=sum(1 for e in traj.events if e.kind == "guard_trip"),
        wall_clock_s=0.0,
    )

    if outdir is not None:
        from .report import (
            emit_plots,
            write_real_csv,
            write_run_csv,
            write_summary_json,
        )

        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        files: List[Path] = []
        wanted = scen.raw["outputs"]
        if "csv" in wanted:
            files.append(write_run_csv(outdir / "run.csv", traj, series))
            if real_traj is not None and real_series is not None:
                files.append(
                    write_real_csv(outdir / "real_model.csv", real_traj, real_series)
                )
        if "plots" in wanted:
            files.extend(emit_plots(traj, series, outdir, real_series))
        summary.outdir = str(outdir)
        summary.files = sorted(str(f) for f in files)
        summary.wall_clock_s = time.perf_counter() - t_start
        if "summary" in wanted:
            sf = write_summary_json(outdir / "summary.json", summary)
            summary.files.append(str(sf))
    else:
        summary.wall_clock_s = time.perf_counter() - t_start
    return summary


def run_scenario(
    source: Union[str, Path, Dict[str, Any]],
    outdir: Optional[Union[str, Path]] = None,
    seed_override: Optional[int] = None,
    dt: Optional[float] = None,
    delta: Optional[float] = None,
) -> RunSummary:
    """Load, validate, and execute a scenario config (path or dict)."""
    if isinstance(source, (str, Path)):
        scen = Scenario.from_file(source)
    else:
        scen = Scenario.from_dict(source)
    if seed_override is not None or dt is not None or delta is not None:
        scen = Scenario.from_dict(
            apply_overrides(scen.raw, seed_override, dt, delta)
        )
    return execute(scen, Path(outdir) if outdir is not None else None)


# ---------------------------------------------------------------------------
# gain-condition validation (no simulation)
# ---------------------------------------------------------------------------

def validate_scenario(source: Union[str, Path, Dict[str, Any]]) -> Dict[str, Any]:
    """Parse + validate a config and check the controller's gain
    condition without simulating.  Returns a report dict."""
    scen = (
        Scenario.from_file(source)
        if isinstance(source, (str, Path))
        else Scenario.from_dict(source)
    )
    net = build_network(scen)
    params = build_params(scen, net.n)
    ctrl = resolve_controller(scen, net, params)
    report: Dict[str, Any] = {
        "name": scen.name,
        "hash": scen.hash(),
        "n": net.n,
        "n_edges": net.n_edges,
        "connected": is_connected(net),
        "controller": ctrl.kind,
        "gain_condition": None,
    }
    if isinstance(ctrl, ComplexSMC):
        diag = gain_margin(ctrl.K, params, net.n, ctrl.omega_bar)
        report["gain_condition"] = {
            "threshold_max": float(np.max(gain_threshold(params, net.n,
                                                         ctrl.omega_bar))),
            "min_gain": float(np.min(ctrl.K)),
            "epsilon2": diag.epsilon2,
            "satisfied": not diag.condition_violated,
        }
    elif isinstance(ctrl, Roberts):
        chk = verify_roberts_spectrum(net, params, ctrl.mu, tol=1e-6)
        report["gain_condition"] = {
            "spectrum_valid": chk.valid,
            "marginal_eigenvalue": [chk.marginal_eigenvalue.real,
                                    chk.marginal_eigenvalue.imag],
            "modulus_spread": chk.modulus_spread,
        }
    return report


# ---------------------------------------------------------------------------
# presets: the canonical validation protocols with pinned seeds
# ---------------------------------------------------------------------------

_TWO_PI = 2.0 * np.pi

PRESETS: Dict[str, Dict[str, Any]] = {
    # exact phase correspondence from the unit circle
    "fig1": {
        "name": "fig1",
        "network": {"kind": "er", "n": 100, "p": 0.2, "seed": 101},
        "omega": {"kind": "constant", "value": _TWO_PI},
        "sigma": 0.25,
        "controller": {"kind": "switched_ff"},
        "init": {"kind": "unit_circle", "phase_seed": 202},
        "sim": {"dt": 1e-3, "t_end": 10.0, "record_stride": 10,
                "boundary_layer_delta": 0.0},
        "compare_real": True,
        "outputs": ["csv", "plots", "summary"],
    },
    # finite-time magnitude reaching from scattered moduli
    "fig2": {
        "name": "fig2",
        "network": {"kind": "er", "n": 100, "p": 0.2, "seed": 101},
        "omega": {"kind": "constant", "value": _TWO_PI},
        "sigma": 0.25,
        "controller": {"kind": "ff_smc", "alpha": 10.0},
        "init": {"kind": "annulus", "phase_seed": 202,
                 "modulus_low": 0.0, "modulus_high": 2.0, "modulus_seed": 303},
        "sim": {"dt": 1e-3, "t_end": 10.0, "record_stride": 10,
                "boundary_layer_delta": 0.0},
        "compare_real": True,
        "outputs": ["csv", "plots", "summary"],
    },
    # phase locking at a prescribed frequency, homogeneous network
    "fig3": {
        "name": "fig3",
        "network": {"kind": "er", "n": 100, "p": 0.2, "seed": 101},
        "omega": {"kind": "constant", "value": _TWO_PI},
        "sigma": 0.25,
        "controller": {"kind": "complex_smc", "K": 50.0,
                       "omega_bar": 2.0 * _TWO_PI},
        "init": {"kind": "annulus", "phase_seed": 202,
                 "modulus_low": 0.0, "modulus_high": 2.0, "modulus_seed": 303},
        "sim": {"dt": 1e-3, "t_end": 20.0, "record_stride": 10,
                "boundary_layer_delta": 0.0},
        "compare_real": True,
        "outputs": ["csv", "plots", "summary"],
    },
    # heterogeneous frequencies, weak coupling: the real model fails to
    # synchronize, the prescribed-frequency law still locks the network
    "fig3d": {
        "name": "fig3d",
        "network": {"kind": "er", "n": 100, "p": 0.2, "seed": 101},
        "omega": {"kind": "normal", "mean": _TWO_PI, "std": 1.0, "seed": 405},
        "sigma": 0.1,
        "controller": {"kind": "complex_smc", "K": 50.0,
                       "omega_bar": 2.0 * _TWO_PI},
        "init": {"kind": "annulus", "phase_seed": 202,
                 "modulus_low": 0.0, "modulus_high": 2.0, "modulus_seed": 303},
        "sim": {"dt": 1e-3, "t_end": 20.0, "record_stride": 10,
                "boundary_layer_delta": 0.0},
        "compare_real": True,
        "outputs": ["csv", "plots", "summary"],
    },
}


def preset_scenario(name: str) -> Scenario:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; have {sorted(PRESETS)}")
    return Scenario.from_dict(PRESETS[name])


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

_SEED_SLOTS = {
    "network.seed": 0,
    "omega.seed": 1,
    "init.phase_seed": 2,
    "init.modulus_seed": 3,
}


def _set_path(d: Dict[str, Any], dotted: str, value: Any) -> None:
    keys = dotted.split(".")
    cur = d
    for k in keys[:-1]:
        if not isinstance(cur, dict) or k not in cur:
            raise ConfigError(f"sweep axis path {dotted!r} not found in base config")
        cur = cur[k]
    if not isinstance(cur, dict) or keys[-1] not in cur:
        raise ConfigError(f"sweep axis path {dotted!r} not found in base config")
    cur[keys[-1]] = value


def run_sweep(
    source: Union[str, Path, Dict[str, Any]],
    outdir: Union[str, Path],
) -> List[Dict[str, Any]]:
    """Run every combination of the sweep axes over a base scenario.

    Config: ``{"name": ..., "base": <scenario>, "axes":
    [{"path": "controller.alpha", "values": [...]}, ...],
    "master_seed": <optional>}``.

    Explicit seeds in the base stay fixed across runs (so axes compare
    like against like); seed fields set to null are derived per run from
    ``master_seed``.  Per-run failures are recorded in their aggregate
    row and the sweep continues.  Returns the aggregate rows; artifacts
    land in ``outdir/run_XXX`` plus ``outdir/aggregate.csv``.
    """
    if isinstance(source, (str, Path)):
        try:
            swp = json.loads(Path(source).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read {source}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source} is not valid JSON: {exc}") from exc
    else:
        swp = copy.deepcopy(source)
    base = _need(swp, "base", "sweep")
    axes = _need(swp, "axes", "sweep")
    if not isinstance(axes, list) or not axes:
        raise ConfigError("sweep.axes must be a nonempty list")
    for ax in axes:
        if not ax.get("values"):
            raise ConfigError(f"sweep axis {ax.get('path')!r} has no values")
    master_seed = swp.get("master_seed")

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = [ax["path"] for ax in axes]
    rows: List[Dict[str, Any]] = []
    for idx, combo in enumerate(itertools.product(*(ax["values"] for ax in axes))):
        cfg = copy.deepcopy(base)
        for pth, val in zip(paths, combo):
            _set_path(cfg, pth, val)
        for dotted, slot in _SEED_SLOTS.items():
            keys = dotted.split(".")
            parent = cfg.get(keys[0], {})
            if isinstance(parent, dict) and parent.get(keys[1], "absent") is None:
                if master_seed is None:
                    raise ConfigError(
                        f"{dotted} is null but sweep has no master_seed"
                    )
                parent[keys[1]] = derive_seed(master_seed, idx * 8 + slot)
        cfg["name"] = f"{swp.get('name', cfg.get('name', 'sweep'))}_run{idx:03d}"
        row: Dict[str, Any] = {"run": idx}
        row.update({pth: val for pth, val in zip(paths, combo)})
        try:
            summary = run_scenario(cfg, outdir=outdir / f"run_{idx:03d}")
            row.update(
                status="ok",
                hash=summary.scenario_hash,
                reaching_measured=summary.reaching_measured,
                reaching_bound=summary.reaching_bound,
                tail_mean_r=summary.tail_mean_r,
                final_e=summary.final_e,
                steady_e=summary.steady_e,
                max_e=summary.max_e,
                error="",
            )
        except KuranetError as exc:
            row.update(
                status="error",
                hash="",
                reaching_measured=None,
                reaching_bound=None,
                tail_mean_r=None,
                final_e=None,
                steady_e=None,
                max_e=None,
                error=f"{type(exc).__name__}: {exc}",
            )
        rows.append(row)

    cols = (
        ["run"] + paths
        + ["status", "hash", "reaching_measured", "reaching_bound",
           "tail_mean_r", "final_e", "steady_e", "max_e", "error"]
    )
    with open(outdir / "aggregate.csv", "w") as fh:
        fh.write(",".join(cols) + "\n")
        for row in rows:
            cells = []
            for c in cols:
                v = row.get(c)
                if v is None:
                    cells.append("")
                elif isinstance(v, float):
                    cells.append(format(v, ".17g"))
                else:
                    cells.append(str(v).replace(",", ";"))
            fh.write(",".join(cells) + "\n")
    return rows

"""The five control laws and their gain/bound calculators.

Laws (w ranks by what they guarantee):

* ``switched_ff``   -- feedforward that cancels the radial coupling drift
  exactly; from unit initial magnitudes the arguments match the real
  Kuramoto phases for all time.
* ``ff_smc``        -- the feedforward plus a radial sliding-mode term of
  gain alpha; drives magnitudes to 1 in finite time from any start.
* ``complex_smc``   -- non-autonomous complex sliding mode on the manifold
  s(x, t) = x - e^{i wbar t} 1; locks every phase to the prescribed
  frequency wbar in finite time when the gains dominate the equivalent
  control.
* ``roberts``       -- diagonal state feedback u = -diag(mu) x; asymptotic
  magnitude consensus when the closed-loop matrix satisfies the marginal
  spectral conditions (checked by :func:`verify_roberts_spectrum`).
* ``hybrid_reset``  -- periodic projection onto the unit circle with linear
  flow in between (handled by the propagator in :mod:`kuranet.sim`; the
  jump map lives here).

The control-law functions implement the ideal switched mathematics:
exact signum, no regularization.  Fixed-step simulation adds one
documented realization detail for the radial law.  A sampled switching
action travels alpha * dt per step, so distances below that are
unresolvable: the exact signum just chatters across the surface in an
O(alpha * dt) band, and -- worse -- its full +/-alpha keeps firing off
the RK4 stage points, which leave the circle by O(dt^2 |xdot|^2) even
from an exactly-unit state, polluting the argument dynamics the
feedforward part keeps exact.  The standard sampled-data treatment is
to saturate the signum inside the one-step band: ``band = alpha * dt``
maps sign(|x|-1) to clip((|x|-1)/band, -1, 1).  Outside the band this
IS the exact signum (reaching behavior and its finite-time bound are
untouched); inside, it is a deadbeat pull that parks magnitudes on the
surface at roundoff instead of chattering around it.  The simulator
wires that band in and records it in run metadata; calling
:func:`u_ff_smc` directly with ``band=0`` gives the ideal law.

The prescribed-frequency manifold is different: it moves, and holding
it needs the nonzero equivalent control, so persistent switching is the
mechanism, not an artifact.  That law keeps the exact signum and
chatters in the documented O(K * dt) band.

A smooth boundary layer sign_d(z) = z/(|z| + delta) is additionally
available on both discontinuous laws; it is off (delta = 0) unless
requested and recorded in run metadata when active.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .cxmath import coupling_f, csign, eigen_spectrum
from .dynamics import ComplexState
from .errors import PreconditionError
from .network import Network, OscParams



# ---------------------------------------------------------------------------
# controller specifications (tagged union)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoControl:
    kind: str = field(default="none", init=False)


@dataclass(frozen=True)
class SwitchedFF:
    kind: str = field(default="switched_ff", init=False)


@dataclass(frozen=True)
class FFSMC:
    alpha: float
    kind: str = field(default="ff_smc", init=False)

    def __post_init__(self):
        if not (self.alpha > 0.0):
            raise PreconditionError("ff_smc needs alpha > 0")


@dataclass(frozen=True)
class ComplexSMC:
    K: np.ndarray            # (n,) positive gains
    omega_bar: float         # prescribed locking frequency, rad/s
    kind: str = field(default="complex_smc", init=False)

    def __post_init__(self):
        K = np.atleast_1d(np.asarray(self.K, dtype=np.float64))
        if np.any(K <= 0.0):
            raise PreconditionError("complex_smc needs componentwise K > 0")
        object.__setattr__(self, "K", K)


@dataclass(frozen=True)
class Roberts:
    mu: np.ndarray           # (n,) real feedback gains
    kind: str = field(default="roberts", init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "mu", np.atleast_1d(np.asarray(self.mu, dtype=np.float64))
        )


@dataclass(frozen=True)
class HybridReset:
    window: float            # seconds between resets
    kind: str = field(default="hybrid_reset", init=False)

    def __post_init__(self):
        if not (self.window > 0.0):
            raise PreconditionError("hybrid_reset needs window > 0")


ControllerSpec = Union[NoControl, SwitchedFF, FFSMC, ComplexSMC, Roberts, HybridReset]


@dataclass(frozen=True)
class SmcDiagnostics:
    """Margin report for the prescribed-frequency law."""

    epsilon2: float                      # min K_i - (||omega||_inf + wbar + sigma(N-1))
    u_eq_bound: np.ndarray               # componentwise bound on |u_eq|
    condition_violated: bool             # epsilon2 <= 0
    reaching_bound: Optional[float] = None   # sqrt(2)/eps2 * ||x0 - 1||_2
    s: Optional[np.ndarray] = None           # switching function value, if evaluated


# ---------------------------------------------------------------------------
# control laws
# ---------------------------------------------------------------------------

def u_switched_ff(x: np.ndarray, net: Network, params: OscParams) -> np.ndarray:
    """Feedforward u_k = -f_k(x) e^{i phi_k}.

    This product form is algebraically identical to the polar statement
    (|u_k| = |f_k|, phase offset pi/2 (1 + sign f_k)) but has no branch
    discontinuity at f_k = 0.  The radial rate under it is exactly zero
    for every x, and its angular contribution vanishes identically.
    """
    x = np.asarray(x, dtype=np.complex128)
    f = coupling_f(x, net, params)
    return -f * (x / np.abs(x))


def _radial_sign(moduli: np.ndarray, delta: float, band: float) -> np.ndarray:
    """sign(|x| - 1); with band > 0 saturated to clip(d/band, -1, 1);
    with delta > 0 the smooth layer d/(|d| + delta) instead."""
    d = moduli - 1.0
    if delta > 0.0:
        return d / (np.abs(d) + delta)
    if band > 0.0:
        return np.clip(d / band, -1.0, 1.0)
    return np.sign(d)


def u_ff_smc(
    x: np.ndarray,
    net: Network,
    params: OscParams,
    alpha: float,
    delta: float = 0.0,
    band: float = 0.0,
) -> np.ndarray:
    """Feedforward plus radial sliding mode:
    u = u_ff - alpha sign(|x| - 1) e^{i phi}.

    The radial rate under the total input is -alpha sign(|x_k| - 1), so
    magnitudes reach the unit circle within sqrt(2)/alpha * || |x(0)| - 1 ||_2
    seconds; the angular dynamics never see either term.  ``band``/
    ``delta`` select the sampled-data realizations described in the
    module docstring; both default to the ideal exact signum.
    """
    if not (alpha > 0.0):
        raise PreconditionError("alpha must be positive")
    x = np.asarray(x, dtype=np.complex128)
    mag = np.abs(x)
    f = coupling_f(x, net, params)
    unit = x / mag
    return -(f + alpha * _radial_sign(mag, delta, band)) * unit


def switching_function(x: np.ndarray, t: float, omega_bar: float) -> np.ndarray:
    """s(x, t) = x - e^{i wbar t} 1; zero exactly on the phase-locked
    manifold where |x_k| = 1 and phi_k = wbar t."""
    x = np.asarray(x, dtype=np.complex128)
    return x - np.exp(1j * omega_bar * t)


def u_sign_law(s: np.ndarray, K: np.ndarray, delta: float = 0.0) -> np.ndarray:
    """Generic switched action u = -diag(K) sign(s) for any switching
    function value; with delta > 0 the signum is smoothed to s/(|s|+delta)."""
    s = np.asarray(s, dtype=np.complex128)
    K = np.asarray(K, dtype=np.float64)
    if delta > 0.0:
        return -K * (s / (np.abs(s) + delta))
    return -K * csign(s)


def u_complex_smc(
    x: np.ndarray,
    t: float,
    K: np.ndarray,
    omega_bar: float,
    delta: float = 0.0,
) -> np.ndarray:
    """Prescribed-frequency sliding mode: -diag(K) sign(x - e^{i wbar t} 1)."""
    return u_sign_law(switching_function(x, t, omega_bar), K, delta)


def u_equivalent(
    x: np.ndarray, t: float, net: Network, params: OscParams, omega_bar: float
) -> np.ndarray:
    """Equivalent control on the locking manifold:
    u_eq = i wbar e^{i wbar t} 1 - (i diag(omega) + sigma A) x.

    The control that would hold the state exactly on s = 0; its modulus
    is what the switching gains must dominate.
    """
    x = np.asarray(x, dtype=np.complex128)
    drift = 1j * (params.omega * x) + params.sigma * (net.adjacency @ x)
    return 1j * omega_bar * np.exp(1j * omega_bar * t) - drift


def gain_threshold(params: OscParams, n: int, omega_bar: float) -> np.ndarray:
    """Componentwise sufficient gain omega_i + wbar + sigma (N-1).

    Conservative: derived for all-to-all coupling, so sparse networks
    lock with smaller gains too.
    """
    return params.omega + omega_bar + params.sigma * (n - 1)


def gain_margin(
    K: np.ndarray,
    params: OscParams,
    n: int,
    omega_bar: float,
    x0: Optional[np.ndarray] = None,
) -> SmcDiagnostics:
    """Margin eps2 = min K_i - (||omega||_inf + wbar + sigma(N-1)) and,
    given x0, the finite reaching-time bound sqrt(2)/eps2 ||x0 - 1||_2.

    A nonpositive margin is reported, not raised: the sufficient
    condition failing does not mean the run is invalid.
    """
    K = np.atleast_1d(np.asarray(K, dtype=np.float64))
    bound = gain_threshold(params, n, omega_bar)
    eps2 = float(np.min(K) - (np.max(np.abs(params.omega)) + omega_bar
                              + params.sigma * (n - 1)))
    reaching = None
    if x0 is not None and eps2 > 0.0:
        x0 = np.asarray(x0, dtype=np.complex128)
        reaching = float(np.sqrt(2.0) / eps2 * np.linalg.norm(x0 - 1.0))
    return SmcDiagnostics(
        epsilon2=eps2,
        u_eq_bound=bound,
        condition_violated=eps2 <= 0.0,
        reaching_bound=reaching,
    )


def u_roberts(x: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """Diagonal state feedback u = -diag(mu) x."""
    return -np.asarray(mu, dtype=np.float64) * np.asarray(x, dtype=np.complex128)


def roberts_mu_degree(net: Network, params: OscParams) -> np.ndarray:
    """Degree-based feedback gains mu = sigma * deg.

    Valid construction only for identical natural frequencies on a
    connected graph: the closed loop becomes i omega I - sigma L, whose
    spectrum is i omega (eigenvector 1_n, equal moduli) plus eigenvalues
    shifted left by sigma times the positive Laplacian spectrum.
    """
    from .network import is_connected  # local import to avoid cycle at module load

    omega = params.omega
    if np.max(omega) - np.min(omega) > 1e-12:
        raise PreconditionError(
            "degree-based feedback needs identical natural frequencies"
        )
    if not is_connected(net):
        raise PreconditionError("degree-based feedback needs a connected graph")
    return params.sigma * net.degrees.astype(np.float64)


@dataclass(frozen=True)
class SpectrumCheck:
    valid: bool
    marginal_eigenvalue: complex
    modulus_spread: float


def verify_roberts_spectrum(
    net: Network, params: OscParams, mu: np.ndarray, tol: float = 1e-8
) -> SpectrumCheck:
    """Check the closed-loop matrix i diag(omega) - diag(mu) + sigma A
    for the marginal-spectrum conditions: exactly one eigenvalue with
    |Re| <= tol whose eigenvector has modulus spread <= tol, all other
    eigenvalues with Re < -tol."""
    mu = np.asarray(mu, dtype=np.float64)
    M = (1j * np.diag(params.omega) - np.diag(mu)
         + params.sigma * net.adjacency)
    pairs = eigen_spectrum(M, tol=max(tol, 1e-10))
    res = np.array([lam.real for lam, _ in pairs])
    marginal = [i for i, r in enumerate(res) if abs(r) <= tol]
    # report the eigenvalue nearest the imaginary axis regardless of verdict
    nearest = int(np.argmin(np.abs(res)))
    lam_m, vec_m = pairs[marginal[0] if len(marginal) == 1 else nearest]
    mags = np.abs(vec_m)
    spread = float(np.max(mags) - np.min(mags))
    valid = (
        len(marginal) == 1
        and spread <= tol
        and all(r < -tol for i, r in enumerate(res) if i != marginal[0])
    )
    return SpectrumCheck(
        valid=valid, marginal_eigenvalue=lam_m, modulus_spread=spread
    )


def hybrid_reset_jump(state: ComplexState) -> ComplexState:
    """Reset map: project each nonzero component onto the unit circle,
    preserving its phase; zero components stay zero (sign(0) = 0) and
    the unwrapped-argument bookkeeping passes through untouched."""
    return ComplexState(
        x=csign(state.x), unwrapped_args=state.unwrapped_args.copy()
    )

"""Right-hand sides of the three simulated systems.

* real phase model:      dtheta_k/dt = omega_k + sigma sum_j a_kj sin(theta_j - theta_k)
* open-loop complex:     dx/dt = (i diag(omega) + sigma A) x
* controlled complex:    dx/dt = (i diag(omega) + sigma A) x + u

plus the polar decomposition of the controlled flow and the unwrapped
phase bookkeeping.  Phase arguments are carried as first-class state
next to x because the phase-correspondence metric compares unbounded
phases; principal branches would make it meaningless.  The integrator
updates the lift once per accepted step via :func:`unwrap_step`.

All evaluators are pure functions on immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .cxmath import DEGENERATE_MODULUS, coupling_f, coupling_g, modarg
from .errors import PreconditionError, UnwrapAmbiguityError
from .network import Network, OscParams

#: tolerance for the lift-vs-principal consistency invariant
LIFT_CONSISTENCY_TOL = 1e-9

#: how close to +/-pi a per-step phase change may get before the
#: continuous lift is declared ambiguous
UNWRAP_AMBIGUITY_MARGIN = 1e-9


@dataclass(frozen=True)
class ComplexState:
    """Complex state vector plus the continuous lift of its arguments."""

    x: np.ndarray               # (n,) complex128
    unwrapped_args: np.ndarray  # (n,) float64, == arg(x) mod 2pi where defined

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.complex128)
        args = np.asarray(self.unwrapped_args, dtype=np.float64)
        if x.shape != args.shape:
            raise PreconditionError("x and unwrapped_args must have equal length")
        mag, principal = modarg(x)
        ok = mag < DEGENERATE_MODULUS
        mismatch = np.abs(_wrap_to_pi(args - principal))
        if np.any(~ok & (mismatch > LIFT_CONSISTENCY_TOL)):
            raise PreconditionError(
                "unwrapped_args disagree with principal arguments of x"
            )
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "unwrapped_args", args)

    @classmethod
    def from_x(cls, x: np.ndarray) -> "ComplexState":
        """Lift initialized at the principal arguments."""
        x = np.asarray(x, dtype=np.complex128)
        _, args = modarg(x)
        return cls(x=x, unwrapped_args=args)

    @classmethod
    def from_polar(cls, moduli: np.ndarray, phases: np.ndarray) -> "ComplexState":
        """Build m * e^{i phase} with the given phases as the exact lift."""
        moduli = np.asarray(moduli, dtype=np.float64)
        phases = np.asarray(phases, dtype=np.float64)
        x = moduli * np.exp(1j * phases)
        return cls(x=x, unwrapped_args=phases.copy())


def _wrap_to_pi(delta: np.ndarray) -> np.ndarray:
    """Reduce angle differences into [-pi, pi)."""
    return (delta + np.pi) % (2.0 * np.pi) - np.pi


def rhs_real(theta: np.ndarray, net: Network, params: OscParams) -> np.ndarray:
    """Phase velocities of the real Kuramoto model (rad/s)."""
    theta = np.asarray(theta, dtype=np.float64)
    z = np.exp(1j * theta)
    # sum_j a_kj sin(theta_j - theta_k) = Im(e^{-i theta_k} (A z)_k)
    return params.omega + params.sigma * np.imag(np.conj(z) * (net.adjacency @ z))


def system_matrix(net: Network, params: OscParams) -> np.ndarray:
    """Open-loop system matrix i diag(omega) + sigma A."""
    return 1j * np.diag(params.omega) + params.sigma * net.adjacency


def rhs_complex_open(x: np.ndarray, net: Network, params: OscParams) -> np.ndarray:
    """Open-loop complex velocities (i diag(omega) + sigma A) x."""
    x = np.asarray(x, dtype=np.complex128)
    return 1j * (params.omega * x) + params.sigma * (net.adjacency @ x)


def rhs_complex_controlled(
    x: np.ndarray, u: np.ndarray, net: Network, params: OscParams
) -> np.ndarray:
    """Controlled complex velocities: open loop plus the input u."""
    return rhs_complex_open(x, net, params) + np.asarray(u, dtype=np.complex128)


def radial_and_angular_rates(
    x: np.ndarray, u: np.ndarray, net: Network, params: OscParams
) -> Tuple[np.ndarray, np.ndarray]:
    """Magnitude/argument decomposition of the controlled flow:

        d|x_k|/dt  = f_k(x) + |u_k| cos(phi_u - phi_x)
        dphi_k/dt  = g_k(x) + (|u_k|/|x_k|) sin(phi_u - phi_x)

    The control projections are evaluated through u conj(x), which is
    the same quantity without trig branch cases:
    |u| cos(phi_u - phi_x) = Re(u conj(x)) / |x|.
    """
    x = np.asarray(x, dtype=np.complex128)
    u = np.asarray(u, dtype=np.complex128)
    f = coupling_f(x, net, params)
    g = coupling_g(x, net, params)
    mag = np.abs(x)
    cross = u * np.conj(x)
    return f + np.real(cross) / mag, g + np.imag(cross) / (mag * mag)


def unwrap_step(prev_args: np.ndarray, new_principal: np.ndarray) -> np.ndarray:
    """Advance the continuous lift: the representative of new_principal
    (mod 2pi) nearest prev_args.

    Requires the true per-step change to stay below pi; a wrapped change
    at the +/-pi boundary is genuinely ambiguous and raises.
    """
    prev_args = np.asarray(prev_args, dtype=np.float64)
    new_principal = np.asarray(new_principal, dtype=np.float64)
    delta = _wrap_to_pi(new_principal - prev_args)
    if np.any(np.abs(delta) >= np.pi - UNWRAP_AMBIGUITY_MARGIN):
        k = int(np.argmax(np.abs(delta)))
        raise UnwrapAmbiguityError(
            f"phase step of component {k} is {delta[k]:+.6f} rad, at the "
            "unwrap ambiguity boundary (integrator step too large)"
        )
    return prev_args + delta

"""Complex vector/matrix primitives.

Conventions used throughout the toolkit:

* complex signum: sign(z) = z/|z| for z != 0, and sign(0) = 0 -- unit
  magnitude, phase preserving;
* principal arguments live in (-pi, pi], with arg(0) := 0 so the polar
  decomposition is total;
* modulus guard: coupling fields divide by |x_k| (and need arguments),
  so any component with |x_k| < 1e-12 raises DegenerateMagnitudeError.
  Controlled trajectories stay near |x| = 1; tripping the guard signals
  a genuinely broken run, not a tolerance issue.

The two coupling fields of the phase/magnitude decomposition are

    f_k(x) = sigma * sum_j a_kj |x_j| cos(phi_j - phi_k)
    g_k(x) = omega_k + sigma * sum_j a_kj (|x_j|/|x_k|) sin(phi_j - phi_k)

evaluated here through the algebraically identical complex forms
Re/Im(e^{-i phi_k} (A x)_k), which cost one matvec and avoid trig calls.

Also in this module: a dense matrix exponential (scaling and squaring
with the order-13 diagonal Pade approximant) used by the reset-based
propagator, and a dense eigensolver (Householder Hessenberg reduction +
shifted QR + Schur back-substitution) used by the spectral validity
check for diagonal state feedback.  Both are implemented here, on top
of numpy array arithmetic only, so their behavior is pinned by this
repository rather than by whichever LAPACK build happens to be present.
"""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DegenerateMagnitudeError,
    EigenConvergenceError,
    MatExpOverflowError,
    PreconditionError,
)
from .network import Network, OscParams

ComplexArray = NDArray[np.complex128]
FloatArray = NDArray[np.float64]

#: components below this modulus have no usable argument
DEGENERATE_MODULUS = 1e-12

#: largest dimension accepted by the dense eigensolver
MAX_EIG_DIM = 2048


def csign(w: np.ndarray) -> ComplexArray:
    """Componentwise complex signum: w_k/|w_k|, with sign(0) = 0."""
    w = np.asarray(w, dtype=np.complex128)
    mag = np.abs(w)
    out = np.zeros_like(w)
    nz = mag > 0.0
    out[nz] = w[nz] / mag[nz]
    return out


def modarg(x: np.ndarray) -> Tuple[FloatArray, FloatArray]:
    """Polar split (moduli, principal args in (-pi, pi]); arg(0) = 0."""
    x = np.asarray(x, dtype=np.complex128)
    mag = np.abs(x)
    arg = np.angle(x)
    # -pi only occurs via signed-zero imaginary parts; fold onto the
    # upper-closed branch
    arg[arg == -np.pi] = np.pi
    arg[mag == 0.0] = 0.0
    return mag, arg


def _require_nondegenerate(x: np.ndarray) -> None:
    mag = np.abs(x)
    if np.any(mag < DEGENERATE_MODULUS):
        k = int(np.argmin(mag))
        raise DegenerateMagnitudeError(
            f"|x_{k}| = {mag[k]:.3e} < {DEGENERATE_MODULUS:g}; argument undefined"
        )


def coupling_f(x: np.ndarray, net: Network, params: OscParams) -> FloatArray:
    """Radial coupling field f_k(x); equals the magnitude drift of the
    open-loop complex system when |x| = 1."""
    x = np.asarray(x, dtype=np.complex128)
    _require_nondegenerate(x)
    phase = np.conj(x) / np.abs(x)          # e^{-i phi_k}
    return params.sigma * np.real(phase * (net.adjacency @ x))


def coupling_g(x: np.ndarray, net: Network, params: OscParams) -> FloatArray:
    """Angular coupling field g_k(x); the argument-rate of the open-loop
    complex system, and the real Kuramoto right-hand side when |x| = 1."""
    x = np.asarray(x, dtype=np.complex128)
    _require_nondegenerate(x)
    mag = np.abs(x)
    phase = np.conj(x) / mag
    return params.omega + params.sigma * np.imag(phase * (net.adjacency @ x)) / mag


# ---------------------------------------------------------------------------
# matrix exponential: scaling and squaring, order-13 diagonal Pade
# ---------------------------------------------------------------------------

# Pade-13 numerator coefficients (denominator = same with alternating signs)
_PADE13 = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
)
# largest 1-norm for which the unscaled order-13 approximant meets
# double-precision accuracy
_THETA13 = 5.371920351148152


def matexp(M: np.ndarray, t: float = 1.0) -> ComplexArray:
    """exp(M*t) for a dense square complex matrix."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise PreconditionError("matexp needs a square matrix")
    with np.errstate(over="ignore", invalid="ignore"):
        A = M * t
    if not np.all(np.isfinite(A.view(np.float64))):
        raise MatExpOverflowError("non-finite entries in matexp input")
    n = A.shape[0]
    norm1 = float(np.max(np.sum(np.abs(A), axis=0))) if n else 0.0
    squarings = 0
    if norm1 > _THETA13:
        squarings = int(math.ceil(math.log2(norm1 / _THETA13)))
        A = A / (2.0 ** squarings)

    ident = np.eye(n, dtype=np.complex128)
    b = _PADE13
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A2 @ A4
    U = A @ (
        A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
        + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident
    )
    V = (
        A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
        + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident
    )
    R = np.linalg.solve(V - U, V + U)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(squarings):
            R = R @ R
            if not np.all(np.isfinite(R.view(np.float64))):
                raise MatExpOverflowError("non-finite intermediate while squaring")
    return R


# ---------------------------------------------------------------------------
# dense eigensolver: Hessenberg + shifted QR + Schur back-substitution
# ---------------------------------------------------------------------------

def _hessenberg(M: ComplexArray) -> Tuple[ComplexArray, ComplexArray]:
    """Householder reduction H = Q^H M Q with H upper Hessenberg."""
    n = M.shape[0]
    H = M.copy()
    Q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = H[k + 1:, k]
        normx = np.linalg.norm(x)
        if normx == 0.0:
            continue
        v = x.copy()
        alpha = v[0]
        phase = alpha / abs(alpha) if alpha != 0.0 else 1.0
        v[0] += phase * normx
        beta = 2.0 / np.real(np.vdot(v, v))
        # similarity transform by P = I - beta v v^H on the trailing block
        H[k + 1:, k:] -= beta * np.outer(v, np.conj(v) @ H[k + 1:, k:])
        H[:, k + 1:] -= beta * np.outer(H[:, k + 1:] @ v, np.conj(v))
        Q[:, k + 1:] -= beta * np.outer(Q[:, k + 1:] @ v, np.conj(v))
    return H, Q


def _givens(a: complex, b: complex) -> Tuple[float, complex]:
    """(c, s) with c real >= 0, c^2+|s|^2 = 1, and
    [[c, s], [-conj(s), c]] @ [a, b] = [r, 0]."""
    if b == 0.0:
        return 1.0, 0.0 + 0.0j
    if a == 0.0:
        return 0.0, np.conj(b) / abs(b)
    absa = abs(a)
    r = math.hypot(absa, abs(b))
    return absa / r, (a / absa) * np.conj(b) / r


def _qr_triangularize(
    H: ComplexArray, Q: ComplexArray
) -> Tuple[ComplexArray, ComplexArray]:
    """Shifted QR on a Hessenberg matrix; returns (T, Q) with T upper
    triangular and T = Q^H M Q."""
    n = H.shape[0]
    eps = np.finfo(np.float64).eps
    m = n - 1
    stagnant = 0
    budget = 30 * max(n, 1)
    sweeps = 0
    while m > 0:
        # deflation scan: split at the first negligible subdiagonal
        l = m
        while l > 0:
            s = abs(H[l - 1, l - 1]) + abs(H[l, l])
            if s == 0.0:
                s = 1.0
            if abs(H[l, l - 1]) <= eps * s:
                H[l, l - 1] = 0.0
                break
            l -= 1
        if l == m:
            m -= 1
            stagnant = 0
            continue
        sweeps += 1
        stagnant += 1
        if sweeps > budget:
            raise EigenConvergenceError(
                f"QR iteration did not deflate within {budget} sweeps"
            )
        # Wilkinson shift: eigenvalue of the trailing 2x2 nearest H[m, m]
        a, b = H[m - 1, m - 1], H[m - 1, m]
        c, d = H[m, m - 1], H[m, m]
        tr2 = (a + d) / 2.0
        disc = np.sqrt(np.complex128(tr2 * tr2 - (a * d - b * c)))
        mu = tr2 + disc if abs(tr2 + disc - d) <= abs(tr2 - disc - d) else tr2 - disc
        if stagnant % 12 == 0:
            # exceptional shift to break rare oscillation cycles
            mu = d + 0.75 * abs(H[m, m - 1])
        for i in range(l, m + 1):
            H[i, i] -= mu
        rots = []
        for i in range(l, m):
            gc, gs = _givens(H[i, i], H[i + 1, i])
            rots.append((i, gc, gs))
            r0 = H[i, i:].copy()
            r1 = H[i + 1, i:]
            H[i, i:] = gc * r0 + gs * r1
            H[i + 1, i:] = -np.conj(gs) * r0 + gc * r1
        for i, gc, gs in rots:
            hi = min(i + 2, m) + 1
            c0 = H[:hi, i].copy()
            c1 = H[:hi, i + 1]
            H[:hi, i] = gc * c0 + np.conj(gs) * c1
            H[:hi, i + 1] = -gs * c0 + gc * c1
            q0 = Q[:, i].copy()
            q1 = Q[:, i + 1]
            Q[:, i] = gc * q0 + np.conj(gs) * q1
            Q[:, i + 1] = -gs * q0 + gc * q1
        for i in range(l, m + 1):
            H[i, i] += mu
    return H, Q


def _schur_vectors(T: ComplexArray, Q: ComplexArray) -> ComplexArray:
    """Eigenvectors from the triangular factor by back-substitution,
    rotated back to the original basis.  Near-equal diagonal entries are
    perturbed at roundoff scale, which is the standard treatment for
    (numerically) repeated eigenvalues."""
    n = T.shape[0]
    scale = max(float(np.max(np.abs(T))), 1.0)
    smallnum = np.finfo(np.float64).eps * scale
    vecs = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        lam = T[i, i]
        y = np.zeros(n, dtype=np.complex128)
        y[i] = 1.0
        for j in range(i - 1, -1, -1):
            rhs = -(T[j, j + 1:i + 1] @ y[j + 1:i + 1])
            den = T[j, j] - lam
            if abs(den) < smallnum:
                den = smallnum
            y[j] = rhs / den
            big = abs(y[j])
            if big > 1.0 / smallnum:
                y[j:i + 1] /= big
        v = Q @ y
        vecs[:, i] = v / np.linalg.norm(v)
    return vecs


def eigen_spectrum(
    M: np.ndarray, tol: float = 1e-8
) -> List[Tuple[complex, ComplexArray]]:
    """All eigenpairs of a dense square matrix, sorted by (Re, Im).

    Eigenvectors have unit 2-norm.  Residuals ||M v - lambda v||_2 are
    verified against tol * ||M||_F; failure raises EigenConvergenceError.
    """
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise PreconditionError("eigen_spectrum needs a square matrix")
    n = M.shape[0]
    if n > MAX_EIG_DIM:
        raise PreconditionError(f"dense eigensolver limited to n <= {MAX_EIG_DIM}")
    if n == 1:
        return [(complex(M[0, 0]), np.array([1.0 + 0.0j]))]
    H, Q = _hessenberg(M)
    T, Q = _qr_triangularize(H, Q)
    vecs = _schur_vectors(T, Q)
    lams = np.diag(T)
    order = np.lexsort((lams.imag, lams.real))
    scale = float(np.linalg.norm(M)) or 1.0
    pairs = []
    for i in order:
        lam, v = complex(lams[i]), vecs[:, i]
        resid = float(np.linalg.norm(M @ v - lam * v))
        if resid > tol * scale:
            raise EigenConvergenceError(
                f"eigenpair residual {resid:.3e} exceeds {tol:g} * ||M||"
            )
        pairs.append((lam, v))
    return pairs

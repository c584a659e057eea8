import numpy as np
import pytest
from scipy.linalg import expm as scipy_expm

from kuranet import csign, coupling_f, coupling_g, eigen_spectrum, matexp, modarg
from kuranet.errors import DegenerateMagnitudeError, PreconditionError
from tests.conftest import make_params

C = np.complex128


# ---------------------------------------------------------------- csign

def test_csign_zero():
    assert csign(np.array([0.0 + 0.0j]))[0] == 0.0


def test_csign_values():
    out = csign(np.array([3 + 4j, -2.0 + 0j]))
    assert np.allclose(out, [0.6 + 0.8j, -1.0])


def test_csign_unit_magnitude_and_reconstruction():
    rng = np.random.RandomState(0)
    w = rng.randn(500) + 1j * rng.randn(500)
    s = csign(w)
    assert np.all(np.abs(np.abs(s) - 1.0) < 1e-15)
    # reconstruction identity s * |w| == w
    assert np.max(np.abs(s * np.abs(w) - w)) < 1e-12


# --------------------------------------------------------------- modarg

def test_modarg_cases():
    mag, arg = modarg(np.array([1j, -1.0 + 0j, 1 + 1j, 0.0]))
    assert np.allclose(mag, [1.0, 1.0, np.sqrt(2), 0.0])
    assert np.allclose(arg, [np.pi / 2, np.pi, np.pi / 4, 0.0])


def test_modarg_principal_branch_upper_closed():
    # signed-zero imaginary part must not leak a -pi argument
    _, arg = modarg(np.array([complex(-1.0, -0.0)]))
    assert arg[0] == np.pi


def test_modarg_round_trip():
    rng = np.random.RandomState(1)
    x = rng.randn(300) + 1j * rng.randn(300)
    mag, arg = modarg(x)
    back = mag * np.exp(1j * arg)
    assert np.max(np.abs(back - x) / np.abs(x)) < 1e-12


# ------------------------------------------------------------- coupling

def test_coupling_f_examples(k2):
    params = make_params([0.0, 0.0], sigma=0.5)
    assert np.allclose(coupling_f(np.array([1, 1], C), k2, params), [0.5, 0.5])
    assert np.allclose(
        coupling_f(np.array([1, 1j], C), k2, params), [0.0, 0.0], atol=1e-15
    )
    assert np.allclose(coupling_f(np.array([1, 2], C), k2, params), [1.0, 0.5])


def test_coupling_g_examples(k2):
    p12 = make_params([1.0, 2.0], sigma=0.5)
    assert np.allclose(coupling_g(np.array([1, 1], C), k2, p12), [1.0, 2.0])
    p0 = make_params([0.0, 0.0], sigma=0.5)
    assert np.allclose(coupling_g(np.array([1, 1j], C), k2, p0), [0.5, -0.5])
    assert np.allclose(coupling_g(np.array([1, 2j], C), k2, p0), [1.0, -0.25])


def test_coupling_matches_trig_sums(p3):
    # independent oracle: literal double sums with explicit trig calls
    rng = np.random.RandomState(2)
    params = make_params([1.0, -0.5, 2.0], sigma=0.7)
    for _ in range(50):
        mag = rng.uniform(0.2, 2.0, 3)
        phi = rng.uniform(-np.pi, np.pi, 3)
        x = mag * np.exp(1j * phi)
        f_ref = np.zeros(3)
        g_ref = params.omega.copy()
        for k in range(3):
            for j in range(3):
                akj = p3.adjacency[k, j]
                f_ref[k] += params.sigma * akj * mag[j] * np.cos(phi[j] - phi[k])
                g_ref[k] += (
                    params.sigma * akj * mag[j] / mag[k] * np.sin(phi[j] - phi[k])
                )
        assert np.allclose(coupling_f(x, p3, params), f_ref, atol=1e-12)
        assert np.allclose(coupling_g(x, p3, params), g_ref, atol=1e-12)


def test_coupling_common_phase_gives_natural_rates(p3):
    # any common phase: angular coupling vanishes (sin(0) = 0), so g == omega
    params = make_params([1.0, 2.0, 3.0], sigma=0.9)
    x = np.array([0.5, 1.5, 2.5]) * np.exp(1j * 1.234)
    assert np.allclose(coupling_g(x, p3, params), params.omega, atol=1e-14)


def test_coupling_degenerate_guard(k2):
    params = make_params([0.0, 0.0], sigma=0.5)
    with pytest.raises(DegenerateMagnitudeError):
        coupling_f(np.array([1.0, 1e-13], C), k2, params)
    with pytest.raises(DegenerateMagnitudeError):
        coupling_g(np.array([1e-13, 1.0], C), k2, params)


# --------------------------------------------------------------- matexp

def test_matexp_zero_is_identity():
    assert np.allclose(matexp(np.zeros((3, 3), C), 1.0), np.eye(3))


def test_matexp_diagonal_rotation():
    om = np.array([1.0, 2.5, -0.7])
    E = matexp(1j * np.diag(om), 0.8)
    assert np.allclose(np.diag(E), np.exp(1j * om * 0.8), atol=1e-12)
    # off-diagonals exactly preserved as zero by the diagonal Pade form
    assert np.max(np.abs(E - np.diag(np.diag(E)))) < 1e-14


def test_matexp_nilpotent():
    E = matexp(np.array([[0, 1], [0, 0]], C), 1.0)
    assert np.allclose(E, [[1, 1], [0, 1]], atol=1e-15)


def test_matexp_semigroup_random():
    rng = np.random.RandomState(3)
    for _ in range(20):
        n = rng.randint(2, 7)
        M = rng.randn(n, n) + 1j * rng.randn(n, n)
        M *= 10.0 / np.linalg.norm(M)
        t1, t2 = rng.uniform(0.1, 1.5, 2)
        full = matexp(M, t1 + t2)
        split = matexp(M, t1) @ matexp(M, t2)
        assert np.linalg.norm(split - full) <= 1e-8 * np.linalg.norm(full)


def test_matexp_magnitude_preserving_for_imaginary_diagonal():
    om = np.linspace(-3, 7, 6)
    E = matexp(1j * np.diag(om), 2.3)
    assert np.max(np.abs(np.abs(np.diag(E)) - 1.0)) < 1e-12


def test_matexp_against_scipy():
    rng = np.random.RandomState(4)
    for _ in range(10):
        n = rng.randint(2, 12)
        M = rng.randn(n, n) + 1j * rng.randn(n, n)
        ours = matexp(M, 0.7)
        ref = scipy_expm(M * 0.7)
        assert np.linalg.norm(ours - ref) <= 1e-10 * max(1.0, np.linalg.norm(ref))


def test_matexp_overflow_is_reported():
    from kuranet.errors import MatExpOverflowError

    with pytest.raises(MatExpOverflowError):
        matexp(np.array([[1000.0]], C), 1.0)  # e^1000 overflows while squaring
    with pytest.raises(MatExpOverflowError):
        matexp(np.array([[1e308]], C), 10.0)  # scaling stage sees inf


def test_matexp_large_norm_scaling_path():
    rng = np.random.RandomState(5)
    M = rng.randn(8, 8)
    M = (M - M.T) * 40.0  # skew: well conditioned, big norm
    ours = matexp(M.astype(C), 1.0)
    ref = scipy_expm(M)
    assert np.linalg.norm(ours - ref) <= 1e-9 * np.linalg.norm(ref)


# ------------------------------------------------------------ eigenpairs

def test_eigen_diagonal():
    pairs = eigen_spectrum(np.diag([1.0, 2.0]).astype(C))
    lams = [lam for lam, _ in pairs]
    assert np.allclose(lams, [1.0, 2.0])
    assert np.allclose(np.abs(pairs[0][1]), [1.0, 0.0])
    assert np.allclose(np.abs(pairs[1][1]), [0.0, 1.0])


def test_eigen_k2_closed_loop():
    # i*omega*I - sigma*L(K2): Laplacian spectrum {0, 2} by hand, so with
    # sigma = 0.5 the eigenvalues are {i omega, i omega - 1}
    omega = 2 * np.pi
    L = np.array([[1.0, -1.0], [-1.0, 1.0]])
    M = 1j * omega * np.eye(2) - 0.5 * L
    lams = [lam for lam, _ in eigen_spectrum(M)]
    assert np.allclose(
        sorted(lams, key=lambda z: z.real),
        [1j * omega - 1.0, 1j * omega],
        atol=1e-9,
    )


def test_eigen_laplacian_marginal_pair():
    # i omega I - sigma L has L 1 = 0: exactly one eigenvalue on the
    # imaginary axis, eigenvector proportional to the ones vector
    from kuranet import erdos_renyi

    net = erdos_renyi(24, 0.4, seed=8)
    omega = 2 * np.pi
    M = 1j * omega * np.eye(24) - 0.3 * net.laplacian()
    pairs = eigen_spectrum(M, tol=1e-8)
    res = np.array([lam.real for lam, _ in pairs])
    marginal = np.nonzero(np.abs(res) <= 1e-8)[0]
    assert len(marginal) == 1
    vec = pairs[int(marginal[0])][1]
    mags = np.abs(vec)
    assert np.max(mags) - np.min(mags) < 1e-8


def test_eigen_residuals_random_vs_numpy():
    rng = np.random.RandomState(6)
    for n in (3, 10, 40):
        A = rng.randn(n, n) + 1j * rng.randn(n, n)
        pairs = eigen_spectrum(A, tol=1e-8)
        assert len(pairs) == n
        scale = np.linalg.norm(A)
        for lam, v in pairs:
            assert abs(np.linalg.norm(v) - 1.0) < 1e-12
            assert np.linalg.norm(A @ v - lam * v) <= 1e-8 * scale
        lam_mine = np.sort_complex(np.array([l for l, _ in pairs]))
        lam_ref = np.sort_complex(np.linalg.eigvals(A))
        assert np.max(np.abs(lam_mine - lam_ref)) < 1e-9 * max(1.0, scale)


def test_eigen_repeated_eigenvalues():
    # complete graph Laplacian: eigenvalue n with multiplicity n-1
    n = 6
    A = np.ones((n, n)) - np.eye(n)
    L = np.diag(A.sum(1)) - A
    pairs = eigen_spectrum(L.astype(C), tol=1e-8)
    lams = sorted(lam.real for lam, _ in pairs)
    assert np.allclose(lams, [0.0] + [n] * (n - 1), atol=1e-8)


def test_eigen_dimension_guard():
    with pytest.raises(PreconditionError):
        eigen_spectrum(np.zeros((3000, 3000), C))

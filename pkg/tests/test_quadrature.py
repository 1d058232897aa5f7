import math

import numpy as np
import pytest
from scipy import integrate

from fracbed import quadrature as qd
from fracbed import specfun as sf
from fracbed.params import AdmissibilityError


def test_integrate_adaptive_endpoint_power():
    r = qd.integrate_adaptive(lambda t: t ** -0.5, 0.0, 1.0, 1e-12)
    assert r.value == pytest.approx(2.0, abs=1e-10)
    assert r.converged and r.panels >= 1


def test_integrate_adaptive_whole_line():
    r = qd.integrate_adaptive(lambda t: 1 / (1 + t * t), -math.inf, math.inf, 1e-12)
    assert r.value == pytest.approx(math.pi, rel=1e-11)
    assert r.converged


def test_integrate_adaptive_inversion_symmetry():
    f = lambda t: abs(t ** 0.5 - t ** -0.5) ** 2 / (1 + t) ** 2 / t
    full = qd.integrate_adaptive(f, 0.0, math.inf, 1e-11, points=(1.0,))
    # t -> 1/t maps (1, inf) onto (0, 1) with the same measure dt/t up to (1+t)^-2 weight
    g = lambda t: abs(t ** 0.5 - t ** -0.5) ** 2 * (1 / (1 + t) ** 2 + 1 / (1 + 1 / t) ** 2) / t
    folded = qd.integrate_adaptive(g, 0.0, 1.0, 1e-11)
    assert full.value == pytest.approx(folded.value, rel=1e-10)


def test_integrate_adaptive_flags_divergence():
    r = qd.integrate_adaptive(lambda t: 1 / t, 0.0, 1.0, 1e-10)
    assert not r.converged


def test_sphere_slice_examples():
    assert qd.sphere_slice_integral(3, lambda s: 1.0).value == pytest.approx(4 * math.pi, rel=1e-13)
    for n in (1, 2, 3, 5):
        assert qd.sphere_slice_integral(n, lambda s: s).value == pytest.approx(0.0, abs=1e-12)
    assert qd.sphere_slice_integral(1, lambda s: s * s + 1).value == 4.0


def test_sphere_slice_parametrisation_change():
    g = lambda s: (2 - 2 * s) ** -0.25
    r = qd.sphere_slice_integral(2, g)
    # oracle: algebraic-weight rule in s = cos(theta); the slice density
    # (1 - s^2)^{-1/2} and g's own (1 - s)^{-1/4} both go into the weight
    v, _ = integrate.quad(lambda s: 2 * 2 ** -0.25, -1, 1, weight="alg",
                          wvar=(-0.5, -0.75), epsabs=0, epsrel=1e-12)
    assert r.value == pytest.approx(v, rel=1e-9)


@pytest.mark.parametrize("n", [4, 5])
def test_sphere_slice_total_area(n):
    assert qd.sphere_slice_integral(n, lambda s: 1.0).value == pytest.approx(sf.sphere_area(n), rel=1e-12)


# -- psi and D_{p,beta} ---------------------------------------------------------

@pytest.mark.parametrize("t", [0.1, 0.5, 2.0, 10.0])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_psi_inversion_symmetry(t, n):
    a = qd.psi_kernel(n, 1.5, 0.3, t)
    b = qd.psi_kernel(n, 1.5, 0.3, 1 / t)
    assert a == pytest.approx(b, rel=1e-10)


def test_psi_two_point_sphere():
    t, p, b = 3.0, 2.0, 0.5
    e = -(1 + p * b) / 2
    ref = (t + 1 / t - 2) ** e + (t + 1 / t + 2) ** e
    assert qd.psi_kernel(1, p, b, t) == pytest.approx(ref, rel=1e-14)


def test_psi_n3_monte_carlo_and_closed_form():
    n, p, b, t = 3, 2.0, 0.5, 2.0
    a = (n + p * b) / 2
    A = t + 1 / t
    closed = math.pi / (a - 1) * ((A - 2) ** (1 - a) - (A + 2) ** (1 - a))
    rng = np.random.default_rng(3)
    xi = rng.standard_normal((1_000_000, 3))
    xi /= np.linalg.norm(xi, axis=1)[:, None]
    mc = 4 * math.pi * np.mean((A - 2 * xi[:, 0]) ** (-a))
    v = qd.psi_kernel(n, p, b, t)
    assert v == pytest.approx(closed, rel=1e-11)
    assert v == pytest.approx(mc, rel=1e-3)


def test_psi_infinite_at_one():
    assert qd.psi_kernel(2, 2.0, 0.5, 1.0) == math.inf


def test_D_mellin_half_line_symmetry():
    half = qd.D_pbeta_mellin(2, 1.5, 0.3, half=True)
    full = qd.D_pbeta_mellin_fullline(2, 1.5, 0.3)
    assert 2 * half.value == pytest.approx(full.value, rel=1e-9)


@pytest.mark.parametrize("n,p,b", [(2, 2.0, 0.5), (1, 1.5, 0.3), (3, 1.0, 0.3)])
def test_D_cross_representation(n, p, b):
    m = qd.D_pbeta_mellin(n, p, b)
    d = qd.D_pbeta_direct(n, p, b)
    assert m.converged and d.converged
    assert m.value > 0
    assert m.value == pytest.approx(d.value, rel=1e-6)


def test_D_monotone_in_beta_diagnostic():
    vals = [qd.D_pbeta_mellin(2, 2.0, b).value for b in (0.2, 0.4, 0.6, 0.8)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_D_reflection_change_of_variables():
    # with F(t) = |t^{lam/2} - t^{-lam/2}|^p psi(t) / t, the substitution
    # t -> 1/t (dt -> dt/t^2) requires F(1/t) = t^2 F(t)
    n, p, b = 2, 2.0, 0.3
    lam = (n - p * b) / p
    F = lambda t: abs(t ** (lam / 2) - t ** (-lam / 2)) ** p * qd.psi_kernel(n, p, b, t) / t
    for t in (0.3, 0.7, 4.0):
        assert F(1 / t) == pytest.approx(t * t * F(t), rel=1e-10)


def test_D_inadmissible():
    with pytest.raises(AdmissibilityError):
        qd.D_pbeta_mellin(1, 2.0, 0.6)


# -- Stein-Weiss --------------------------------------------------------------

def test_sw_specialises_to_direct():
    n, p, b = 2, 2.0, 0.5
    K = lambda x, y: float(np.linalg.norm(x - y)) ** (-n - p * b)
    r = qd.sw_constant(K, n, p, p * b)
    assert r.value == pytest.approx(qd.D_pbeta_direct(n, p, b).value, rel=1e-8)


def test_sw_linear_in_kernel():
    n, p, g = 2, 2.0, 1.0
    K = lambda x, y: max(np.linalg.norm(x), np.linalg.norm(y)) ** (-n - g)
    a = qd.sw_constant(K, n, p, g, singular_at_eta=False)
    b = qd.sw_constant(lambda x, y: 3.0 * K(x, y), n, p, g, singular_at_eta=False)
    assert a.converged and a.value > 0
    assert b.value == pytest.approx(3 * a.value, rel=1e-12)


def test_sw_max_kernel_matches_polar_quadrature():
    n, p, g = 2, 2.0, 1.0
    lam = (n - g) / p
    # K(x, eta) = max(|x|, 1)^{-n-g} is radial in x: 2 pi int |1-r^-lam|^p max(r,1)^{-3} r dr
    v = sum(integrate.quad(lambda r: 2 * math.pi * abs(1 - r ** -lam) ** p * max(r, 1) ** (-n - g) * r,
                           lo, hi, epsabs=0, epsrel=1e-12)[0] for lo, hi in ((0, 1), (1, math.inf)))
    K = lambda x, y: max(np.linalg.norm(x), np.linalg.norm(y)) ** (-n - g)
    assert qd.sw_constant(K, n, p, g, singular_at_eta=False).value == pytest.approx(v, rel=1e-8)


def test_sw_rejects_inhomogeneous_kernel():
    K = lambda x, y: math.exp(-float(np.linalg.norm(x - y)))
    with pytest.raises(AdmissibilityError):
        qd.sw_constant(K, 2, 2.0, 1.0)


# -- oscillatory kernel constants -------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("b", [0.25, 0.5, 0.75])
def test_pitt_numerator_p2_identity(n, b):
    v = qd.pitt_numerator(n, 2.0, b).value
    ref = 2 * (2 * math.pi) ** (2 * b) * sf.cosine_kernel_integral(n, 2 * b).value
    assert v == pytest.approx(ref, rel=1e-10)


def test_pitt_numerator_direction_independent_in_the_plane():
    # independent oracle: polar quadrature in R^2 with an explicit direction
    pp, b = 3.0, 0.4
    lam = pp * b
    rng = np.random.default_rng(11)
    vals = []
    for _ in range(2):
        phi0 = rng.uniform(0, 2 * math.pi)
        m = qd.sine_power_moment(pp, lam).value

        def ang(phi):
            return abs(math.cos(phi - phi0)) ** lam
        a, _ = integrate.quad(ang, 0, 2 * math.pi, points=[(phi0 + math.pi / 2) % (2 * math.pi),
                                                          (phi0 + 3 * math.pi / 2) % (2 * math.pi)],
                              epsabs=0, epsrel=1e-13, limit=200)
        vals.append(m * a)
    got = qd.pitt_numerator(2, pp, b, eta=[0.3, -0.8]).value
    assert vals[0] == pytest.approx(vals[1], rel=1e-10)
    assert got == pytest.approx(vals[0], rel=1e-10)


def test_sine_moment_against_direct_integral():
    q, lam = 3.0, 1.5
    f = lambda u: u ** (-1 - lam) * abs(2 * math.sin(math.pi * u)) ** q
    head = sum(integrate.quad(f, k, k + 1, epsabs=0, epsrel=1e-13)[0] for k in range(0, 2000))
    tail = 2 ** q * (math.gamma(q / 2 + 0.5) / (math.sqrt(math.pi) * math.gamma(q / 2 + 1))) * 2000 ** -lam / lam
    assert qd.sine_power_moment(q, lam).value == pytest.approx(head + tail, rel=1e-6)


def test_delta_kernel_q2_reduction():
    # |2 sin(pi s)|^2 = 2(1 - cos 2 pi s)
    for n in (1, 2, 3):
        lam = 0.7
        v = qd.delta_kernel_constant(n, 2.0, lam).value
        ref = 2 * (2 * math.pi) ** lam * sf.cosine_kernel_integral(n, lam).value
        assert v == pytest.approx(ref, rel=1e-10)
    assert qd.delta_kernel_constant(1, 3.0, 1.5).value > 0


def test_delta_kernel_divergence_flagged():
    r = qd.delta_kernel_constant(1, 2.0, 2.5)
    assert not r.converged and math.isinf(r.value)


# -- psi_lambda on the complex sphere --------------------------------------------

def test_psi_lambda_monte_carlo():
    rng = np.random.default_rng(5)
    acc = []
    for _ in range(8):
        z = rng.standard_normal((1_000_000, 4))
        z /= np.linalg.norm(z, axis=1)[:, None]
        acc.append(np.mean(np.abs(1.5 - (z[:, 0] + 1j * z[:, 1])) ** -3.0))
    mc = float(np.mean(acc))
    assert qd.psi_lambda_rho(2, 3.0, 1.5).value == pytest.approx(mc, rel=1e-3)


def test_psi_lambda_dominant_balance_and_monotone():
    vals = [qd.psi_lambda_rho(2, 1.5, r).value for r in (1.0, 1.2, 2.0, 5.0, 20.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert qd.psi_lambda_rho(2, 1.5, 1e4).value * 1e4 ** 1.5 == pytest.approx(1.0, rel=1e-6)
    assert qd.psi_lambda_rho(1, 0.5, 1e4).value * 1e4 ** 0.5 == pytest.approx(1.0, rel=1e-6)


def test_psi_lambda_boundary_divergence():
    assert not qd.psi_lambda_rho(2, 2.0, 1.0).converged
    assert qd.psi_lambda_rho(2, 1.9, 1.0).converged

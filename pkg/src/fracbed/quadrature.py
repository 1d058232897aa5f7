"""Singular and unbounded-domain integrals behind the sharp constants.

All one-dimensional work goes through :func:`integrate_adaptive`, a thin
layer over QUADPACK's QAGS that maps infinite ends to (0, 1) with an
explicit algebraic substitution and splits at declared singular points.
Sphere integrals of functions of one coordinate are sliced in the polar
angle, which keeps the slice weight sin^{n-2} bounded for every n >= 2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special

from .params import AdmissibilityError, Params
from .specfun import sphere_area

DEFAULT_TOL = 1e-8
PANEL_LIMIT = 400


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error: float
    panels: int
    converged: bool
    notes: str = ""

    def __float__(self) -> float:
        return float(self.value)

    def as_dict(self) -> dict:
        return {"value": self.value, "absError": self.abs_error,
                "panels": self.panels, "converged": self.converged}


def _combine(parts: Sequence[QuadratureResult], tol: float,
             notes: str = "") -> QuadratureResult:
    v = math.fsum(r.value for r in parts)
    e = math.fsum(r.abs_error for r in parts)
    ok = all(r.converged for r in parts) and e <= tol * max(1.0, abs(v))
    return QuadratureResult(v, e, sum(r.panels for r in parts), ok, notes)


@dataclass(frozen=True)
class RadialKernelSpec:
    """Homogeneous radial kernel |x|^{exponent} with its singular set."""
    n: int
    exponent: float
    singular_points: tuple = (0.0, 1.0, math.inf)

    def __post_init__(self):
        if math.inf in self.singular_points and not self.exponent < -self.n:
            # power decay too slow at infinity to be integrable by itself
            object.__setattr__(self, "singular_points",
                               tuple(self.singular_points))

    @classmethod
    def besov(cls, n: int, p: float, beta: float) -> "RadialKernelSpec":
        return cls(n, -n - p * beta)


def _quad(f, a, b, tol, points=None, limit=PANEL_LIMIT) -> QuadratureResult:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        kw = {}
        if points:
            pts = sorted(x for x in points if a < x < b)
            if pts:
                kw["points"] = pts
        val, err, info, *rest = integrate.quad(
            f, a, b, epsabs=0.0, epsrel=tol, limit=limit, full_output=1, **kw)
    ier = rest[0] if rest and isinstance(rest[0], int) else 0
    if rest and isinstance(rest[0], str):
        ier = 1
    panels = int(info.get("last", 1)) if isinstance(info, dict) else 1
    ok = math.isfinite(val) and err <= tol * max(1.0, abs(val)) * 10 and ier in (0,)
    return QuadratureResult(float(val), float(err), max(panels, 1), bool(ok))


def integrate_adaptive(f: Callable[[float], float], a: float, b: float,
                       tol: float = DEFAULT_TOL,
                       points: Sequence[float] = ()) -> QuadratureResult:
    """Integrate f over (a, b), where either end may be infinite.

    Infinite ends are mapped onto a unit interval by x = a + u/(1-u)
    (and its mirror images); interior ``points`` split the range and are
    treated as endpoint singularities by the extrapolating rule.
    """
    if a == b:
        return QuadratureResult(0.0, 0.0, 1, True)
    if a > b:
        r = integrate_adaptive(f, b, a, tol, points)
        return QuadratureResult(-r.value, r.abs_error, r.panels, r.converged)
    cuts = sorted({x for x in points if a < x < b and math.isfinite(x)})
    if math.isinf(a) and math.isinf(b):
        if not cuts:
            cuts = [0.0]
    if cuts:
        edges = [a, *cuts, b]
        parts = [integrate_adaptive(f, lo, hi, tol)
                 for lo, hi in zip(edges[:-1], edges[1:])]
        return _combine(parts, tol)
    if math.isinf(b):
        def g(u):
            if u >= 1.0:
                return 0.0
            w = 1.0 - u
            return f(a + u / w) / (w * w)
        return _quad(g, 0.0, 1.0, tol)
    if math.isinf(a):
        def g(u):
            if u >= 1.0:
                return 0.0
            w = 1.0 - u
            return f(b - u / w) / (w * w)
        return _quad(g, 0.0, 1.0, tol)
    return _quad(f, a, b, tol)


def _geometric_points(scale: float, top: float) -> list[float]:
    pts = []
    x = scale
    while 0 < x < top:
        pts.append(x)
        x *= 8.0
    return pts


def sphere_slice_integral(n: int, g: Callable[[float], float],
                          tol: float = 1e-10, *, gap: bool = False,
                          peak: float | None = None) -> QuadratureResult:
    """Integral over S^{n-1} of a function of the first coordinate.

    With ``gap=True`` the callback receives u = 1 - xi_1 (computed as
    2 sin^2(theta/2), free of cancellation) instead of xi_1.  ``peak`` is
    the polar-angle scale of a near-singularity at xi_1 = 1; it seeds
    geometric breakpoints.
    """
    if n < 1:
        raise AdmissibilityError("n >= 1", f"n={n}")
    if n == 1:
        if gap:
            v = g(0.0) + g(2.0)
        else:
            v = g(1.0) + g(-1.0)
        return QuadratureResult(float(v), 0.0, 1, math.isfinite(v))
    wt = sphere_area(n - 1)
    m = n - 2

    if gap:
        def h(th):
            s = math.sin(0.5 * th)
            return g(2.0 * s * s) * math.sin(th) ** m
    else:
        def h(th):
            return g(math.cos(th)) * math.sin(th) ** m

    pts = _geometric_points(peak, math.pi) if peak else []
    r = integrate_adaptive(h, 0.0, math.pi, tol, pts)
    return QuadratureResult(wt * r.value, wt * r.abs_error, r.panels,
                            r.converged)


# -- the Lemma-1 constant D_{p,beta} --------------------------------------

def _lam(n, p, beta):
    return Params.for_lemma1(n, p, beta).lam


def psi_kernel(n: int, p: float, beta: float, t: float,
               tol: float = 1e-11) -> float:
    """psi(t) = int_{S^{n-1}} [t + 1/t - 2 xi_1]^{-(n + p beta)/2} d xi.

    Returns +inf at t = 1, where the slice integral always diverges.
    """
    if not t > 0:
        raise AdmissibilityError("t > 0", f"t={t}")
    if t == 1.0:
        return math.inf
    a = 0.5 * (n + p * beta)
    d = (t - 1.0) ** 2 / t          # t + 1/t - 2, without cancellation
    r = sphere_slice_integral(n, lambda u: (d + 2.0 * u) ** (-a), tol,
                              gap=True, peak=math.sqrt(d))
    return r.value


def _log_two_sinh(x: float) -> float:
    return x + math.log1p(-math.exp(-2.0 * x))


def _mellin_integrand(n: int, p: float, lam: float, a: float, s: float,
                      tol: float) -> float:
    # (2 sinh(lam s/2))^p psi(e^{-s}); t + 1/t - 2 = d = 4 sinh^2(s/2).
    # psi = d^{-a} int (1 + 2u/d)^{-a}, prefactors combined in logs.
    if s == 0.0:
        return 0.0
    log_d = 2.0 * _log_two_sinh(0.5 * s)
    d = math.exp(log_d) if log_d < 700 else math.inf
    if math.isinf(d):
        shape = sphere_area(n)
    else:
        shape = sphere_slice_integral(
            n, lambda u: (1.0 + 2.0 * u / d) ** (-a), tol, gap=True,
            peak=math.sqrt(d)).value
    lg = p * _log_two_sinh(0.5 * lam * s) - a * log_d
    return math.exp(lg) * shape


def D_pbeta_mellin(n: int, p: float, beta: float, tol: float = 1e-9,
                   half: bool = False) -> QuadratureResult:
    """D_{p,beta} from its multiplicative-group form.

    D = int_0^inf |t^{lam/2} - t^{-lam/2}|^p psi(t) dt/t.  The integrand
    is inversion symmetric, so the default evaluates 2 x (0, 1) in the
    variable s = -ln t; ``half=True`` returns the (0, 1) half alone.  Near t = 1 the integrand behaves like
    |t - 1|^{p(1-beta) - 1}, integrable for every admissible (p, beta).
    """
    lam = _lam(n, p, beta)
    a = 0.5 * (n + p * beta)
    inner = min(1e-11, tol * 1e-2)

    def f(s):
        return _mellin_integrand(n, p, lam, a, s, inner)

    r = integrate_adaptive(f, 0.0, math.inf, tol, points=(1.0,))
    k = 1.0 if half else 2.0
    return QuadratureResult(k * r.value, k * r.abs_error, r.panels,
                            r.converged, "mellin")


def D_pbeta_mellin_fullline(n: int, p: float, beta: float,
                            tol: float = 1e-9) -> QuadratureResult:
    """Same constant integrated over both halves (0,1) and (1,inf) in t."""
    lam = _lam(n, p, beta)

    def f(t):
        if t == 1.0:
            return 0.0
        return abs(t ** (0.5 * lam) - t ** (-0.5 * lam)) ** p \
            * psi_kernel(n, p, beta, t, 1e-11) / t

    lo = integrate_adaptive(f, 0.0, 1.0, tol)
    hi = integrate_adaptive(f, 1.0, math.inf, tol)
    return _combine([lo, hi], tol, "mellin-fullline")


def D_pbeta_direct(n: int, p: float, beta: float,
                   tol: float = 1e-9) -> QuadratureResult:
    """D_{p,beta} = int |1 - |x|^{-lam}|^p |x - eta|^{-n-p beta} dx directly.

    Coordinates are centred at eta: x = eta + rho omega, with the polar
    angle of omega measured from -eta so that the origin singularity of
    |x|^{-lam} sits at rho = 1 on the pole of the slice.
    """
    lam = _lam(n, p, beta)
    pb = p * beta
    inner = min(1e-11, tol * 1e-2)

    def radial(rho):
        if rho == 0.0:
            return 0.0
        gap1 = (1.0 - rho) ** 2

        def g(u):
            # |x|^2 = (1-rho)^2 + 2 rho u, u = 1 + cos(angle to eta)
            r2 = gap1 + 2.0 * rho * u
            if r2 == 0.0:
                return 0.0
            return abs(1.0 - r2 ** (-0.5 * lam)) ** p
        w = sphere_slice_integral(n, g, inner, gap=True,
                                  peak=abs(1.0 - rho) + 1e-300)
        return w.value * rho ** (-1.0 - pb)

    r = integrate_adaptive(radial, 0.0, math.inf, tol, points=(1.0,))
    return QuadratureResult(r.value, r.abs_error, r.panels, r.converged,
                            "direct")


def _check_homogeneous(K, n, gamma, rng) -> None:
    for _ in range(3):
        u = rng.standard_normal(n)
        v = rng.standard_normal(n)
        d = float(rng.uniform(0.3, 3.0))
        lhs = K(d * u, d * v)
        rhs = d ** (-n - gamma) * K(u, v)
        if not math.isclose(lhs, rhs, rel_tol=1e-9, abs_tol=0.0):
            raise AdmissibilityError("kernel homogeneous of degree -n-gamma",
                                     f"K(du,dv)={lhs}, d^(-n-g)K={rhs}")


def sw_constant(kernel: Callable[[np.ndarray, np.ndarray], float], n: int,
                p: float, gamma: float, tol: float = 1e-9,
                singular_at_eta: bool = True) -> QuadratureResult:
    """int |1 - |x|^{-lam}|^p K(x, eta) dx, lam = (n - gamma)/p.

    K must be rotation invariant and homogeneous of degree -n-gamma; the
    homogeneity is spot-checked.  A divergent integral comes back with
    ``converged=False`` rather than an exception.
    """
    prm = Params.for_stein_weiss(n, p, gamma)
    lam = prm.lam
    _check_homogeneous(kernel, n, gamma, np.random.default_rng(12345))
    eta = np.zeros(n)
    eta[0] = 1.0
    inner = min(1e-11, tol * 1e-2)

    def radial(r):
        if r == 0.0:
            return 0.0
        base = abs(1.0 - r ** (-lam)) ** p * r ** (n - 1)

        def g(u):
            # x = r (cos th, sin th, 0...), u = 1 - cos th
            c = 1.0 - u
            s = math.sqrt(max(0.0, u * (2.0 - u)))
            x = np.zeros(n)
            x[0] = r * c
            if n > 1:
                x[1] = r * s
            return kernel(x, eta)
        peak = abs(1.0 - r) + 1e-300 if singular_at_eta else None
        return base * sphere_slice_integral(n, g, inner, gap=True,
                                            peak=peak).value

    r = integrate_adaptive(radial, 0.0, math.inf, tol, points=(1.0,))
    ok = r.converged and math.isfinite(r.value)
    return QuadratureResult(r.value, r.abs_error, r.panels, ok, "stein-weiss")


# -- oscillatory kernel constants -----------------------------------------

def abs_power_sphere_moment(n: int, lam: float) -> float:
    """int_{S^{n-1}} |xi_1|^lam d xi."""
    return (2.0 * math.pi ** (0.5 * (n - 1)) * math.gamma(0.5 * (lam + 1))
            / math.gamma(0.5 * (n + lam)))


def sine_power_moment(q: float, lam: float, tol: float = 1e-12
                      ) -> QuadratureResult:
    """M = int_0^inf u^{-1-lam} |2 sin(pi u)|^q du for 0 < lam < q.

    Folding the half-line onto one period gives
    M = int_0^1 |2 sin(pi u)|^q zeta(1+lam, u) du with Hurwitz zeta.
    """
    if not 0 < lam < q:
        return QuadratureResult(math.inf, math.inf, 1, False,
                                "divergent: need 0 < lambda < q")

    def f(u):
        if u <= 0.0 or u >= 1.0:
            return 0.0
        return (2.0 * math.sin(math.pi * u)) ** q * special.zeta(1.0 + lam, u)

    return integrate_adaptive(f, 0.0, 1.0, tol, points=(0.5,))


def _unit(eta, n):
    if eta is None:
        e = np.zeros(n)
        e[0] = 1.0
        return e
    e = np.asarray(eta, dtype=float)
    nrm = float(np.linalg.norm(e))
    if e.shape != (n,) or nrm == 0:
        raise AdmissibilityError("eta a nonzero vector in R^n")
    return e / nrm


def delta_kernel_constant(n: int, q: float, lam: float, tol: float = 1e-10,
                          eta=None) -> QuadratureResult:
    """int |x|^{-n-lam} |2 sin(pi x.eta)|^q dx for a unit vector eta.

    Polar coordinates split it into the radial sine moment times the
    spherical moment of |xi . eta|^lam; the latter is evaluated by slicing
    along eta, so the result is independent of eta by construction.
    """
    _unit(eta, n)
    m = sine_power_moment(q, lam, tol)
    if not m.converged:
        return m
    ang = sphere_slice_integral(n, lambda s: abs(s) ** lam, tol)
    v = m.value * ang.value
    err = m.abs_error * ang.value + m.value * ang.abs_error
    return QuadratureResult(v, err, m.panels + ang.panels,
                            m.converged and ang.converged, "delta")


def pitt_numerator(n: int, p_prime: float, beta: float, tol: float = 1e-10,
                   eta=None) -> QuadratureResult:
    """int |e^{2 pi i w.eta} - 1|^{p'} |w|^{-n-p' beta} dw."""
    if not 0 < beta < 1:
        raise AdmissibilityError("beta in (0,1)", f"beta={beta}")
    return delta_kernel_constant(n, p_prime, p_prime * beta, tol, eta)


def psi_lambda_rho(n: int, lam: float, rho: float,
                   tol: float = 1e-10) -> QuadratureResult:
    """Normalized average of |rho - zeta_1|^{-lam} over the unit sphere of C^n.

    The circle average in arg(zeta_1) is rho^{-lam} 2F1(lam/2, lam/2; 1; r^2/rho^2),
    and |zeta_1| = r has density 2(n-1)(1-r^2)^{n-2} r on (0, 1) for n >= 2.
    At rho = 1 the integral is finite iff lam < n.
    """
    if not rho >= 1:
        raise AdmissibilityError("rho >= 1", f"rho={rho}")
    if n < 1:
        raise AdmissibilityError("n >= 1", f"n={n}")
    if rho == 1.0 and lam >= n:
        return QuadratureResult(math.inf, math.inf, 1, False,
                                "divergent at rho=1: need lambda < n")
    a = 0.5 * lam

    def circ(r):
        return rho ** (-lam) * special.hyp2f1(a, a, 1.0, (r / rho) ** 2)

    if n == 1:
        if rho == 1.0:
            # 2F1(a,a;1;1) = Gamma(1-2a)/Gamma(1-a)^2
            v = math.gamma(1 - lam) / math.gamma(1 - a) ** 2
            return QuadratureResult(v, 0.0, 1, True)
        return QuadratureResult(float(circ(1.0)), 0.0, 1, True)

    def f(r):
        return 2.0 * (n - 1) * (1.0 - r * r) ** (n - 2) * r * circ(r)

    r = integrate_adaptive(f, 0.0, 1.0, tol)
    return QuadratureResult(r.value, r.abs_error, r.panels, r.converged,
                            "psi_lambda")

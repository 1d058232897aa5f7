"""Rearrangements on grids and numerical checks of the two-point machinery.

Grid functions are viewed as functions on the lattice h Z^n that vanish
outside the sampled box, with the origin at the centre node.  Reflections
are taken in coordinate planes that sit halfway between nodes, so a
reflection is an exact bijection of the lattice.  Discrete energies are
summed over the whole lattice: the box is padded far enough that the
kernel (compactly supported, or negligible beyond the pad) sees every
pair that contributes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline

from .fields import GridFunction, besov_seminorm, fourier, lp_norm
from .params import AdmissibilityError
from .specfun import sphere_area


# ---------------------------------------------------------------------------
# gauges and kernels

@dataclass(frozen=True)
class Gauge:
    """A convex gauge phi with phi(0) = 0 for the two-point energy."""
    name: str
    phi: Callable[[np.ndarray], np.ndarray]

    def __call__(self, t):
        return self.phi(t)


def power_gauge(p: float) -> Gauge:
    if p < 1:
        raise AdmissibilityError("gauge t^p needs p >= 1", f"p={p}")
    return Gauge(f"power({p:g})", lambda t, p=p: np.abs(t) ** p)


def cosh_gauge() -> Gauge:
    return Gauge("cosh", lambda t: np.cosh(t) - 1.0)


CATALOG = ("power", "cosh")


def validate_gauge(g: Gauge, t_max: float = 4.0, points: int = 64) -> Gauge:
    """Spot-check the hypotheses on a user gauge at ``points`` sample points.

    Checked: phi(0) = 0, phi >= 0 and non-decreasing, phi convex, and
    t phi'(t) convex (the last through second differences of t phi').
    """
    if g.name.split("(")[0] in CATALOG:
        return g
    t = np.linspace(0.0, t_max, points)
    v = np.asarray(g(t), dtype=float)
    scale = max(1.0, float(np.max(np.abs(v))))
    tol = 1e-9 * scale
    dt = t[1] - t[0]
    d1 = np.gradient(v, dt)
    tphi = t * d1
    fails = []
    if abs(v[0]) > tol:
        fails.append("phi(0) = 0")
    if np.any(v < -tol) or np.any(np.diff(v) < -tol):
        fails.append("phi non-negative and increasing")
    if np.any(np.diff(v, 2) < -tol):
        fails.append("phi convex")
    if np.any(np.diff(tphi[1:-1], 2) < -1e-6 * max(1.0, np.max(np.abs(tphi)))):
        fails.append("t phi'(t) convex")
    if fails:
        raise AdmissibilityError("gauge hypotheses: " + ", ".join(fails), g.name)
    return g


@dataclass(frozen=True)
class RadialKernel:
    """K(r) non-increasing in r, with support radius (inf if not compact)."""
    name: str
    K: Callable[[np.ndarray], np.ndarray]
    support: float = math.inf
    negligible: float = math.inf  # radius past which K / K(0) < 1e-17

    def __call__(self, r):
        return self.K(r)

    @property
    def reach(self) -> float:
        return min(self.support, self.negligible)


def gaussian_kernel(width: float = 1.0) -> RadialKernel:
    return RadialKernel(f"gaussian({width:g})",
                        lambda r, w=width: np.exp(-(np.asarray(r) / w) ** 2),
                        negligible=width * math.sqrt(17 * math.log(10)))


def truncated_power_kernel(n: int, s: float, radius: float, h: float) -> RadialKernel:
    """min(r, h)^{-n-s} for r <= radius, zero beyond (non-increasing in r)."""
    def K(r, n=n, s=s, radius=radius, h=h):
        r = np.asarray(r, dtype=float)
        return np.where(r <= radius, np.maximum(r, h) ** (-n - s), 0.0)
    return RadialKernel(f"power(-{n}-{s:g})", K, support=radius)


def _unit_weight(r):
    return np.ones_like(np.asarray(r, dtype=float))


# ---------------------------------------------------------------------------
# rearrangement

def _cell_order(shape: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Flat cell indices sorted by distance from the centre node, then index."""
    center = [m // 2 for m in shape]
    grids = np.meshgrid(*[np.arange(m) - c for m, c in zip(shape, center)], indexing="ij")
    d2 = sum(g.astype(np.int64) ** 2 for g in grids).ravel()
    flat = np.arange(d2.size)
    order = np.lexsort((flat, d2))
    return order, d2


def rearrange_values(values: np.ndarray) -> np.ndarray:
    """Decreasing rearrangement of |values| about the centre node of the array."""
    a = np.abs(np.asarray(values)).ravel()
    order, _ = _cell_order(np.shape(values))
    out = np.empty_like(a, dtype=float)
    out[order] = np.sort(a)[::-1]
    return out.reshape(np.shape(values))


def decreasing_rearrangement(f: GridFunction) -> GridFunction:
    return GridFunction(f.n, f.N, f.L, rearrange_values(f.values), dict(f.meta))


def _shells(shape: tuple[int, ...]) -> np.ndarray:
    """Index matrix of distance shells, padded with -1."""
    order, d2 = _cell_order(shape)
    keys = d2[order]
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    ends = np.r_[starts[1:], keys.size]
    width = int(np.max(ends - starts))
    S = -np.ones((starts.size, width), dtype=np.int64)
    for i, (a, b) in enumerate(zip(starts, ends)):
        S[i, :b - a] = order[a:b]
    return S


def shell_l1_distance(values: np.ndarray, target: np.ndarray, h: float,
                      shells: np.ndarray | None = None) -> float:
    """L^1 distance after sorting within each distance shell.

    Cells at equal distance from the origin are interchangeable for a
    radial decreasing function, so the comparison ignores their order.
    """
    n = np.ndim(values)
    S = _shells(np.shape(values)) if shells is None else shells
    a = np.append(np.abs(np.asarray(values)).ravel(), 0.0)
    b = np.append(np.abs(np.asarray(target)).ravel(), 0.0)
    A = np.sort(a[S], axis=1)
    B = np.sort(b[S], axis=1)
    return float(h ** n * np.sum(np.abs(A - B)))


# ---------------------------------------------------------------------------
# polarisation

@dataclass(frozen=True)
class Hyperplane:
    """The plane {x . normal = offset}; the positive side holds the origin."""
    n: int
    normal: tuple[float, ...]
    offset: float

    def __post_init__(self):
        v = np.asarray(self.normal, dtype=float)
        if v.shape != (self.n,):
            raise ValueError(f"normal must have {self.n} components")
        if abs(np.linalg.norm(v) - 1) > 1e-14:
            raise ValueError("normal must be a unit vector")
        if self.offset == 0:
            raise AdmissibilityError("hyperplane must not pass through the origin", "")
        object.__setattr__(self, "normal", tuple(float(c) for c in v))

    @property
    def positive_side(self) -> int:
        """Sign of x.normal - offset on the half-space containing the origin."""
        return -1 if self.offset > 0 else 1

    @property
    def axis(self) -> int | None:
        nz = [i for i, c in enumerate(self.normal) if c != 0]
        return nz[0] if len(nz) == 1 else None

    @classmethod
    def coordinate(cls, n: int, axis: int, offset: float) -> "Hyperplane":
        e = [0.0] * n
        e[axis] = 1.0
        return cls(n, tuple(e), offset)

    def reflect(self, x: np.ndarray) -> np.ndarray:
        v = np.asarray(self.normal)
        return x - 2 * (x @ v - self.offset)[..., None] * v


def mid_cell_plane(f: GridFunction, axis: int, j: int) -> Hyperplane:
    """Plane halfway between nodes j and j+1 along ``axis``."""
    return Hyperplane.coordinate(f.n, axis, -f.L + (j + 0.5) * f.h)


def _pairing_exact(shape, h: float, L: float, H: Hyperplane):
    d = H.axis
    if d is None:
        raise ValueError("exact pairing needs a coordinate plane; pass approximate=True")
    sgn = H.normal[d]
    off = sgn * H.offset
    j = (off + L) / h - 0.5
    if abs(j - round(j)) > 1e-9:
        raise ValueError("plane is not halfway between nodes; pass approximate=True")
    j = int(round(j))
    k = np.arange(shape[d])
    partner = 2 * j + 1 - k
    x = -L + k * h
    side = np.sign(sgn * (x - off) * 1.0)
    return d, partner, side == H.positive_side * 1


def polarize_values(values: np.ndarray, h: float, L: float, H: Hyperplane,
                    approximate: bool = False) -> np.ndarray:
    """Two-point symmetrisation: the larger value moves to the origin side."""
    v = np.asarray(values, dtype=float)
    n = v.ndim
    if H.axis is not None and not approximate:
        d, partner, plus = _pairing_exact(v.shape, h, L, H)
        N = v.shape[d]
        inside = (partner >= 0) & (partner < N)
        stray = ~plus & ~inside
        if np.any(stray) and np.any(np.take(v, np.flatnonzero(stray), axis=d) != 0):
            raise ValueError("reflection would move mass outside the box")
        # a partner outside the box carries the value 0, so nothing moves there
        k = np.flatnonzero(plus & inside)
        a = np.take(v, k, axis=d)
        b = np.take(v, partner[k], axis=d)
        out = np.moveaxis(v.copy(), d, 0)
        out[k] = np.moveaxis(np.maximum(a, b), d, 0)
        out[partner[k]] = np.moveaxis(np.minimum(a, b), d, 0)
        return np.moveaxis(out, 0, d)
    return _polarize_nearest(v, h, L, H)


def _polarize_nearest(v: np.ndarray, h: float, L: float, H: Hyperplane) -> np.ndarray:
    n = v.ndim
    N = v.shape[0]
    idx = np.indices(v.shape).reshape(n, -1).T
    x = -L + idx * h
    side = np.sign(x @ np.asarray(H.normal) - H.offset)
    y = H.reflect(x)
    k = np.rint((y + L) / h).astype(np.int64)
    inside = np.all((k >= 0) & (k < N), axis=1)
    flat = np.ravel_multi_index(idx.T, v.shape)
    partner = np.full(flat.size, -1)
    partner[inside] = np.ravel_multi_index(k[inside].T, v.shape)
    a = v.ravel()
    out = a.copy()
    for i in np.flatnonzero(side == H.positive_side):
        j = partner[i]
        if j < 0:
            continue
        if partner[j] != i:
            raise ValueError("degenerate nearest-cell pairing")
        out[i], out[j] = max(a[i], a[j]), min(a[i], a[j])
    return out.reshape(v.shape)


def polarize(f: GridFunction, H: Hyperplane, approximate: bool = False) -> GridFunction:
    vals = polarize_values(np.abs(f.values) if not f.is_real else f.values,
                           f.h, f.L, H, approximate)
    meta = dict(f.meta)
    if approximate:
        meta["approximatePairing"] = True
    return GridFunction(f.n, f.N, f.L, vals, meta)


# ---------------------------------------------------------------------------
# discrete two-point energy

class PairEnergy:
    """sum_{x,y} K(|x-y|) phi(|f(x) - g(y)| / rho(|x-y|)) h^{2n} on the padded lattice."""

    def __init__(self, n: int, N: int, h: float, kernel: RadialKernel, gauge: Gauge,
                 rho: Callable = _unit_weight, max_pairs: int = 2 ** 25):
        reach = kernel.reach
        pad = int(math.ceil(reach / h)) if math.isfinite(reach) else N
        self.pad = min(pad, 4 * N)
        M = N + 2 * self.pad
        if M ** (2 * n) > max_pairs:
            raise ValueError(f"pair energy on {M}^{n} cells exceeds the budget")
        idx = np.indices((M,) * n).reshape(n, -1).T * h
        diff = idx[:, None, :] - idx[None, :, :]
        r = np.sqrt(np.sum(diff ** 2, axis=-1))
        self.K = kernel(r) * h ** (2 * n)
        self.rho = rho(r)
        self.gauge = gauge
        self.n, self.N, self.h = n, N, h

    def _pad(self, v):
        return np.pad(np.asarray(v, dtype=float), self.pad).ravel()

    def __call__(self, f_vals, g_vals) -> float:
        a = self._pad(f_vals)
        b = self._pad(g_vals)
        t = np.abs(a[:, None] - b[None, :]) / self.rho
        return float(np.sum(self.K * self.gauge(t)))


def two_point_energy_check(f: GridFunction, g: GridFunction, kernel: RadialKernel,
                           gauge: Gauge, H: Hyperplane, rho: Callable = _unit_weight,
                           energy: PairEnergy | None = None) -> tuple[float, float]:
    """Energy before and after polarising both functions in H."""
    validate_gauge(gauge)
    E = energy or PairEnergy(f.n, f.N, f.h, kernel, gauge, rho)
    before = E(f.values, g.values)
    after = E(polarize(f, H).values, polarize(g, H).values)
    return before, after


# ---------------------------------------------------------------------------
# schedules

@dataclass
class PolarizationStep:
    plane: Hyperplane
    energy_before: float
    energy_after: float
    l1_distance: float


@dataclass
class PolarizationTrace:
    steps: list[PolarizationStep] = field(default_factory=list)
    initial_distance: float = 0.0
    mass: float = 0.0
    final: np.ndarray | None = None

    @property
    def l1_distances(self) -> np.ndarray:
        return np.array([s.l1_distance for s in self.steps])

    def monotone(self, rel_tol: float = 1e-12) -> bool:
        scale = max((s.energy_before for s in self.steps), default=0.0)
        return all(s.energy_after <= s.energy_before + rel_tol * scale for s in self.steps)

    def steps_to(self, level: float) -> int | None:
        if self.initial_distance <= level:
            return 0
        for i, s in enumerate(self.steps, 1):
            if s.l1_distance <= level:
                return i
        return None

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "axis", "offset", "energyBefore", "energyAfter", "l1dist"])
            for i, s in enumerate(self.steps, 1):
                w.writerow([i, s.plane.axis, repr(s.plane.offset), repr(s.energy_before),
                            repr(s.energy_after), repr(s.l1_distance)])
        return path


def _besov_energy(f: GridFunction, p: float = 2.0, beta: float = 0.5) -> PairEnergy:
    K = truncated_power_kernel(f.n, p * beta, f.L, f.h)
    return PairEnergy(f.n, f.N, f.h, K, power_gauge(p))


def polarization_schedule(f: GridFunction, steps: int, seed: int,
                          energy: PairEnergy | None = None,
                          stop_at_zero: bool = False) -> PolarizationTrace:
    """Random coordinate mid-node polarisations of |f|.

    Each step picks an axis uniformly and a mid-node plane uniformly among
    the N - 1 planes strictly inside the box.  None of these contains the
    origin node.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rng = np.random.default_rng(seed)
    E = energy or _besov_energy(f)
    v = np.abs(np.asarray(f.values, dtype=float))
    target = rearrange_values(v)
    S = _shells(v.shape)
    trace = PolarizationTrace(initial_distance=shell_l1_distance(v, target, f.h, S),
                              mass=float(f.h ** f.n * v.sum()))
    e = E(v, v)
    dist = trace.initial_distance
    for _ in range(steps):
        axis = int(rng.integers(f.n))
        j = int(rng.integers(f.N - 1))
        H = mid_cell_plane(f, axis, j)
        w = polarize_values(v, f.h, f.L, H)
        if np.array_equal(w, v):
            after = e
        else:
            after = E(w, w)
            dist = shell_l1_distance(w, target, f.h, S)
        trace.steps.append(PolarizationStep(H, e, after, dist))
        v, e = w, after
        if stop_at_zero and dist == 0.0:
            break
    trace.final = v
    return trace


# ---------------------------------------------------------------------------
# numerical lemmas

def _sorted_pairs(a1, a2, b1, b2):
    return (np.maximum(a1, a2), np.minimum(a1, a2), np.maximum(b1, b2), np.minimum(b1, b2))


def lemma_a2_check(gauge: Gauge, samples: int = 100_000, seed: int = 0,
                   scale: float = 3.0) -> tuple[bool, float]:
    """phi|a1-b1| + phi|a2-b2| >= phi|a1*-b1*| + phi|a2*-b2*| on random quadruples.

    Returns (passed, worst relative slack).
    """
    validate_gauge(gauge)
    rng = np.random.default_rng(seed)
    a1, a2, b1, b2 = rng.uniform(0, scale, (4, samples))
    A1, A2, B1, B2 = _sorted_pairs(a1, a2, b1, b2)
    before = gauge(np.abs(a1 - b1)) + gauge(np.abs(a2 - b2))
    after = gauge(np.abs(A1 - B1)) + gauge(np.abs(A2 - B2))
    slack = (before - after) / np.maximum(1.0, before)
    worst = float(slack.min())
    return worst >= -1e-12, worst


def lemma_a3_check(gauge: Gauge, samples: int = 100_000, seed: int = 1,
                   lambdas: Sequence[float] | None = None,
                   scale: float = 3.0) -> tuple[bool, float]:
    """T(lambda) non-decreasing in lambda on random quadruples."""
    validate_gauge(gauge)
    lam = np.asarray(lambdas if lambdas is not None else np.linspace(0.05, 1.0, 16))
    rng = np.random.default_rng(seed)
    a1, a2, b1, b2 = rng.uniform(0, scale, (4, samples))
    A1, A2, B1, B2 = _sorted_pairs(a1, a2, b1, b2)
    L = lam[:, None]
    T = (gauge(L * np.abs(a1 - b1)) + gauge(L * np.abs(a2 - b2))
         - gauge(L * np.abs(A1 - B1)) - gauge(L * np.abs(A2 - B2)))
    norm = np.maximum(1.0, gauge(L * scale * 2))
    steps = np.diff(T, axis=0) / norm[1:]
    worst = float(steps.min())
    return worst >= -1e-12, worst


# ---------------------------------------------------------------------------
# inequality checks built on the seminorm

@dataclass
class CheckResult:
    lhs: float
    rhs: float
    error: float
    notes: str = ""

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs - self.error

    @property
    def strict(self) -> bool:
        return self.lhs > self.rhs + self.error


def symmetrization_inequality_check(f: GridFunction, p: float, beta: float,
                                    **kw) -> CheckResult:
    """Besov seminorm of f against that of its grid rearrangement."""
    a = besov_seminorm(f, p, beta, **kw)
    b = besov_seminorm(decreasing_rearrangement(f), p, beta, **kw)
    return CheckResult(a.value, b.value, a.abs_error + b.abs_error,
                       "seminorm of f vs seminorm of f*")


def _difference_sum(f: np.ndarray, left: np.ndarray, right: np.ndarray,
                    p: float, h: float) -> float:
    """h^2 sum_t sum_x |left(t) f(x) - right(t) f(x+t)|^p on the lattice, f zero off the box.

    ``left`` and ``right`` are sampled at t = -T..T.
    """
    N = f.size
    T = (left.size - 1) // 2
    fp = np.pad(f, (T + N, T + N))
    total = 0.0
    for i, t in enumerate(range(-T, T + 1)):
        base = fp
        shifted = np.roll(fp, -t)
        total += float(np.sum(np.abs(left[i] * base - right[i] * shifted) ** p))
    return h * h * total


def triangle_lemma_check(f: GridFunction, g: Callable, hfun: Callable, p: float,
                         reach: float) -> CheckResult:
    """Triangle-inequality lemma on the lattice, for one-dimensional grids.

    lhs = sum |g(y - x) f(x) - h(x - y) f(y)|^p, rhs = sum ||g(t)| - |h(-t)||^p sum |f|^p,
    with t restricted to |t| <= reach on both sides (the bound holds for
    each t separately, so the truncation is consistent).
    """
    if f.n != 1:
        raise ValueError("triangle_lemma_check works on one-dimensional grids")
    hstep = f.h
    T = int(math.ceil(reach / hstep))
    t = np.arange(-T, T + 1) * hstep
    left = np.asarray(g(t), dtype=complex if np.iscomplexobj(g(t)) else float)
    right = np.asarray(hfun(-t))
    vals = np.asarray(f.values)
    lhs = _difference_sum(vals, left, right, p, hstep)
    rhs = hstep * float(np.sum(np.abs(np.abs(left) - np.abs(right)) ** p)) * lp_norm(f, p) ** p
    return CheckResult(lhs, rhs, 1e-12 * max(lhs, rhs), "lattice sums")


def reduction_lemma_check(f: GridFunction, g: GridFunction, K: Callable, p: float,
                          reach: float) -> CheckResult:
    """sum K(u - v)|f(u) - g(v)|^p against sum K * | ||f||_p - ||g||_p |^p (n = 1)."""
    if f.n != 1:
        raise ValueError("reduction_lemma_check works on one-dimensional grids")
    h = f.h
    T = int(math.ceil(reach / h))
    t = np.arange(-T, T + 1) * h
    k = np.asarray(K(t), dtype=float)
    if np.any(k < 0):
        raise AdmissibilityError("K >= 0", "")
    N = f.N
    fp = np.pad(np.asarray(f.values), (T + N, T + N))
    gp = np.pad(np.asarray(g.values), (T + N, T + N))
    total = 0.0
    for i, ti in enumerate(range(-T, T + 1)):
        total += k[i] * float(np.sum(np.abs(np.roll(fp, -ti) - gp) ** p))
    lhs = h * h * total
    rhs = h * float(np.sum(k)) * abs(lp_norm(f, p) - lp_norm(g, p)) ** p
    return CheckResult(lhs, rhs, 1e-12 * max(lhs, rhs, 1e-300), "lattice sums")


# ---------------------------------------------------------------------------
# spherical L^p reduction

@dataclass
class RadialProfile:
    n: int
    p: float
    r: np.ndarray
    values: np.ndarray  # [int_S |f(r xi)|^p dxi]^{1/p}, surface measure

    def normalized(self) -> np.ndarray:
        """The profile with the normalised sphere measure (equals f for radial f)."""
        return self.values / sphere_area(self.n) ** (1 / self.p)

    def radial_lp_norm(self) -> float:
        """(int_0^inf |F(r)|^p r^{n-1} dr)^{1/p} by Simpson's rule."""
        return float(simpson(self.values ** self.p * self.r ** (self.n - 1), x=self.r)
                     ** (1 / self.p))

    def to_grid(self, like: GridFunction, normalized: bool = True) -> GridFunction:
        v = self.normalized() if normalized else self.values
        rad = like.radius()
        vals = np.where(rad <= self.r[-1], CubicSpline(self.r, v)(np.minimum(rad, self.r[-1])), 0.0)
        return GridFunction(like.n, like.N, like.L, vals)


def _sphere_rule(n: int, m: int):
    if n == 2:
        th = 2 * math.pi * np.arange(m) / m
        return np.stack([np.cos(th), np.sin(th)], 1), np.full(m, 2 * math.pi / m)
    c, wc = np.polynomial.legendre.leggauss(m)
    ph = 2 * math.pi * np.arange(2 * m) / (2 * m)
    C, P = np.meshgrid(c, ph, indexing="ij")
    S = np.sqrt(1 - C ** 2)
    d = np.stack([S * np.cos(P), S * np.sin(P), C], -1).reshape(-1, 3)
    w = np.multiply.outer(wc, np.full(2 * m, math.pi / m)).reshape(-1)
    return d, w


def spherical_lp_reduction(f: GridFunction, p: float, angular: int = 64,
                           radial_points: int | None = None) -> RadialProfile:
    """F(r) = [int_{S^{n-1}} |f(r xi)|^p dxi]^{1/p} by band-limited interpolation."""
    if f.n < 2:
        raise ValueError("spherical reduction needs n >= 2")
    F = fourier(f)
    m = radial_points or 2 * f.N
    r = np.linspace(0.0, f.L, m + 1)
    dirs, w = _sphere_rule(f.n, angular if f.n == 2 else max(8, angular // 4))
    pts = (r[:, None, None] * dirs[None]).reshape(-1, f.n)
    coef = F.values * F.dxi ** f.n
    E = [np.exp(2j * math.pi * np.multiply.outer(pts[:, d], F.axis())) for d in range(f.n)]
    if f.n == 2:
        vals = np.sum((E[0] @ coef) * E[1], axis=1)
    else:
        N = f.N
        flat = coef.reshape(N * N, N).T
        vals = np.empty(len(pts), dtype=complex)
        for a in range(0, len(pts), 2048):
            T = (E[2][a:a + 2048] @ flat).reshape(-1, N, N)
            vals[a:a + 2048] = np.einsum("pij,pi,pj->p", T, E[0][a:a + 2048], E[1][a:a + 2048])
    vals = np.abs(vals.reshape(r.size, len(dirs))) ** p
    out = (vals @ w) ** (1 / p)
    return RadialProfile(f.n, p, r, out)


def spherical_reduction_check(f: GridFunction, p: float, beta: float,
                              **kw) -> CheckResult:
    """Seminorm of f against that of its normalised spherical L^p profile."""
    prof = spherical_lp_reduction(f, p)
    a = besov_seminorm(f, p, beta, **kw)
    b = besov_seminorm(prof.to_grid(f), p, beta, **kw)
    return CheckResult(a.value, b.value, a.abs_error + b.abs_error,
                       "profile uses the normalised sphere measure")


import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracbed import rearrange as R
from fracbed.fields import GridFunction, TestFamily, sample
from fracbed.params import AdmissibilityError


def grid1(vals, L=8.0):
    vals = np.asarray(vals, dtype=float)
    return GridFunction(1, vals.size, L, vals)


# ---------------------------------------------------------------------------
# rearrangement

def test_rearrange_small_example():
    # centre node is index 2; ties go to the lower index
    out = R.rearrange_values(np.array([1.0, 3.0, 2.0, 0.0]))
    assert out.tolist() == [0.0, 2.0, 3.0, 1.0]


def test_rearrange_gaussian_is_fixed():
    f = sample(TestFamily.gaussian(), 2, 32, 4.0)
    g = R.decreasing_rearrangement(f)
    assert np.max(np.abs(g.values - np.abs(f.values))) < 1e-12
    assert R.shell_l1_distance(f.values, g.values, f.h) == 0.0


def test_rearrange_shifted_gaussian_recentres():
    x = np.arange(128) * 0.125 - 8
    f = grid1(np.exp(-math.pi * (x - 2) ** 2))
    g = R.decreasing_rearrangement(f)
    assert np.argmax(g.values) == 64
    assert np.max(np.abs(g.values - np.exp(-math.pi * x ** 2))) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2]))
def test_rearrange_equimeasurable_and_idempotent(seed, n):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(8,) * n)
    r = R.rearrange_values(v)
    assert np.allclose(np.sort(r.ravel()), np.sort(np.abs(v).ravel()))
    assert np.array_equal(R.rearrange_values(r), r)


# ---------------------------------------------------------------------------
# polarisation

def test_polarize_moves_larger_value_to_origin_side():
    v = np.zeros(8)
    # plane halfway between nodes 5 and 6 (x = 1.5h): node 5 is on the origin side
    v[5], v[6] = 2.0, 5.0
    f = grid1(v, L=4.0)
    H = R.mid_cell_plane(f, 0, 5)
    out = R.polarize(f, H).values
    assert out[5] == 5.0 and out[6] == 2.0
    assert R.polarize(GridFunction(1, 8, 4.0, out), H).values.tolist() == out.tolist()


def test_plane_through_origin_rejected():
    with pytest.raises(AdmissibilityError):
        R.Hyperplane.coordinate(1, 0, 0.0)


def test_off_grid_plane_needs_approximate_flag():
    f = grid1(np.ones(16), L=4.0)
    H = R.Hyperplane.coordinate(1, 0, 0.3)
    with pytest.raises(ValueError):
        R.polarize(f, H)


def test_diagonal_plane_with_nearest_pairing():
    rng = np.random.default_rng(3)
    f = GridFunction(2, 8, 2.0, rng.uniform(size=(8, 8)))
    s = 1 / math.sqrt(2)
    H = R.Hyperplane(2, (s, s), f.h * s)
    g = R.polarize(f, H, approximate=True)
    assert g.meta["approximatePairing"]
    assert np.allclose(np.sort(g.values.ravel()), np.sort(f.values.ravel()))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 14), st.sampled_from([1, 2]))
def test_polarize_preserves_distribution(seed, j, n):
    rng = np.random.default_rng(seed)
    f = GridFunction(n, 16, 4.0, rng.uniform(size=(16,) * n))
    axis = int(rng.integers(n))
    g = R.polarize(f, R.mid_cell_plane(f, axis, j))
    assert np.allclose(np.sort(g.values.ravel()), np.sort(f.values.ravel()))


# ---------------------------------------------------------------------------
# gauges and two-point energy

def test_catalog_gauges_pass_lemmas():
    for g in (R.power_gauge(1.0), R.power_gauge(2.5), R.cosh_gauge()):
        ok2, _ = R.lemma_a2_check(g)
        ok3, _ = R.lemma_a3_check(g)
        assert ok2 and ok3


def test_custom_gauge_spot_checks():
    good = R.Gauge("quartic", lambda t: t ** 4 + t ** 2)
    assert R.validate_gauge(good) is good
    with pytest.raises(AdmissibilityError, match="convex"):
        R.validate_gauge(R.Gauge("sqrt", lambda t: np.sqrt(t)))
    # log cosh is convex but t tanh t is not
    with pytest.raises(AdmissibilityError, match="t phi'"):
        R.validate_gauge(R.Gauge("logcosh", lambda t: np.log(np.cosh(t))))
    with pytest.raises(AdmissibilityError):
        R.power_gauge(0.5)


def test_lemma_a2_fails_for_concave_gauge():
    ok, worst = R.lemma_a2_check(R.Gauge("power(0.5)", lambda t: np.sqrt(t)))
    assert not ok and worst < 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 14),
       st.sampled_from(["power", "cosh"]), st.sampled_from(["gauss", "besov"]))
def test_two_point_energy_non_increasing(seed, j, gname, kname):
    rng = np.random.default_rng(seed)
    n = 1
    f = GridFunction(n, 16, 4.0, rng.uniform(size=16))
    g = GridFunction(n, 16, 4.0, rng.uniform(size=16))
    gauge = R.power_gauge(1.5) if gname == "power" else R.cosh_gauge()
    K = (R.gaussian_kernel(1.0) if kname == "gauss"
         else R.truncated_power_kernel(n, 0.75, 4.0, f.h))
    before, after = R.two_point_energy_check(f, g, K, gauge, R.mid_cell_plane(f, 0, j))
    assert after <= before + 1e-12 * before


def test_two_point_energy_two_dimensional():
    rng = np.random.default_rng(0)
    f = GridFunction(2, 16, 4.0, rng.uniform(size=(16, 16)))
    g = GridFunction(2, 16, 4.0, rng.uniform(size=(16, 16)))
    K = R.gaussian_kernel(1.0)
    E = R.PairEnergy(2, 16, f.h, K, R.cosh_gauge())
    for axis, j in [(0, 3), (1, 9), (0, 12)]:
        b, a = R.two_point_energy_check(f, g, K, R.cosh_gauge(), R.mid_cell_plane(f, axis, j),
                                        energy=E)
        assert a <= b * (1 + 1e-12)


# ---------------------------------------------------------------------------
# schedules

def test_schedule_converges_and_is_monotone(tmp_path):
    hits = 0
    for seed in range(12):
        rng = np.random.default_rng(100 + seed)
        f = grid1(rng.uniform(size=64))
        tr = R.polarization_schedule(f, 10_000, seed, stop_at_zero=True)
        assert tr.monotone(1e-12)
        if tr.steps_to(1e-3 * tr.mass) is not None:
            hits += 1
    assert hits >= 12 * 0.95
    path = tr.to_csv(tmp_path / "trace.csv")
    head = path.read_text().splitlines()[0]
    assert head == "step,axis,offset,energyBefore,energyAfter,l1dist"


def test_schedule_reproducible():
    rng = np.random.default_rng(5)
    f = grid1(rng.uniform(size=32))
    a = R.polarization_schedule(f, 200, 7)
    b = R.polarization_schedule(f, 200, 7)
    assert np.array_equal(a.l1_distances, b.l1_distances)
    with pytest.raises(ValueError):
        R.polarization_schedule(f, 0, 7)


# ---------------------------------------------------------------------------
# inequality checks

def test_symmetrization_shifted_gaussian_equality():
    # the seminorm is translation invariant: recentring changes nothing
    x = np.arange(128) * 0.125 - 8
    f = grid1(np.exp(-math.pi * (x - 2) ** 2))
    c = R.symmetrization_inequality_check(f, 2.0, 0.5)
    assert abs(c.lhs - c.rhs) <= 1e-12 * c.lhs


def test_symmetrization_two_bumps_strict():
    x = np.arange(128) * 0.125 - 8
    f = grid1(np.exp(-math.pi * (x - 2) ** 2) + 0.7 * np.exp(-2 * math.pi * (x + 2.5) ** 2))
    c = R.symmetrization_inequality_check(f, 2.0, 0.5)
    assert c.strict


def test_triangle_lemma_and_sharpness():
    gk = lambda t: np.exp(-math.pi * t ** 2)
    hk = lambda t: 0.5 * np.exp(-math.pi * (t / 0.7) ** 2)
    ratios = []
    x = np.arange(1024) * 0.25 - 128
    for w in (1, 2, 4, 8):
        f = GridFunction(1, 1024, 128.0, np.exp(-math.pi * (x / w) ** 2))
        c = R.triangle_lemma_check(f, gk, hk, 2.0, 4.0)
        assert c.holds
        ratios.append(c.lhs / c.rhs)
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] < 1.005


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(1.0, 3.0))
def test_triangle_lemma_random(seed, p):
    rng = np.random.default_rng(seed)
    f = grid1(rng.normal(size=32), L=4.0)
    a, b = rng.uniform(0.2, 2.0, 2)
    c = R.triangle_lemma_check(f, lambda t: np.exp(-(t / a) ** 2),
                               lambda t: np.exp(-(t / b) ** 2), p, 3.0)
    assert c.holds


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(1.0, 3.0))
def test_reduction_lemma_random(seed, p):
    rng = np.random.default_rng(seed)
    f = grid1(rng.normal(size=32), L=4.0)
    g = grid1(rng.normal(size=32), L=4.0)
    c = R.reduction_lemma_check(f, g, lambda t: 1 / (1 + t ** 2), p, 4.0)
    assert c.holds


def test_reduction_lemma_rejects_negative_kernel():
    f = grid1(np.ones(16), L=4.0)
    with pytest.raises(AdmissibilityError):
        R.reduction_lemma_check(f, f, lambda t: np.cos(t), 2.0, 4.0)


def _xy(N=64, L=6.0):
    ax = np.arange(N) * (2 * L / N) - L
    return np.meshgrid(ax, ax, indexing="ij")


def test_spherical_profile_radial_function():
    X, Y = _xy()
    f = GridFunction(2, 64, 6.0, np.exp(-math.pi * (X ** 2 + Y ** 2)))
    prof = R.spherical_lp_reduction(f, 2.0)
    # surface measure: F = sigma^{1/p} f for radial f
    assert np.allclose(prof.values, math.sqrt(2 * math.pi) * np.exp(-math.pi * prof.r ** 2),
                       atol=1e-10)
    assert abs(prof.radial_lp_norm() ** 2 - 0.5) < 1e-4
    c = R.spherical_reduction_check(f, 2.0, 0.5)
    assert abs(c.lhs - c.rhs) < c.error


def test_spherical_profile_angular_harmonic_strict():
    X, Y = _xy()
    f = GridFunction(2, 64, 6.0, X * np.exp(-math.pi * (X ** 2 + Y ** 2)))
    c = R.spherical_reduction_check(f, 2.0, 0.5)
    assert c.strict


def test_spherical_profile_three_dimensional():
    f = sample(TestFamily.gaussian(), 3, 32, 4.0)
    prof = R.spherical_lp_reduction(f, 3.0, radial_points=32)
    assert np.max(np.abs(prof.normalized() - np.exp(-math.pi * prof.r ** 2))) < 1e-6
    with pytest.raises(ValueError):
        R.spherical_lp_reduction(grid1(np.ones(16)), 2.0)

"""Origin-cell weights for grid sums of |x|^{-gamma} times a smooth function.

For a uniform grid h Z^n and smooth decaying phi,

    h^n sum_{k != 0} |kh|^{-gamma} phi(kh) = int |x|^{-gamma} phi dx
                                             + Z_n(gamma) h^{n-gamma} phi(0)
                                             + Z_n(gamma-2) h^{n-gamma+2} (Delta phi)(0) / 2n
                                             + ...

where Z_n is the Epstein zeta function of the cubic lattice (analytically
continued).  Giving the origin node the weight -Z_n(gamma) h^{n-gamma}
removes the leading error of the punctured Riemann sum, for positive
(singular) and negative (cusp) gamma alike.  The second term is removed
too, through a centred-difference Laplacian at the origin.
"""

from __future__ import annotations

import functools
import itertools
import math

import numpy as np
from scipy import special


def _gamma_upper(a: float, b: np.ndarray) -> np.ndarray:
    """Non-normalised upper incomplete gamma Gamma(a, b); a must not be 0, -1, -2, ..."""
    if a > 0:
        return special.gamma(a) * special.gammaincc(a, b)
    return (_gamma_upper(a + 1, b) - b ** a * np.exp(-b)) / a


def _upper_tail(a: float, b: np.ndarray) -> np.ndarray:
    """int_1^inf t^{a-1} e^{-b t} dt = b^{-a} Gamma(a, b)."""
    return b ** (-a) * _gamma_upper(a, b)


@functools.lru_cache(maxsize=256)
def epstein_zeta(n: int, s: float, kmax: int = 6) -> float:
    """Z_n(s) = sum_{k in Z^n, k != 0} |k|^{-s}, continued to s < n, s != 0.

    The continuation vanishes at the negative even integers.
    """
    if s == 0 or not s < n:
        raise ValueError(f"epstein_zeta needs s < n, s != 0; got {s}")
    if s < 0 and float(s / 2).is_integer():
        return 0.0
    rng = range(-kmax, kmax + 1)
    k2 = np.array([sum(c * c for c in k) for k in itertools.product(rng, repeat=n)
                   if any(k)], dtype=float)
    b = math.pi * k2
    tail = np.sum(_upper_tail(0.5 * s, b) + _upper_tail(0.5 * (n - s), b))
    completed = -2.0 / s - 2.0 / (n - s) + tail
    return float(math.pi ** (0.5 * s) * completed / special.gamma(0.5 * s))


def origin_weight(n: int, gamma: float, h: float) -> float:
    """Weight multiplying phi(0) in the corrected punctured sum."""
    if gamma == 0:
        return h ** n
    return -epstein_zeta(n, float(gamma)) * h ** (n - gamma)


def power_weights(shape: tuple[int, ...], h: float, center: tuple[int, ...],
                  gamma: float, second_order: bool = True) -> np.ndarray:
    """Quadrature weights w_k ~ h^n |x_k|^{-gamma} on a grid with x_center = 0."""
    n = len(shape)
    axes = [(np.arange(m) - c) * h for m, c in zip(shape, center)]
    r2 = np.zeros(shape)
    for d, ax in enumerate(axes):
        sl = [None] * n
        sl[d] = slice(None)
        r2 = r2 + ax[tuple(sl)] ** 2
    w = np.empty(shape)
    nz = r2 > 0
    w[nz] = h ** n * r2[nz] ** (-0.5 * gamma)
    w[~nz] = origin_weight(n, gamma, h)
    if second_order and gamma < n and gamma not in (0, 2):
        c = -epstein_zeta(n, gamma - 2.0) * h ** (n - gamma) / (2 * n)
        w[tuple(center)] -= 2 * n * c
        for d in range(n):
            for step in (-1, 1):
                idx = list(center)
                idx[d] += step
                if 0 <= idx[d] < shape[d]:
                    w[tuple(idx)] += c
    return w

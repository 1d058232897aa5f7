"""Closed-form sharp constants, evaluated in log space.

Every constant is assembled as a sum of log-Gamma terms and exponentiated
once.  Gamma is never evaluated at a non-positive argument: those cases
raise :class:`~fracbed.params.DomainError` instead of returning a signed
or infinite value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .params import DomainError, Params, dual_exponent

LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class ConstantValue:
    formula_id: str
    params: Params
    value: float
    log_value: float
    variant: str = ""
    notes: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {
            "formulaId": self.formula_id,
            "params": self.params.as_dict(),
            "value": self.value,
            "logValue": self.log_value,
        }
        if self.variant:
            d["variant"] = self.variant
        return d


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not (isinstance(x, (int, float)) and math.isfinite(x)) or x <= 0:
        raise DomainError("Gamma argument > 0", f"x={x}")
    return math.lgamma(x)


def _lg(*args: float) -> float:
    return sum(log_gamma(a) for a in args)


def _pack(formula_id: str, params: Params, log_value: float,
          variant: str = "") -> ConstantValue:
    value = math.exp(log_value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError("finite positive constant",
                          f"{formula_id}: log value {log_value}")
    return ConstantValue(formula_id, params, value, log_value, variant)


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere S^{n-1} in R^n."""
    if n < 1:
        raise DomainError("n >= 1", f"n={n}")
    return 2.0 * math.exp(0.5 * n * LOG_PI - log_gamma(0.5 * n))


def _check_beta(beta: float) -> None:
    if not 0 < beta < 1:
        raise DomainError("beta in (0,1)", f"beta={beta}")


def aronszajn_smith_Dbeta(n: int, beta: float) -> ConstantValue:
    """(2/b) pi^{n/2+2b} Gamma(1-b)/Gamma(n/2+b): the p=2 seminorm multiplier."""
    _check_beta(beta)
    lv = (math.log(2.0 / beta) + (0.5 * n + 2 * beta) * LOG_PI
          + log_gamma(1 - beta) - log_gamma(0.5 * n + beta))
    return _pack("Dbeta", Params(n=n, beta=beta), lv)


def bbm_sharp_constant(n: int, beta: float) -> ConstantValue:
    _check_beta(beta)
    if not n > 2 * beta:
        raise DomainError("n > 2 beta", f"n={n}, beta={beta}")
    lv = (math.log((n - 2 * beta) / (beta * (1 - beta)))
          + (beta + 0.5 * n) * LOG_PI
          + log_gamma(2 - beta) - log_gamma(0.5 * n + 1 - beta)
          + (2 * beta / n) * (log_gamma(0.5 * n) - log_gamma(n)))
    return _pack("bbm", Params(n=n, p=2.0, beta=beta), lv)


def thm2_constant(n: int, alpha: float, beta: float) -> ConstantValue:
    """Sharp p=2 constant for the fractional-Laplacian embedding."""
    _check_beta(beta)
    if alpha < 0:
        raise DomainError("alpha >= 0", f"alpha={alpha}")
    s = alpha + beta
    if not 0.5 * n > s:
        raise DomainError("2 < n/(alpha+beta)", f"n={n}, alpha+beta={s}")
    lv = (math.log(2.0 / (beta * (1 - beta)))
          + (beta - alpha + 0.5 * n) * LOG_PI
          + log_gamma(2 - beta) - log_gamma(0.5 * n + beta)
          + log_gamma(0.5 * n + s) - log_gamma(0.5 * n - s)
          + (2 * s / n) * (log_gamma(0.5 * n) - log_gamma(n)))
    return _pack("thm2", Params(n=n, p=2.0, alpha=alpha, beta=beta), lv)


def hausdorff_young_constant(n: int, p: float) -> ConstantValue:
    """[p^{1/p} / p'^{1/p'}]^{-n/2}.

    This is the reciprocal of the sharp Babenko-Beckner constant; it is
    >= 1 for 1 < p <= 2 and <= 1 for p >= 2.
    """
    if not 1 < p < math.inf:
        raise DomainError("1 < p < inf", f"p={p}")
    pp = dual_exponent(p)
    lv = -0.5 * n * (math.log(p) / p - math.log(pp) / pp)
    return _pack("hy", Params(n=n, p=p), lv)


def cosine_kernel_integral(n: int, lam: float) -> ConstantValue:
    """Closed form of the integral of |w|^{-n-lam} (1 - cos w.eta) over R^n."""
    if not 0 < lam < 2:
        raise DomainError("lambda in (0,2)", f"lambda={lam}")
    lv = ((1 - lam) * math.log(2.0) + 0.5 * n * LOG_PI - math.log(lam)
          + log_gamma(1 - 0.5 * lam) - log_gamma(0.5 * (n + lam)))
    return _pack("cos", Params(n=n, lam=lam), lv)


def thm6_constant(n: int, lam: float) -> ConstantValue:
    if not 0 < lam < 2:
        raise DomainError("lambda in (0,2)", f"lambda={lam}")
    lv = (lam * math.log(0.5 * math.pi) + 0.5 * n * LOG_PI - math.log(lam)
          + log_gamma(1 - 0.5 * lam) - log_gamma(0.5 * (n + lam)))
    return _pack("thm6", Params(n=n, lam=lam), lv)


def thm7_constant(n: int, beta: float) -> ConstantValue:
    _check_beta(beta)
    if not n > 2 * beta:
        raise DomainError("n > 2 beta", f"n={n}, beta={beta}")
    lv = (math.log(2.0 / beta) + (beta + n) * LOG_PI
          + log_gamma(1 - beta) - log_gamma(0.5 * n - beta)
          + log_gamma(0.5 * n + beta) - log_gamma(n + beta)
          + (2 * beta / n) * (log_gamma(0.5 * n) - log_gamma(n)))
    return _pack("thm7", Params(n=n, p=2.0, beta=beta), lv)


def radial_line_integral(n: int, p: float, beta: float) -> ConstantValue:
    """Integral of (1+|w|^2)^{-(2n+p beta)/2} over R^n.

    This is the factor produced by integrating out the partner variable in
    the product-form embedding; it composes with the BBM constant.
    """
    _check_beta(beta)
    a = 0.5 * (2 * n + p * beta)
    lv = 0.5 * n * LOG_PI + log_gamma(a - 0.5 * n) - log_gamma(a)
    return _pack("radial_line", Params(n=n, p=p, beta=beta), lv)


def thm8_prefactor(n: int, p: float, beta: float) -> ConstantValue:
    """4^n sqrt(pi) Gamma((2n+p b)/4) / Gamma((2n+2+p b)/4)."""
    _check_beta(beta)
    if not 1 <= p < 2 * n / beta:
        raise DomainError("1 <= p < 2n/beta", f"p={p}, n={n}, beta={beta}")
    lv = (n * math.log(4.0) + 0.5 * LOG_PI
          + log_gamma(0.25 * (2 * n + p * beta))
          - log_gamma(0.25 * (2 * n + 2 + p * beta)))
    return _pack("thm8", Params(n=n, p=p, beta=beta), lv)


def _thm9_gammas(n, p, alpha, beta):
    pp = dual_exponent(p)
    s = alpha + beta
    num = _lg(0.25 * (2 * n - s), 0.5 * s, n / p - 0.5 * alpha,
              n / pp - 0.5 * beta)
    den = _lg(0.25 * (2 * n + 2 - s), 0.5 * (2 * n - s), n / pp + 0.5 * alpha,
              n / p + 0.5 * beta)
    return num - den


def thm9_constant(n: int, p: float, alpha: float, beta: float,
                  variant: str = "as_printed") -> ConstantValue:
    """Heisenberg Stein-Weiss constant.

    ``as_printed`` carries the (4 pi^2)^n prefactor of the displayed
    formula.  ``composed`` rebuilds the constant from its proof chain:
    Haar factor 4^n, the t-line integral and the sharp Stein-Weiss constant
    on R^{2n}, whose prefactor is pi^n.  The two differ by pi^n.
    """
    prm = Params.for_thm9(n, p, alpha, beta)
    g = _thm9_gammas(n, p, alpha, beta)
    if variant == "as_printed":
        lv = n * math.log(4 * math.pi ** 2) + 0.5 * LOG_PI + g
    elif variant == "composed":
        lv = n * math.log(4 * math.pi) + 0.5 * LOG_PI + g
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return _pack("thm9", prm, lv, variant)


def stein_weiss_constant(dim: int, p: float, alpha: float, beta: float
                         ) -> ConstantValue:
    """Sharp L^p -> L^p norm of |x|^{-a} (|x|^{-(dim-a-b)} * |x|^{-b} f) on R^dim."""
    pp = dual_exponent(p)
    s = alpha + beta
    if not 0 < s < dim:
        raise DomainError("0 < alpha+beta < dim", f"alpha+beta={s}")
    lv = (0.5 * dim * LOG_PI
          + _lg(0.5 * s, 0.5 * (dim / p - alpha), 0.5 * (dim / pp - beta))
          - _lg(0.5 * (dim - s), 0.5 * (dim / pp + alpha),
                0.5 * (dim / p + beta)))
    return _pack("stein_weiss", Params(n=dim, p=p, alpha=alpha, beta=beta), lv)


def beta_line_integral(lam: float) -> ConstantValue:
    """Integral of (1+t^2)^{-lam/4} over the real line."""
    if not lam > 2:
        raise DomainError("lambda > 2", f"lambda={lam}")
    lv = 0.5 * LOG_PI + log_gamma(0.25 * lam - 0.5) - log_gamma(0.25 * lam)
    return _pack("J", Params(n=1, lam=lam), lv)


def pitt_uncertainty_constant(n: int, alpha: float) -> ConstantValue:
    """pi^a [Gamma((n-a)/4) / Gamma((n+a)/4)]^2."""
    if not 0 < alpha < n:
        raise DomainError("0 < alpha < n", f"alpha={alpha}, n={n}")
    lv = alpha * LOG_PI + 2 * (log_gamma(0.25 * (n - alpha))
                               - log_gamma(0.25 * (n + alpha)))
    return _pack("pitt", Params(n=n, alpha=alpha), lv)


def lieb_dual_hls_constant(n: int, s: float, variant: str = "repaired",
                           alpha: float = 0.0) -> ConstantValue:
    """Sharp constant c_s in  int |xi|^{2s} |f^|^2 >= c_s ||f||_{2n/(n-2s)}^2.

    ``repaired``: pi^{-s} Gamma(n/2+s)/Gamma(n/2-s) [Gamma(n/2)/Gamma(n)]^{2s/n}.
    ``as_printed`` reproduces the damaged display literally, with the
    numerator factor (n/2+s) lacking its Gamma and the denominator argument
    n/2 - alpha + beta, where beta = s - alpha.
    """
    if not 0 < s < 0.5 * n:
        raise DomainError("0 < s < n/2", f"s={s}, n={n}")
    tail = (2 * s / n) * (log_gamma(0.5 * n) - log_gamma(n))
    if variant == "repaired":
        lv = (-s * LOG_PI + log_gamma(0.5 * n + s) - log_gamma(0.5 * n - s)
              + tail)
    elif variant == "as_printed":
        beta = s - alpha
        lv = (-s * LOG_PI + math.log(0.5 * n + s)
              - log_gamma(0.5 * n - alpha + beta) + tail)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return _pack("lieb", Params(n=n, alpha=alpha, beta=s - alpha), lv, variant)


def sharp_hls_diagonal(n: int, lam: float) -> float:
    """Lieb's sharp constant for |<f, |x|^{-lam} * g>| <= C ||f||_r ||g||_r,
    r = 2n/(2n - lam)."""
    if not 0 < lam < n:
        raise DomainError("0 < lambda < n", f"lambda={lam}")
    lv = (0.5 * lam * LOG_PI + log_gamma(0.5 * (n - lam))
          - log_gamma(n - 0.5 * lam)
          + (lam / n - 1) * (log_gamma(0.5 * n) - log_gamma(n)))
    return math.exp(lv)


def lieb_loss_hls_bound(n: int, lam: float, p: float, r: float) -> float:
    """Explicit (non-sharp) upper bound for the bilinear HLS constant.

    Valid for p, r > 1, 0 < lam < n and 1/p + lam/n + 1/r = 2.
    """
    if not (p > 1 and r > 1 and 0 < lam < n):
        raise DomainError("p, r > 1 and 0 < lambda < n")
    if abs(1 / p + lam / n + 1 / r - 2) > 1e-12:
        raise DomainError("1/p + lambda/n + 1/r = 2")
    a = lam / n
    sig = sphere_area(n)
    return (n / ((n - lam) * p * r) * (sig / n) ** a
            * ((a / (1 - 1 / p)) ** a + (a / (1 - 1 / r)) ** a))


def riesz_kernel_constant(n: int, alpha: float) -> float:
    """gamma with F^{-1}[|xi|^{-alpha}] = gamma |x|^{-(n-alpha)} (2 pi convention)."""
    if not 0 < alpha < n:
        raise DomainError("0 < alpha < n", f"alpha={alpha}")
    return math.exp((alpha - 0.5 * n) * LOG_PI + log_gamma(0.5 * (n - alpha))
                    - log_gamma(0.5 * alpha))


CONSTANT_NAMES = ("Dbeta", "bbm", "thm2", "thm6", "thm7", "thm8", "thm9", "hy", "pitt")


def constant(name: str, n: int, beta: float, alpha: float = 0.0,
             p: float = 2.0) -> ConstantValue:
    """One constant by CLI name; raises DomainError outside its domain."""
    makers = {
        "Dbeta": lambda: aronszajn_smith_Dbeta(n, beta),
        "bbm": lambda: bbm_sharp_constant(n, beta),
        "thm2": lambda: thm2_constant(n, alpha, beta),
        "thm6": lambda: thm6_constant(n, 2 * beta),
        "thm7": lambda: thm7_constant(n, beta),
        "thm8": lambda: thm8_prefactor(n, p, beta),
        "thm9": lambda: thm9_constant(n, p, alpha, beta),
        "hy": lambda: hausdorff_young_constant(n, p),
        "pitt": lambda: pitt_uncertainty_constant(n, alpha),
    }
    try:
        make = makers[name]
    except KeyError:
        raise ValueError(f"unknown constant {name!r}; choose from {CONSTANT_NAMES}") from None
    return make()


def all_constants(n: int, beta: float, alpha: float = 0.0, p: float = 2.0
                  ) -> dict[str, ConstantValue]:
    """Every constant admissible at the given indices, keyed by CLI name."""
    out: dict[str, ConstantValue] = {}
    for key in CONSTANT_NAMES:
        try:
            out[key] = constant(key, n, beta, alpha, p)
        except DomainError:
            continue
    return out

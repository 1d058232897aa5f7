"""Exponent bookkeeping shared by every theorem context.

A :class:`Params` record carries the indices that appear across the
embedding inequalities.  Each named constructor enforces the strict
inequalities of one theorem and raises :class:`AdmissibilityError` naming
the violated constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict, replace


class AdmissibilityError(ValueError):
    """Raised when parameters fall outside an operation's domain."""

    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        msg = f"inadmissible parameters: {constraint}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


# Special functions raise the same error type; the alias reads better there.
DomainError = AdmissibilityError


def dual_exponent(p: float) -> float:
    """Return p' with 1/p + 1/p' = 1; p = 1 maps to +inf."""
    if not p >= 1:
        raise AdmissibilityError("p >= 1", f"p={p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _require(cond: bool, constraint: str, **values) -> None:
    if not cond:
        detail = ", ".join(f"{k}={v}" for k, v in values.items())
        raise AdmissibilityError(constraint, detail)


@dataclass(frozen=True)
class Params:
    n: int
    p: float = 2.0
    alpha: float = 0.0
    beta: float = 0.0
    lam: float | None = None
    gamma: float | None = None
    sigma: float | None = None
    context: str = "generic"

    @property
    def p_prime(self) -> float:
        return dual_exponent(self.p)

    @property
    def q(self) -> float:
        """Intermediate exponent pn/(n - p beta)."""
        return self.p * self.n / (self.n - self.p * self.beta)

    @property
    def q_star(self) -> float:
        """Target exponent pn/(n - p(alpha + beta))."""
        return self.p * self.n / (self.n - self.p * (self.alpha + self.beta))

    def as_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d

    def with_(self, **kw) -> "Params":
        return replace(self, **kw)

    # -- theorem contexts -------------------------------------------------

    @classmethod
    def _base(cls, n, p, beta, alpha=0.0):
        _require(isinstance(n, (int,)) and n >= 1, "n positive integer", n=n)
        _require(p >= 1 and math.isfinite(p), "p >= 1", p=p)
        _require(0 < beta < 1, "beta in (0,1)", beta=beta)
        _require(alpha >= 0, "alpha >= 0", alpha=alpha)

    @classmethod
    def for_besov(cls, n: int, p: float, beta: float) -> "Params":
        cls._base(n, p, beta)
        return cls(n=n, p=p, beta=beta, context="besov")

    @classmethod
    def for_bbm(cls, n: int, p: float, beta: float) -> "Params":
        cls._base(n, p, beta)
        _require(p < n / beta, "p < n/beta", p=p, n=n, beta=beta)
        return cls(n=n, p=p, beta=beta, context="BBM")

    @classmethod
    def for_thm1(cls, n: int, p: float, alpha: float, beta: float) -> "Params":
        cls._base(n, p, beta, alpha)
        _require(p < n / (alpha + beta), "p < n/(alpha+beta)",
                 p=p, n=n, alpha=alpha, beta=beta)
        return cls(n=n, p=p, alpha=alpha, beta=beta, context="T1")

    @classmethod
    def for_thm2(cls, n: int, alpha: float, beta: float) -> "Params":
        cls._base(n, 2.0, beta, alpha)
        _require(2 < n / (alpha + beta), "2 < n/(alpha+beta)",
                 n=n, alpha=alpha, beta=beta)
        return cls(n=n, p=2.0, alpha=alpha, beta=beta, context="T2")

    @classmethod
    def for_lemma1(cls, n: int, p: float, beta: float) -> "Params":
        cls._base(n, p, beta)
        lam = (n - p * beta) / p
        _require(lam > 0, "lambda = (n - p beta)/p > 0", n=n, p=p, beta=beta)
        return cls(n=n, p=p, beta=beta, lam=lam, context="Lemma1")

    @classmethod
    def for_stein_weiss(cls, n: int, p: float, gamma: float) -> "Params":
        _require(n >= 1, "n positive integer", n=n)
        _require(p >= 1, "p >= 1", p=p)
        _require(0 < gamma < min(n, p), "0 < gamma < min(n, p)", gamma=gamma)
        return cls(n=n, p=p, beta=gamma / p, gamma=gamma,
                   lam=(n - gamma) / p, context="SW")

    @classmethod
    def for_thm3(cls, n: int, p: float, beta: float) -> "Params":
        cls._base(n, p, beta)
        _require(p > 1, "1 < p < inf", p=p)
        return cls(n=n, p=p, beta=beta, context="T3")

    @classmethod
    def for_bilinear(cls, n: int, p: float, lam: float, upper: float,
                     context: str) -> "Params":
        _require(n >= 1, "n positive integer", n=n)
        _require(0 < lam < upper, f"0 < lambda < {upper:g}", lam=lam)
        return cls(n=n, p=p, lam=lam, context=context)

    @classmethod
    def for_thm7(cls, n: int, p: float, beta: float) -> "Params":
        cls._base(n, p, beta)
        _require(p < n / beta, "p < n/beta", p=p, n=n, beta=beta)
        return cls(n=n, p=p, beta=beta, context="T7")

    @classmethod
    def for_thm8(cls, n: int, p: float, beta: float) -> "Params":
        cls._base(n, p, beta)
        _require(p < 2 * n / beta, "p < 2n/beta", p=p, n=n, beta=beta)
        return cls(n=n, p=p, beta=beta, lam=(2 * n - p * beta) / p,
                   context="T8")

    @classmethod
    def for_thm9(cls, n: int, p: float, alpha: float, beta: float) -> "Params":
        _require(n >= 1, "n positive integer", n=n)
        _require(1 < p < math.inf, "1 < p < inf", p=p)
        pp = dual_exponent(p)
        _require(alpha < 2 * n / p, "alpha < 2n/p", alpha=alpha, p=p)
        _require(beta < 2 * n / pp, "beta < 2n/p'", beta=beta, p=p)
        _require(alpha + beta > 0, "alpha + beta > 0", alpha=alpha, beta=beta)
        lam = 2 * n + 2 - alpha - beta
        _require(2 < lam < 2 * n + 2, "lambda = 2n+2-alpha-beta in (2, 2n+2)",
                 lam=lam)
        return cls(n=n, p=p, alpha=alpha, beta=beta, lam=lam, context="T9")

    @classmethod
    def for_pitt(cls, n: int, p: float, beta: float) -> "Params":
        cls._base(n, p, beta)
        _require(1 < p <= 2, "1 < p <= 2", p=p)
        pp = dual_exponent(p)
        _require(beta < n / pp, "beta < n/p'", beta=beta, p=p, n=n)
        return cls(n=n, p=p, beta=beta, lam=(n - pp * beta) / pp,
                   context="Pitt")

    @classmethod
    def for_uncertainty(cls, n: int, alpha: float) -> "Params":
        _require(n >= 1, "n positive integer", n=n)
        _require(0 < alpha < n, "0 < alpha < n", alpha=alpha, n=n)
        return cls(n=n, p=2.0, alpha=alpha, context="Uncertainty")

    @classmethod
    def for_hls(cls, n: int, p: float, alpha: float) -> "Params":
        _require(n >= 1, "n positive integer", n=n)
        _require(0 < alpha < n, "0 < alpha < n", alpha=alpha, n=n)
        _require(1 < p < n / alpha, "1 < p < n/alpha", p=p, alpha=alpha)
        return cls(n=n, p=p, alpha=alpha, context="HLS")

"""Two-sided geometric step law for the vertical stretches.

Every layer of the package (wetting kernel, transfer DP, tilted walks)
consumes the integer step distribution

    P(X = k) = exp(-(beta/2) |k|) / c_beta,      k in Z,

through the small value object defined here, so the closed-form constants
live in one place.  With x = exp(-beta/2) the normalizer is
c_beta = (1 + x)/(1 - x), and the combination Gamma_beta = c_beta e^{-beta}
controls the balance between surface energy and step entropy: it is
strictly decreasing in beta and crosses 1 at ``beta_critical()``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "StepLaw",
    "step_pmf",
    "log_step_pmf",
    "beta_critical",
    "log_mgf",
    "variance",
    "sample_step",
]


class StepLaw:
    """Frozen bundle of constants attached to one inverse temperature.

    Attributes
    ----------
    beta : float
        Coupling, must be positive.
    x : float
        Shorthand exp(-beta/2); the common ratio of both geometric tails.
    c_beta : float
        Normalizer (1 + x)/(1 - x).
    gamma_beta : float
        c_beta * exp(-beta).
    sigma2 : float
        Step variance (2/c_beta) * x (1+x)/(1-x)^3  ( = 2x/(1-x)^2 ).
    """

    __slots__ = ("beta", "x", "c_beta", "gamma_beta", "sigma2")

    def __init__(self, beta: float):
        if not beta > 0.0:
            raise ValueError(f"beta must be positive, got {beta!r}")
        self.beta = float(beta)
        self.x = math.exp(-self.beta / 2.0)
        x = self.x
        self.c_beta = (1.0 + x) / (1.0 - x)
        self.gamma_beta = self.c_beta * math.exp(-self.beta)
        self.sigma2 = (2.0 / self.c_beta) * x * (1.0 + x) / (1.0 - x) ** 3

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"StepLaw(beta={self.beta})"

    def support_cutoff(self) -> int:
        """Half-width K such that the mass outside [-K, K] is < 1e-16."""
        return math.ceil(80.0 / self.beta) + 200

    def tail_mass_bound(self, K: int) -> float:
        """Upper bound on sum_{|k| > K} P(X = k) (a plain geometric tail)."""
        return 2.0 * math.exp(-self.beta * (K + 1) / 2.0) / (self.c_beta * (1.0 - self.x))


def step_pmf(law: StepLaw, k) -> float:
    """P(X = k); accepts ints or integer arrays."""
    return np.exp(-0.5 * law.beta * np.abs(k)) / law.c_beta


def log_step_pmf(law: StepLaw, k) -> float:
    """log P(X = k)."""
    return -0.5 * law.beta * np.abs(k) - math.log(law.c_beta)


@lru_cache(maxsize=1)
def beta_critical() -> float:
    """Coupling at which Gamma_beta = 1.

    Equivalent to the root in (0, 1) of x^3 + x^2 + x = 1 (x = e^{-beta/2}),
    located by bisection and polished by Newton to full double precision.
    """

    def f(t: float) -> float:
        return ((t + 1.0) * t + 1.0) * t - 1.0

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    for _ in range(8):  # Newton polish; f' = 3t^2 + 2t + 1 > 0
        t -= f(t) / ((3.0 * t + 2.0) * t + 1.0)
    return -2.0 * math.log(t)


def log_mgf(law: StepLaw, h: float) -> float:
    """log E[e^{hX}], finite exactly on |h| < beta/2.

    Closed form: 2 log(1-x) - log(1 - x e^h) - log(1 - x e^{-h}).
    """
    if abs(h) >= 0.5 * law.beta:
        raise ValueError(
            f"h={h!r} outside the open domain |h| < beta/2 = {0.5 * law.beta!r}"
        )
    x = law.x
    return (
        2.0 * math.log1p(-x)
        - math.log1p(-x * math.exp(h))
        - math.log1p(-x * math.exp(-h))
    )


def variance(law: StepLaw) -> float:
    """Step variance; equals the curvature of ``log_mgf`` at h = 0."""
    return law.sigma2


def sample_step(law: StepLaw, rng: np.random.Generator, size=None):
    """Draw steps by closed-form inverse CDF (no rejection).

    Returns a Python int when ``size`` is None, else an int64 array.
    """
    scalar = size is None
    n = 1 if scalar else size
    u = rng.random(n)
    x = law.x
    p0 = 1.0 / law.c_beta  # mass at zero
    half = 0.5 * (1.0 - p0)  # mass of each nonzero tail
    out = np.zeros(n, dtype=np.int64)
    nz = u >= p0
    v = u[nz] - p0
    sign = np.where(v < half, 1, -1)
    frac = np.where(v < half, v, v - half) / half  # uniform in [0, 1)
    # geometric magnitude on {1, 2, ...}: P(m <= M) = 1 - x^M
    mag = np.floor(np.log1p(-frac) / math.log(x)).astype(np.int64) + 1
    out[nz] = sign * mag
    if scalar:
        return int(out[0])
    return out

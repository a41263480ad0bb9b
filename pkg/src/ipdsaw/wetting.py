"""Pinned walk above a hard wall: return kernel, partition function, curves.

The building block is the first-return kernel of the step walk,

    K(t) = P(tau = t, X_tau = 0),    tau = first hitting time of (-inf, 0],

computed exactly by a height-resolved DP.  On top of it sit the pinned
partition function (renewal recursion and a direct positive-walk DP as a
cross-check), the closed-form localization free energy h_beta(delta), and
the three critical curves delta_tilde < delta_c < delta_circ of the phase
diagram.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .steps import StepLaw, beta_critical

__all__ = [
    "ReturnKernel",
    "CriticalCurves",
    "return_kernel",
    "zwet",
    "zwet_series",
    "zwet_direct",
    "wetting_free_energy",
    "delta_tilde",
    "wetting_free_energy_from_kernel",
    "critical_curves",
    "cwet_constant",
    "positive_bridge_logprob",
    "logsumexp_c",
]


def logsumexp_c(values) -> float:
    """log(sum exp(values)) with Neumaier-compensated accumulation.

    Accepts any iterable; -inf entries are skipped.  Used wherever sums of
    wildly different log-magnitudes are combined.
    """
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                     dtype=float)
    arr = arr[arr > -np.inf]
    if arr.size == 0:
        return -math.inf
    m = float(arr.max())
    s = 0.0
    comp = 0.0
    for e in np.exp(arr - m):
        t = s + e
        if abs(s) >= abs(e):
            comp += (s - t) + e
        else:
            comp += (e - t) + s
        s = t
    return m + math.log(s + comp)


def _default_cutoff(n: float, beta: float) -> int:
    """Height cutoff for DPs over ~n steps: generous multiple of sqrt(n/beta)."""
    return math.ceil(12.0 * math.sqrt(max(n, 1.0) / beta)) + 64


@dataclass(frozen=True)
class ReturnKernel:
    """First-return kernel table K(t), t = 1..t_max.

    ``k[t]`` is P(tau = t, X_tau = 0) and ``tau[t]`` is P(tau = t); both have
    index 0 unused.  ``truncation_bound`` bounds the total K-mass lost to the
    height cutoff over t <= t_max.
    """

    beta: float
    t_max: int
    height_cutoff: int
    k: np.ndarray
    tau: np.ndarray
    truncation_bound: float

    def total_mass(self) -> float:
        return float(self.k[1:].sum())


def return_kernel(beta: float, t_max: int, height_cutoff: int | None = None) -> ReturnKernel:
    """Exact K(t) for t = 1..t_max by height-resolved survival DP.

    The walk is kept strictly positive on heights 1..H; stepping to exactly 0
    harvests K(t), stepping to anything <= 0 harvests the first-passage law.
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    law = StepLaw(beta)
    H = height_cutoff if height_cutoff is not None else _default_cutoff(t_max, beta)
    x = law.x
    c = law.c_beta
    y = np.arange(1, H + 1)
    pmf_y = np.exp(-0.5 * beta * y) / c          # P(X = y) = P(X = -y)
    tail_leq = pmf_y / (1.0 - x)                 # P(X <= -y) = x^y / ((1-x) c)
    M = np.exp(-0.5 * beta * np.abs(y[:, None] - y[None, :])) / c

    k = np.zeros(t_max + 1)
    tau = np.zeros(t_max + 1)
    k[1] = 1.0 / c
    tau[1] = 1.0 / c + x / ((1.0 - x) * c)
    # P(X > H - y): mass jumping above the cutoff (first exceedance), lost
    up_tail = np.exp(-0.5 * beta * (H - y + 1)) / ((1.0 - x) * c)
    lost = 0.0
    f = pmf_y.copy()                              # survival mass after 1 step
    for t in range(2, t_max + 1):
        k[t] = float(f @ pmf_y)
        tau[t] = float(f @ tail_leq)
        lost += float(f @ up_tail)
        f = M @ f
    return ReturnKernel(beta, t_max, H, k, tau, lost)


def delta_tilde(beta: float) -> float:
    """Critical pinning strength of the wetting transition, -log(1 - e^{-beta/2})."""
    law = StepLaw(beta)
    return -math.log1p(-law.x)


def wetting_free_energy(beta: float, delta: float) -> float:
    """Localized free energy h_beta(delta); identically 0 for delta <= delta_tilde."""
    if delta <= delta_tilde(beta):
        return 0.0
    x = math.exp(-0.5 * beta)
    num = math.expm1(delta) * (1.0 - x) ** 2
    den = -math.expm1(-delta) - x * x
    return math.log(num / den)


def wetting_free_energy_from_kernel(beta: float, delta: float,
                                    kernel: ReturnKernel) -> float:
    """Root zeta of sum_t K(t) e^{-zeta t} = e^{-delta}; cross-check route.

    Returns 0 in the delocalized phase (no positive root).
    """
    t = np.arange(1, kernel.t_max + 1)
    kt = kernel.k[1:]
    target = math.exp(-delta)
    if float(kt.sum()) <= target:
        return 0.0

    def s(z: float) -> float:
        return float(kt @ np.exp(-z * t))

    lo, hi = 0.0, 1.0
    while s(hi) > target:
        hi *= 2.0
        if hi > 1e6:  # pragma: no cover - defensive
            raise RuntimeError("failed to bracket the free-energy root")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if s(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def zwet_series(beta: float, delta: float, N: int,
                kernel: ReturnKernel | None = None) -> np.ndarray:
    """log Z_wet(n) for n = 0..N via the renewal recursion.

    The recursion is run on the exponentially rebased sequence
    Z(n) e^{-h n} (bounded in every phase, so plain double dots are safe)
    and logs are recovered exactly at the end.
    """
    if kernel is None:
        kernel = return_kernel(beta, max(N, 1))
    if kernel.t_max < N:
        raise ValueError("kernel table shorter than requested N")
    if abs(kernel.beta - beta) > 1e-12:
        raise ValueError("kernel was built for a different beta")
    h = wetting_free_energy(beta, delta)
    t = np.arange(1, N + 1)
    krb = kernel.k[1:N + 1] * np.exp(delta - h * t)
    z = np.zeros(N + 1)
    z[0] = 1.0
    for n in range(1, N + 1):
        z[n] = float(krb[:n] @ z[n - 1::-1])
    return np.log(z) + h * np.arange(N + 1)


def zwet(beta: float, delta: float, N: int,
         kernel: ReturnKernel | None = None) -> float:
    """log Z_wet(N): pinned positive walk, reward e^delta per return to 0."""
    if N == 0:
        return 0.0
    return float(zwet_series(beta, delta, N, kernel)[N])


def zwet_direct(beta: float, delta: float, N: int,
                height_cutoff: int | None = None) -> float:
    """log Z_wet(N) by direct height DP (independent cross-check of the renewal)."""
    law = StepLaw(beta)
    H = height_cutoff if height_cutoff is not None else _default_cutoff(N, beta)
    yy = np.arange(H + 1)
    M = np.exp(-0.5 * beta * np.abs(yy[:, None] - yy[None, :])) / law.c_beta
    r = np.ones(H + 1)
    r[0] = math.exp(delta)
    v = np.zeros(H + 1)
    v[0] = 1.0
    log_off = 0.0
    for _ in range(N):
        v = r * (M @ v)
        s = v.max()
        v /= s
        log_off += math.log(s)
    return log_off + math.log(v[0])


def positive_bridge_logprob(beta: float, n: int, x0: int = 0,
                            height_cutoff: int | None = None) -> float:
    """log P(X_k >= 0 for k <= n, X_n = 0 | X_0 = x0) for the step walk."""
    if x0 < 0:
        raise ValueError("start must be above the wall")
    law = StepLaw(beta)
    H = (height_cutoff if height_cutoff is not None
         else _default_cutoff(n, beta) + x0)
    yy = np.arange(H + 1)
    M = np.exp(-0.5 * beta * np.abs(yy[:, None] - yy[None, :])) / law.c_beta
    v = np.zeros(H + 1)
    v[x0] = 1.0
    log_off = 0.0
    for _ in range(n):
        v = M @ v
        s = v.max()
        v /= s
        log_off += math.log(s)
    return log_off + math.log(v[0])


@dataclass(frozen=True)
class CriticalCurves:
    """The three transition lines evaluated at one beta."""

    beta: float
    delta_tilde: float
    delta_c: float
    delta_circ: float


def _delta_at_h_target(beta: float, target: float) -> float:
    """Solve h_beta(delta) = target (target >= 0) for delta, by bisection."""
    dt = delta_tilde(beta)
    lo = dt + 1e-9
    hi = dt + 50.0
    if wetting_free_energy(beta, lo) >= target:
        return lo
    while wetting_free_energy(beta, hi) < target:
        hi += 50.0
        if hi > dt + 1000.0:  # pragma: no cover - defensive
            raise RuntimeError("failed to bracket the critical curve")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if wetting_free_energy(beta, mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def critical_curves(beta: float) -> CriticalCurves:
    """delta_tilde, delta_c, delta_circ at inverse temperature beta.

    delta_c comes in closed form,

        delta_c = log[(sinh beta + sqrt(sinh^2 beta + 1 - e^beta)) / (1 - e^{-beta})],

    and is cross-checked against the root of log Gamma_beta + h_beta(delta) = 0;
    delta_circ is the root of 2 log Gamma_beta + h_beta(delta) = 0.  Both
    collapse curves only exist for beta >= beta_c (Gamma_beta <= 1).
    """
    if beta < beta_critical():
        raise ValueError(
            f"collapse curves require beta >= beta_c = {beta_critical():.6f}"
        )
    law = StepLaw(beta)
    dt = delta_tilde(beta)
    sh = math.sinh(beta)
    disc = max(sh * sh + 1.0 - math.exp(beta), 0.0)
    dc = math.log(sh + math.sqrt(disc)) - math.log1p(-math.exp(-beta))
    log_gamma = math.log(law.gamma_beta)
    dc_root = _delta_at_h_target(beta, -log_gamma)
    if abs(dc - dc_root) > 1e-7:  # pragma: no cover - internal consistency
        raise RuntimeError("closed-form and root-solved delta_c disagree")
    dcirc = _delta_at_h_target(beta, -2.0 * log_gamma)
    return CriticalCurves(beta, dt, dc, dcirc)


def _cwet_series(beta: float, delta: float, t_max: int) -> float:
    """sum_t t K(t) e^{-h t} truncated at t_max (helper for cwet_constant)."""
    h = wetting_free_energy(beta, delta)
    kern = return_kernel(beta, t_max)
    t = np.arange(1, t_max + 1)
    return float((t * kern.k[1:]) @ np.exp(-h * t))


def cwet_constant(beta: float, delta: float) -> float:
    """Prefactor C such that Z_wet(N) ~ C e^{h N} in the localized phase.

    C = [e^delta * sum_t t K(t) e^{-h t}]^{-1}; the series is truncated
    adaptively, doubling t_max until the value moves by < 1e-12 relative.
    """
    if delta <= delta_tilde(beta):
        raise ValueError("cwet_constant is defined only for delta > delta_tilde")
    h = wetting_free_energy(beta, delta)
    t_max = max(256, math.ceil(60.0 / max(h, 1e-3)))
    s = _cwet_series(beta, delta, t_max)
    while True:
        t_max *= 2
        s2 = _cwet_series(beta, delta, t_max)
        if abs(s2 - s) <= 1e-12 * abs(s2):
            s = s2
            break
        s = s2
        if t_max > 1 << 20:  # pragma: no cover - defensive
            raise RuntimeError("cwet series failed to converge")
    return 1.0 / (math.exp(delta) * s)

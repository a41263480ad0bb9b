"""Large-deviation layer: Legendre transforms, tilted walks, collapse profile.

The cumulant generating function of a single step is L(h) = log E[e^{hX}].
For the area/endpoint pair of an n-step walk, Lambda_n = (A_n/n, X_n), the
scaled generating function converges to the integrated version

    L_Lambda(h0, h1) = int_0^1 L(x h0 + h1) dx,

finite on D_beta = {|h1| < beta/2, |h0 + h1| < beta/2}.  This module
provides L_Lambda, its gradient, the inverse tilt h~(q, p) solving
grad L_Lambda(h~) = (q, p), the rate function g = Legendre transform, the
finite-n analogues, exact sampling of tilted walks, and on top of these the
collapsed-phase profile: the bead-scale variational function

    phi(a) = a * (2 log Gamma + h_beta(delta) - g(1/(2 a^2), 0)),

its maximizer a~, the limit free energy Phi = phi(a~), and the subleading
correction constant Psi (delta = 0), which involves the first zero of the
Airy function through the meander rate J(gamma) = -2^{-1/3} |a_1| gamma^{2/3}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .steps import StepLaw, beta_critical

__all__ = [
    "TiltVector",
    "CollapseProfile",
    "l_lambda",
    "grad_l_lambda",
    "tilt_inverse",
    "rate_g",
    "finite_l_lambda",
    "grad_finite_l_lambda",
    "finite_tilt",
    "tilted_sample",
    "phi",
    "phi_prime",
    "collapse_profile",
    "phi_max_ddelta",
    "airy_first_zero",
    "meander_rate",
]


@dataclass(frozen=True)
class TiltVector:
    """A point (h0, h1) of tilt space attached to its beta.

    The asymptotic domain is D_beta (|h1| < beta/2 and |h0+h1| < beta/2);
    finite-n objects live on the slightly larger D_{beta,n} where the
    second condition is relaxed to |(1-1/n) h0 + h1| < beta/2.
    """

    h0: float
    h1: float
    beta: float

    def in_domain(self, n: int | None = None) -> bool:
        b2 = 0.5 * self.beta
        edge = (1.0 - 1.0 / n) * self.h0 + self.h1 if n else self.h0 + self.h1
        return abs(self.h1) < b2 and abs(edge) < b2


# -- closed forms for L and its derivatives ---------------------------------
#
# With x = e^{-beta/2} the key quantity 1 - x e^{a} equals -expm1(a - beta/2),
# which keeps full relative precision arbitrarily close to the domain
# boundary |a| = beta/2 (direct subtraction loses all digits there).

def _l(beta: float, h: float) -> float:
    return _l_from_gaps(beta, h - 0.5 * beta, -h - 0.5 * beta)


def _l_from_gaps(beta: float, s: float, u: float) -> float:
    """L evaluated from precomputed boundary gaps s = h - b/2, u = -h - b/2."""
    return (2.0 * math.log(-math.expm1(-0.5 * beta))
            - math.log(-math.expm1(s)) - math.log(-math.expm1(u)))


def _uv(beta, h):
    """(u/(1-u), v/(1-v)) with u = x e^h, v = x e^{-h}; vectorized over h."""
    s = h - 0.5 * beta
    t = -h - 0.5 * beta
    return np.exp(s) / (-np.expm1(s)), np.exp(t) / (-np.expm1(t))


def _seg_gaps(beta: float, h0: float, h1: float, t):
    """Boundary gaps (a(t) - beta/2, -a(t) - beta/2) along a(t) = h0 t + h1.

    Both gaps are linear in t, so they are interpolated between their exact
    endpoint values; forming a(t) first and subtracting beta/2 afterwards
    would lose every digit when a sits within ~1e-8 of the boundary.
    """
    b2 = 0.5 * beta
    top = h0 + h1
    # rounding residue of h0 + h1 (TwoSum); the gap at t = 1 can be ~1e-8
    # while the residue is ~1e-16, so it cannot be dropped
    lo = (h0 - top) + h1 if abs(h0) >= abs(h1) else (h1 - top) + h0
    s0, s1 = h1 - b2, (top - b2) + lo
    u0, u1 = -h1 - b2, (-top - b2) - lo
    w = 1.0 - t
    return s0 * w + s1 * t, u0 * w + u1 * t


def _l1(beta: float, h: float) -> float:
    uu, vv = _uv(beta, h)
    return float(uu - vv)


def _l2(beta, h):
    uu, vv = _uv(beta, h)
    return uu * (1.0 + uu) + vv * (1.0 + vv)


def _l3(beta: float, h: float) -> float:
    uu, vv = _uv(beta, h)
    return float(uu * (1 + uu) * (1 + 2 * uu) - vv * (1 + vv) * (1 + 2 * vv))


@lru_cache(maxsize=8)
def _gauss_nodes(order: int):
    return leggauss(order)


def _require_domain(h: TiltVector) -> None:
    if not h.in_domain():
        raise ValueError(
            f"(h0, h1) = ({h.h0!r}, {h.h1!r}) outside D_beta for beta = {h.beta!r}"
        )


def _quad01(f, tol: float, rel: float = 0.0) -> float:
    """Adaptive Gauss-Legendre quadrature of f over [0, 1].

    Each panel is integrated with 16- and 32-point rules; panels whose two
    estimates disagree (against a length-prorated share of the absolute
    tolerance) are bisected.  Refinement concentrates near integrand spikes,
    so near-singular tilts at the edge of the domain stay cheap.
    """
    t16, w16 = _gauss_nodes(16)
    t32, w32 = _gauss_nodes(32)
    total = 0.0
    stack = [(0.0, 1.0)]
    panels = 0
    while stack:
        a, b = stack.pop()
        panels += 1
        if panels > 4096:
            raise RuntimeError("quadrature did not reach the requested tolerance")
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        coarse = half * float(w16 @ f(mid + half * t16))
        fine = half * float(w32 @ f(mid + half * t32))
        if (abs(fine - coarse) < tol * max(b - a, 1e-3) + rel * abs(fine)
                or (b - a) < 1e-12):
            total += fine
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    return total


def l_lambda(h: TiltVector) -> float:
    """L_Lambda(h) = int_0^1 L(x h0 + h1) dx to 1e-13 absolute."""
    _require_domain(h)
    const = 2.0 * math.log(-math.expm1(-0.5 * h.beta))

    def f(t):
        s, u = _seg_gaps(h.beta, h.h0, h.h1, t)
        return const - np.log(-np.expm1(s)) - np.log(-np.expm1(u))

    return _quad01(f, 1e-13)


def grad_l_lambda(h: TiltVector) -> tuple:
    """Gradient of L_Lambda; closed form away from h0 = 0, series across it.

    For h0 != 0 integration is explicit:
        d/dh0 = (L(h0+h1) - L_Lambda(h)) / h0,
        d/dh1 = (L(h0+h1) - L(h1)) / h0.
    """
    _require_domain(h)
    h0, h1 = h.h0, h.h1
    if abs(h0) >= 1e-8:
        top = _l_from_gaps(h.beta, *_seg_gaps(h.beta, h0, h1, 1.0))
        bot = _l_from_gaps(h.beta, *_seg_gaps(h.beta, h0, h1, 0.0))
        return ((top - l_lambda(h)) / h0, (top - bot) / h0)
    # second-order expansion around h0 = 0 (error O(h0^3) < 1e-24)
    l1, l2, l3 = _l1(h.beta, h1), float(_l2(h.beta, h1)), _l3(h.beta, h1)
    g0 = l1 / 2.0 + h0 * l2 / 3.0 + h0 * h0 * l3 / 8.0
    g1 = l1 + h0 * l2 / 2.0 + h0 * h0 * l3 / 6.0
    return (g0, g1)


def _hessian_l_lambda(h: TiltVector) -> np.ndarray:
    beta = h.beta
    out = np.empty((2, 2))

    def l2(t):
        s, u = _seg_gaps(beta, h.h0, h.h1, t)
        uu = np.exp(s) / (-np.expm1(s))
        vv = np.exp(u) / (-np.expm1(u))
        return uu * (1.0 + uu) + vv * (1.0 + vv)

    def entry(power):
        return _quad01(lambda t: t ** power * l2(t), 1e-11, rel=1e-10)

    out[0, 0] = entry(2)
    out[0, 1] = out[1, 0] = entry(1)
    out[1, 1] = entry(0)
    return out


# -- inverse tilts ----------------------------------------------------------

def _feasible_lambda(cur: TiltVector, step, b2: float, edge: float) -> float:
    """Largest step fraction (capped at 1) keeping the trial strictly inside.

    Boundaries are |h1| < b2 and |edge_coeff . h| < b2; the step is clamped
    to 95% of the nearest crossing so Newton can slide along a boundary-
    hugging path instead of overshooting and halving blindly.
    """
    lam = 1.0
    for c0, dc in ((cur.h1, step[1]),
                   (edge * cur.h0 + cur.h1, edge * step[0] + step[1])):
        if dc > 0.0:
            cross = (b2 - c0) / dc
        elif dc < 0.0:
            cross = (-b2 - c0) / dc
        else:
            continue
        lam = min(lam, 0.95 * cross)
    return lam


def _continuation_solve(grad, hess, q, p, beta, inside, steps: int,
                        edge: float = 1.0):
    """March the Newton solve along t (q, p) for t = 1/steps, ..., 1."""
    h = TiltVector(0.0, 0.0, beta)
    nr = math.inf
    for j in range(1, steps + 1):
        target = np.array([q, p]) * (j / steps)
        # damped Newton starting from the previous continuation point
        cur = h
        res = np.asarray(grad(cur)) - target
        nr = float(np.hypot(*res))
        stall = 0
        for _ in range(80):
            if nr < 1e-10:
                break
            prev = nr
            step = np.linalg.solve(hess(cur), -res)
            lam = _feasible_lambda(cur, step, 0.5 * beta, edge)
            while lam >= 1e-14:
                trial = TiltVector(cur.h0 + lam * step[0], cur.h1 + lam * step[1], beta)
                if inside(trial):
                    tres = np.asarray(grad(trial)) - target
                    tnr = float(np.hypot(*tres))
                    if tnr <= nr * (1.0 - 1e-4 * lam) or tnr < 1e-10:
                        cur, res, nr = trial, tres, tnr
                        break
                lam *= 0.5
            else:
                break
            # bail out once decrease has flattened (numerical noise floor)
            stall = stall + 1 if nr > 0.7 * prev else 0
            if stall >= 3:
                break
        h = cur
        if j == steps and nr >= 1e-10:
            return h, nr
    return h, nr


def tilt_inverse(q: float, p: float, beta: float) -> TiltVector:
    """The tilt h~(q, p) with grad L_Lambda(h~) = (q, p), residual < 1e-10.

    Solved by damped Newton with continuation along t (q, p), t = 1/8..1;
    on failure the continuation is restarted with 64 steps.
    """
    b2 = 0.5 * beta

    def inside(t: TiltVector) -> bool:
        return abs(t.h1) < b2 and abs(t.h0 + t.h1) < b2

    h, nr = _continuation_solve(grad_l_lambda, _hessian_l_lambda,
                                q, p, beta, inside, 8)
    if nr < 1e-10:
        return h
    if not nr < 1e-6:
        # genuine divergence (not a representability floor): denser continuation
        h, nr = _continuation_solve(grad_l_lambda, _hessian_l_lambda,
                                    q, p, beta, inside, 64)
        if nr < 1e-10:
            return h
    raise RuntimeError(
        f"tilt inversion failed at (q, p) = ({q}, {p}); residual {nr:.2e} "
        "(tilts hugging the domain boundary closer than ~1e-6 cannot meet "
        "the residual tolerance in double precision)")


def rate_g(q: float, p: float, beta: float) -> float:
    """Rate function g(q, p) = h~.(q, p) - L_Lambda(h~) (Legendre transform)."""
    h = tilt_inverse(q, p, beta)
    return h.h0 * q + h.h1 * p - l_lambda(h)


# -- finite-n versions ------------------------------------------------------

def _finite_gaps(n: int, h: TiltVector):
    """Per-increment boundary gaps for tilts (1 - k/n) h0 + h1, k = 1..n."""
    lam = 1.0 - np.arange(1, n + 1) / n
    return _seg_gaps(h.beta, h.h0, h.h1, lam) + (lam,)


def finite_l_lambda(n: int, h: TiltVector) -> float:
    """(1/n) sum_{k=1}^n L((1 - k/n) h0 + h1): the n-step analogue of L_Lambda."""
    if not h.in_domain(n):
        raise ValueError("tilt outside the finite-n domain")
    s, u, _ = _finite_gaps(n, h)
    vals = (2.0 * math.log(-math.expm1(-0.5 * h.beta))
            - np.log(-np.expm1(s)) - np.log(-np.expm1(u)))
    return float(vals.sum()) / n


def grad_finite_l_lambda(n: int, h: TiltVector) -> tuple:
    if not h.in_domain(n):
        raise ValueError("tilt outside the finite-n domain")
    s, u, lam = _finite_gaps(n, h)
    l1 = np.exp(s) / (-np.expm1(s)) - np.exp(u) / (-np.expm1(u))
    return (float((lam * l1).sum()) / n, float(l1.sum()) / n)


def finite_tilt(n: int, q: float, p: float, beta: float) -> TiltVector:
    """Inverse of the n-step gradient: grad (1/n) L_{Lambda,n}(h) = (q, p)."""
    b2 = 0.5 * beta

    def inside(t: TiltVector) -> bool:
        return abs(t.h1) < b2 and abs((1.0 - 1.0 / n) * t.h0 + t.h1) < b2

    def hess(h: TiltVector) -> np.ndarray:
        s, u, w = _finite_gaps(n, h)
        uu = np.exp(s) / (-np.expm1(s))
        vv = np.exp(u) / (-np.expm1(u))
        l2 = uu * (1.0 + uu) + vv * (1.0 + vv)
        return np.array([[float((w * w * l2).sum()), float((w * l2).sum())],
                         [float((w * l2).sum()), float(l2.sum())]]) / n

    h, nr = _continuation_solve(lambda t: grad_finite_l_lambda(n, t), hess,
                                q, p, beta, inside, 8, edge=1.0 - 1.0 / n)
    if nr < 1e-10:
        return h
    if not nr < 1e-6:
        h, nr = _continuation_solve(lambda t: grad_finite_l_lambda(n, t), hess,
                                    q, p, beta, inside, 64, edge=1.0 - 1.0 / n)
        if nr < 1e-10:
            return h
    raise RuntimeError(f"finite tilt inversion failed at (q, p) = ({q}, {p}); "
                       f"residual {nr:.2e}")


def tilted_sample(n: int, h: TiltVector, rng) -> np.ndarray:
    """One exact path X_0..X_n of the h-tilted walk (increment k tilted by
    (1 - k/n) h0 + h1), drawn by closed-form inverse CDF."""
    if not h.in_domain(n):
        raise ValueError("tilt outside the finite-n domain")
    logrp, logrm, _ = _finite_gaps(n, h)   # log tail ratios log(x e^{+-a_k})
    mp = np.exp(logrp) / (-np.expm1(logrp))
    mm = np.exp(logrm) / (-np.expm1(logrm))
    tot = 1.0 + mp + mm
    u = rng.random(n) * tot
    steps = np.zeros(n, dtype=np.int64)
    pos = (u > 1.0) & (u <= 1.0 + mp)
    neg = u > 1.0 + mp
    fp = (u[pos] - 1.0) / mp[pos]
    steps[pos] = np.floor(np.log1p(-fp) / logrp[pos]).astype(np.int64) + 1
    fm = (u[neg] - 1.0 - mp[neg]) / mm[neg]
    steps[neg] = -(np.floor(np.log1p(-fm) / logrm[neg]).astype(np.int64) + 1)
    out = np.empty(n + 1, dtype=np.int64)
    out[0] = 0
    np.cumsum(steps, out=out[1:])
    return out


# -- collapse profile -------------------------------------------------------

def phi(a: float, beta: float, delta: float) -> float:
    """Bead-scale variational function a (2 log Gamma + h - g(1/(2a^2), 0))."""
    from .wetting import wetting_free_energy
    law = StepLaw(beta)
    c = 2.0 * math.log(law.gamma_beta) + wetting_free_energy(beta, delta)
    return a * (c - rate_g(0.5 / (a * a), 0.0, beta))


def phi_prime(a: float, beta: float, delta: float) -> float:
    """d phi / d a = 2 log Gamma + h + q h~0 + L_Lambda(h~) at q = 1/(2a^2)."""
    from .wetting import wetting_free_energy
    law = StepLaw(beta)
    c = 2.0 * math.log(law.gamma_beta) + wetting_free_energy(beta, delta)
    q = 0.5 / (a * a)
    tv = tilt_inverse(q, 0.0, beta)
    return c + q * tv.h0 + l_lambda(tv)


@dataclass(frozen=True)
class CollapseProfile:
    """phi maximizer and limit constants at one (beta, delta)."""

    beta: float
    delta: float
    a_tilde: float
    phi_max: float
    psi: float | None
    h_wet: float


def collapse_profile(beta: float, delta: float) -> CollapseProfile:
    """Maximize phi over a > 0; defined strictly inside the collapsed phase.

    Root of phi' by safeguarded Newton (finite-difference slope, bisection
    fallback) inside an automatically bracketed interval.
    """
    from .wetting import critical_curves, wetting_free_energy
    curves = critical_curves(beta)   # raises below beta_c
    if delta >= curves.delta_circ:
        raise ValueError(
            f"(beta, delta) = ({beta}, {delta}) outside the collapsed phase "
            f"(delta_circ = {curves.delta_circ:.6f})"
        )

    def f(a: float) -> float:
        return phi_prime(a, beta, delta)

    def f_below(a: float) -> float:
        # phi' -> +inf as a -> 0; if the tilt solve hits its double-precision
        # envelope at the implied large q, the sign there is already positive
        try:
            return f(a)
        except RuntimeError:
            return 1.0

    lo = 1.0
    for _ in range(20):
        if f_below(lo) > 0.0:
            break
        lo *= 0.5
        if lo < 1e-3:
            raise RuntimeError("failed to bracket the phi maximizer from below")
    hi = max(2.0 * lo, 2.0)
    while f(hi) >= 0.0:
        hi *= 2.0
        if hi > 200.0:
            raise RuntimeError("failed to bracket the phi maximizer from above")

    x = 0.5 * (lo + hi)
    fx = f(x)
    for _ in range(100):
        if abs(fx) < 1e-11 and hi - lo < 1e-9:
            break
        eps = 1e-6 * max(abs(x), 1.0)
        slope = (f(x + eps) - f(x - eps)) / (2.0 * eps)
        xn = x - fx / slope if slope != 0.0 else 0.5 * (lo + hi)
        if not lo < xn < hi:
            xn = 0.5 * (lo + hi)
        fn = f(xn)
        if fn > 0.0:
            lo = xn
        else:
            hi = xn
        x, fx = xn, fn
        if hi - lo < 1e-14 * max(1.0, abs(x)):
            break

    a_tilde = x
    phi_max = phi(a_tilde, beta, delta)
    psi = None
    if delta == 0.0:
        law = StepLaw(beta)
        h0 = tilt_inverse(0.5 / (a_tilde * a_tilde), 0.0, beta).h0
        psi = -abs(airy_first_zero()) * (a_tilde * law.sigma2 * h0 * h0 / 2.0) ** (1.0 / 3.0)
    return CollapseProfile(beta, delta, a_tilde, phi_max, psi,
                           wetting_free_energy(beta, delta))


def phi_max_ddelta(beta: float, delta: float, step: float = 1e-4) -> float:
    """Centered finite difference of Phi in delta (contact-density limit)."""
    up = collapse_profile(beta, delta + step).phi_max
    dn = collapse_profile(beta, delta - step).phi_max
    return (up - dn) / (2.0 * step)


# -- Airy constants ---------------------------------------------------------

@lru_cache(maxsize=1)
def airy_first_zero() -> float:
    """First (smallest in absolute value) zero a_1 of Ai, by series + bisection."""
    c1 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
    c2 = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0)

    def ai(z: float) -> float:
        f, g = 1.0, z
        sf, sg = f, g
        z3 = z ** 3
        k = 0
        while abs(f) + abs(g) > 1e-20 * (abs(sf) + abs(sg) + 1.0):
            f *= z3 / ((3 * k + 2) * (3 * k + 3))
            g *= z3 / ((3 * k + 3) * (3 * k + 4))
            sf += f
            sg += g
            k += 1
        return c1 * sf - c2 * sg

    lo, hi = -2.5, -2.0          # Ai(-2.5) < 0 < Ai(-2)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ai(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def meander_rate(gamma: float) -> float:
    """J(gamma) = -2^{-1/3} |a_1| gamma^{2/3} for gamma > 0."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return -(2.0 ** (-1.0 / 3.0)) * abs(airy_first_zero()) * gamma ** (2.0 / 3.0)

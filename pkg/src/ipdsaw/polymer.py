"""Stretch configurations of the partially directed polymer above a wall.

A configuration with N horizontal stretches is an integer vector
l = (l_1, ..., l_N); stretch i occupies one horizontal bond plus |l_i|
vertical bonds, so the total length is L = N + sum_i |l_i|.  The prefix
heights T_k = l_1 + ... + l_k must stay >= 0 (hard wall).  The energy is

    H(l) = beta * sum_{i=0}^{N} (l_i ^ l_{i+1})  +  delta * #contacts,

with padding l_0 = l_{N+1} = 0, where x ^ y = min(|x|, |y|) 1{x y <= 0}
counts the touching rows between consecutive opposite stretches and a
contact is a prefix height T_k = 0, k = 1..N.

Three boundary flavours are used throughout:

* ``Free``            any end height;
* ``ConstrainedEnd``  T_N = 0;
* ``SingleBead``      nonzero stretches of alternating sign starting
                      upward, T_N = 0 — one tightly wound bead, in
                      bijection with a pair of ordered envelope walks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from itertools import accumulate

__all__ = [
    "Variant",
    "StretchConfig",
    "Envelopes",
    "wedge",
    "hamiltonian",
    "beads",
    "envelopes",
    "from_walks",
    "geometric_area",
    "observables",
    "to_json",
    "from_json",
]


class Variant(str, Enum):
    FREE = "Free"
    CONSTRAINED_END = "ConstrainedEnd"
    SINGLE_BEAD = "SingleBead"


def as_variant(v) -> Variant:
    """Coerce a Variant or its string name."""
    if isinstance(v, Variant):
        return v
    try:
        return Variant(v)
    except ValueError:
        raise ValueError(f"unknown variant {v!r}; expected one of "
                         f"{[m.value for m in Variant]}") from None


def wedge(x: int, y: int) -> int:
    """Overlap of two adjacent stretches: min(|x|,|y|) when signs oppose.

    Equals (|x| + |y| - |x + y|) / 2 for every integer pair, which is the
    identity the transfer DP exploits.
    """
    return min(abs(x), abs(y)) if x * y <= 0 else 0


@dataclass(frozen=True)
class StretchConfig:
    """Validated stretch vector with its declared total length and flavour."""

    stretches: tuple
    total_length: int
    variant: Variant = Variant.FREE

    def __post_init__(self):
        object.__setattr__(self, "stretches", tuple(int(v) for v in self.stretches))
        object.__setattr__(self, "variant", as_variant(self.variant))
        self._validate()

    def _validate(self) -> None:
        l = self.stretches
        n = len(l)
        if n < 1:
            raise ValueError("a configuration needs at least one stretch")
        if self.total_length != n + sum(abs(v) for v in l):
            raise ValueError(
                f"total_length {self.total_length} != N + sum|l_i| "
                f"= {n + sum(abs(v) for v in l)}"
            )
        heights = list(accumulate(l))
        if min(heights) < 0:
            raise ValueError("prefix heights dip below the wall")
        if self.variant is not Variant.FREE and heights[-1] != 0:
            raise ValueError(f"{self.variant.value} requires end height 0")
        if self.variant is Variant.SINGLE_BEAD:
            if n % 2 or any(v == 0 for v in l):
                raise ValueError("single-bead needs an even number of nonzero stretches")
            if l[0] < 0 or any(a * b >= 0 for a, b in zip(l, l[1:])):
                raise ValueError("single-bead stretches must alternate sign, starting upward")

    @property
    def horizontal_extension(self) -> int:
        return len(self.stretches)

    def prefix_heights(self) -> tuple:
        """T_0 = 0, T_1, ..., T_N."""
        return (0,) + tuple(accumulate(self.stretches))


@dataclass(frozen=True)
class Envelopes:
    """Upper/lower envelope walks of a single-bead configuration.

    ``upper`` is (S_1, ..., S_{n+1}) and ``lower`` is (I_1, ..., I_n) where n
    is the number of up/down stretch pairs; S_0 = I_0 = 0 are implicit and
    S_{n+1} = I_n by construction.
    """

    upper: tuple
    lower: tuple


def hamiltonian(cfg: StretchConfig, beta: float, delta: float) -> float:
    """beta * (total stretch overlap) + delta * (number of wall contacts)."""
    padded = (0,) + cfg.stretches + (0,)
    wsum = sum(wedge(a, b) for a, b in zip(padded, padded[1:]))
    contacts = sum(1 for t in accumulate(cfg.stretches) if t == 0)
    return beta * wsum + delta * contacts


def beads(cfg: StretchConfig) -> tuple:
    """Maximal runs of mutually overlapping stretches, as 1-based index ranges.

    A bead ends after stretch i whenever the overlap with stretch i+1
    vanishes (with l_{N+1} = 0, so the final bead always closes at N).
    """
    l = cfg.stretches + (0,)
    out = []
    start = 1
    for i in range(1, len(cfg.stretches) + 1):
        if wedge(l[i - 1], l[i]) == 0:
            out.append((start, i))
            start = i + 1
    return tuple(out)


def envelopes(cfg: StretchConfig) -> Envelopes:
    """Envelope walks (S, I) of a single-bead configuration.

    S_k is the height after the k-th up stretch, I_k after the k-th down
    stretch; the padded terminal S_{n+1} repeats I_n = 0.
    """
    if cfg.variant is not Variant.SINGLE_BEAD:
        raise ValueError("envelopes are defined for the SingleBead variant only")
    t = cfg.prefix_heights()
    n = len(cfg.stretches) // 2
    upper = tuple(t[2 * k - 1] for k in range(1, n + 1)) + (t[2 * n],)
    lower = tuple(t[2 * k] for k in range(1, n + 1))
    return Envelopes(upper=upper, lower=lower)


def from_walks(S, I) -> StretchConfig:
    """Rebuild the single-bead configuration from its envelope walks.

    Expects S = (S_1..S_{n+1}), I = (I_1..I_n) with implicit S_0 = I_0 = 0,
    S_{n+1} = I_n = 0, everything >= 0 and the strict ordering S_k > I_k,
    S_k > I_{k-1} for k = 1..n.
    """
    S = tuple(int(v) for v in S)
    I = tuple(int(v) for v in I)
    n = len(I)
    if len(S) != n + 1 or n < 1:
        raise ValueError("need len(S) = len(I) + 1 >= 2")
    if any(v < 0 for v in S + I):
        raise ValueError("envelope walks must stay above the wall")
    if S[n] != I[n - 1]:
        raise ValueError("terminal mismatch: S_{n+1} must equal I_n")
    if I[n - 1] != 0:
        raise ValueError("a closed bead needs I_n = 0")
    I0 = (0,) + I
    for k in range(1, n + 1):
        if not (S[k - 1] > I0[k] and S[k - 1] > I0[k - 1]):
            raise ValueError(f"envelopes cross at k={k}: need S_k > I_k and S_k > I_(k-1)")
    stretches = []
    for k in range(1, n + 1):
        stretches.append(S[k - 1] - I0[k - 1])   # up stretch l_{2k-1}
        stretches.append(I0[k] - S[k - 1])       # down stretch l_{2k}
    L = 2 * n + sum(abs(v) for v in stretches)
    return StretchConfig(tuple(stretches), L, Variant.SINGLE_BEAD)


def geometric_area(env: Envelopes) -> int:
    """Total vertical bond count L - 2N expressed through the envelopes:

    sum_k |I_k - S_k| + sum_k |S_k - I_{k-1}| (padded terms vanish).
    """
    S, I = env.upper, env.lower
    I0 = (0,) + I
    down = sum(abs(I0[k] - S[k - 1]) for k in range(1, len(I) + 1))
    up = sum(abs(S[k - 1] - I0[k - 1]) for k in range(1, len(S) + 1))
    return up + down


def observables(cfg: StretchConfig) -> dict:
    """Scalar summary used by the samplers and the CLI."""
    t = cfg.prefix_heights()
    return {
        "horizontal_extension": len(cfg.stretches),
        "contacts": sum(1 for v in t[1:] if v == 0),
        "bead_count": len(beads(cfg)),
        "max_height": max(t),
        "signed_area": sum(t),
    }


def to_json(cfg: StretchConfig) -> str:
    return json.dumps({
        "L": cfg.total_length,
        "stretches": list(cfg.stretches),
        "variant": cfg.variant.value,
    })


def from_json(text: str) -> StretchConfig:
    obj = json.loads(text)
    try:
        return StretchConfig(tuple(obj["stretches"]), int(obj["L"]), obj["variant"])
    except KeyError as e:
        raise ValueError(f"missing field {e.args[0]!r} in configuration JSON") from None

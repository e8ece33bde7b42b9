"""Noise stability, noisy influence, and the small-influence predicate.

The spectral formula Stab_rho[f] = sum_S rho^|S| fhat(S)^2 is the workhorse;
a Monte-Carlo estimator over rho-correlated input pairs provides an
independent sampling cross-check.  The noisy influence of coordinate i is
the stability of the directional derivative D_i f, equivalently
sum_{S containing i} rho^(|S|-1) fhat(S)^2 at rho = 1 - delta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boolfn import BooleanFunction, FourierExpansion, subset_sizes, wht

# Influences within this slack of a threshold count as below it, so that
# round-off at the boundary can never make the regularity loop spin.
INFLUENCE_SLACK = 1e-12

_MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class NoiseParams:
    """Correlation rho and noise rate delta, tied by rho = 1 - delta."""

    rho: float
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")
        if abs(self.rho - (1.0 - self.delta)) > 1e-12:
            raise ValueError(f"rho = {self.rho} and delta = {self.delta} violate rho = 1 - delta")

    @classmethod
    def from_rho(cls, rho: float) -> "NoiseParams":
        return cls(rho, 1.0 - rho)

    @classmethod
    def from_delta(cls, delta: float) -> "NoiseParams":
        return cls(1.0 - delta, delta)


def _check_rho(rho: float) -> None:
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")


def _check_delta(delta: float) -> None:
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")


def stability(g: FourierExpansion, rho: float) -> float:
    """sum over masks S of rho^|S| * coeff(S)^2; lies in [0, E[f^2]]."""
    _check_rho(rho)
    sizes = subset_sizes(g.n)
    return float(np.sum(np.float64(rho) ** sizes * g.coeffs * g.coeffs))


def stability_mc(f: BooleanFunction, rho: float, samples: int, seed: int) -> float:
    """Monte-Carlo estimate of E[f(x) f(y)] over rho-correlated pairs."""
    return stability_mc_detail(f, rho, samples, seed)[0]


def stability_mc_detail(f: BooleanFunction, rho: float, samples: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo estimate plus its sample standard error.

    x is uniform on the cube; each y_i equals x_i with probability
    (1 + rho)/2, independently, implemented as an independent per-bit flip
    with probability (1 - rho)/2.  Fully deterministic given the seed.
    """
    _check_rho(rho)
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    rng = np.random.default_rng(seed)
    flip_prob = (1.0 - rho) / 2.0
    bit_weights = 1 << np.arange(f.n, dtype=np.int64)
    total = 0.0
    total_sq = 0.0
    remaining = samples
    while remaining > 0:
        chunk = min(remaining, _MC_CHUNK)
        x = rng.integers(0, f.size, size=chunk, dtype=np.int64)
        flips = (rng.random((chunk, f.n)) < flip_prob).astype(np.int64) @ bit_weights
        prods = f.values[x] * f.values[x ^ flips]
        total += float(prods.sum())
        total_sq += float((prods * prods).sum())
        remaining -= chunk
    est = total / samples
    var = max(total_sq / samples - est * est, 0.0)
    return est, float(np.sqrt(var / samples))


def expansion_influences(g: FourierExpansion, delta: float) -> np.ndarray:
    """Vector of (1-delta)-noisy influences computed from a spectrum."""
    sizes = subset_sizes(g.n)
    rho = np.float64(1.0 - delta)
    # (1-delta)^(|S|-1) with the empty mask zeroed out; 0^0 = 1 handles
    # delta = 1, where only degree-1 weight survives.
    weights = np.where(sizes >= 1, rho ** np.maximum(sizes - 1, 0), 0.0)
    weighted = weights * g.coeffs * g.coeffs
    masks = np.arange(1 << g.n)
    return np.array([float(weighted[(masks >> i) & 1 == 1].sum()) for i in range(g.n)])


def all_noisy_influences(f: BooleanFunction, delta: float) -> np.ndarray:
    """Noisy influences of every coordinate, computed from one transform."""
    _check_delta(delta)
    return expansion_influences(wht(f), delta)


def noisy_influence(f: BooleanFunction, i: int, delta: float) -> float:
    """(1-delta)-noisy influence of coordinate i: Stab_{1-delta}[D_i f]."""
    if not 0 <= i < f.n:
        raise IndexError(f"variable index {i} out of range for n={f.n}")
    _check_delta(delta)
    return float(all_noisy_influences(f, delta)[i])


@dataclass(frozen=True)
class InfluenceVerdict:
    """Outcome of the small-influence test; violator set iff not ok."""

    ok: bool
    violator: int | None = None
    value: float | None = None


def has_small_noisy_influences(f: BooleanFunction, eps: float, delta: float) -> InfluenceVerdict:
    """ok iff every coordinate's noisy influence is at most eps.

    On failure reports the argmax-influence coordinate (ties go to the
    lowest index), which the regularity splitter reuses as its split
    variable.  Values within INFLUENCE_SLACK above eps count as small.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    _check_delta(delta)
    influences = all_noisy_influences(f, delta)
    worst = int(np.argmax(influences))
    value = float(influences[worst])
    if value > eps + INFLUENCE_SLACK:
        return InfluenceVerdict(False, worst, value)
    return InfluenceVerdict(True)

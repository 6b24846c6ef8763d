"""Impedance media, their grid samples, and interface reflection weights.

A medium is a positive coefficient zeta(x) with constant tails: zeta equals
zeta_minus left of x_minus and zeta_plus right of x_plus.  The solver never
differentiates zeta; it only reads samples at grid nodes and works with the
step surrogate that jumps at grid midpoints and agrees with zeta at the nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import MediumBoundsError, ParameterError, WeightRangeError
from .grids import SpatialGrid


@dataclass(frozen=True)
class Medium:
    """Impedance coefficient with constant tails and a strict positivity band.

    sampler must accept numpy arrays.  Every grid evaluation is checked
    against the open band (c, C), 0 < c < C.
    """

    sampler: Callable[[np.ndarray], np.ndarray]
    zeta_minus: float
    zeta_plus: float
    x_minus: float
    x_plus: float
    c: float
    C: float

    def __post_init__(self):
        if not (0 < self.c < self.C):
            raise MediumBoundsError(f"impedance band must satisfy 0 < c < C, got c={self.c}, C={self.C}")

    def __call__(self, x):
        return self.sampler(np.asarray(x, dtype=np.float64))


@dataclass(frozen=True)
class MediumSamples:
    """Node values zeta(x_j), j = 1..n+1."""

    values: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ReflectionWeights:
    """Interface weights r_j = (zeta_j - zeta_{j+1}) / (zeta_j + zeta_{j+1}), j = 1..n.

    Positivity of zeta forces every weight strictly into (-1, 1).
    """

    r: np.ndarray = field(repr=False)

    def __post_init__(self):
        r = self.r
        if r.ndim != 1:
            raise ParameterError("weights must form a 1-d array")
        if len(r) and np.max(np.abs(r)) >= 1.0:
            raise WeightRangeError("reflection weights must lie strictly inside (-1, 1)")

    def __len__(self) -> int:
        return len(self.r)

    @property
    def n(self) -> int:
        return len(self.r)


def sample_medium(medium: Medium, grid: SpatialGrid) -> MediumSamples:
    """Evaluate zeta at every grid node, enforcing the (c, C) band."""
    values = np.asarray(medium(grid.nodes), dtype=np.float64)
    if values.shape != grid.nodes.shape:
        raise MediumBoundsError("medium sampler must return one value per node")
    bad = (values <= medium.c) | (values >= medium.C)
    if np.any(bad):
        j = int(np.argmax(bad))
        raise MediumBoundsError(
            f"zeta({grid.nodes[j]}) = {values[j]} outside the open band ({medium.c}, {medium.C})"
        )
    values = values.copy()
    values.setflags(write=False)
    return MediumSamples(values)


def compute_weights(samples: MediumSamples) -> ReflectionWeights:
    """Reflection weights of the n interfaces between consecutive node values."""
    z = samples.values
    if len(z) < 2:
        raise ParameterError("need at least two samples to form an interface")
    if np.any(z <= 0):
        j = int(np.argmax(z <= 0))
        raise MediumBoundsError(f"impedance sample {j} is non-positive ({z[j]})")
    r = (z[:-1] - z[1:]) / (z[:-1] + z[1:])
    r.setflags(write=False)
    return ReflectionWeights(r)


def evaluate_zeta_P(samples: MediumSamples, grid: SpatialGrid, medium: Medium, x):
    """The step surrogate: jumps at grid midpoints, node values between them.

    Intervals are left-closed/right-open, so a query exactly on a midpoint
    returns the value to its right.  Left of the first midpoint the value is
    the medium's left tail, right of the last midpoint the right tail.
    """
    mids = grid.midpoints
    lookup = np.empty(grid.n + 1, dtype=np.float64)
    lookup[0] = medium.zeta_minus
    lookup[1:-1] = samples.values[1:-1]
    lookup[-1] = medium.zeta_plus
    idx = np.searchsorted(mids, x, side="right")
    return lookup[idx]


def ramp_coefficient(x):
    """Smooth monotone ramp from 1 to 3 supported on (1, 9).

    1 for x <= 1, then 2 + tanh(8(x-5) / (16 - (x-5)^2)), then 3 for x >= 9.
    The rational argument blows up at the endpoints, where tanh saturates to
    -1 and +1, so the constant branches extend it continuously.
    """
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.ones_like(x)
    out[x >= 9.0] = 3.0
    inside = (x > 1.0) & (x < 9.0)
    s = x[inside] - 5.0
    out[inside] = 2.0 + np.tanh(8.0 * s / (16.0 - s * s))
    return float(out[0]) if scalar else out


def ramp_medium() -> Medium:
    """The smooth-ramp impedance as a Medium."""
    return Medium(
        sampler=ramp_coefficient,
        zeta_minus=1.0,
        zeta_plus=3.0,
        x_minus=1.0,
        x_plus=9.0,
        c=0.5,
        C=3.5,
    )


def constant_medium(zeta: float = 1.0) -> Medium:
    """A homogeneous medium (all reflection weights vanish)."""
    if zeta <= 0:
        raise MediumBoundsError(f"impedance must be positive, got {zeta}")
    return Medium(
        sampler=lambda x: np.full_like(np.asarray(x, dtype=np.float64), zeta),
        zeta_minus=zeta,
        zeta_plus=zeta,
        x_minus=0.0,
        x_plus=0.0,
        c=0.5 * zeta,
        C=2.0 * zeta,
    )


def step_medium(breakpoints, values) -> Medium:
    """Right-continuous step medium: value values[i] on [breakpoints[i-1], breakpoints[i]).

    values has one more entry than breakpoints; values[0] is the left tail and
    values[-1] the right tail.
    """
    breaks = np.asarray(breakpoints, dtype=np.float64)
    vals = np.asarray(values, dtype=np.float64)
    if len(vals) != len(breaks) + 1:
        raise ParameterError("a step medium needs exactly one more value than breakpoints")
    if len(breaks) == 0:
        return constant_medium(float(vals[0]))
    if np.any(np.diff(breaks) < 0):
        raise ParameterError("breakpoints must be sorted ascending")
    if np.any(vals <= 0):
        raise MediumBoundsError("step values must be positive")

    breaks = breaks.copy()
    vals = vals.copy()
    breaks.setflags(write=False)
    vals.setflags(write=False)

    def sampler(x):
        return vals[np.searchsorted(breaks, x, side="right")]

    lo = float(np.min(vals))
    hi = float(np.max(vals))
    return Medium(
        sampler=sampler,
        zeta_minus=float(vals[0]),
        zeta_plus=float(vals[-1]),
        x_minus=float(breaks[0]),
        x_plus=float(breaks[-1]),
        c=0.5 * lo,
        C=2.0 * hi,
    )


def random_step_medium(seed: int, jump_count: int, lo: float, hi: float) -> Medium:
    """Step medium with jump_count sorted uniform jump points in [lo, hi].

    The tails are fixed (1 on the left, 2/3 on the right); the interior layer
    values are drawn independently uniform in [0.5, 1.5] from a PCG64 generator
    so identical seeds give bit-identical media.
    """
    if jump_count < 1:
        raise ParameterError(f"need at least one jump, got {jump_count}")
    if not lo < hi:
        raise ParameterError(f"jump window must satisfy lo < hi, got [{lo}, {hi}]")
    rng = np.random.default_rng(seed)
    breaks = np.sort(rng.uniform(lo, hi, jump_count))
    interior = rng.uniform(0.5, 1.5, jump_count - 1)
    vals = np.concatenate(([1.0], interior, [2.0 / 3.0]))
    return step_medium(breaks, vals)

"""Initial data: the right/left-mover split and Dirac combs.

A solution of the constant-coefficient equation splits into a right mover
alpha(x - t) and a left mover beta(x + t).  Displacement/velocity data (f, g)
convert to that pair via

    alpha = (f - H/zeta) / 2,   beta = (f + H/zeta) / 2,
    H(x)  = integral of zeta*g from the far left up to x.

Everything the stepping scheme consumes lives on the extended grid
a + offset*delta with offset in [-(m+1), n+m+1]: the initial row reads nodes
1..n+1 and the boundary rows read alpha(x_1 - t_k) and beta(x_{n+1} + t_k),
which are extended-grid positions because the time step equals delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import AlignmentError, StructureError
from .grids import SpatialGrid, TemporalGrid
from .medium import Medium


@dataclass(frozen=True)
class RegularData:
    """Right/left-moving amplitude samplers, total on the extended domain."""

    alpha: Callable[[np.ndarray], np.ndarray]
    beta: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DiracCombData:
    """Weighted Dirac atoms on extended-grid nodes.

    c maps integer node offsets to right-mover coefficients, d to left-mover
    coefficients.  Offsets may be negative or exceed n; atoms outside the
    domain enter (or never enter) through the boundary rows.
    """

    c: Mapping[int, float] = field(default_factory=dict)
    d: Mapping[int, float] = field(default_factory=dict)

    @classmethod
    def from_positions(cls, grid: SpatialGrid, right=(), left=(), tol: float = 1e-9) -> "DiracCombData":
        """Build a comb from (position, amplitude) pairs, rejecting misaligned atoms.

        Alignment is all-or-nothing: every position must land on an
        extended-grid node within tol*delta, otherwise the whole comb is
        rejected (atoms are never snapped).
        """
        misaligned = []

        def to_offsets(pairs):
            out: dict[int, float] = {}
            for x, amp in pairs:
                offset = round((x - grid.a) / grid.delta)
                if abs(x - grid.node(offset)) > tol * grid.delta:
                    misaligned.append(x)
                    continue
                out[offset] = out.get(offset, 0.0) + float(amp)
            return out

        c = to_offsets(right)
        d = to_offsets(left)
        if misaligned:
            raise AlignmentError(
                f"Dirac atom positions {misaligned} do not lie on extended-grid nodes "
                f"(spacing {grid.delta})"
            )
        return cls(c=c, d=d)


@dataclass(frozen=True)
class InitialState:
    """What a run consumes: the t=0 state and the two prescribed boundary rows.

    v0 interleaves right and left movers node by node (length 2n+2); the
    boundary arrays hold the incoming amplitudes for steps 1..m.
    """

    v0: np.ndarray = field(repr=False)
    left_boundary: np.ndarray = field(repr=False)
    right_boundary: np.ndarray = field(repr=False)


def extended_offsets(grid: SpatialGrid, temporal: TemporalGrid) -> np.ndarray:
    """Integer offsets of the extended grid: [-(m+1), n+m+1]."""
    m = temporal.m
    return np.arange(-(m + 1), grid.n + m + 2)


def extended_nodes(grid: SpatialGrid, temporal: TemporalGrid) -> np.ndarray:
    """Positions of the extended grid, one guard cell past every boundary read."""
    return grid.a + extended_offsets(grid, temporal) * grid.delta


def convert_fg(
    f: Callable[[np.ndarray], np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
    medium: Medium,
    grid: SpatialGrid,
    temporal: TemporalGrid,
) -> RegularData:
    """Convert displacement/velocity data (f, g) to the mover pair (alpha, beta).

    The integral H is accumulated by the trapezoid rule on the extended grid,
    starting from the left extended endpoint; g is assumed to vanish below it
    (callers with wider g must enlarge the domain).  The returned samplers
    interpolate linearly between extended nodes, so every node evaluation is
    exact and alpha + beta reproduces f there up to roundoff.
    """
    xs = extended_nodes(grid, temporal)
    zeta = np.asarray(medium(xs), dtype=np.float64)
    fv = np.asarray(f(xs), dtype=np.float64)
    gv = np.asarray(g(xs), dtype=np.float64)
    H = cumulative_trapezoid(zeta * gv, dx=grid.delta, initial=0.0)
    q = H / zeta
    alpha_vals = 0.5 * (fv - q)
    beta_vals = 0.5 * (fv + q)

    def alpha(x):
        return np.interp(x, xs, alpha_vals)

    def beta(x):
        return np.interp(x, xs, beta_vals)

    return RegularData(alpha=alpha, beta=beta)


def initialize(data, grid: SpatialGrid, temporal: TemporalGrid) -> InitialState:
    """Fill the t=0 state and the boundary rows from regular or comb data."""
    n, m = grid.n, temporal.m
    v0 = np.zeros(2 * n + 2)
    left = np.zeros(m)
    right = np.zeros(m)

    if isinstance(data, DiracCombData):
        for offset, amp in data.c.items():
            if 0 <= offset <= n:
                v0[2 * offset] = amp
        for offset, amp in data.d.items():
            if 0 <= offset <= n:
                v0[2 * offset + 1] = amp
        ks = np.arange(1, m + 1)
        left[:] = [data.c.get(-k, 0.0) for k in ks]
        right[:] = [data.d.get(n + k, 0.0) for k in ks]
    elif isinstance(data, RegularData):
        v0[0::2] = data.alpha(grid.nodes)
        v0[1::2] = data.beta(grid.nodes)
        if m:
            left[:] = data.alpha(grid.nodes[0] - temporal.times[1:])
            right[:] = data.beta(grid.nodes[-1] + temporal.times[1:])
    else:
        raise StructureError(f"unsupported initial data type {type(data).__name__}")

    for arr in (v0, left, right):
        arr.setflags(write=False)
    return InitialState(v0=v0, left_boundary=left, right_boundary=right)


def gaussian_mover(amplitude: float = 2.0, decay: float = 0.05, center: float = -10.0):
    """The bump amplitude*exp(-decay*(x-center)^2), usable as alpha or beta."""

    def profile(x):
        x = np.asarray(x, dtype=np.float64)
        return amplitude * np.exp(-decay * (x - center) ** 2)

    return profile

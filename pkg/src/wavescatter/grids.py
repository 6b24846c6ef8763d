"""Space-time lattice for the scattering scheme.

The scheme works in travel-time coordinates where the wave speed is 1,
so the time step always equals the spatial step.  Nodes are computed as
a + j*delta (never by cumulative summation) and the endpoints are pinned
to a and b exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid of n cells on [a, b] with n+1 nodes."""

    a: float
    b: float
    n: int
    delta: float
    nodes: np.ndarray = field(repr=False)

    @property
    def midpoints(self) -> np.ndarray:
        """Cell midpoints x_j* = (x_j + x_{j+1})/2; the jump points of the step surrogate."""
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])

    def node(self, offset: int) -> float:
        """Position a + offset*delta on the (unbounded) extension of the grid."""
        return self.a + offset * self.delta


@dataclass(frozen=True)
class TemporalGrid:
    """Times t_k = k*delta for 0 <= k <= m with m = floor(T/delta)."""

    T: float
    m: int
    delta: float
    times: np.ndarray = field(repr=False)


def build_grid(a: float, b: float, n: int, T: float) -> tuple[SpatialGrid, TemporalGrid]:
    """Construct the coupled spatial/temporal grids for a run on [a,b] x [0,T].

    The time step equals the spatial step delta = (b-a)/n, so m = floor(T/delta)
    steps fit in the horizon and t_m <= T < t_m + delta.
    """
    if not b > a:
        raise ParameterError(f"domain endpoints must satisfy a < b, got a={a}, b={b}")
    if n < 2:
        raise ParameterError(f"cell count must be at least 2, got n={n}")
    if not T > 0:
        raise ParameterError(f"time horizon must be positive, got T={T}")

    delta = (b - a) / n
    nodes = a + delta * np.arange(n + 1, dtype=np.float64)
    nodes[0] = a
    nodes[-1] = b
    nodes.setflags(write=False)

    m = int(math.floor(T / delta))
    # guard the floor against 1-ulp slips when T is an exact multiple of delta
    while (m + 1) * delta <= T:
        m += 1
    while m > 0 and m * delta > T:
        m -= 1

    times = delta * np.arange(m + 1, dtype=np.float64)
    times.setflags(write=False)
    return SpatialGrid(a, b, n, delta, nodes), TemporalGrid(T, m, delta, times)

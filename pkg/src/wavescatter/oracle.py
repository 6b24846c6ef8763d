"""Independent ground-truth solvers.

trace_dirac_exact advances individual impulses along characteristics with
per-impulse bookkeeping (a ledger keyed by node and direction), never touching
the engine's vector stencil.  For media whose jumps sit on grid midpoints this
is the exact solution, so it doubles as the engine's cross-check.  The
d'Alembert translation covers the constant-medium case in closed form.
"""

from __future__ import annotations

import numpy as np

from .engine import DIRAC, SolutionField
from .grids import SpatialGrid, TemporalGrid
from .initial import DiracCombData, RegularData
from .medium import ReflectionWeights

RIGHT = 1
LEFT = -1


def _accumulate(ledger: dict, key, amount: float):
    ledger[key] = ledger.get(key, 0.0) + amount


def trace_dirac_exact(
    comb: DiracCombData,
    weights: ReflectionWeights,
    grid: SpatialGrid,
    temporal: TemporalGrid,
    ledger_out: list | None = None,
) -> SolutionField:
    """Exact impulse propagation through midpoint-aligned jumps.

    Each step every impulse moves one cell; crossing an interface splits it
    into a transmitted and a reflected impulse, impulses sharing a node and
    direction merge by summation, and impulses leaving the domain are dropped.
    Atoms outside the domain enter through the prescribed boundary slots.
    When ledger_out is given, (k, node, direction, amplitude) rows for every
    live impulse at every step are appended to it.
    """
    n, m = grid.n, temporal.m
    r = weights.r
    if len(r) != n:
        raise ValueError(f"weights length {len(r)} does not match n = {n}")

    state: dict[tuple[int, int], float] = {}
    for o, amp in comb.c.items():
        if 0 <= o <= n and amp:
            _accumulate(state, (o, RIGHT), amp)
    for o, amp in comb.d.items():
        if 0 <= o <= n and amp:
            _accumulate(state, (o, LEFT), amp)

    u = np.zeros((m + 1, n + 1))

    def emit(k: int):
        for (o, direction), amp in state.items():
            u[k, o] += amp
            if ledger_out is not None and amp:
                ledger_out.append((k, o, "right" if direction == RIGHT else "left", amp))

    emit(0)
    for k in range(1, m + 1):
        nxt: dict[tuple[int, int], float] = {}
        for (o, direction), amp in state.items():
            if amp == 0.0:
                continue
            if direction == RIGHT:
                if o >= n:
                    continue  # exits through the right end
                rj = r[o]
                _accumulate(nxt, (o + 1, RIGHT), (1.0 + rj) * amp)
                _accumulate(nxt, (o, LEFT), rj * amp)
            else:
                if o <= 0:
                    continue  # exits through the left end
                rj = r[o - 1]
                _accumulate(nxt, (o - 1, LEFT), (1.0 - rj) * amp)
                _accumulate(nxt, (o, RIGHT), -rj * amp)
        # prescribed boundary slots; nothing interior ever lands on them
        lv = comb.c.get(-k, 0.0)
        rv = comb.d.get(n + k, 0.0)
        if lv:
            nxt[(0, RIGHT)] = lv
        if rv:
            nxt[(n, LEFT)] = rv
        state = nxt
        emit(k)

    u.setflags(write=False)
    return SolutionField(
        u=u,
        steps=np.arange(m + 1, dtype=np.intp),
        grid=grid,
        temporal=temporal,
        mode=DIRAC,
    )


def sampled_comb(data: RegularData, grid: SpatialGrid, temporal: TemporalGrid) -> DiracCombData:
    """The comb whose coefficients are the mover profiles sampled on the extended grid.

    Right movers are sampled on offsets [-m, n] and left movers on [0, n+m]:
    exactly the atoms that can influence the domain within m steps.  Feeding
    this to the tracer applies the split laws to sampled regular profiles.
    """
    m = temporal.m
    c_offsets = np.arange(-m, grid.n + 1)
    d_offsets = np.arange(0, grid.n + m + 1)
    c_vals = np.asarray(data.alpha(grid.a + c_offsets * grid.delta), dtype=np.float64)
    d_vals = np.asarray(data.beta(grid.a + d_offsets * grid.delta), dtype=np.float64)
    return DiracCombData(
        c={int(o): float(v) for o, v in zip(c_offsets, c_vals) if v},
        d={int(o): float(v) for o, v in zip(d_offsets, d_vals) if v},
    )


def trace_regular_exact(
    data: RegularData,
    weights: ReflectionWeights,
    grid: SpatialGrid,
    temporal: TemporalGrid,
) -> SolutionField:
    """Exact field for regular data over a midpoint-jump medium, via the tracer."""
    field = trace_dirac_exact(sampled_comb(data, grid, temporal), weights, grid, temporal)
    return SolutionField(
        u=field.u,
        steps=field.steps,
        grid=grid,
        temporal=temporal,
        mode="regular",
    )


def dalembert_constant(alpha, beta, x, t):
    """Constant-medium solution: right mover alpha(x - t) plus left mover beta(x + t)."""
    x = np.asarray(x, dtype=np.float64)
    return alpha(x - t) + beta(x + t)

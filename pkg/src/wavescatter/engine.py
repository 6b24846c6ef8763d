"""The scattering stepper: exact propagation through the midpoint-jump surrogate.

State layout: v has length 2n+2 with v[2j] the right-moving and v[2j+1] the
left-moving amplitude at node j (0-based).  One step costs Theta(n): every
amplitude moves one cell and each interface splits what crosses it into a
transmitted and a reflected part.  The first and last slots are prescribed
boundary values, never computed.

The time loop runs in a compiled kernel when the extension built, otherwise in
a vectorized NumPy fallback; both produce bit-identical fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ParameterError, RefinementError, StructureError
from .grids import SpatialGrid, TemporalGrid
from .initial import DiracCombData, InitialState, initialize
from .medium import ReflectionWeights
from . import _kernels_py

try:
    from . import _kernels
except ImportError:
    _kernels = None

REGULAR = "regular"
DIRAC = "dirac-coefficients"


def active_backend() -> str:
    """Name of the kernel used by default: "compiled" or "python"."""
    return "compiled" if _kernels is not None else "python"


def _resolve_kernel(backend):
    if backend in (None, "auto"):
        return _kernels if _kernels is not None else _kernels_py
    if backend == "compiled":
        if _kernels is None:
            raise ParameterError("compiled kernel requested but the extension is not built")
        return _kernels
    if backend == "python":
        return _kernels_py
    raise ParameterError(f"unknown backend {backend!r}; use 'auto', 'compiled' or 'python'")


@dataclass(frozen=True)
class SolutionField:
    """Field values u[row, j] at the recorded steps.

    In regular mode the entries are solution values at the grid nodes; in
    dirac mode they are Dirac coefficients (the solution is the comb
    u = sum_j u[row, j] * delta(x - x_j) at the recorded time).
    """

    u: np.ndarray = field(repr=False)
    steps: np.ndarray = field(repr=False)
    grid: SpatialGrid
    temporal: TemporalGrid
    mode: str

    @property
    def times(self) -> np.ndarray:
        return self.steps * self.temporal.delta

    @property
    def final(self) -> np.ndarray:
        return self.u[-1]

    def row_at_step(self, k: int) -> np.ndarray:
        hits = np.nonzero(self.steps == k)[0]
        if not len(hits):
            raise ParameterError(f"step {k} was not recorded (recorded: {self.steps})")
        return self.u[hits[0]]


@dataclass(frozen=True)
class DiracSeparation:
    """Regular/singular split of a family of comb runs at shared lattice points.

    regular holds the rescaled values (gamma_j + gamma_{j+1})/(2*delta) of the
    finest run, sampled on the coarsest run's lattice (last column clamped,
    having no right neighbour).  singular_mask marks nodes whose unscaled
    coefficient stabilizes across the two finest levels instead of decaying.
    raw is the finest run itself.
    """

    regular: np.ndarray = field(repr=False)
    singular_mask: np.ndarray = field(repr=False)
    raw: SolutionField
    grid: SpatialGrid
    steps: np.ndarray = field(repr=False)


def step(v, weights: ReflectionWeights, left_in: float, right_in: float):
    """One iterative step; returns the new state (the only O(n) allocation)."""
    v = np.asarray(v, dtype=np.float64)
    r = weights.r
    n = len(r)
    if v.shape != (2 * n + 2,):
        raise StructureError(f"state length {v.shape} does not match 2n+2 = {2 * n + 2}")
    nxt = np.empty_like(v)
    a = v[0 : 2 * n : 2]
    b = v[3::2]
    nxt[1 : 2 * n + 1 : 2] = r * a + (1.0 - r) * b
    nxt[2 : 2 * n + 2 : 2] = (1.0 + r) * a - r * b
    nxt[0] = left_in
    nxt[2 * n + 1] = right_in
    return nxt


def _resolve_record(record, m: int) -> np.ndarray:
    if isinstance(record, str):
        if record == "all":
            return np.arange(m + 1, dtype=np.intp)
        if record == "final":
            return np.array([m], dtype=np.intp)
        raise ParameterError(f"unknown record spec {record!r}")
    ks = np.unique(np.asarray(record, dtype=np.intp))
    if len(ks) == 0:
        raise ParameterError("must record at least one step")
    if ks[0] < 0 or ks[-1] > m:
        raise ParameterError(f"recorded steps must lie in [0, {m}], got {ks}")
    return ks


def run(
    state: InitialState,
    weights: ReflectionWeights,
    grid: SpatialGrid,
    temporal: TemporalGrid,
    record="all",
    mode: str = REGULAR,
    backend=None,
) -> SolutionField:
    """Drive the stepper over the whole temporal grid.

    record selects which rows of the field are kept: "all", "final", or an
    explicit list of step indices.
    """
    n, m = grid.n, temporal.m
    if state.v0.shape != (2 * n + 2,):
        raise StructureError(f"v0 length {len(state.v0)} does not match 2n+2 = {2 * n + 2}")
    if len(weights) != n:
        raise StructureError(f"weights length {len(weights)} does not match n = {n}")
    if state.left_boundary.shape != (m,) or state.right_boundary.shape != (m,):
        raise StructureError(f"boundary rows must have length m = {m}")

    ks = _resolve_record(record, m)
    out = np.empty((len(ks), n + 1))
    kernel = _resolve_kernel(backend)
    kernel.run_steps(
        state.v0.copy(),
        weights.r,
        state.left_boundary,
        state.right_boundary,
        ks,
        out,
        np.empty(2 * n + 2),
    )
    out.setflags(write=False)
    ks.setflags(write=False)
    return SolutionField(u=out, steps=ks, grid=grid, temporal=temporal, mode=mode)


def run_dirac(
    comb: DiracCombData,
    weights: ReflectionWeights,
    grid: SpatialGrid,
    temporal: TemporalGrid,
    record="all",
    backend=None,
) -> SolutionField:
    """Run with Dirac-comb data: amplitudes are the comb coefficients."""
    state = initialize(comb, grid, temporal)
    return run(state, weights, grid, temporal, record=record, mode=DIRAC, backend=backend)


def rescaled_regular_waveform(field_row: np.ndarray, delta: float) -> np.ndarray:
    """Regular-part estimate from a row of Dirac coefficients.

    Sums two successive node coefficients and divides by 2*delta; successive
    coefficients alternate with the parity of the propagation lattice, so the
    pair always captures one physical value.  The last entry clamps to its
    left neighbour.
    """
    w = np.empty_like(field_row)
    w[:-1] = (field_row[:-1] + field_row[1:]) / (2.0 * delta)
    w[-1] = w[-2]
    return w


def separate_scales(
    runs: Sequence[SolutionField],
    stable_rtol: float = 0.1,
    amplitude_floor: float = 1e-8,
) -> DiracSeparation:
    """Split comb runs at refinement levels n, 2n, 4n, ... into regular and singular parts.

    The unscaled coefficient at a singular-support node stabilizes under
    refinement while at regular nodes it shrinks with the spacing.  A node is
    flagged singular when the two finest levels' magnitudes agree within
    stable_rtol and exceed amplitude_floor; thresholds are configurable.

    Any integer refinement ratio works.  For media with O(1) jumps, note that
    midpoints of one level are nodes of its even multiples, so reflected
    characteristics land one fine cell apart between 2x levels; odd ratios
    (3x, 9x, ...) keep a midpoint-aligned jump on midpoints of every level and
    hence keep the reflected singular support aligned.
    """
    if len(runs) < 3:
        raise RefinementError(f"need at least 3 refinement levels, got {len(runs)}")
    for f in runs:
        if f.mode != DIRAC:
            raise RefinementError("scale separation requires dirac-mode runs")
    ns = [f.grid.n for f in runs]
    coarse = runs[0]
    for prev, cur in zip(runs, runs[1:]):
        if cur.grid.a != coarse.grid.a or cur.grid.b != coarse.grid.b:
            raise RefinementError("all runs must share the spatial domain")
        if cur.grid.n <= prev.grid.n or cur.grid.n % prev.grid.n:
            raise RefinementError(f"grid sizes must refine by integer factors, got {ns}")

    # rows of every run matching the coarse run's recorded steps
    rows = []
    for f in runs:
        ratio = f.grid.n // coarse.grid.n
        try:
            rows.append(np.stack([f.row_at_step(int(k) * ratio) for k in coarse.steps]))
        except ParameterError as e:
            raise RefinementError(f"run at n={f.grid.n} lacks a shared time row: {e}") from e

    finest = runs[-1]
    ratio = finest.grid.n // coarse.grid.n
    shared = np.arange(coarse.grid.n + 1) * ratio

    g_fine = rows[-1][:, shared]
    g_next = rows[-2][:, np.arange(coarse.grid.n + 1) * (runs[-2].grid.n // coarse.grid.n)]
    m1, m2 = np.abs(g_fine), np.abs(g_next)
    mask = (np.abs(m1 - m2) <= stable_rtol * np.maximum(m1, m2)) & (m1 > amplitude_floor)

    full = np.apply_along_axis(rescaled_regular_waveform, 1, rows[-1], finest.grid.delta)
    regular = full[:, shared]

    regular.setflags(write=False)
    mask.setflags(write=False)
    return DiracSeparation(
        regular=regular,
        singular_mask=mask,
        raw=finest,
        grid=coarse.grid,
        steps=coarse.steps,
    )

"""Replication experiments: ramp traversal, oscillatory media, and cost scaling.

The ramp scenario sends a unit right-moving Dirac impulse through the smooth
1-to-3 ramp and measures how fast the rescaled regular waveform converges
under grid refinement.  The oscillatory scenario runs a Gaussian through a
40-jump random step medium and probes whether discontinuities form.  Both use
domains and horizons chosen so nothing of interest leaves the frame and every
power-of-two grid lands the final time exactly on a step.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import engine
from .errors import ParameterError
from .grids import build_grid
from .initial import DiracCombData, RegularData, gaussian_mover, initialize
from .medium import (
    compute_weights,
    ramp_medium,
    random_step_medium,
    sample_medium,
)

RAMP_DOMAIN = (-15.0, 25.0)
RAMP_HORIZON = 20.0
RAMP_SOURCE = -5.0

OSC_DOMAIN = (-30.0, 40.0)
OSC_SOURCE_CENTER = -10.0
OSC_EXIT = 22.0  # the pulse centre must clear this before the final snapshot


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-resolution waveform errors with a log-log least-squares fit."""

    entries: tuple  # ((n, E), ...) sorted by n
    slope: float
    constant: float

    @property
    def mean_en_product(self) -> float:
        """Average of E(n)*n, the constant if decay is exactly first order."""
        return float(np.mean([n * e for n, e in self.entries]))


@dataclass(frozen=True)
class WaveformSnapshot:
    """One plotted waveform: positions, values, and singular-support flags.

    scale is presentation metadata only (figure captions scale amplitudes to
    match the medium); stored values are never scaled.
    """

    t: float
    x: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    singular: np.ndarray = field(repr=False)
    scale: float | None = None

    def __post_init__(self):
        if np.any(np.diff(self.x) <= 0):
            raise ParameterError("snapshot positions must be strictly increasing")


def ramp_scenario(n: int):
    """Grid, weights, and the unit right-moving atom for the ramp traversal."""
    if n % 4:
        raise ParameterError(f"ramp scenario needs n divisible by 4, got {n}")
    a, b = RAMP_DOMAIN
    grid, temporal = build_grid(a, b, n, RAMP_HORIZON)
    medium = ramp_medium()
    weights = compute_weights(sample_medium(medium, grid))
    start = n // 4  # node at the source position
    comb = DiracCombData(c={start: 1.0})
    return grid, temporal, weights, comb, start


def ramp_run(n: int, record="final", backend=None) -> engine.SolutionField:
    """One Dirac traversal of the ramp at resolution n."""
    grid, temporal, weights, comb, _ = ramp_scenario(n)
    return engine.run_dirac(comb, weights, grid, temporal, record=record, backend=backend)


def ramp_singular_offset(n: int) -> int:
    """Node index of the surviving transmitted atom at the final time."""
    _, temporal, _, _, start = ramp_scenario(n)
    return start + temporal.m


def waveform_error(
    candidate: engine.SolutionField,
    reference: engine.SolutionField,
    singular_offset: int,
    exclude_radius: int = 1,
) -> float:
    """Relative rms difference of rescaled regular waveforms at shared nodes.

    Compares the final rows, restricted to the candidate's lattice, excluding
    the singular-support node and exclude_radius neighbours on each side.
    """
    n_c, n_r = candidate.grid.n, reference.grid.n
    if n_r % n_c:
        raise ParameterError(f"reference grid {n_r} does not refine candidate grid {n_c}")
    ratio = n_r // n_c
    w_c = engine.rescaled_regular_waveform(candidate.final, candidate.grid.delta)[:n_c]
    w_r = engine.rescaled_regular_waveform(reference.final, reference.grid.delta)
    w_r = w_r[np.arange(n_c) * ratio]
    keep = np.ones(n_c, dtype=bool)
    lo = max(singular_offset - exclude_radius, 0)
    keep[lo : singular_offset + exclude_radius + 1] = False
    diff = w_c[keep] - w_r[keep]
    return float(np.sqrt(np.mean(diff**2)) / np.sqrt(np.mean(w_r[keep] ** 2)))


def convergence_study(p_min: int, p_max: int, p_ref: int, backend=None) -> ConvergenceReport:
    """Waveform error E(n) for n = 2^p, p_min <= p <= p_max, against a 2^p_ref reference."""
    if not 2 <= p_min <= p_max:
        raise ParameterError(f"need 2 <= p_min <= p_max, got {p_min}..{p_max}")
    if p_ref < p_max + 2:
        raise ParameterError(f"reference exponent {p_ref} must be at least p_max + 2 = {p_max + 2}")
    reference = ramp_run(2**p_ref, backend=backend)
    entries = []
    for p in range(p_min, p_max + 1):
        n = 2**p
        candidate = ramp_run(n, backend=backend)
        entries.append((n, waveform_error(candidate, reference, ramp_singular_offset(n))))
    ns = np.array([n for n, _ in entries], dtype=np.float64)
    es = np.array([e for _, e in entries])
    slope, intercept = np.polyfit(np.log(ns), np.log(es), 1)
    return ConvergenceReport(entries=tuple(entries), slope=float(slope), constant=float(np.exp(intercept)))


def ramp_experiment(p: int, backend=None):
    """Dirac ramp traversal with scale separation across three refinement levels.

    Returns before/after snapshots of the rescaled regular waveform on the
    coarsest (2^(p-2)) lattice plus the full separation.
    """
    if not 7 <= p <= 15:
        raise ParameterError(f"ramp experiment supports 7 <= p <= 15, got {p}")
    runs = []
    for q in (p - 2, p - 1, p):
        grid, temporal, weights, comb, _ = ramp_scenario(2**q)
        runs.append(
            engine.run_dirac(comb, weights, grid, temporal, record=[0, temporal.m], backend=backend)
        )
    separation = engine.separate_scales(runs)
    coarse = runs[0]
    before = WaveformSnapshot(
        t=0.0,
        x=coarse.grid.nodes,
        u=separation.regular[0],
        singular=separation.singular_mask[0],
        scale=32.0,
    )
    after = WaveformSnapshot(
        t=float(coarse.times[-1]),
        x=coarse.grid.nodes,
        u=separation.regular[-1],
        singular=separation.singular_mask[-1],
        scale=32.0,
    )
    return before, after, separation


def oscillatory_horizon(source_shift: float) -> float:
    """Smallest horizon clearing the exit point, as a multiple of (b-a)/4.

    Multiples of (b-a)/4 keep T an exact number of steps for every grid with
    n divisible by 4, so refinement levels share the final time.
    """
    a, b = OSC_DOMAIN
    quantum = (b - a) / 4.0
    center = OSC_SOURCE_CENTER + source_shift
    return quantum * float(np.ceil((OSC_EXIT - center) / quantum))


def oscillatory_scenario(seed: int, source_shift: float, n: int):
    """Grid, weights, and Gaussian mover data for the oscillatory-medium runs."""
    if n % 4:
        raise ParameterError(f"oscillatory scenario needs n divisible by 4, got {n}")
    a, b = OSC_DOMAIN
    grid, temporal = build_grid(a, b, n, oscillatory_horizon(source_shift))
    medium = random_step_medium(seed, 40, 1.0, 10.0)
    weights = compute_weights(sample_medium(medium, grid))
    center = OSC_SOURCE_CENTER + source_shift
    data = RegularData(alpha=gaussian_mover(2.0, 0.05, center), beta=lambda x: np.zeros_like(np.asarray(x, dtype=np.float64)))
    return grid, temporal, weights, data


def oscillatory_experiment(seed: int, source_shift: float, n: int = 4096, backend=None):
    """Snapshots before, during, and after the Gaussian crosses the oscillatory zone."""
    grid, temporal, weights, data = oscillatory_scenario(seed, source_shift, n)
    m = temporal.m
    state = initialize(data, grid, temporal)
    fld = engine.run(state, weights, grid, temporal, record=[0, m // 2, m], backend=backend)
    none = np.zeros(grid.n + 1, dtype=bool)
    return [
        WaveformSnapshot(t=float(k * grid.delta), x=grid.nodes, u=row, singular=none)
        for k, row in zip(fld.steps, fld.u)
    ]


def adjacent_jump(values: np.ndarray) -> float:
    """Largest jump between neighbouring nodes; the discontinuity metric."""
    return float(np.max(np.abs(np.diff(values))))


def oscillatory_jump_metrics(seed: int, source_shift: float, n_values: Sequence[int], backend=None):
    """Final-time jump metric per resolution; decay means the waveform stays continuous."""
    out = []
    for n in n_values:
        grid, temporal, weights, data = oscillatory_scenario(seed, source_shift, n)
        state = initialize(data, grid, temporal)
        fld = engine.run(state, weights, grid, temporal, record="final", backend=backend)
        out.append((n, adjacent_jump(fld.final)))
    return out


def performance_probe(n_values: Sequence[int], T: float = RAMP_HORIZON, repeats: int = 3, backend=None):
    """Wall time of the stepping loop per resolution on a fixed physical scenario.

    Setup (grids, weights, data) is excluded from the timing; only the run
    itself is measured, best of `repeats`.
    """
    n_values = list(n_values)
    if len(n_values) < 3:
        raise ParameterError(f"need at least 3 resolutions, got {n_values}")
    if sorted(n_values) != n_values:
        raise ParameterError("resolutions must be sorted ascending")
    if repeats < 1:
        raise ParameterError(f"need at least one timing repeat, got {repeats}")
    a, b = RAMP_DOMAIN
    medium = ramp_medium()
    data = RegularData(
        alpha=gaussian_mover(2.0, 0.05, RAMP_SOURCE),
        beta=lambda x: np.zeros_like(np.asarray(x, dtype=np.float64)),
    )
    results = []
    for n in n_values:
        grid, temporal = build_grid(a, b, n, T)
        weights = compute_weights(sample_medium(medium, grid))
        state = initialize(data, grid, temporal)
        best = np.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            engine.run(state, weights, grid, temporal, record="final", backend=backend)
            best = min(best, time.perf_counter() - t0)
        results.append((n, best))
    return results

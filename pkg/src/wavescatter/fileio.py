"""CSV and parameter-file formats, written atomically.

All floats are printed with 17 significant digits so values round-trip
exactly; the decimal separator is always '.' and rows end with a newline,
independent of locale.  Writers stage into a temporary file in the target
directory and rename, so interrupted runs never leave truncated output.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .engine import SolutionField
from .errors import ParameterError
from .experiments import ConvergenceReport, WaveformSnapshot
from .initial import DiracCombData, RegularData
from .medium import Medium, step_medium


def fmt(x) -> str:
    return format(float(x), ".17g")


def atomic_write_text(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_params(path, params: dict):
    """Plain key=value lines, one per parameter."""
    atomic_write_text(path, "".join(f"{k}={v}\n" for k, v in params.items()))


def write_medium_csv(path, breakpoints, values):
    """Step-medium breakpoints: header x,zeta; rows sorted by x; right-continuous.

    The first row's zeta is the left tail (its x only anchors the row order)
    and the last row's zeta is the right tail.
    """
    breakpoints = np.asarray(breakpoints, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if len(values) != len(breakpoints) + 1:
        raise ParameterError("need one more value than breakpoints")
    lead = breakpoints[0] - 1.0 if len(breakpoints) else 0.0
    xs = np.concatenate(([lead], breakpoints))
    lines = ["x,zeta\n"]
    lines += [f"{fmt(x)},{fmt(z)}\n" for x, z in zip(xs, values)]
    atomic_write_text(path, "".join(lines))


def read_medium_csv(path) -> Medium:
    """Read a breakpoint file back into a right-continuous step Medium."""
    rows = _read_rows(path, "x,zeta")
    xs = np.array([r[0] for r in rows])
    zs = np.array([r[1] for r in rows])
    if len(xs) < 1:
        raise ParameterError(f"{path}: no medium rows")
    if np.any(np.diff(xs) < 0):
        raise ParameterError(f"{path}: rows must be sorted by x")
    # value zs[i] holds from xs[i] rightward; zs[0] is also the left tail
    return step_medium(xs[1:], zs)


def write_regular_data_csv(path, xs, alpha_vals, beta_vals):
    lines = ["x,alpha,beta\n"]
    lines += [f"{fmt(x)},{fmt(a)},{fmt(b)}\n" for x, a, b in zip(xs, alpha_vals, beta_vals)]
    atomic_write_text(path, "".join(lines))


def write_comb_data_csv(path, comb: DiracCombData):
    offsets = sorted(set(comb.c) | set(comb.d))
    lines = ["offset,c,d\n"]
    lines += [
        f"{o},{fmt(comb.c.get(o, 0.0))},{fmt(comb.d.get(o, 0.0))}\n" for o in offsets
    ]
    atomic_write_text(path, "".join(lines))


def read_initial_csv(path):
    """Initial data file: x,alpha,beta (regular) or offset,c,d (comb).

    Regular samplers interpolate linearly between the given nodes and clamp
    to the end values outside them.
    """
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ParameterError(f"{path}: empty initial-data file")
    header = lines[0].strip()
    if header == "x,alpha,beta":
        rows = _read_rows(path, "x,alpha,beta")
        xs = np.array([r[0] for r in rows])
        av = np.array([r[1] for r in rows])
        bv = np.array([r[2] for r in rows])
        if np.any(np.diff(xs) <= 0):
            raise ParameterError(f"{path}: x must be strictly increasing")
        return RegularData(
            alpha=lambda x: np.interp(x, xs, av),
            beta=lambda x: np.interp(x, xs, bv),
        )
    if header == "offset,c,d":
        rows = _read_rows(path, "offset,c,d")
        c = {}
        d = {}
        for o, cv, dv in rows:
            if o != int(o):
                raise ParameterError(f"{path}: offset {o} is not an integer")
            if cv:
                c[int(o)] = cv
            if dv:
                d[int(o)] = dv
        return DiracCombData(c=c, d=d)
    raise ParameterError(f"{path}: unrecognized header {header!r}")


def _read_rows(path, expected_header: str):
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != expected_header:
        raise ParameterError(f"{path}: expected header {expected_header!r}")
    rows = []
    for line in lines[1:]:
        line = line.strip()
        if not line:
            continue
        rows.append(tuple(float(part) for part in line.split(",")))
    return rows


def write_solution_csv(path, field: SolutionField, layout: str = "long"):
    """Solution export: long rows k,t,j,x,u or a dense matrix, one time row per line."""
    if layout == "long":
        lines = ["k,t,j,x,u\n"]
        for row, k in zip(field.u, field.steps):
            t = k * field.temporal.delta
            for j, x in enumerate(field.grid.nodes):
                lines.append(f"{int(k)},{fmt(t)},{j + 1},{fmt(x)},{fmt(row[j])}\n")
        atomic_write_text(path, "".join(lines))
    elif layout == "dense":
        lines = [",".join(fmt(v) for v in row) + "\n" for row in field.u]
        atomic_write_text(path, "".join(lines))
    else:
        raise ParameterError(f"unknown solution layout {layout!r}; use 'long' or 'dense'")


def write_snapshot_csv(path, snap: WaveformSnapshot):
    lines = ["x,u,singular\n"]
    lines += [
        f"{fmt(x)},{fmt(u)},{int(s)}\n" for x, u, s in zip(snap.x, snap.u, snap.singular)
    ]
    atomic_write_text(path, "".join(lines))


def write_convergence_csv(path, report: ConvergenceReport):
    lines = ["n,E\n"]
    lines += [f"{n},{fmt(e)}\n" for n, e in report.entries]
    atomic_write_text(path, "".join(lines))


def write_timings_csv(path, rows):
    """Performance rows (n, seconds) or (n, seconds, backend)."""
    if rows and len(rows[0]) == 3:
        lines = ["n,seconds,backend\n"]
        lines += [f"{n},{fmt(s)},{b}\n" for n, s, b in rows]
    else:
        lines = ["n,seconds\n"]
        lines += [f"{n},{fmt(s)}\n" for n, s in rows]
    atomic_write_text(path, "".join(lines))


def write_ledger_csv(path, ledger_rows):
    lines = ["k,node,direction,amplitude\n"]
    lines += [f"{k},{node},{direction},{fmt(amp)}\n" for k, node, direction, amp in ledger_rows]
    atomic_write_text(path, "".join(lines))


def write_matrix_csv(path, matrix: np.ndarray):
    lines = [",".join(fmt(v) for v in row) + "\n" for row in np.asarray(matrix)]
    atomic_write_text(path, "".join(lines))

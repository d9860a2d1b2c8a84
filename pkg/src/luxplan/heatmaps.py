"""Export distinctness scores as point CSVs and plain-PGM rasters.

The PGM uses the candidate grid's lattice: one pixel per cell, top row at
max y. Cells that were excluded from the candidate list (e.g. inside a
wall) render as 0.
"""
from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .scene import Grid


def heatmap_csv(grid: Grid, values: np.ndarray) -> str:
    """Rows of x,y,score for each candidate point, in grid order."""
    values = np.asarray(values)
    if values.shape[0] != len(grid.points):
        raise ValueError("one value per grid point required")
    lines = ["x,y,score"]
    for pt, v in zip(grid.points, values):
        lines.append(f"{pt.position.x:.6g},{pt.position.y:.6g},{int(v)}")
    return "\n".join(lines) + "\n"


def heatmap_pgm(grid: Grid, values: np.ndarray, maxval: int) -> str:
    """Plain (P2) PGM of the score lattice; maxval is the score ceiling."""
    values = np.asarray(values)
    if values.shape[0] != len(grid.points):
        raise ValueError("one value per grid point required")
    if maxval < 1:
        raise ValueError("maxval must be at least 1")
    raster = np.zeros((grid.ny, grid.nx), dtype=int)
    for (ix, iy), v in zip(grid.cells, values):
        raster[iy, ix] = int(v)
    if raster.max(initial=0) > maxval:
        raise ValueError("score exceeds the declared maxval")
    buf = io.StringIO()
    buf.write(f"P2\n{grid.nx} {grid.ny}\n{maxval}\n")
    for iy in range(grid.ny - 1, -1, -1):  # image convention: top row first
        buf.write(" ".join(str(v) for v in raster[iy]))
        buf.write("\n")
    return buf.getvalue()


def write_heatmap_set(
    grid: Grid,
    per_state_scores: np.ndarray,
    n_configs: int,
    out_dir: str | Path,
) -> list[Path]:
    """Write heatmap_q<k>.{csv,pgm} per door state plus heatmap_total.{csv,pgm}.

    Per-state rasters scale to n_configs; the total scales to
    n_configs * n_door_states.
    """
    per_state_scores = np.asarray(per_state_scores)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    n_states = per_state_scores.shape[1]
    for q in range(n_states):
        scores = per_state_scores[:, q]
        csv_path = out / f"heatmap_q{q}.csv"
        pgm_path = out / f"heatmap_q{q}.pgm"
        csv_path.write_text(heatmap_csv(grid, scores), encoding="utf-8")
        pgm_path.write_text(heatmap_pgm(grid, scores, maxval=n_configs), encoding="utf-8")
        written += [csv_path, pgm_path]
    totals = per_state_scores.sum(axis=1)
    csv_path = out / "heatmap_total.csv"
    pgm_path = out / "heatmap_total.pgm"
    csv_path.write_text(heatmap_csv(grid, totals), encoding="utf-8")
    pgm_path.write_text(heatmap_pgm(grid, totals, maxval=n_configs * n_states), encoding="utf-8")
    written += [csv_path, pgm_path]
    return written

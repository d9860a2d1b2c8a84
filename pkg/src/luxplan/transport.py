"""Direct-illuminance transport from luminaires to candidate sensor points.

The model is 2.5D: occlusion is decided in plan view (walls and door leaves
are full-height opaque planes) while distances and incidence angles use the
true 3D positions. Only the direct path is modeled; there are no bounces.

A "light configuration" is an on/off assignment to all n luminaires,
identified by the integer whose bit i is luminaire i's state.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import segments_as_array, sightlines_blocked
from .scene import (
    CandidatePoint,
    DoorState,
    Luminaire,
    Scene,
    active_occluders,
    enumerate_door_states,
)


@dataclass(frozen=True)
class LightConfig:
    """On/off state of every luminaire; bit i of .index is bits[i]."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("config bits must be 0 or 1")

    @classmethod
    def from_index(cls, index: int, n: int) -> "LightConfig":
        if not 0 <= index < (1 << n):
            raise ValueError(f"config index {index} out of range for {n} luminaires")
        return cls(bits=tuple((index >> i) & 1 for i in range(n)))

    @property
    def index(self) -> int:
        return sum(bit << i for i, bit in enumerate(self.bits))

    @property
    def on_indices(self) -> tuple[int, ...]:
        return tuple(i for i, bit in enumerate(self.bits) if bit)


@dataclass(frozen=True)
class NoiseModel:
    """Sensor noise: 'none' or additive 'gaussian' with std sigma (lux)."""

    kind: str = "none"
    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("none", "gaussian"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


@dataclass
class ContributionVector:
    """Per-luminaire lux at one point under one door state."""

    values: np.ndarray
    point_index: int = 0
    door_state_index: int = 0

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValueError("contribution vector must be 1-D")

    @property
    def n(self) -> int:
        return int(self.values.shape[0])


@dataclass
class ContributionMatrix:
    """Contributions for every (candidate point, door state) pair.

    values has shape (n_points, n_door_states, n_luminaires).
    """

    values: np.ndarray
    points: tuple[CandidatePoint, ...] = ()
    door_states: tuple[DoorState, ...] = ()

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 3:
            raise ValueError("contribution matrix must have shape (points, door_states, luminaires)")

    @property
    def n_points(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_door_states(self) -> int:
        return int(self.values.shape[1])

    @property
    def n_luminaires(self) -> int:
        return int(self.values.shape[2])

    def vector_at(self, point_index: int, door_state_index: int) -> ContributionVector:
        return ContributionVector(
            values=self.values[point_index, door_state_index],
            point_index=point_index,
            door_state_index=door_state_index,
        )


def _illuminance_batch(
    lum: Luminaire,
    pts_xy: np.ndarray,
    heights: np.ndarray,
    normals: np.ndarray | None,
    segments: np.ndarray,
) -> np.ndarray:
    """Direct lux from one luminaire at many points (order-independent).

    normals is (P, 3) with NaN rows for omnidirectional points, or None when
    every point is omnidirectional.
    """
    lx, ly, lz = lum.position.x, lum.position.y, lum.mount_height
    dx = pts_xy[:, 0] - lx
    dy = pts_xy[:, 1] - ly
    dz = heights - lz
    d2 = dx * dx + dy * dy + dz * dz
    if np.any(d2 == 0.0):
        raise ValueError(f"candidate point coincides with luminaire {lum.label}")
    d = np.sqrt(d2)

    # Emission direction in the profile's frame: vertical angle from nadir,
    # horizontal angle in plan from +x.
    cos_down = np.clip((lz - heights) / d, -1.0, 1.0)
    v_deg = np.degrees(np.arccos(cos_down))
    h_deg = np.degrees(np.arctan2(dy, dx)) % 360.0
    rel = np.asarray(lum.profile.relative_intensity(v_deg, h_deg), dtype=float)

    if normals is None:
        cos_inc = 1.0
    else:
        ux, uy, uz = dx / d, dy / d, dz / d
        dot = -(ux * normals[:, 0] + uy * normals[:, 1] + uz * normals[:, 2])
        cos_inc = np.where(np.isnan(dot), 1.0, np.maximum(0.0, dot))

    lux = lum.intensity * rel * cos_inc / d2
    blocked = sightlines_blocked(np.array([lx, ly]), pts_xy, segments)
    return np.where(blocked, 0.0, lux)


def _candidate_arrays(points) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    pts_xy = np.array([(p.position.x, p.position.y) for p in points], dtype=float)
    heights = np.array([p.height for p in points], dtype=float)
    if all(p.normal is None for p in points):
        normals = None
    else:
        normals = np.array(
            [p.normal if p.normal is not None else (math.nan,) * 3 for p in points],
            dtype=float,
        )
    return pts_xy, heights, normals


def contribution(
    scene: Scene,
    door_state: DoorState,
    luminaire: Luminaire,
    point: CandidatePoint,
) -> float:
    """Lux that one luminaire alone delivers to one point."""
    segments = segments_as_array(active_occluders(scene, door_state))
    pts_xy, heights, normals = _candidate_arrays([point])
    return float(_illuminance_batch(luminaire, pts_xy, heights, normals, segments)[0])


def contribution_vector(
    scene: Scene,
    door_state: DoorState,
    point: CandidatePoint,
    point_index: int = 0,
    door_state_index: int = 0,
) -> ContributionVector:
    """Per-luminaire contributions at one point under one door state."""
    segments = segments_as_array(active_occluders(scene, door_state))
    pts_xy, heights, normals = _candidate_arrays([point])
    values = np.array([
        _illuminance_batch(lum, pts_xy, heights, normals, segments)[0]
        for lum in scene.luminaires
    ])
    return ContributionVector(values=values, point_index=point_index, door_state_index=door_state_index)


def sweep(
    scene: Scene,
    door_states: list[DoorState] | tuple[DoorState, ...] | None = None,
    candidates: list[CandidatePoint] | tuple[CandidatePoint, ...] | None = None,
) -> ContributionMatrix:
    """Contributions for every (candidate, door state, luminaire) triple.

    The computation is independent per candidate, so the result does not
    depend on evaluation order.
    """
    if door_states is None:
        door_states = enumerate_door_states(scene)
    if candidates is None:
        candidates = scene.candidates
    candidates = tuple(candidates)
    if not candidates:
        raise ValueError("sweep needs at least one candidate point")
    pts_xy, heights, normals = _candidate_arrays(candidates)
    values = np.zeros((len(candidates), len(door_states), scene.n_luminaires))
    for q, state in enumerate(door_states):
        segments = segments_as_array(active_occluders(scene, state))
        for i, lum in enumerate(scene.luminaires):
            values[:, q, i] = _illuminance_batch(lum, pts_xy, heights, normals, segments)
    return ContributionMatrix(values=values, points=candidates, door_states=tuple(door_states))


def reading(
    x: ContributionVector,
    config: LightConfig,
    noise: NoiseModel = NoiseModel(),
) -> float:
    """Sensor reading for a light configuration: sum of on-contributions.

    The noiseless sum uses exact (correctly rounded) accumulation. Gaussian
    noise is drawn from a stream keyed by (seed, point, door state, config),
    so repeated calls with the same inputs return the same value, and the
    reading is clamped at zero like a real sensor.
    """
    if len(config.bits) != x.n:
        raise ValueError(f"config has {len(config.bits)} bits, vector has {x.n}")
    base = math.fsum(x.values[i] for i in config.on_indices)
    if noise.kind == "gaussian" and noise.sigma > 0:
        key = (noise.seed, x.point_index, x.door_state_index, config.index)
        rng = np.random.default_rng(np.random.SeedSequence(key))
        base += noise.sigma * rng.standard_normal()
    return max(0.0, base)


def all_config_readings(x: ContributionVector | np.ndarray) -> np.ndarray:
    """Noiseless readings for every configuration, indexed by config index.

    Subset-sum doubling: entry p is the sum of contributions whose bit is
    set in p. Shape (2^n,).
    """
    values = x.values if isinstance(x, ContributionVector) else np.asarray(x, dtype=float)
    n = values.shape[0]
    sums = np.zeros(1 << n)
    for i in range(n):
        half = 1 << i
        sums[half:2 * half] = sums[:half] + values[i]
    return sums


CSV_SIG_DIGITS = 6


def _fmt_lux(v: float) -> str:
    return f"{v:.{CSV_SIG_DIGITS}g}"


def matrix_to_csv(matrix: ContributionMatrix) -> str:
    """CSV with one row per (point, door state): point_index,door_state,lum_*."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["point_index", "door_state"] + [f"lum_{i}" for i in range(matrix.n_luminaires)]
    writer.writerow(header)
    for p in range(matrix.n_points):
        for q in range(matrix.n_door_states):
            row = [str(p), str(q)] + [_fmt_lux(v) for v in matrix.values[p, q]]
            writer.writerow(row)
    return buf.getvalue()


def write_matrix_csv(matrix: ContributionMatrix, path: str | Path) -> None:
    Path(path).write_text(matrix_to_csv(matrix), encoding="utf-8")


def read_matrix_csv(path: str | Path) -> ContributionMatrix:
    """Inverse of write_matrix_csv (values carry CSV rounding)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["point_index", "door_state"]:
        raise ValueError(f"{path}: not a contribution matrix CSV")
    n = len(rows[0]) - 2
    data: dict[tuple[int, int], list[float]] = {}
    for row in rows[1:]:
        if not row:
            continue
        p, q = int(row[0]), int(row[1])
        data[(p, q)] = [float(v) for v in row[2:]]
    if not data:
        raise ValueError(f"{path}: empty contribution matrix")
    n_points = max(k[0] for k in data) + 1
    n_states = max(k[1] for k in data) + 1
    values = np.zeros((n_points, n_states, n))
    for (p, q), vals in data.items():
        values[p, q] = vals
    return ContributionMatrix(values=values)

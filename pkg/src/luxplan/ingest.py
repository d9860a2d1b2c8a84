"""Turn raw deployment logs into calibrated contributions and accuracy stats.

Inputs are two CSV logs: lux samples (t, location, lux) and light-switch
commands (t, bitmask). After each command the system waits out a settle
period, then averages a fixed window of samples to get one baseline per
(location, configuration) cell. Baselines for the all-off and each
single-light configuration calibrate the per-luminaire contributions; the
remaining baselines become perfect-sum queries whose answers are scored
against the commanded configuration.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .inference import PerfectSumQuery, infer_reading
from .transport import LightConfig

LUX_MIN = 0.0
LUX_MAX = 88_000.0  # sensor saturation ceiling

DEFAULT_SETTLE = 3.0  # seconds ignored after each command
DEFAULT_WINDOW = 3.0  # seconds averaged after the settle period

FLAG_OK = ""
FLAG_SHORT = "short_interval"
FLAG_NO_SAMPLES = "no_samples"
FLAG_CLAMPED = "clamped"


@dataclass(frozen=True)
class Sample:
    t: float
    location: str
    lux: float


@dataclass(frozen=True)
class Command:
    t: float
    config_index: int


@dataclass
class SampleLog:
    samples: list[Sample]

    def __post_init__(self) -> None:
        last_t: dict[str, float] = {}
        for s in self.samples:
            if not LUX_MIN <= s.lux <= LUX_MAX:
                raise ValueError(f"lux {s.lux} outside [{LUX_MIN}, {LUX_MAX}]")
            if s.location in last_t and s.t < last_t[s.location]:
                raise ValueError(f"timestamps for {s.location!r} must be nondecreasing")
            last_t[s.location] = s.t

    @property
    def locations(self) -> list[str]:
        seen: dict[str, None] = {}
        for s in self.samples:
            seen.setdefault(s.location, None)
        return list(seen)

    @property
    def end_time(self) -> float:
        return max((s.t for s in self.samples), default=-math.inf)


@dataclass
class CommandLog:
    commands: list[Command]

    def __post_init__(self) -> None:
        for a, b in zip(self.commands, self.commands[1:]):
            if b.t <= a.t:
                raise ValueError("command timestamps must be strictly increasing")
        for c in self.commands:
            if c.config_index < 0:
                raise ValueError("config bitmask must be nonnegative")


@dataclass
class BaselineCell:
    mean: float
    count: int
    stddev: float
    flag: str = FLAG_OK


@dataclass
class BaselineTable:
    """Baselines per (location, configuration index)."""

    cells: dict[tuple[str, int], BaselineCell]
    settle: float
    window: float

    def cell(self, location: str, config_index: int) -> BaselineCell | None:
        return self.cells.get((location, config_index))

    @property
    def locations(self) -> list[str]:
        seen: dict[str, None] = {}
        for loc, _ in self.cells:
            seen.setdefault(loc, None)
        return list(seen)

    def configs(self, location: str) -> list[int]:
        return sorted(p for loc, p in self.cells if loc == location)


@dataclass
class CalibratedContributions:
    location: str
    values: np.ndarray
    clamped: tuple[int, ...] = ()  # luminaire indices whose estimate went negative

    @property
    def n(self) -> int:
        return int(self.values.shape[0])


@dataclass
class LocationAccuracy:
    location: str
    accuracies: tuple[float, ...]
    minimum: float
    q1: float
    median: float
    mean: float
    q3: float
    maximum: float

    @property
    def n(self) -> int:
        return len(self.accuracies)


def _window_mean(values: list[float]) -> tuple[float, float]:
    """Mean and population stddev; a constant window averages exactly."""
    if min(values) == max(values):
        return values[0], 0.0
    mean = math.fsum(values) / len(values)
    var = math.fsum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(var)


def extract_baselines(
    samples: SampleLog,
    commands: CommandLog,
    settle: float = DEFAULT_SETTLE,
    window: float = DEFAULT_WINDOW,
) -> BaselineTable:
    """Average the post-settle window of each command interval.

    For command k at time t, samples in [t + settle, t + settle + window)
    from each location form the (location, config) cell. Intervals shorter
    than settle + window produce flagged cells rather than silent averages;
    the final interval ends at the last sample timestamp.
    """
    if settle < 0 or window <= 0:
        raise ValueError("settle must be >= 0 and window > 0")
    if not commands.commands:
        raise ValueError("command log is empty")
    per_loc: dict[str, list[Sample]] = {}
    for s in samples.samples:
        per_loc.setdefault(s.location, []).append(s)

    log_end = samples.end_time
    collected: dict[tuple[str, int], list[float]] = {}
    flags: dict[tuple[str, int], str] = {}
    cmds = commands.commands
    for k, cmd in enumerate(cmds):
        interval_end = cmds[k + 1].t if k + 1 < len(cmds) else log_end
        win_lo = cmd.t + settle
        win_hi = win_lo + window
        short = interval_end < win_hi
        for loc, loc_samples in per_loc.items():
            key = (loc, cmd.config_index)
            vals = [s.lux for s in loc_samples if win_lo <= s.t < min(win_hi, interval_end)]
            collected.setdefault(key, []).extend(vals)
            if short:
                flags[key] = FLAG_SHORT

    cells: dict[tuple[str, int], BaselineCell] = {}
    for key, vals in collected.items():
        if not vals:
            cells[key] = BaselineCell(mean=math.nan, count=0, stddev=math.nan, flag=FLAG_NO_SAMPLES)
            continue
        mean, std = _window_mean(vals)
        cells[key] = BaselineCell(mean=mean, count=len(vals), stddev=std, flag=flags.get(key, FLAG_OK))
    return BaselineTable(cells=cells, settle=settle, window=window)


def _infer_n(table: BaselineTable, location: str) -> int:
    configs = table.configs(location)
    if not configs:
        raise ValueError(f"no baselines for location {location!r}")
    return max(configs).bit_length() if max(configs) > 0 else 1


def calibrate_contributions(table: BaselineTable, location: str) -> CalibratedContributions:
    """Per-luminaire contribution at a location from its baselines.

    x_i = baseline(only light i) - baseline(all off), clamped at zero.
    Requires an unflagged all-off cell and one per single-light config.
    """
    n = _infer_n(table, location)
    off = table.cell(location, 0)
    if off is None or off.flag:
        raise ValueError(f"{location!r}: missing or flagged all-off baseline")
    values = np.zeros(n)
    clamped: list[int] = []
    for i in range(n):
        cell = table.cell(location, 1 << i)
        if cell is None or cell.flag:
            raise ValueError(f"{location!r}: missing or flagged baseline for light {i}")
        x = cell.mean - off.mean
        if x < 0:
            clamped.append(i)
            x = 0.0
        values[i] = x
    return CalibratedContributions(location=location, values=values, clamped=tuple(clamped))


def evaluate_locations(
    table: BaselineTable,
    calibrations: dict[str, CalibratedContributions],
    epsilon: float,
) -> list[LocationAccuracy]:
    """Score every unflagged baseline as a perfect-sum query.

    The query target is the cell mean minus the location's all-off mean
    (ambient light cancels out); truth is the commanded configuration.
    Summaries are ordered like the calibration dict.
    """
    out: list[LocationAccuracy] = []
    for location, calib in calibrations.items():
        off = table.cell(location, 0)
        if off is None or off.flag:
            raise ValueError(f"{location!r}: missing or flagged all-off baseline")
        accs: list[float] = []
        for p in table.configs(location):
            cell = table.cell(location, p)
            if cell is None or cell.flag:
                continue
            query = PerfectSumQuery(
                contributions=tuple(float(v) for v in calib.values),
                target=cell.mean - off.mean,
                epsilon=epsilon,
            )
            truth = LightConfig.from_index(p, calib.n)
            result = infer_reading(query, truth=truth)
            accs.append(result.accuracy if result.accuracy is not None else 0.0)
        if not accs:
            raise ValueError(f"{location!r}: no usable baselines to evaluate")
        arr = np.asarray(accs)
        q1, med, q3 = np.percentile(arr, [25, 50, 75])
        out.append(LocationAccuracy(
            location=location,
            accuracies=tuple(accs),
            minimum=float(arr.min()),
            q1=float(q1),
            median=float(med),
            mean=float(arr.mean()),
            q3=float(q3),
            maximum=float(arr.max()),
        ))
    return out


def read_samples_csv(path: str | Path) -> SampleLog:
    """Read a 't,location,lux' log."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["t", "location", "lux"]:
        raise ValueError(f"{path}: expected header 't,location,lux'")
    samples = [Sample(t=float(r[0]), location=r[1], lux=float(r[2])) for r in rows[1:] if r]
    return SampleLog(samples=samples)


def read_commands_csv(path: str | Path) -> CommandLog:
    """Read a 't,bitmask' log."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["t", "bitmask"]:
        raise ValueError(f"{path}: expected header 't,bitmask'")
    commands = [Command(t=float(r[0]), config_index=int(r[1])) for r in rows[1:] if r]
    return CommandLog(commands=commands)


def write_samples_csv(log: SampleLog, path: str | Path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "location", "lux"])
    for s in log.samples:
        w.writerow([repr(s.t), s.location, repr(s.lux)])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def write_commands_csv(log: CommandLog, path: str | Path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "bitmask"])
    for c in log.commands:
        w.writerow([repr(c.t), str(c.config_index)])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def accuracy_table_csv(summaries: list[LocationAccuracy]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["location", "min", "q1", "median", "mean", "q3", "max", "n"])
    for s in summaries:
        w.writerow([
            s.location,
            f"{s.minimum:.6g}", f"{s.q1:.6g}", f"{s.median:.6g}",
            f"{s.mean:.6g}", f"{s.q3:.6g}", f"{s.maximum:.6g}", str(s.n),
        ])
    return buf.getvalue()


def write_accuracy_csv(summaries: list[LocationAccuracy], path: str | Path) -> None:
    Path(path).write_text(accuracy_table_csv(summaries), encoding="utf-8")


def synthesize_logs(
    contributions_by_location: dict[str, np.ndarray],
    config_indices: list[int],
    dwell: float = 7.0,
    rate_hz: float = 4.7,
    sigma: float = 0.0,
    seed: int = 0,
    ambient: float = 0.0,
    settle: float = DEFAULT_SETTLE,
) -> tuple[SampleLog, CommandLog]:
    """Simulate a command sweep for experiments and round-trip tests.

    The noise term is sigma times a standard normal draw keyed by
    (seed, location, sample index) only, so sweeping sigma rescales one
    fixed noise realization instead of redrawing it.
    """
    del settle  # samples cover whole intervals; extraction applies the settle
    commands = [Command(t=k * dwell, config_index=p) for k, p in enumerate(config_indices)]
    total = dwell * (len(config_indices) + 1)
    n_samples = int(math.ceil(total * rate_hz))
    samples: list[Sample] = []
    for loc_index, (location, x) in enumerate(contributions_by_location.items()):
        x = np.asarray(x, dtype=float)
        rng = np.random.default_rng(np.random.SeedSequence((seed, loc_index)))
        z = rng.standard_normal(n_samples)
        for j in range(n_samples):
            t = j / rate_hz
            k = min(int(t // dwell), len(config_indices) - 1)
            config = LightConfig.from_index(config_indices[k], x.shape[0])
            base = ambient + math.fsum(x[i] for i in config.on_indices)
            lux = base + sigma * z[j] if sigma > 0 else base
            lux = min(max(lux, LUX_MIN), LUX_MAX)
            samples.append(Sample(t=t, location=location, lux=lux))
    return SampleLog(samples=samples), CommandLog(commands=commands)

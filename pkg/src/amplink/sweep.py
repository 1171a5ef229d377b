"""Grid sweeps over (length, segment count, photon number) and file output.

Each grid cell records the no-amplification and full-amplification SEs,
the amplification enhancement ratio AE (full/none, heterodyne), the
full-amplification energy baseline and, when requested, the minimized
amplifier energies under the exact and relaxed cost models together with
the percentage saved against the baseline.  Cells are evaluated
independently, so a worker pool may be used; rows are always assembled in
ascending (L, K, n) order and all float formatting is fixed, making the
emitted bytes a pure function of the spec.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

from .link import GainProfile, LinkConfig, propagate
from .optimize import (
    EnergyModel,
    maximize_shannon_se,
    minimize_energy,
    minimize_energy_homodyne,
    shannon_baseline_energy,
)
from .rates import holevo_se, shannon_se

PROBLEMS = ("segs", "egs", "regs", "homodyne-egs")

CSV_COLUMNS = (
    "L_km", "K", "n",
    "se_shannon_op", "se_shannon_noamp", "se_holevo_noamp", "AE",
    "E_sh", "E_egs", "E_regs",
    "savings_egs_pct", "savings_regs_pct",
    "egs_converged", "regs_converged",
)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep request: the grid axes, problems to solve, and output."""

    alpha: float
    L_values: tuple[float, ...]
    K_values: tuple[int, ...]
    n_values: tuple[float, ...]
    problems: tuple[str, ...] = ("egs", "regs")
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        for name, values in (("L_values", self.L_values), ("n_values", self.n_values)):
            if not values:
                raise ValueError(f"{name} must be non-empty")
            if any(v <= 0 for v in values):
                raise ValueError(f"{name} entries must be positive")
        if not self.K_values:
            raise ValueError("K_values must be non-empty")
        for k in self.K_values:
            if int(k) != k or k < 1:
                raise ValueError(f"K values must be integers >= 1, got {k}")
        for p in self.problems:
            if p not in PROBLEMS:
                raise ValueError(f"unknown problem {p!r}; choose from {PROBLEMS}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be 'csv' or 'json', got {self.format!r}")

    @classmethod
    def from_mapping(cls, data: Mapping) -> "SweepSpec":
        known = {"alpha", "L_values", "K_values", "n_values",
                 "problems", "output_path", "format"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown sweep spec keys: {sorted(unknown)}")
        if "alpha" not in data:
            raise ValueError("sweep spec needs an 'alpha' entry")
        kwargs = dict(
            alpha=float(data["alpha"]),
            L_values=tuple(float(v) for v in data.get("L_values", ())),
            K_values=tuple(int(v) for v in data.get("K_values", ())),
            n_values=tuple(float(v) for v in data.get("n_values", ())),
        )
        if "problems" in data:
            kwargs["problems"] = tuple(data["problems"])
        if "output_path" in data:
            kwargs["output_path"] = data["output_path"]
        if "format" in data:
            kwargs["format"] = data["format"]
        return cls(**kwargs)


@dataclass(frozen=True)
class SweepCell:
    """Computed quantities for one (L, K, n) grid point.

    Solver-dependent fields are None when the corresponding problem was
    not requested.  The homodyne triple is carried for API users but does
    not appear in the emitted tables, whose column set is fixed.
    """

    L_km: float
    K: int
    n: float
    se_shannon_op: float
    se_shannon_noamp: float
    se_holevo_noamp: float
    AE: float
    E_sh: float
    E_egs: float | None = None
    E_regs: float | None = None
    savings_egs_pct: float | None = None
    savings_regs_pct: float | None = None
    egs_converged: bool | None = None
    regs_converged: bool | None = None
    E_homodyne: float | None = None
    savings_homodyne_pct: float | None = None
    homodyne_converged: bool | None = None


def run_point(config: LinkConfig, problems: Sequence[str] = ("egs", "regs")) -> SweepCell:
    """Evaluate one grid cell; solver trouble shows up in flags, not raises."""
    for p in problems:
        if p not in PROBLEMS:
            raise ValueError(f"unknown problem {p!r}; choose from {PROBLEMS}")
    n = config.photons
    off = propagate(config, GainProfile.off(config.segments))
    se_noamp = shannon_se(off, n)
    se_holevo_noamp = holevo_se(off, n)
    se_op = maximize_shannon_se(config).se_achieved
    ae = se_op / se_noamp if se_noamp > 0 else math.inf
    baseline = shannon_baseline_energy(config)

    cell = dict(
        L_km=config.length_km, K=config.segments, n=n,
        se_shannon_op=se_op, se_shannon_noamp=se_noamp,
        se_holevo_noamp=se_holevo_noamp, AE=ae, E_sh=baseline,
    )
    if "egs" in problems:
        r = minimize_energy(config, model=EnergyModel.EXACT)
        cell.update(
            E_egs=r.energy_exact,
            savings_egs_pct=100.0 * r.savings_fraction,
            egs_converged=r.converged,
        )
    if "regs" in problems:
        r = minimize_energy(config, model=EnergyModel.RELAXED)
        cell.update(
            E_regs=r.energy,
            savings_regs_pct=100.0 * r.savings_fraction,
            regs_converged=r.converged,
        )
    if "homodyne-egs" in problems:
        r = minimize_energy_homodyne(config)
        cell.update(
            E_homodyne=r.energy_exact,
            savings_homodyne_pct=100.0 * r.savings_fraction,
            homodyne_converged=r.converged,
        )
    return SweepCell(**cell)


def _point_worker(args: tuple[float, float, int, float, tuple[str, ...]]) -> SweepCell:
    alpha, length, segments, n, problems = args
    return run_point(LinkConfig(alpha, length, segments, n), problems)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepCell]:
    """Evaluate the full grid, rows ordered by ascending (L, K, n)."""
    tasks = [
        (spec.alpha, length, segments, n, tuple(spec.problems))
        for length in sorted(spec.L_values)
        for segments in sorted(spec.K_values)
        for n in sorted(spec.n_values)
    ]
    if workers <= 1 or len(tasks) <= 1:
        return [_point_worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(tasks) // (8 * workers))
        return list(pool.map(_point_worker, tasks, chunksize=chunk))


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return format(value, ".17g")


def _cell_record(cell: SweepCell) -> dict:
    return {name: getattr(cell, name) for name in CSV_COLUMNS}


def render(cells: Sequence[SweepCell], format: str = "csv") -> str:
    """Serialize cells to the fixed-column CSV or its JSON mirror."""
    if format == "csv":
        lines = [",".join(CSV_COLUMNS)]
        for cell in cells:
            lines.append(",".join(_format_value(v) for v in _cell_record(cell).values()))
        return "\n".join(lines) + "\n"
    if format == "json":
        return json.dumps([_cell_record(c) for c in cells], indent=2) + "\n"
    raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


def emit(cells: Sequence[SweepCell], format: str, path: str) -> int:
    """Write the rendered table to ``path``; returns the bytes written."""
    payload = render(cells, format).encode("utf-8")
    try:
        with open(path, "wb") as handle:
            handle.write(payload)
    except OSError as exc:
        raise OSError(f"cannot write sweep output to {path!r}: {exc}") from exc
    return len(payload)


def find_ae_crossing(
    alpha: float,
    segments: int,
    n: float,
    ae_target: float = 2.0,
    length_lo: float = 1.0,
    length_hi: float = 2000.0,
    iters: int = 60,
) -> float:
    """Length at which full amplification enhances the heterodyne SE by
    exactly ``ae_target``; AE grows with length, so bisection applies."""

    def ae(length: float) -> float:
        config = LinkConfig(alpha, length, segments, n)
        off = propagate(config, GainProfile.off(segments))
        noamp = shannon_se(off, n)
        if noamp <= 0:
            return math.inf
        return maximize_shannon_se(config).se_achieved / noamp

    lo, hi = length_lo, length_hi
    if ae(lo) > ae_target:
        raise ValueError(f"AE already exceeds {ae_target} at {lo} km")
    if ae(hi) < ae_target:
        raise ValueError(f"AE stays below {ae_target} up to {hi} km")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if ae(mid) < ae_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

"""Result persistence: energy CSVs, run summaries, trajectory archives,
and gnuplot scripts.

Floats are written with ``repr``, the shortest round-trip form, so a rerun
of the same config and seed produces a bit-identical CSV and every parsed
value equals the original double exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .diagnostics import EnergyRecord
from .gevrey import GevreyParams
from .solver import Trajectory
from .spectral import GridSpec, SpectralField

__all__ = [
    "ENERGY_COLUMNS",
    "write_energy_csv",
    "read_energy_csv",
    "write_summary_json",
    "write_trajectory_npz",
    "read_trajectory_npz",
    "write_sweep_csv",
    "write_solve_plot_script",
    "write_sweep_plot_script",
]

ENERGY_COLUMNS = tuple(f.name for f in fields(EnergyRecord))


def _fmt(value: float) -> str:
    return repr(float(value))


def write_energy_csv(path: str | Path, records: Iterable[EnergyRecord]) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ENERGY_COLUMNS)
        for rec in records:
            writer.writerow(_fmt(getattr(rec, col)) for col in ENERGY_COLUMNS)


def read_energy_csv(path: str | Path) -> list[EnergyRecord]:
    """Parse an energy CSV back into validated records.

    The EnergyRecord constructor re-checks the decomposition identity, so
    a tampered row fails here rather than downstream.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != ENERGY_COLUMNS:
            raise ValueError(
                f"unexpected energy CSV header {header!r}; want {ENERGY_COLUMNS!r}"
            )
        return [
            EnergyRecord(**{col: float(cell) for col, cell in zip(header, row)})
            for row in reader
            if row
        ]


def write_summary_json(path: str | Path, summary: dict) -> None:
    path = Path(path)
    with path.open("w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def write_trajectory_npz(path: str | Path, traj: Trajectory) -> None:
    states = np.stack([state.coeffs for state in traj.states])
    grid = traj.states[0].grid
    np.savez_compressed(
        Path(path),
        times=traj.times,
        states=states,
        segment_boundaries=np.asarray(traj.segment_boundaries, dtype=np.int64),
        n_modes=grid.n_modes,
        half_length=grid.half_length,
        dealias_pad=grid.dealias_pad,
        sigma=traj.params.sigma,
        s=traj.params.s,
    )


def read_trajectory_npz(path: str | Path) -> Trajectory:
    with np.load(Path(path)) as data:
        grid = GridSpec(
            int(data["n_modes"]),
            float(data["half_length"]),
            float(data["dealias_pad"]),
        )
        states = tuple(SpectralField(row, grid) for row in data["states"])
        return Trajectory(
            times=data["times"],
            states=states,
            params=GevreyParams(float(data["sigma"]), float(data["s"])),
            segment_boundaries=tuple(int(i) for i in data["segment_boundaries"]),
        )


def write_sweep_csv(
    path: str | Path, header: Sequence[str], rows: Iterable[Sequence]
) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                _fmt(cell) if isinstance(cell, float) else str(cell) for cell in row
            )


def write_solve_plot_script(path: str | Path, csv_name: str) -> None:
    """Gnuplot script for a single run: weighted energy and fitted decay
    rate against time, using the energy CSV columns by name."""
    text = f"""\
set datafile separator ','
set key autotitle columnhead
set xlabel 't'
set terminal pngcairo size 900,600
set output 'energy.png'
set ylabel 'S(t)'
plot '{csv_name}' using 1:2 with lines title 'S'
set output 'radius.png'
set ylabel 'fitted decay rate'
plot '{csv_name}' using 1:8 with lines title 'sigma_est'
"""
    Path(path).write_text(text)


def write_sweep_plot_script(
    path: str | Path, csv_name: str, axis: str, logscale: bool
) -> None:
    """Gnuplot script for a sweep: final fitted decay rate and the
    smallness budget against the swept parameter."""
    scale = "set logscale xy\n" if logscale else ""
    text = f"""\
set datafile separator ','
set key autotitle columnhead
set xlabel '{axis}'
{scale}set terminal pngcairo size 900,600
set output 'sweep.png'
plot '{csv_name}' using 2:8 with linespoints title 'sigma_est', \\
     '{csv_name}' using 2:9 with linespoints title 'budget'
"""
    Path(path).write_text(text)

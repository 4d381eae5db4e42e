"""Result files for vise-sim.

This module provides the ReportWriter class, which renders sweep rows, tail
heaviness tables and game traces as CSV files. Reals are written with nine
significant digits, a decimal point and no thousands separators, so identical
inputs always give byte-identical files.
"""

from collections.abc import Sequence
from dataclasses import asdict
import logging
import math
from pathlib import Path
import re
from typing import ClassVar

import numpy as np
import pandas as pd

from vise_sim.models import DistributionSpec, StepRecord, SweepRow

from .tail_heaviness import log_tail_heaviness

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.9g"

TRACE_HEADER = (
    "# total_increment is the proposal sum; it reached the capitals only when accepted=1\n"
)


def _society_label(row: SweepRow) -> str:
    if row.window_pct is None:
        return row.strategy
    return f"{row.strategy}:{row.window_pct:g}"


def _file_stem(label: str) -> str:
    return re.sub(r"[^0-9A-Za-z.]+", "_", label).strip("_")


class ReportWriter:
    """Builds result tables and writes them as CSV."""

    SWEEP_COLUMNS: ClassVar[list[str]] = [
        "family",
        "k",
        "mu",
        "sigma",
        "n",
        "c0",
        "steps",
        "mode",
        "strategy",
        "window_pct",
        "replicates",
        "base_seed",
        "aci_mean",
        "aci_stderr",
        "survival_mean",
        "survival_stderr",
        "accept_share",
    ]
    PLOT_METRICS: ClassVar[dict[str, str]] = {
        "aci": "aci_mean",
        "survival": "survival_mean",
        "accept_share": "accept_share_mean",
    }
    TRACE_COLUMNS: ClassVar[list[str]] = [
        "step",
        "alive_count",
        "accepted",
        "total_increment",
        "min_capital",
        "max_capital",
    ]

    @staticmethod
    def _write(frame: pd.DataFrame, path: Path, header_comment: str = "") -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(header_comment)
            frame.to_csv(
                handle,
                index=False,
                float_format=FLOAT_FORMAT,
                na_rep="",
                lineterminator="\n",
            )
        logger.info(f"Wrote {len(frame)} rows to {path}")
        return path

    @classmethod
    def sweep_frame(cls, rows: Sequence[SweepRow]) -> pd.DataFrame:
        records = []
        for row in rows:
            record = asdict(row)
            record["family"] = str(row.family)
            record["mode"] = str(row.mode)
            record["accept_share"] = record.pop("accept_share_mean")
            records.append(record)
        frame = pd.DataFrame.from_records(records, columns=cls.SWEEP_COLUMNS)
        float_columns = ["k", "mu", "sigma", "c0", "window_pct", "aci_mean", "aci_stderr",
                         "survival_mean", "survival_stderr", "accept_share"]
        return frame.astype(dict.fromkeys(float_columns, "float64"))

    @classmethod
    def write_sweep_csv(cls, rows: Sequence[SweepRow], path: Path) -> Path:
        """Write one CSV line per sweep cell, in the given order."""
        return cls._write(cls.sweep_frame(rows), path)

    @classmethod
    def plot_frames(cls, rows: Sequence[SweepRow]) -> dict[str, pd.DataFrame]:
        """Wide tables (mu x society) per distribution and metric.

        Keys look like ``aci_normal`` or ``survival_sp_k_20``.
        """
        frames: dict[str, pd.DataFrame] = {}
        labels = list(dict.fromkeys(row.distribution_label for row in rows))
        for label in labels:
            selected = [row for row in rows if row.distribution_label == label]
            societies = list(dict.fromkeys(_society_label(row) for row in selected))
            long = pd.DataFrame(
                {
                    "mu": [row.mu for row in selected],
                    "society": [_society_label(row) for row in selected],
                    **{
                        metric: [getattr(row, attr) for row in selected]
                        for metric, attr in cls.PLOT_METRICS.items()
                    },
                }
            )
            for metric in cls.PLOT_METRICS:
                wide = long.pivot(index="mu", columns="society", values=metric)
                wide = wide.reindex(columns=societies).reset_index()
                wide.columns.name = None
                frames[f"{metric}_{_file_stem(label)}"] = wide
        return frames

    @classmethod
    def write_plot_data(cls, rows: Sequence[SweepRow], directory: Path) -> list[Path]:
        """Write the tables of :meth:`plot_frames` into ``directory``."""
        return [
            cls._write(frame, directory / f"{name}.csv")
            for name, frame in cls.plot_frames(rows).items()
        ]

    @staticmethod
    def tails_frame(z_grid: Sequence[float], specs: Sequence[DistributionSpec]) -> pd.DataFrame:
        """Column ``z`` followed by ``log10 w(z)`` for every distribution."""
        zs = np.asarray(z_grid, dtype=np.float64)
        columns: dict[str, object] = {"z": zs}
        for spec in specs:
            log_w = np.asarray(log_tail_heaviness(spec, zs), dtype=np.float64)
            columns[f"log10_w_{spec.label}"] = log_w / math.log(10.0)
        return pd.DataFrame(columns)

    @classmethod
    def write_tails(
        cls, z_grid: Sequence[float], specs: Sequence[DistributionSpec], path: Path
    ) -> Path:
        return cls._write(cls.tails_frame(z_grid, specs), path)

    @classmethod
    def trace_frame(cls, records: Sequence[StepRecord]) -> pd.DataFrame:
        frame = pd.DataFrame.from_records(
            [asdict(record) for record in records], columns=cls.TRACE_COLUMNS
        )
        return frame.astype({"accepted": "int64"})

    @classmethod
    def write_trace(cls, records: Sequence[StepRecord], path: Path) -> Path:
        """Write a per-step game trace preceded by a comment line."""
        return cls._write(cls.trace_frame(records), path, TRACE_HEADER)


__all__ = ["FLOAT_FORMAT", "TRACE_HEADER", "ReportWriter"]

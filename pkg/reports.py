# reports.py
"""Tabular plot data for runs, sweeps and convergence checks."""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from observables import signed_momentum_table
from utils.constants import (
    CONVERGENCE_CSV, CSV_FLOAT_FORMAT, MOMENTA_CSV, POSITIONS_CSV, SUMMARY_COLUMNS, SUMMARY_CSV
)
from utils.exceptions import ReportError

logger = logging.getLogger(__name__)


def positions_frame(records: list) -> pd.DataFrame:
    """Long table of position distributions: time_display, n, p_x."""
    n_sites = records[0].n_sites
    return pd.DataFrame({
        'time_display': np.repeat([r.time_display for r in records], n_sites),
        'n': np.tile(np.arange(n_sites), len(records)),
        # round-off negatives are clamped here only; records keep the raw values
        'p_x': np.clip(np.concatenate([r.position_dist for r in records]), 0.0, None),
    })


def momenta_frame(records: list) -> pd.DataFrame:
    """Long table of momentum distributions: time_display, k, signed_k, p_k."""
    n_sites = records[0].n_sites
    return pd.DataFrame({
        'time_display': np.repeat([r.time_display for r in records], n_sites),
        'k': np.tile(np.arange(n_sites), len(records)),
        'signed_k': np.tile(signed_momentum_table(n_sites).astype(int), len(records)),
        'p_k': np.clip(np.concatenate([r.momentum_dist for r in records]), 0.0, None),
    })


def summary_frame(records: list) -> pd.DataFrame:
    rows = []
    for record in records:
        row = {
            'time_display': record.time_display,
            'purity': record.purity,
            'expected_momentum': record.expected_momentum_signed,
            'momentum_variance': record.momentum_variance,
            'negative_momentum_fraction': record.negative_momentum_fraction,
        }
        for region_id, mass in enumerate(record.region_masses):
            row[f'region_mass_{region_id}'] = mass
        row['position_mean'] = record.position_mean
        row['position_variance'] = record.position_variance
        rows.append(row)
    frame = pd.DataFrame(rows)
    region_columns = [c for c in frame.columns if c.startswith('region_mass_')]
    return frame[SUMMARY_COLUMNS + region_columns + ['position_mean', 'position_variance']]


def write_table(frame: pd.DataFrame, path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
    except OSError as e:
        raise ReportError(f"could not write {path}: {e}") from e
    logger.info("wrote %s (%d rows)", path, len(frame))
    return path


def emit_csv(records: list, path) -> list:
    """
    Writes positions.csv, momenta.csv and summary.csv into directory `path`.

    Returns:
    - paths (list of Path): the three files written.
    """
    if not records:
        raise ReportError("no records to write")
    directory = Path(path)
    frames = {
        POSITIONS_CSV: positions_frame(records),
        MOMENTA_CSV: momenta_frame(records),
        SUMMARY_CSV: summary_frame(records),
    }
    return [write_table(frame, directory / name) for name, frame in frames.items()]


def emit_convergence(report, path) -> Path:
    frame = report.table.assign(wrap_weight=report.wrap_weight, reliable=report.reliable)
    return write_table(frame, Path(path) / CONVERGENCE_CSV)

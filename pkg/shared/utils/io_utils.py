"""
Result file I/O: CSV tables, sequence/channel dumps and run manifests
"""

import csv
import json
import os
from typing import Any, List, Sequence

import numpy as np

from ..config.constants import CSV_HEADERS, MANIFEST_FILE
from ..models.data_models import ChannelModel, ComplexSequence, ResultTable, RunManifest, RsiReport
from .error_handling import create_retry_decorator, ValidationError
from .logging_utils import get_logger

logger = get_logger(__name__)

write_retry = create_retry_decorator()


def _format_cell(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


@write_retry
def write_csv(path: str, header: Sequence[str], rows: List[Sequence[Any]]) -> str:
    """Write a header plus rows; cells are written with full float precision"""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', newline='', encoding='utf-8') as file:
        writer = csv.writer(file)
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_format_cell(value) for value in row])
    logger.debug(f"Wrote {len(rows)} rows to {path}", extra={'path': path, 'rows': len(rows)})
    return path


def read_csv(path: str) -> List[dict]:
    with open(path, 'r', newline='', encoding='utf-8') as file:
        return list(csv.DictReader(file))


def write_result_table(path: str, table: ResultTable) -> str:
    return write_csv(path, table.columns, table.to_records())


def write_reports(path: str, reports: List[RsiReport]) -> str:
    return write_csv(path, CSV_HEADERS['rsi_report'], [report.to_csv_row() for report in reports])


@write_retry
def write_sequence(path: str, sequence: ComplexSequence) -> str:
    """Two-column (re, im) CSV with a header row"""
    data = np.column_stack([sequence.samples.real, sequence.samples.imag])
    np.savetxt(path, data, delimiter=',', header=','.join(CSV_HEADERS['sequence']),
               comments='', fmt='%.17g')
    return path


def read_sequence(path: str) -> ComplexSequence:
    data = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    if data.shape[1] != 2:
        raise ValidationError(f"Sequence file {path} must have two columns.", 'path')
    return ComplexSequence(data[:, 0] + 1j * data[:, 1])


@write_retry
def write_channel(path: str, channel: ChannelModel) -> str:
    """Three-column (tap, re, im) CSV"""
    taps = np.arange(channel.taps.size)
    data = np.column_stack([taps, channel.taps.real, channel.taps.imag])
    np.savetxt(path, data, delimiter=',', header=','.join(CSV_HEADERS['channel']),
               comments='', fmt=['%d', '%.17g', '%.17g'])
    return path


def read_channel(path: str, asic_suppression_db: float = 0.0) -> ChannelModel:
    data = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    order = np.argsort(data[:, 0])
    data = data[order]
    if not np.array_equal(data[:, 0], np.arange(data.shape[0])):
        raise ValidationError(f"Channel file {path} must list taps 0..L_h exactly once.", 'path')
    return ChannelModel(data[:, 1] + 1j * data[:, 2], asic_suppression_db)


@write_retry
def write_manifest(output_dir: str, manifest: RunManifest) -> str:
    path = os.path.join(output_dir, MANIFEST_FILE)
    os.makedirs(output_dir, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(manifest.to_dict(), f, ensure_ascii=False, indent=2)
    logger.info(f"Saved manifest to {path}")
    return path


def read_manifest(output_dir: str) -> RunManifest:
    with open(os.path.join(output_dir, MANIFEST_FILE), 'r', encoding='utf-8') as f:
        return RunManifest.from_dict(json.load(f))

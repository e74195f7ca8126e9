"""Binary volume/field formats and deterministic CSV/JSON report writers.

Volume files ("PUWV1") and field files ("PUFD1") share one little-endian
layout:

    magic   5 bytes ASCII
    n_dims  uint32
    dims    n_dims * uint32      spatial samples per axis
    count   uint64               number of slices (1 for fields)
    data    count * prod(dims) complex128 values, slice-major,
            written as interleaved float64 re/im pairs

Volume files carry no node coordinates: the frequency grid comes from the run
config, and readers validate that its node count matches ``count``.  Field
files always hold space-domain data.
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np

from .errors import DataError
from .grids import FrequencyGrid, SpatialGrid
from .transform import CWTVolume, SampledField

MAGIC_VOLUME = b"PUWV1"
MAGIC_FIELD = b"PUFD1"


def _write_payload(path, magic: bytes, dims: tuple[int, ...], data: np.ndarray) -> None:
    count = data.shape[0]
    with open(path, "wb") as fh:
        fh.write(magic)
        fh.write(struct.pack("<I", len(dims)))
        fh.write(struct.pack(f"<{len(dims)}I", *dims))
        fh.write(struct.pack("<Q", count))
        fh.write(np.ascontiguousarray(data, dtype="<c16").tobytes())


def _read_payload(path, magic: bytes) -> tuple[tuple[int, ...], np.ndarray]:
    with open(path, "rb") as fh:
        got = fh.read(5)
        if got != magic:
            raise DataError(f"{path}: bad magic {got!r}, expected {magic!r}")
        (n_dims,) = struct.unpack("<I", fh.read(4))
        dims = struct.unpack(f"<{n_dims}I", fh.read(4 * n_dims))
        (count,) = struct.unpack("<Q", fh.read(8))
        n_values = count * int(np.prod(dims))
        raw = fh.read(16 * n_values)
        if len(raw) != 16 * n_values:
            raise DataError(f"{path}: truncated payload")
        data = np.frombuffer(raw, dtype="<c16").reshape((count, *dims)).copy()
    if not np.all(np.isfinite(data.view(np.float64))):
        raise DataError(f"{path}: non-finite values in payload")
    return dims, data


def write_volume(path, vol: CWTVolume) -> None:
    _write_payload(path, MAGIC_VOLUME, vol.spatial_grid.shape, vol.slices)


def read_volume(path, sg: SpatialGrid, fg: FrequencyGrid) -> CWTVolume:
    dims, data = _read_payload(path, MAGIC_VOLUME)
    if dims != sg.shape:
        raise DataError(f"{path}: spatial dims {dims} do not match the config grid {sg.shape}")
    if data.shape[0] != fg.n_nodes:
        raise DataError(
            f"{path}: {data.shape[0]} slices but the config frequency grid has {fg.n_nodes} nodes"
        )
    signs, scales = fg.node_table()
    return CWTVolume(
        spatial_grid=sg, freq_grid=fg, slices=data, node_signs=signs, node_scales=scales
    )


def write_field(path, field: SampledField) -> None:
    _write_payload(path, MAGIC_FIELD, field.grid.shape,
                   np.asarray(field.values, dtype=np.complex128)[None, ...])


def read_field(path, sg: SpatialGrid) -> SampledField:
    dims, data = _read_payload(path, MAGIC_FIELD)
    if dims != sg.shape:
        raise DataError(f"{path}: spatial dims {dims} do not match the config grid {sg.shape}")
    if data.shape[0] != 1:
        raise DataError(f"{path}: field files must hold exactly one slice")
    return SampledField(grid=sg, values=data[0], domain_tag="space")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, header: list[str], rows) -> None:
    """CSV with repr-formatted floats; byte-identical for identical inputs."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def series_csv_rows(series, s_grid) -> tuple[list[str], list[list]]:
    header = ["j", "a_j"] + [f"weighted_s_{s:g}" for s in s_grid]
    rows = []
    for j, a in zip(series.j_values, series.a):
        rows.append([int(j), float(a)] + [float(a * 2.0 ** (2.0 * s * j)) for s in s_grid])
    return header, rows


def write_series_csv(path, series, s_grid) -> None:
    header, rows = series_csv_rows(series, s_grid)
    write_csv(path, header, rows)


def write_json_report(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")

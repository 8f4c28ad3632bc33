"""File storage: atomic writes, CSV tables, JSON documents and metadata sidecars."""

import json
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Sequence, Tuple

import numpy as np

from src.config import Config
from src.exceptions import HashMismatch


@contextmanager
def atomic_write(path, mode: str = "w"):
    """Context manager for all-or-nothing file writes.

    Yields:
        file: Handle on a temporary file in the target directory, renamed over
        ``path`` on success and removed on error

    Example:
        with atomic_write("results/errors.csv") as handle:
            handle.write("model,E_S\\n")
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    kwargs = {} if "b" in mode else {"encoding": "utf-8", "newline": ""}
    try:
        with os.fdopen(fd, mode, **kwargs) as handle:
            yield handle
        os.replace(tmp, path)
    except Exception:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def meta_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def save_json(path, data: dict):
    """Write a JSON document with sorted keys."""
    with atomic_write(path) as handle:
        json.dump(data, handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_json(path) -> dict:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def write_meta(path, meta: dict):
    save_json(meta_path(path), meta)


def read_meta(path) -> dict:
    return load_json(meta_path(path))


def write_csv(path, columns: Sequence[str], rows: np.ndarray, meta: dict = None):
    """Numeric table with a header row, written at full round-trip precision."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.size and rows.shape[1] != len(columns):
        raise ValueError(f"{len(columns)} columns against rows of width {rows.shape[1]}")
    with atomic_write(path) as handle:
        np.savetxt(
            handle,
            rows.reshape(-1, len(columns)),
            delimiter=",",
            fmt=Config.CSV_FORMAT,
            header=",".join(columns),
            comments="",
        )
    if meta is not None:
        write_meta(path, meta)


def read_csv(path) -> Tuple[Tuple[str, ...], np.ndarray]:
    """Header and rows of a table written by write_csv."""
    with open(path, encoding="utf-8") as handle:
        columns = tuple(handle.readline().strip().split(","))
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return columns, rows.reshape(-1, len(columns))


def check_hash(expected: str, meta: dict, what: str):
    """Raise HashMismatch if an artifact was produced under another configuration."""
    found = meta.get("config_hash")
    if found != expected:
        raise HashMismatch(f"{what} has config hash {found}, expected {expected}")

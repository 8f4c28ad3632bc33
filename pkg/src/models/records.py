"""Tables exchanged between pipeline stages: sample sets, datasets and error reports."""

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from src.exceptions import Unphysical
from src.mechanics.tensors import VOIGT_INDICES, VOIGT_LABELS, MaterialKind
from src.models.base import atomic_write, read_csv, read_meta, write_csv, write_meta
from src.sampling.anneal import AnnealConfig, SampleSet
from src.sampling.physicality import physicality_check_batch

F_COLUMNS = tuple(f"F{i}{j}" for i in range(1, 4) for j in range(1, 4))
C_COLUMNS = tuple(f"C{label}" for label in VOIGT_LABELS)
S_COLUMNS = tuple(f"S{label}" for label in VOIGT_LABELS)
ANGLE_COLUMNS = ("phi_x", "phi_y", "phi_z")
ANGLE_DESCRIPTION = (
    "radians; phi_x, phi_y, phi_z turn the x-y, x-z and y-z planes, R = Rz Ry Rx "
    "and C = R^T diag(principal stretches squared) R"
)
ERROR_COLUMNS = ("model", "n_train", "E_S", "E_S_normalized", "seconds")


def invariant_columns(kind: MaterialKind) -> Tuple[str, ...]:
    return tuple(f"I{k}" for k in range(1, MaterialKind(kind).n_invariants + 1))


def coefficient_columns(kind: MaterialKind) -> Tuple[str, ...]:
    return tuple(f"c{k}" for k in range(1, MaterialKind(kind).n_generators + 1))


def _voigt_rows(c: np.ndarray) -> np.ndarray:
    idx = np.array(VOIGT_INDICES)
    return np.asarray(c)[:, idx[:, 0], idx[:, 1]]


def _from_voigt_rows(v: np.ndarray) -> np.ndarray:
    c = np.empty((len(v), 3, 3))
    for k, (i, j) in enumerate(VOIGT_INDICES):
        c[:, i, j] = v[:, k]
        c[:, j, i] = v[:, k]
    return c


def save_sample_set(path, samples: SampleSet, config_hash: str):
    """Write the design as I..., C11..C33, [phi_x..phi_z,] pinned plus a metadata sidecar."""
    kind = MaterialKind(samples.kind)
    columns = invariant_columns(kind) + C_COLUMNS
    blocks = [samples.invariants, _voigt_rows(samples.c)]
    if samples.angles is not None:
        columns += ANGLE_COLUMNS
        blocks.append(samples.angles)
    pinned = np.zeros((len(samples), 1))
    pinned[samples.pinned] = 1.0
    blocks.append(pinned)
    meta = dict(samples.to_meta(), config_hash=config_hash)
    if samples.angles is not None:
        meta["angle_columns"] = {"columns": list(ANGLE_COLUMNS), "description": ANGLE_DESCRIPTION}
    write_csv(path, columns + ("pinned",), np.hstack(blocks), meta)


def load_sample_set(path) -> SampleSet:
    """Read a stored design, re-checking that every free principal triple is physical.

    Raises:
        Unphysical: If an edited or corrupted row no longer describes a real deformation
    """
    columns, rows = read_csv(path)
    meta = read_meta(path)
    kind = MaterialKind(meta["kind"])
    n_inv = kind.n_invariants
    angles = None
    if ANGLE_COLUMNS[0] in columns:
        start = columns.index(ANGLE_COLUMNS[0])
        angles = rows[:, start : start + 3]
    pinned = int(np.argmax(rows[:, -1]))
    failed = ~physicality_check_batch(rows[:, :3])
    failed[pinned] = False
    if failed.any():
        raise Unphysical(f"{Path(path).name}: unphysical rows {np.flatnonzero(failed).tolist()}")
    extra = {k: v for k, v in meta.items() if k in ("iso_seed", "iso_anneal")}
    return SampleSet(
        kind=kind,
        invariants=rows[:, :n_inv],
        c=_from_voigt_rows(rows[:, n_inv : n_inv + 6]),
        pinned=pinned,
        seed=meta["seed"],
        config=AnnealConfig(**meta["anneal"]),
        angles=angles,
        a0=None if meta.get("a0") is None else np.array(meta["a0"]),
        meta=extra,
    )


@dataclass
class Dataset:
    """Training table of one mapping: inputs, outputs and bookkeeping columns.

    Attributes:
        input_columns: Names of the regression inputs
        output_columns: Names of the regression targets
        extra_columns: Names of columns carried along but not regressed on
    """

    input_columns: Tuple[str, ...]
    output_columns: Tuple[str, ...]
    inputs: np.ndarray
    outputs: np.ndarray
    extra_columns: Tuple[str, ...] = ()
    extra: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.inputs)

    def column(self, name: str) -> np.ndarray:
        for names, block in (
            (self.input_columns, self.inputs),
            (self.output_columns, self.outputs),
            (self.extra_columns, self.extra),
        ):
            if name in names:
                return block[:, names.index(name)]
        raise KeyError(name)

    def save(self, path):
        columns = self.input_columns + self.output_columns + self.extra_columns
        blocks = [self.inputs, self.outputs]
        if self.extra_columns:
            blocks.append(self.extra)
        meta = dict(self.meta)
        meta["inputs"] = list(self.input_columns)
        meta["outputs"] = list(self.output_columns)
        write_csv(path, columns, np.hstack(blocks), meta)

    @classmethod
    def load(cls, path) -> "Dataset":
        columns, rows = read_csv(path)
        meta = read_meta(path)
        n_in, n_out = len(meta["inputs"]), len(meta["outputs"])
        extra_columns = columns[n_in + n_out :]
        return cls(
            input_columns=columns[:n_in],
            output_columns=columns[n_in : n_in + n_out],
            inputs=rows[:, :n_in],
            outputs=rows[:, n_in : n_in + n_out],
            extra_columns=extra_columns,
            extra=rows[:, n_in + n_out :] if extra_columns else None,
            meta=meta,
        )


@dataclass
class ErrorRow:
    model: str
    n_train: int
    e_s: float
    e_s_normalized: float
    seconds: float

    def to_row(self) -> list:
        return [
            self.model,
            self.n_train,
            f"{self.e_s:.17g}",
            f"{self.e_s_normalized:.17g}",
            f"{self.seconds:.6f}",
        ]


@dataclass
class ErrorReport:
    """Stress errors of every evaluated model on one test set."""

    rows: List[ErrorRow] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, row: ErrorRow):
        self.rows.append(row)

    def by_model(self) -> dict:
        return {row.model: row for row in self.rows}

    def save(self, path):
        with atomic_write(path) as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(ERROR_COLUMNS)
            for row in self.rows:
                writer.writerow(row.to_row())
        write_meta(path, self.meta)

    @classmethod
    def load(cls, path) -> "ErrorReport":
        with open(Path(path), encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            rows = [
                ErrorRow(
                    model=r["model"],
                    n_train=int(r["n_train"]),
                    e_s=float(r["E_S"]),
                    e_s_normalized=float(r["E_S_normalized"]),
                    seconds=float(r["seconds"]),
                )
                for r in reader
            ]
        return cls(rows, read_meta(path))

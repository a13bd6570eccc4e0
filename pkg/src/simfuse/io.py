"""TSV matrix files and dataset manifests.

Matrix files carry entity ids: the first line is a header whose first cell is
ignored and whose remaining cells are column ids; every further line is a row
id followed by tab-separated values. A manifest maps roles to such files::

    # NR dataset
    interactions = nr_admat.tsv
    drug SIMCOMP = drug_simcomp.tsv
    target SW = target_sw.tsv

Relative paths resolve against the manifest's directory. Values are written in
the shortest decimal form that round-trips, so rewriting a file is byte-stable.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import Dataset, EntityKind, InteractionMatrix, SimfuseError, SimilarityView

log = logging.getLogger(__name__)


class ParseError(SimfuseError, ValueError):
    def __init__(self, path, line: int | None, column: int | None, msg: str):
        where = f"{path}"
        if line is not None:
            where += f":{line}"
        if column is not None:
            where += f":{column}"
        super().__init__(f"{where}: {msg}")
        self.path, self.line, self.column = str(path), line, column


class IdMismatch(SimfuseError, ValueError):
    def __init__(self, path, offending: Sequence[str], msg: str = "entity ids differ from the interaction file"):
        shown = ", ".join(list(offending)[:10])
        super().__init__(f"{path}: {msg}: {shown}")
        self.path, self.offending = str(path), list(offending)


def format_value(x: float) -> str:
    x = float(x)
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def read_matrix_tsv(path) -> tuple[list[str], list[str], np.ndarray]:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\r\n") for ln in fh]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError(path, 1, None, "empty file")
    col_ids = lines[0].split("\t")[1:]
    if len(set(col_ids)) != len(col_ids):
        raise ParseError(path, 1, None, "duplicate column ids")
    row_ids, rows = [], []
    for ln, text in enumerate(lines[1:], start=2):
        cells = text.split("\t")
        if len(cells) != len(col_ids) + 1:
            raise ParseError(path, ln, None, f"expected {len(col_ids) + 1} cells, found {len(cells)}")
        row = []
        for col, cell in enumerate(cells[1:], start=2):
            try:
                val = float(cell)
            except ValueError:
                raise ParseError(path, ln, col, f"cannot parse {cell!r} as a number") from None
            if not math.isfinite(val):
                raise ParseError(path, ln, col, f"non-finite value {cell!r}")
            row.append(val)
        row_ids.append(cells[0])
        rows.append(row)
    if len(set(row_ids)) != len(row_ids):
        raise ParseError(path, None, None, "duplicate row ids")
    return row_ids, col_ids, np.array(rows, dtype=float).reshape(len(row_ids), len(col_ids))


def write_matrix_tsv(path, row_ids, col_ids, values, corner: str = "") -> None:
    values = np.asarray(values)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join([corner, *map(str, col_ids)]) + "\n")
        for rid, row in zip(row_ids, values):
            fh.write("\t".join([str(rid), *(format_value(v) for v in row)]) + "\n")


def parse_manifest(path) -> tuple[Path, list[tuple[str, str, Path]]]:
    """Entries as (role, label, path) with role in {interactions, drug, target}."""
    path = Path(path)
    base = path.parent
    entries = []
    with open(path, encoding="utf-8") as fh:
        for ln, text in enumerate(fh, start=1):
            text = text.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ParseError(path, ln, None, "expected 'role [label] = path'")
            key, value = (s.strip() for s in text.split("=", 1))
            parts = key.split(None, 1)
            role = parts[0].lower()
            label = parts[1] if len(parts) > 1 else ""
            if role not in ("interactions", "drug", "target"):
                raise ParseError(path, ln, None, f"unknown role {role!r}")
            p = Path(value)
            entries.append((role, label or p.stem, p if p.is_absolute() else base / p))
    return path, entries


def _load_view(path: Path, ids: list[str], kind: EntityKind, label: str, notes: list[str]) -> SimilarityView:
    rows, cols, m = read_matrix_tsv(path)
    if rows != ids or cols != ids:
        bad = [a for a, b in zip(rows, ids) if a != b] + [a for a, b in zip(cols, ids) if a != b]
        bad += sorted(set(ids).symmetric_difference(rows))
        raise IdMismatch(path, bad or ids)
    low, high = int((m < 0).sum()), int((m > 1).sum())
    if low or high:
        notes.append(f"{kind.value} view {label}: clamped {low} value(s) below 0 and {high} above 1")
        m = np.clip(m, 0.0, 1.0)
    diag = int((np.diag(m) != 1.0).sum())
    if diag:
        notes.append(f"{kind.value} view {label}: set {diag} diagonal value(s) to 1")
        m = m.copy()
        np.fill_diagonal(m, 1.0)
    return SimilarityView(m, kind, label)


def load_dataset(manifest_path) -> Dataset:
    path, entries = parse_manifest(manifest_path)
    inter = [e for e in entries if e[0] == "interactions"]
    if len(inter) != 1:
        raise ParseError(path, None, None, "manifest needs exactly one interactions entry")
    drug_ids, target_ids, y = read_matrix_tsv(inter[0][2])
    nonbinary = np.argwhere((y != 0) & (y != 1))
    if nonbinary.size:
        i, j = nonbinary[0]
        raise ParseError(inter[0][2], int(i) + 2, int(j) + 2, f"non-binary interaction {y[i, j]!r}")
    notes: list[str] = []
    drug_views = [_load_view(p, drug_ids, EntityKind.DRUG, lbl, notes) for r, lbl, p in entries if r == "drug"]
    target_views = [_load_view(p, target_ids, EntityKind.TARGET, lbl, notes)
                    for r, lbl, p in entries if r == "target"]
    if not drug_views or not target_views:
        raise ParseError(path, None, None, "manifest needs at least one drug and one target view")
    for note in notes:
        log.warning(note)
    return Dataset(drug_views, target_views, InteractionMatrix(y, drug_ids, target_ids), notes)


def save_dataset(ds: Dataset, directory, name: str = "dataset") -> Path:
    """Write every matrix plus a manifest into ``directory``; returns the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    inter = ds.interactions
    lines = [f"interactions = {name}_interactions.tsv"]
    write_matrix_tsv(directory / f"{name}_interactions.tsv", inter.drug_ids, inter.target_ids, inter.matrix)
    for kind, views, ids in (("drug", ds.drug_views, inter.drug_ids), ("target", ds.target_views, inter.target_ids)):
        for h, v in enumerate(views):
            label = v.label or f"{kind}{h}"
            fname = f"{name}_{kind}_{h}.tsv"
            write_matrix_tsv(directory / fname, ids, ids, v.matrix)
            lines.append(f"{kind} {label} = {fname}")
    manifest = directory / f"{name}.manifest"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest


def write_weights_tsv(path, ids, labels, weights) -> None:
    write_matrix_tsv(path, ids, labels, getattr(weights, "matrix", weights))

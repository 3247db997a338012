"""Multi-view dataset ingestion and feature pre-filtering.

A dataset holds one or more named views describing the same samples.
Each view comes from a delimited text file (rows = samples, columns =
features, both with ID headers).  Samples are aligned across views by ID
intersection; samples missing from any view are dropped and reported.
Missing or non-numeric values are hard errors, never imputed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from .errors import DataError

log = logging.getLogger(__name__)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class View:
    """One data view: an N x d matrix with named features."""

    name: str
    feature_ids: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.ndim != 2:
            raise DataError(f"view '{self.name}': matrix must be 2-D")
        if len(self.feature_ids) != mat.shape[1]:
            raise DataError(
                f"view '{self.name}': {len(self.feature_ids)} feature ids for "
                f"{mat.shape[1]} columns"
            )
        if len(set(self.feature_ids)) != len(self.feature_ids):
            raise DataError(f"view '{self.name}': duplicate feature ids")
        if mat.shape[1] < 1:
            raise DataError(f"view '{self.name}': needs at least one feature")
        if not np.all(np.isfinite(mat)):
            raise DataError(f"view '{self.name}': non-finite entries")
        object.__setattr__(self, "matrix", _freeze(mat))

    @property
    def n_samples(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_features(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class MultiViewDataset:
    """Views sharing one ordered sample-ID list."""

    sample_ids: tuple[str, ...]
    views: tuple[View, ...]
    dropped_samples: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.sample_ids)
        if n < 2:
            raise DataError(f"need at least 2 samples, got {n}")
        if len(set(self.sample_ids)) != n:
            raise DataError("duplicate sample ids")
        if not self.views:
            raise DataError("dataset needs at least one view")
        for view in self.views:
            if view.n_samples != n:
                raise DataError(
                    f"view '{view.name}' has {view.n_samples} rows, expected {n}"
                )

    @property
    def n_samples(self) -> int:
        return len(self.sample_ids)

    def view(self, name: str) -> View:
        for v in self.views:
            if v.name == name:
                return v
        raise KeyError(name)


@dataclass(frozen=True)
class SurvivalData:
    """Right-censored survival records for a subset of samples."""

    sample_ids: tuple[str, ...]
    time: np.ndarray
    event: np.ndarray
    _index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.time, dtype=float)
        e = np.asarray(self.event, dtype=bool)
        if len(self.sample_ids) != t.shape[0] or t.shape != e.shape:
            raise DataError("survival arrays must match sample_ids length")
        if len(set(self.sample_ids)) != len(self.sample_ids):
            raise DataError("duplicate sample ids in survival data")
        if not np.all(np.isfinite(t)) or np.any(t < 0):
            raise DataError("survival times must be finite and >= 0")
        object.__setattr__(self, "time", _freeze(t))
        object.__setattr__(self, "event", _freeze(e))
        object.__setattr__(
            self, "_index", {s: i for i, s in enumerate(self.sample_ids)}
        )

    def for_samples(
        self, sample_ids: Sequence[str]
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(time, event, present-mask) aligned to `sample_ids`; absent rows masked out."""
        present = np.array([s in self._index for s in sample_ids], dtype=bool)
        rows = [self._index[s] for s in sample_ids if s in self._index]
        return self.time[rows], self.event[rows], present


def _read_table(path: Path | str, delimiter: str) -> pd.DataFrame:
    path = Path(path)
    try:
        df = pd.read_csv(
            path,
            sep=delimiter,
            index_col=0,
            header=0,
            dtype=str,
            keep_default_na=False,
            encoding="utf-8",
        )
    except OSError as exc:
        raise DataError(f"cannot read '{path}': {exc}") from exc
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as exc:
        raise DataError(f"cannot parse '{path}': {exc}") from exc
    return df


def _to_numeric(df: pd.DataFrame, path: Path | str) -> np.ndarray:
    values = np.empty(df.shape, dtype=float)
    for j, col in enumerate(df.columns):
        converted = pd.to_numeric(df[col], errors="coerce")
        bad = ~np.isfinite(converted.to_numpy())
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise DataError(
                f"non-numeric cell in '{path}' at row '{df.index[i]}', "
                f"column '{col}': {df.iloc[i, j]!r}"
            )
        values[:, j] = converted.to_numpy()
    return values


def load_views(
    paths: Sequence[str | Path],
    names: Sequence[str] | None = None,
    delimiter: str = "\t",
) -> MultiViewDataset:
    """Load one TSV per view and align samples across views.

    The sample order of the first file is kept, restricted to the IDs present
    in every file.  Dropped samples are recorded on the returned dataset and
    logged.  Duplicate IDs, non-numeric cells, and an empty sample
    intersection are errors.
    """
    if not paths:
        raise DataError("no view files given")
    if names is None:
        names = [Path(p).stem for p in paths]
    if len(names) != len(paths):
        raise DataError("need one view name per file")
    if len(set(names)) != len(names):
        raise DataError(f"duplicate view names: {names}")

    frames: list[tuple[str, pd.DataFrame, np.ndarray]] = []
    for name, path in zip(names, paths):
        df = _read_table(path, delimiter)
        if df.index.duplicated().any():
            dup = df.index[df.index.duplicated()][0]
            raise DataError(f"duplicate sample id '{dup}' in '{path}'")
        if df.columns.duplicated().any():
            dup = df.columns[df.columns.duplicated()][0]
            raise DataError(f"duplicate feature id '{dup}' in '{path}'")
        frames.append((name, df, _to_numeric(df, path)))

    common = set(frames[0][1].index)
    for _, df, _ in frames[1:]:
        common &= set(df.index)
    if not common:
        raise DataError("no samples shared by all views")

    first_order = [s for s in frames[0][1].index if s in common]
    all_ids = set()
    for _, df, _ in frames:
        all_ids.update(df.index)
    dropped = tuple(sorted(all_ids - common))
    if dropped:
        log.warning(
            "dropped %d sample(s) missing from at least one view: %s",
            len(dropped),
            ", ".join(dropped),
        )

    views = []
    for name, df, values in frames:
        pos = {s: i for i, s in enumerate(df.index)}
        rows = [pos[s] for s in first_order]
        views.append(
            View(
                name=name,
                feature_ids=tuple(str(c) for c in df.columns),
                matrix=values[rows],
            )
        )
    return MultiViewDataset(
        sample_ids=tuple(str(s) for s in first_order),
        views=tuple(views),
        dropped_samples=dropped,
    )


def load_survival(path: str | Path, delimiter: str = "\t") -> SurvivalData:
    """Load a survival TSV with columns sample_id, time_days, event (0/1)."""
    df = _read_table(path, delimiter)
    cols = {c.lower(): c for c in df.columns}
    if "time_days" not in cols or "event" not in cols:
        raise DataError(
            f"'{path}' must have columns sample_id, time_days, event; "
            f"got {list(df.columns)}"
        )
    if df.index.duplicated().any():
        dup = df.index[df.index.duplicated()][0]
        raise DataError(f"duplicate sample id '{dup}' in '{path}'")
    time = pd.to_numeric(df[cols["time_days"]], errors="coerce").to_numpy()
    event_raw = pd.to_numeric(df[cols["event"]], errors="coerce").to_numpy()
    if not np.all(np.isfinite(time)):
        i = int(np.flatnonzero(~np.isfinite(time))[0])
        raise DataError(f"bad time_days in '{path}' at row '{df.index[i]}'")
    if not np.all(np.isin(event_raw, (0.0, 1.0))):
        i = int(np.flatnonzero(~np.isin(event_raw, (0.0, 1.0)))[0])
        raise DataError(f"event must be 0 or 1 in '{path}' at row '{df.index[i]}'")
    return SurvivalData(
        sample_ids=tuple(str(s) for s in df.index),
        time=time,
        event=event_raw.astype(bool),
    )


def variance_filter(view: View, fraction: float = 0.10) -> View:
    """Keep the ceil(fraction * d) features of highest sample variance.

    Variance uses denominator N (population variance).  Ties are broken by
    ascending original column index; the surviving features keep their
    original order.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    d = view.n_features
    keep = math.ceil(fraction * d - 1e-12)  # guard float overshoot
    keep = max(1, min(d, keep))
    variances = view.matrix.var(axis=0, ddof=0)
    # stable sort on -variance: equal variances keep ascending column order
    ranked = np.argsort(-variances, kind="stable")[:keep]
    cols = np.sort(ranked)
    return View(
        name=view.name,
        feature_ids=tuple(view.feature_ids[i] for i in cols),
        matrix=view.matrix[:, cols],
    )

"""Tables behind the dashboard and the written report."""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Iterable

import numpy as np
import pandas as pd

from config.constants import LITERAL_BOUND, MAX_CUBE_DIM, MAX_HOM_SET
from cubench import cube, pca
from cubench.cube import Variant
from cubench.resizing import ResizingReport
from cubench.verdict import CheckLine, Status

SAMPLES_DIR = Path(__file__).resolve().parent.parent / "samples"
STATUS_ORDER = [s.value for s in Status]


def checks_frame(lines: Iterable[CheckLine], suite: str = "") -> pd.DataFrame:
    """One row per CHECK line; details flattened into a single column."""
    rows = [{
        "suite": suite or line.name.split(".")[0],
        "check": line.name,
        "status": line.status.value,
        "details": " ".join(f"{k}={v}" for k, v in line.details),
    } for line in lines]
    return pd.DataFrame(rows, columns=["suite", "check", "status", "details"])


def status_summary(frame: pd.DataFrame) -> pd.DataFrame:
    """Counts of PASS / FAIL / INCONCLUSIVE per suite, all three columns always present."""
    if frame.empty:
        return pd.DataFrame(columns=["suite"] + STATUS_ORDER)
    table = pd.crosstab(frame["suite"], frame["status"]).reindex(columns=STATUS_ORDER, fill_value=0)
    return table.reset_index().rename_axis(None, axis=1)


def hom_count_table(variant: Variant, max_dim: int = MAX_CUBE_DIM) -> pd.DataFrame:
    """|variant(m, n)| for m, n up to max_dim, with -1 where the count passes the enumeration cap."""
    dims = range(max_dim + 1)
    counts = np.array([[cube.hom_count(m, n, variant) for n in dims] for m in dims], dtype=object)
    frame = pd.DataFrame(counts, index=pd.Index(dims, name="m"), columns=pd.Index(dims, name="n"))
    return frame.map(lambda k: k if k <= MAX_HOM_SET else -1).astype(int)


def hom_listing(m: int, n: int, variant: Variant) -> pd.DataFrame:
    homs = cube.enumerate_homs(m, n, variant)
    return pd.DataFrame({
        "morphism": [cube.format_mor(h) for h in homs],
        "table": [" ".join(str(v) for v in h.table) for h in homs],
    })


def code_count_table(max_size: int, literal_bound: int = LITERAL_BOUND) -> pd.DataFrame:
    sizes = range(1, max_size + 1)
    return pd.DataFrame({
        "size": list(sizes),
        "codes up to size": [pca.count_codes(s, literal_bound) for s in sizes],
    })


def refutation_frame(report: ResizingReport) -> pd.DataFrame:
    """How the candidate sections were disposed of, by kind."""
    s = report.sections
    if s is None:
        return pd.DataFrame(columns=["kind", "candidates"])
    kinds = Counter(r.kind for r in s.refuted)
    kinds["survived"] = len(s.survivors)
    kinds["out of budget"] = len(s.inconclusive)
    frame = pd.DataFrame(sorted(kinds.items()), columns=["kind", "candidates"])
    return frame[frame["candidates"] > 0].reset_index(drop=True)


def orthogonality_frame(report: ResizingReport) -> pd.DataFrame:
    return pd.DataFrame([{
        "sample": o.name,
        "modest": o.modest,
        "status": o.result.status.value,
        "cells": len(o.cells),
        "undecided cells": len(o.undecided_cells),
        "natural": not o.unnatural,
        "constants": o.result.constants_bijective,
        "truncation": o.result.precomposition_bijective,
        "tracked": o.result.tracked,
        "refuted": o.result.refuted,
        "inconclusive": o.result.inconclusive,
    } for o in report.orthogonality])


def load_samples(directory: Path = SAMPLES_DIR) -> dict[str, str]:
    """Shipped problem files by name."""
    if not directory.is_dir():
        return {}
    return {path.name: path.read_text(encoding="utf-8")
            for path in sorted(directory.iterdir()) if path.suffix in (".prob", ".cubeset")}


def write_report(text: str, frame: pd.DataFrame, out: Path) -> tuple[Path, Path]:
    """The text report at out and the check table next to it as CSV."""
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    csv_path = out.with_suffix(".csv")
    frame.to_csv(csv_path, index=False)
    return out, csv_path

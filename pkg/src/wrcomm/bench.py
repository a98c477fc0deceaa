"""Wall-clock timings of the portrait kernels, per backend."""
from __future__ import annotations

import csv
import io
import time
from dataclasses import astuple, dataclass, fields
from typing import Callable, Iterable, Sequence

import numpy as np

from wrcomm import _backend
from wrcomm.groups import GroupId, GroupKind, sample_derived
from wrcomm.tree import inverse, multiply, random_element, signature

OPS = ("multiply", "inverse", "solve")


@dataclass(frozen=True)
class BenchRow:
    op: str
    depth: int
    backend: str
    reps: int
    median_s: float
    p95_s: float


CSV_COLUMNS = tuple(f.name for f in fields(BenchRow))


def _timings(fn: Callable[[], object], reps: int) -> np.ndarray:
    out = np.empty(reps)
    for i in range(reps):
        t0 = time.perf_counter()
        fn()
        out[i] = time.perf_counter() - t0
    return out


def _workload(op: str, depth: int, seed: int) -> Callable[[], object]:
    rng = np.random.default_rng(seed)
    sig = signature((2,) * depth)
    if op == "multiply":
        g, h = random_element(sig, rng), random_element(sig, rng)
        return lambda: multiply(g, h)
    if op == "inverse":
        g = random_element(sig, rng)
        return lambda: inverse(g)
    if op == "solve":
        from wrcomm.solver import solve_Bk_derived

        w = sample_derived(GroupId(GroupKind.DERIVED_FULL_WREATH, sig), rng)
        return lambda: solve_Bk_derived(w)
    raise ValueError(f"unknown op {op!r}; choose from {', '.join(OPS)}")


def run(depth: int, ops: Sequence[str] = OPS, reps: int = 5, seed: int = 0,
        backends: Iterable[str] | None = None) -> list[BenchRow]:
    """Median and 95th-percentile seconds for each (op, backend); ``reps=0`` yields no rows."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if reps < 0:
        raise ValueError("reps must be non-negative")
    rows: list[BenchRow] = []
    if reps == 0:
        return rows
    for name in backends or _backend.available():
        with _backend.use(name):
            for op in ops:
                t = _timings(_workload(op, depth, seed), reps)
                rows.append(BenchRow(op, depth, name, reps,
                                     float(np.median(t)), float(np.percentile(t, 95))))
    return rows


def to_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        op, depth, backend, reps, med, p95 = astuple(r)
        w.writerow([op, depth, backend, reps, f"{med:.6g}", f"{p95:.6g}"])
    return buf.getvalue()


def format_table(rows: Sequence[BenchRow]) -> str:
    head = f"{'op':<10}{'depth':>6}  {'backend':<8}{'reps':>6}{'median_s':>13}{'p95_s':>13}"
    lines = [head]
    for r in rows:
        lines.append(f"{r.op:<10}{r.depth:>6}  {r.backend:<8}{r.reps:>6}"
                     f"{r.median_s:>13.6f}{r.p95_s:>13.6f}")
    return "\n".join(lines)

"""Batch tabulation: knot tables in, per-knot slice-genus records out."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .cobordism import BoundViolation, SliceContext, slice_genus_bounds
from .diagram import GaussCodeError, GaussDiagram, emit_canonical_code, parse_gauss_code
from .graded import graded_genus

CSV_COLUMNS = ("name", "code", "n", "theta", "lower", "upper", "status", "method")

SLICE, NOT_SLICE, INTERVAL, UNKNOWN = "SLICE", "NOT-SLICE", "INTERVAL", "UNKNOWN"

# published totals per crossing number: knots, theta=0, slice, unknown
REFERENCE_COUNTS = {
    2: (1, 0, 0, 0),
    3: (7, 1, 0, 0),
    4: (108, 15, 13, 1),
    5: (2448, 59, 45, 11),
    6: (90235, 1476, 1237, 236),
}


class TableError(ValueError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line


def _records(path):
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t") if "\t" in line else line.split(None, 1)
        if len(parts) == 1:
            parts.append("")  # a bare name is the unknot
        if len(parts) != 2 or not parts[0].strip():
            raise TableError(path, lineno, "expected 'name<TAB>gauss_code'")
        yield lineno, parts[0].strip(), parts[1].strip()


def load_table(path) -> list[tuple[str, GaussDiagram]]:
    """Read a knot table, keeping file order.  Duplicate names are rejected."""
    out, seen = [], set()
    for lineno, name, code in _records(path):
        if name in seen:
            raise TableError(path, lineno, f"duplicate name {name!r}")
        seen.add(name)
        try:
            out.append((name, parse_gauss_code(code)))
        except GaussCodeError as exc:
            raise TableError(path, lineno, str(exc)) from None
    return out


def load_code_list(path) -> dict[str, str]:
    """Canonical code -> name, from a list file (names may repeat)."""
    out = {}
    for lineno, name, code in _records(path):
        try:
            out[emit_canonical_code(parse_gauss_code(code))] = name
        except GaussCodeError as exc:
            raise TableError(path, lineno, str(exc)) from None
    return out


@dataclass
class TabulateConfig:
    slice_lists: dict[int, str] = field(default_factory=dict)
    use_symmetry: bool = True
    use_sliceq: bool = True
    genus2: bool = False
    jobs: int = 1

    def context(self) -> SliceContext:
        listed = {}
        for _, path in sorted(self.slice_lists.items()):
            listed.update(load_code_list(path))
        return SliceContext(listed, use_sliceq=self.use_sliceq, use_symmetry=self.use_symmetry)


@dataclass
class KnotRecord:
    name: str
    code: str
    n: int
    theta: int | None
    lower: int | None
    upper: int | None
    status: str
    method: str

    def row(self) -> list[str]:
        return ["" if v is None else str(v) for v in (getattr(self, c) for c in CSV_COLUMNS)]


def status_of(lower: int, upper: int) -> str:
    if upper == 0:
        return SLICE
    if lower >= 1:
        return NOT_SLICE
    return INTERVAL


def knot_record(name: str, D: GaussDiagram, ctx: SliceContext, genus2: bool = False) -> KnotRecord:
    """One row; failures are recorded in the row instead of raised."""
    code = D.code()
    try:
        theta = graded_genus(D)
        b = slice_genus_bounds(D, ctx, genus2=genus2, theta=theta)
    except BoundViolation as exc:
        return KnotRecord(name, code, D.n, None, None, None, UNKNOWN, f"violation: {exc}")
    except (GaussCodeError, ValueError, ArithmeticError) as exc:
        return KnotRecord(name, code, D.n, None, None, None, UNKNOWN, f"error: {exc}")
    return KnotRecord(name, code, D.n, theta, b.lower, b.upper, status_of(b.lower, b.upper), b.method)


def _work(args):
    name, code, ctx, genus2 = args
    return knot_record(name, parse_gauss_code(code), ctx, genus2)


def tabulate(records, config: TabulateConfig | None = None) -> list[KnotRecord]:
    """Compute a record per knot.  Output order is input order for any job count."""
    config = config or TabulateConfig()
    ctx = config.context()
    tasks = [(name, D.code(), ctx, config.genus2) for name, D in records]
    if config.jobs <= 1 or len(tasks) < 2:
        return [_work(t) for t in tasks]
    chunk = max(1, len(tasks) // (config.jobs * 8))
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        return list(pool.map(_work, tasks, chunksize=chunk))


@dataclass
class SummaryCounts:
    total: int = 0
    theta_zero: int = 0
    slice: int = 0
    genus: dict[int, int] = field(default_factory=dict)
    unknown: int = 0
    errors: int = 0


def summarize(rows) -> dict[int, SummaryCounts]:
    """Counts per crossing number.  ``unknown`` counts open intervals."""
    out: dict[int, SummaryCounts] = {}
    for r in rows:
        s = out.setdefault(int(r.n), SummaryCounts())
        s.total += 1
        if r.theta is None or r.lower is None:
            s.errors += 1
            continue
        if int(r.theta) == 0:
            s.theta_zero += 1
        lo, up = int(r.lower), int(r.upper)
        if up == 0:
            s.slice += 1
        if lo == up:
            s.genus[lo] = s.genus.get(lo, 0) + 1
        else:
            s.unknown += 1
    return dict(sorted(out.items()))


def compare_with_reference(counts: dict[int, SummaryCounts]) -> list[str]:
    """Differences from the published per-crossing totals (empty if none)."""
    notes = []
    for n, s in counts.items():
        ref = REFERENCE_COUNTS.get(n)
        if ref is None:
            continue
        got = (s.total, s.theta_zero, s.slice, s.unknown)
        for label, a, b in zip(("knots", "theta=0", "slice", "unknown"), got, ref):
            if a != b:
                notes.append(f"n={n} {label}: computed {a}, reference {b}")
    return notes


# -- serialization ----------------------------------------------------------
def write_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.row())


def write_json(rows, fh) -> None:
    json.dump([asdict(r) for r in rows], fh, indent=1)
    fh.write("\n")


def rows_text(rows, fmt: str = "csv") -> str:
    buf = io.StringIO()
    (write_json if fmt == "json" else write_csv)(rows, buf)
    return buf.getvalue()


def read_csv(path) -> list[KnotRecord]:
    def num(v):
        return int(v) if v != "" else None

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: expected columns {','.join(CSV_COLUMNS)}")
        return [
            KnotRecord(d["name"], d["code"], int(d["n"]), num(d["theta"]), num(d["lower"]),
                       num(d["upper"]), d["status"], d["method"])
            for d in reader
        ]


def summary_rows(counts: dict[int, SummaryCounts]) -> list[dict]:
    out = []
    for n, s in counts.items():
        d = {"n": n, "total": s.total, "theta0": s.theta_zero, "slice": s.slice,
             "unknown": s.unknown, "errors": s.errors}
        for g in range(0, max([3, *s.genus]) + 1):
            d[f"gs{g}"] = s.genus.get(g, 0)
        out.append(d)
    return out

"""Result tables, their CSV/JSON forms, station event files and run manifests.

Every experiment result is flattened into a ``ResultTable`` with a fixed
column list.  Floats are written with ``repr`` so that reading a file back
gives the same numbers bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import StationData, UndefinedCorrelationError, correlations

SCHEMAS = {
    "two-beam": ("theta_deg", "counts", "clicks"),
    "mzi": ("phi_deg", "N0", "N1", "N2", "N3"),
    "delayed-choice": ("phi_deg", "R", "config", "N0", "N1", "N0_path0", "N0_path1"),
    "neutron-mzi": ("chi_deg", "NO", "NH"),
    "eprb": ("W_ns", "a1", "a2", "Cpp", "Cpm", "Cmp", "Cmm", "E1", "E2", "E", "S"),
    "neutron-bell": ("alpha_deg", "chi_deg", "N1", "N2", "N3", "N4", "E"),
    "station": ("x", "t", "theta"),
}


@dataclass
class ResultTable:
    columns: tuple
    rows: list = field(default_factory=list)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row {row!r} does not match columns {self.columns}")

    def __eq__(self, other):
        if not isinstance(other, ResultTable) or self.columns != other.columns or len(self.rows) != len(other.rows):
            return False
        return all(_same_row(a, b) for a, b in zip(self.rows, other.rows))

    def column(self, name: str) -> list:
        k = self.columns.index(name)
        return [row[k] for row in self.rows]


def _same_row(a, b) -> bool:
    for x, y in zip(a, b):
        if isinstance(x, float) and isinstance(y, float) and math.isnan(x) and math.isnan(y):
            continue
        if x != y or type(x) is not type(y):
            return False
    return True


def _plain(value):
    if isinstance(value, (np.integer, bool)):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_cell(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


# -- CSV / JSON -------------------------------------------------------------------


def table_to_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def table_from_csv(text: str) -> ResultTable:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV input") from None
    return ResultTable(tuple(header), [tuple(_parse_cell(c) for c in row) for row in reader if row])


def table_to_json(table: ResultTable) -> str:
    rows = [[None if isinstance(v, float) and math.isnan(v) else v for v in row] for row in table.rows]
    return json.dumps({"columns": list(table.columns), "rows": rows}, indent=1) + "\n"


def table_from_json(text: str) -> ResultTable:
    data = json.loads(text)
    rows = [tuple(math.nan if v is None else v for v in row) for row in data["rows"]]
    return ResultTable(tuple(data["columns"]), rows)


def write_table(table: ResultTable, path, fmt: str = "csv") -> None:
    text = table_to_csv(table) if fmt == "csv" else table_to_json(table)
    Path(path).write_text(text)


def read_table(path) -> ResultTable:
    text = Path(path).read_text()
    return table_from_json(text) if text.lstrip().startswith("{") else table_from_csv(text)


# -- experiment results -> tables ------------------------------------------------------


def two_beam_table(result) -> ResultTable:
    rows = [(float(t), int(a), int(c)) for t, a, c in zip(result.theta_deg, result.arrivals, result.clicks)]
    return ResultTable(SCHEMAS["two-beam"], rows)


def mzi_table(result) -> ResultTable:
    rows = [(float(p), *(int(n) for n in c)) for p, c in zip(result.phi_deg, result.counts)]
    return ResultTable(SCHEMAS["mzi"], rows)


def delayed_choice_table(result) -> ResultTable:
    rows = []
    for config in sorted(result.counts):
        for p, c in zip(result.phi_deg, result.counts[config]):
            rows.append((float(p), float(result.reflectivity), config, *(int(n) for n in c)))
    return ResultTable(SCHEMAS["delayed-choice"], rows)


def neutron_mzi_table(result) -> ResultTable:
    rows = [(float(c), int(o), int(h)) for c, o, h in zip(result.chi_deg, result.n_o, result.n_h)]
    return ResultTable(SCHEMAS["neutron-mzi"], rows)


def eprb_table(summaries) -> ResultTable:
    rows = []
    for s in summaries:
        for a1, a2 in s.table.settings():
            c = s.table.pair(a1, a2)
            try:
                e1, e2, e = correlations(c)
            except UndefinedCorrelationError:
                e1 = e2 = e = math.nan
            rows.append((s.window, a1, a2, int(c[0, 0]), int(c[0, 1]), int(c[1, 0]), int(c[1, 1]), e1, e2, e, float(s.S)))
    return ResultTable(SCHEMAS["eprb"], rows)


def neutron_bell_table(result) -> ResultTable:
    corr = result.correlation
    rows = []
    for i, a in enumerate(result.alpha_deg):
        for j, c in enumerate(result.chi_deg):
            rows.append((float(a), float(c), *(int(n) for n in result.counts[i, j]), float(corr[i, j])))
    return ResultTable(SCHEMAS["neutron-bell"], rows)


# -- station event files -------------------------------------------------------------


def station_table(data: StationData) -> ResultTable:
    rows = [(int(x), float(t), float(th)) for x, t, th in zip(data.x, data.t, data.theta)]
    return ResultTable(SCHEMAS["station"], rows)


def station_from_table(table: ResultTable) -> StationData:
    if table.columns != SCHEMAS["station"]:
        raise ValueError(f"station files need columns {SCHEMAS['station']}, got {table.columns}")
    x = np.array(table.column("x"), dtype=np.int64)
    t = np.array(table.column("t"), dtype=float)
    theta = np.array(table.column("theta"), dtype=float)
    return StationData(x, t, theta)


# -- manifest ---------------------------------------------------------------------


@dataclass
class RunManifest:
    experiment: str
    config_digest: str
    seed: int
    version: str = __version__
    outputs: list = field(default_factory=list)
    duration_s: float = 0.0
    config: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({k: _jsonable(v) for k, v in asdict(self).items()}, indent=1, sort_keys=True) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_json())


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    value = _plain(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class Stopwatch:
    def __enter__(self):
        self.start = time.perf_counter()
        self.elapsed = 0.0
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False

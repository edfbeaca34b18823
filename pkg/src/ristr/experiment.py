"""Single-point evaluation, parameter sweeps and the tap-count reproduction table."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Sequence

from .channel import PathSet, build_path_set
from .config import SweepSpec
from .errors import ReplicationMismatch
from .geometry import SPEED_OF_LIGHT, Position3, RisTopology, SystemConfig, build_topology
from .pbf import PbfResult, pbf_best_snr
from .tapped import TappedChannel, bin_paths
from .time_reversal import LinkResult, evaluate_link

CSV_COLUMNS = ("M", "N", "Q", "W_hz", "L", "tau_o_s", "snr_tr_db", "snr_tr_linear",
               "sinr_tr_db", "snr_pbf_best_db", "pbf_best_tap", "p_u_w", "p_isi_w")


def to_db(x: float) -> float:
    return 10.0 * math.log10(x) if x > 0 else -math.inf


@dataclass(frozen=True)
class ResultRow:
    M: int
    N: int
    Q: int
    W_hz: float
    L: int
    tau_o_s: float
    snr_tr_linear: float
    sinr_tr_linear: float
    snr_pbf_best_linear: float
    pbf_best_tap: int
    p_u_w: float
    p_isi_w: float

    def __post_init__(self) -> None:
        if self.Q != self.M * self.N:
            raise ValueError(f"Q={self.Q} does not equal M*N={self.M * self.N}")
        if self.L < 1:
            raise ValueError(f"tap count must be at least 1, got {self.L}")

    @property
    def snr_tr_db(self) -> float:
        return to_db(self.snr_tr_linear)

    @property
    def sinr_tr_db(self) -> float:
        return to_db(self.sinr_tr_linear)

    @property
    def snr_pbf_best_db(self) -> float:
        return to_db(self.snr_pbf_best_linear)

    def as_dict(self) -> dict:
        return {c: getattr(self, c) for c in CSV_COLUMNS}


@dataclass(frozen=True)
class Evaluation:
    """Every intermediate of one pipeline run, for callers that want more than the row."""

    config: SystemConfig
    topology: RisTopology
    paths: PathSet
    channel: TappedChannel
    link: LinkResult
    pbf: PbfResult

    def row(self) -> ResultRow:
        t = self.topology
        return ResultRow(t.rows, t.cols, t.size, self.config.bandwidth_hz, self.channel.num_taps,
                         self.channel.tap_origin, self.link.snr_bound, self.link.sinr,
                         self.pbf.best_snr, self.pbf.best_tap,
                         self.link.useful_power, self.link.isi_power)


def evaluate(config: SystemConfig, topology: RisTopology) -> Evaluation:
    paths = build_path_set(config, topology)
    channel = bin_paths(paths, config.bandwidth_hz)
    link = evaluate_link(config.power_w, channel, config.noise_var)
    pbf = pbf_best_snr(config.power_w, channel, config.tx, config.rx, config.noise_var)
    return Evaluation(config, topology, paths, channel, link, pbf)


def run_single(config: SystemConfig, topology: RisTopology) -> ResultRow:
    return evaluate(config, topology).row()


def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


class CsvSink:
    """Writes result rows with the fixed header, flushing after each row."""

    def __init__(self, stream: IO[str]):
        self.stream = stream
        self._writer = csv.writer(stream, lineterminator="\n")
        self._writer.writerow(CSV_COLUMNS)

    def write(self, row: ResultRow) -> None:
        self._writer.writerow([_fmt(v) for v in row.as_dict().values()])
        self.stream.flush()


def rows_to_csv(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    sink = CsvSink(buf)
    for r in rows:
        sink.write(r)
    return buf.getvalue()


def format_table(rows: Sequence[ResultRow], units: str = "both") -> str:
    """Fixed-width human-readable table."""
    cols: list[tuple[str, str]] = [("M", "M"), ("N", "N"), ("Q", "Q"), ("W [GHz]", "W"), ("L", "L")]
    if units in ("db", "both"):
        cols += [("SNR_TR [dB]", "snr_tr_db"), ("SINR_TR [dB]", "sinr_tr_db"),
                 ("SNR_PBF [dB]", "snr_pbf_best_db")]
    if units in ("linear", "both"):
        cols += [("SNR_TR", "snr_tr_linear"), ("SINR_TR", "sinr_tr_linear"),
                 ("SNR_PBF", "snr_pbf_best_linear")]
    cols.append(("best tap", "pbf_best_tap"))

    def cell(r: ResultRow, attr: str) -> str:
        if attr == "W":
            return f"{r.W_hz / 1e9:g}"
        v = getattr(r, attr)
        if isinstance(v, int):
            return str(v)
        return f"{v:.4f}" if attr.endswith("_db") else f"{v:.6g}"

    body = [[cell(r, a) for _, a in cols] for r in rows]
    widths = [max([len(h)] + [len(b[i]) for b in body]) for i, (h, _) in enumerate(cols)]
    lines = ["  ".join(h.rjust(w) for (h, _), w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body]
    return "\n".join(lines) + "\n"


def iter_sweep(spec: SweepSpec, workers: int = 1) -> Iterator[ResultRow]:
    """Yield rows in sweep order; points may be evaluated concurrently."""
    points = spec.points()
    if workers <= 1:
        for cfg, topo in points:
            yield run_single(cfg, topo)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(lambda pt: run_single(*pt), points)


def run_sweep(spec: SweepSpec, out: IO[str] | None = None, workers: int = 1) -> list[ResultRow]:
    """Evaluate every sweep point.

    With ``out`` set, CSV rows are streamed as they complete, so rows finished
    before a failure are already written when the exception propagates.
    """
    sink = CsvSink(out) if out is not None else None
    rows = []
    for row in iter_sweep(spec, workers):
        rows.append(row)
        if sink is not None:
            sink.write(row)
    return rows


# Reference tap counts for Q = 1225 at 10 GHz, p_tx = (2, 2, 0), p_rx = (2, -2, 0).
TABLE1 = {
    (35, 35, 2e9): 1, (7, 175, 2e9): 3, (5, 245, 2e9): 6, (1, 1225, 2e9): 89,
    (35, 35, 4e9): 1, (7, 175, 4e9): 5, (5, 245, 4e9): 10, (1, 1225, 4e9): 176,
}


def table1_config(speed_of_light: float = SPEED_OF_LIGHT, bandwidth_hz: float = 2e9) -> SystemConfig:
    return SystemConfig(10e9, bandwidth_hz, 1.0, 1.0, Position3(2, 2, 0), Position3(2, -2, 0),
                        speed_of_light=speed_of_light)


@dataclass(frozen=True)
class Table1Cell:
    rows: int
    cols: int
    bandwidth_hz: float
    computed: int
    expected: int

    @property
    def match(self) -> bool:
        return self.computed == self.expected


@dataclass(frozen=True)
class Table1Report:
    cells: tuple[Table1Cell, ...]

    @property
    def mismatches(self) -> list[Table1Cell]:
        return [c for c in self.cells if not c.match]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def check(self) -> "Table1Report":
        if not self.ok:
            raise ReplicationMismatch(self.mismatches)
        return self

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["M", "N", "W_hz", "L_computed", "L_reference", "match"])
        for c in self.cells:
            w.writerow([c.rows, c.cols, _fmt(c.bandwidth_hz), c.computed, c.expected, int(c.match)])
        return buf.getvalue()

    def to_table(self) -> str:
        lines = [f"{'M x N':>10}  {'W [GHz]':>7}  {'L':>4}  {'ref':>4}  status"]
        for c in self.cells:
            status = "ok" if c.match else "MISMATCH"
            lines.append(f"{f'{c.rows} x {c.cols}':>10}  {c.bandwidth_hz / 1e9:>7g}  "
                         f"{c.computed:>4}  {c.expected:>4}  {status}")
        return "\n".join(lines) + "\n"


def reproduce_table1(bandwidths: Sequence[float] = (2e9, 4e9), spacing: float = 0.015,
                     speed_of_light: float = SPEED_OF_LIGHT) -> Table1Report:
    """Recompute the reference tap counts. Call ``.check()`` to raise on mismatch."""
    cells = []
    for w in bandwidths:
        cfg = table1_config(speed_of_light, w)
        for (m, n, w_ref), expected in TABLE1.items():
            if w_ref != w:
                continue
            paths = build_path_set(cfg, build_topology(m, n, spacing))
            cells.append(Table1Cell(m, n, w, bin_paths(paths, w).num_taps, expected))
    if not cells:
        raise ValueError(f"no reference cells for bandwidths {list(bandwidths)}")
    return Table1Report(tuple(cells))


__all__ = [
    "CSV_COLUMNS", "ResultRow", "Evaluation", "evaluate", "run_single", "run_sweep", "iter_sweep",
    "rows_to_csv", "format_table", "reproduce_table1", "Table1Report", "Table1Cell", "TABLE1",
    "CsvSink", "to_db",
]

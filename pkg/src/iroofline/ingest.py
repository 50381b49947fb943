"""Parsers for profiler exports and benchmark logs.

Three text formats come in:

* rocprof-style CSV: one row per kernel dispatch, counters as columns
  (``FETCH_SIZE``/``WRITE_SIZE`` in kilobytes, ``SQ_INSTS_VALU``/
  ``SQ_INSTS_SALU`` raw counts, duration via ``DurationNs`` or the
  ``BeginNs``/``EndNs`` pair).
* nvprof metric-mode CSV: one row per kernel x metric, ``==``-prefixed
  preamble lines, values in the Avg column.  Rows are pivoted so each
  kernel yields a single record.
* BabelStream run logs: rows starting with Copy/Mul/Add/Triad/Dot whose
  second column is a bandwidth in MBytes/sec.

Everything normalizes into :class:`KernelProfile` (bytes, seconds, raw
instruction counts) or :class:`BandwidthMeasurement` (GB/s).  There is
also a canonical JSON profile format accepted anywhere a CSV is, which
lets you enter published counter values directly (see
:func:`load_profiles_json`).

All parsers are pure functions over the input text; parse as many files
concurrently as you like.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, fields
from decimal import Decimal, InvalidOperation
from enum import Enum

from .errors import (
    EmptyInput,
    InvalidProfile,
    MalformedRow,
    MissingColumn,
    MissingDuration,
    NoFunctionsFound,
    NoInstructionMetric,
    NonPositiveRuntime,
)
from .hardware import TRANSACTION_BYTES, Vendor


class SourceFormat(Enum):
    ROCPROF_CSV = "rocprof"
    NVPROF_CSV = "nvprof"


class StreamFunction(Enum):
    COPY = "Copy"
    MUL = "Mul"
    ADD = "Add"
    TRIAD = "Triad"
    DOT = "Dot"


@dataclass(frozen=True)
class RawKernelRecord:
    """One kernel's raw counter strings, exactly as exported."""

    kernel_name: str
    metric_values: dict[str, str]
    source_format: SourceFormat


@dataclass(frozen=True)
class KernelProfile:
    """Normalized per-kernel measurement.

    AMD profiles carry ``valu_instructions``/``salu_instructions``;
    NVIDIA profiles carry ``executed_instructions`` and optionally a
    ``transactions`` count (device-memory transactions).  Bytes are plain
    bytes, runtime is seconds.
    """

    kernel_name: str
    vendor: Vendor
    runtime_s: float
    bytes_read: float = 0.0
    bytes_written: float = 0.0
    valu_instructions: int | None = None
    salu_instructions: int | None = None
    executed_instructions: int | None = None
    transactions: int | None = None

    def __post_init__(self):
        if not self.kernel_name:
            raise ValueError("kernel_name must be non-empty")
        if not self.runtime_s > 0:
            raise ValueError("runtime_s must be positive")
        if self.bytes_read < 0 or self.bytes_written < 0:
            raise ValueError("byte totals must be non-negative")
        for f in ("valu_instructions", "salu_instructions",
                  "executed_instructions", "transactions"):
            v = getattr(self, f)
            if v is not None and (not isinstance(v, int) or v < 0):
                raise ValueError(f"{f} must be a non-negative integer")


@dataclass(frozen=True)
class BandwidthMeasurement:
    """One bandwidth figure from a benchmark log, with provenance."""

    function: StreamFunction
    value_gbps: float
    source_line: str

    def __post_init__(self):
        if not self.value_gbps > 0:
            raise ValueError("value_gbps must be positive")


ROCPROF_METRICS = ("FETCH_SIZE", "WRITE_SIZE", "SQ_INSTS_VALU", "SQ_INSTS_SALU")

NVPROF_METRICS = ("inst_executed", "dram_read_transactions",
                  "dram_write_transactions", "gld_transactions",
                  "gst_transactions", "duration")


def _as_text(data: str | bytes) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _clean_number(cell: str) -> str:
    # Profiler exports sometimes carry thousands separators and padding.
    return cell.replace(",", "").strip()


def _parse_real(cell: str, what: str, kernel: str) -> float:
    try:
        return float(_clean_number(cell))
    except ValueError:
        raise InvalidProfile(
            f"kernel {kernel!r}: cannot parse {what} value {cell!r}") from None


def _parse_count(cell: str, what: str, kernel: str) -> int:
    try:
        d = Decimal(_clean_number(cell))
    except InvalidOperation:
        raise InvalidProfile(
            f"kernel {kernel!r}: cannot parse {what} value {cell!r}") from None
    if d != d.to_integral_value():
        raise InvalidProfile(
            f"kernel {kernel!r}: {what} value {cell!r} is not an integer")
    return int(d)


def parse_rocprof_csv(data: str | bytes) -> list[RawKernelRecord]:
    """Parse a rocprof-style CSV export into raw kernel records.

    The first line must be a header containing ``KernelName`` and a
    duration column (``DurationNs``, or both ``BeginNs`` and ``EndNs``).
    Cell strings are preserved verbatim (surrounding whitespace
    stripped); empty metric cells leave the key absent from the record.
    """
    text = _as_text(data)
    if not text.strip():
        raise EmptyInput("rocprof CSV is empty")
    reader = csv.reader(io.StringIO(text))
    header = [h.strip() for h in next(reader)]
    if len(set(header)) != len(header):
        raise MalformedRow(1, "duplicate column names in header")
    if "KernelName" not in header:
        raise MissingColumn("KernelName")
    if "DurationNs" not in header and not (
            "BeginNs" in header and "EndNs" in header):
        raise MissingColumn("DurationNs",
                            "or the BeginNs/EndNs pair, for kernel duration")
    name_idx = header.index("KernelName")
    records = []
    for row in reader:
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise MalformedRow(
                reader.line_num,
                f"expected {len(header)} cells, found {len(row)}")
        kernel = row[name_idx].strip()
        if not kernel:
            raise MalformedRow(reader.line_num, "empty KernelName cell")
        values = {h: c.strip() for h, c in zip(header, row)
                  if h != "KernelName" and c.strip()}
        records.append(RawKernelRecord(kernel_name=kernel,
                                       metric_values=values,
                                       source_format=SourceFormat.ROCPROF_CSV))
    return records


def parse_nvprof_csv(data: str | bytes) -> list[RawKernelRecord]:
    """Parse an nvprof metric-mode CSV into raw kernel records.

    Preamble lines starting with ``==`` are skipped.  Each data row names
    one kernel and one metric; rows are pivoted so every kernel yields a
    single record mapping metric names to their Avg strings (falling back
    to Max, then Min, when no Avg column exists).
    """
    text = _as_text(data)
    lines = [ln for ln in text.splitlines()
             if ln.strip() and not ln.lstrip().startswith("==")]
    if not lines:
        raise EmptyInput("nvprof CSV is empty")
    reader = csv.reader(io.StringIO("\n".join(lines)))
    header = [h.strip() for h in next(reader)]
    if "Kernel" not in header:
        raise MissingColumn("Kernel")
    if "Metric Name" not in header:
        raise MissingColumn("Metric Name")
    value_col = next((c for c in ("Avg", "Max", "Min") if c in header), None)
    if value_col is None:
        raise MissingColumn("Avg")
    k_idx = header.index("Kernel")
    m_idx = header.index("Metric Name")
    v_idx = header.index(value_col)
    pivot: dict[str, dict[str, str]] = {}
    for row in reader:
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise MalformedRow(
                reader.line_num,
                f"expected {len(header)} cells, found {len(row)}")
        kernel = row[k_idx].strip()
        metric = row[m_idx].strip()
        if not kernel or not metric:
            raise MalformedRow(reader.line_num, "empty Kernel or Metric Name cell")
        per_kernel = pivot.setdefault(kernel, {})
        if metric in per_kernel:
            raise MalformedRow(
                reader.line_num,
                f"duplicate metric {metric!r} for kernel {kernel!r}")
        per_kernel[metric] = row[v_idx].strip()
    return [RawKernelRecord(kernel_name=k, metric_values=v,
                            source_format=SourceFormat.NVPROF_CSV)
            for k, v in pivot.items()]


def records_to_csv(records: list[RawKernelRecord]) -> str:
    """Serialize raw records back to a flat CSV (KernelName first).

    Column order is deterministic: first appearance across the record
    list.  Parsing the result with :func:`parse_rocprof_csv` reproduces
    the records exactly.
    """
    columns: list[str] = []
    for rec in records:
        for key in rec.metric_values:
            if key not in columns:
                columns.append(key)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["KernelName"] + columns)
    for rec in records:
        writer.writerow([rec.kernel_name]
                        + [rec.metric_values.get(c, "") for c in columns])
    return out.getvalue()


def parse_babelstream_log(data: str | bytes) -> list[BandwidthMeasurement]:
    """Extract bandwidth rows from a BabelStream run log.

    Recognizes lines whose first token is one of Copy/Mul/Add/Triad/Dot
    and whose second token is the MBytes/sec figure.  BabelStream reports
    decimal megabytes, so GB/s is the printed value divided by 1000; the
    division is done in decimal so the result is exactly the printed
    number with the point shifted (no binary rounding detour).
    """
    text = _as_text(data)
    by_token = {f.value.lower(): f for f in StreamFunction}
    measurements = []
    for line in text.splitlines():
        tokens = line.split()
        if len(tokens) < 2:
            continue
        function = by_token.get(tokens[0].lower())
        if function is None:
            continue
        try:
            mbps = Decimal(_clean_number(tokens[1]))
        except InvalidOperation:
            continue
        if mbps <= 0:
            continue
        measurements.append(BandwidthMeasurement(
            function=function,
            value_gbps=float(mbps / 1000),
            source_line=line.rstrip()))
    if not measurements:
        raise NoFunctionsFound(
            "no Copy/Mul/Add/Triad/Dot bandwidth rows found in log")
    return measurements


def _resolve_runtime_s(record: RawKernelRecord) -> float:
    mv = record.metric_values
    kernel = record.kernel_name
    if "DurationNs" in mv:
        ns = _parse_real(mv["DurationNs"], "DurationNs", kernel)
        runtime = ns * 1e-9
    elif "BeginNs" in mv and "EndNs" in mv:
        begin = _parse_real(mv["BeginNs"], "BeginNs", kernel)
        end = _parse_real(mv["EndNs"], "EndNs", kernel)
        runtime = (end - begin) * 1e-9
    elif record.source_format is SourceFormat.NVPROF_CSV and "duration" in mv:
        # nvprof metric mode has no duration counter of its own; the
        # pivoted "duration" key is user-supplied and read as seconds.
        runtime = _parse_real(mv["duration"], "duration", kernel)
    else:
        raise MissingDuration(
            f"kernel {kernel!r}: no DurationNs, BeginNs/EndNs, or duration")
    if not runtime > 0:
        raise NonPositiveRuntime(
            f"kernel {kernel!r}: resolved runtime {runtime} s is not positive")
    return runtime


def normalize(record: RawKernelRecord, kb_factor: int = 1024) -> KernelProfile:
    """Convert a raw record into a normalized :class:`KernelProfile`.

    AMD: ``FETCH_SIZE``/``WRITE_SIZE`` kilobytes become bytes via
    ``kb_factor`` (1024 by default, matching rocprof's derived-metric
    convention; pass 1000 for decimal kilobytes).  NVIDIA: byte totals
    are derived from dram transaction counts x 32 bytes when present, and
    ``transactions`` is their sum.

    Deterministic and pure: same record in, same profile out.
    """
    if kb_factor not in (1024, 1000):
        raise ValueError("kb_factor must be 1024 or 1000")
    mv = record.metric_values
    kernel = record.kernel_name
    runtime = _resolve_runtime_s(record)

    if record.source_format is SourceFormat.ROCPROF_CSV:
        valu = (_parse_count(mv["SQ_INSTS_VALU"], "SQ_INSTS_VALU", kernel)
                if "SQ_INSTS_VALU" in mv else None)
        salu = (_parse_count(mv["SQ_INSTS_SALU"], "SQ_INSTS_SALU", kernel)
                if "SQ_INSTS_SALU" in mv else None)
        if valu is None and salu is None:
            raise NoInstructionMetric(
                f"kernel {kernel!r}: no SQ_INSTS_VALU or SQ_INSTS_SALU")
        bytes_read = (_parse_real(mv["FETCH_SIZE"], "FETCH_SIZE", kernel)
                      * kb_factor if "FETCH_SIZE" in mv else 0.0)
        bytes_written = (_parse_real(mv["WRITE_SIZE"], "WRITE_SIZE", kernel)
                         * kb_factor if "WRITE_SIZE" in mv else 0.0)
        return KernelProfile(kernel_name=kernel, vendor=Vendor.AMD,
                             runtime_s=runtime, bytes_read=bytes_read,
                             bytes_written=bytes_written,
                             valu_instructions=valu, salu_instructions=salu)

    if "inst_executed" not in mv:
        raise NoInstructionMetric(f"kernel {kernel!r}: no inst_executed")
    executed = _parse_count(mv["inst_executed"], "inst_executed", kernel)
    bytes_read = bytes_written = 0.0
    transactions = None
    if "dram_read_transactions" in mv or "dram_write_transactions" in mv:
        reads = (_parse_count(mv["dram_read_transactions"],
                              "dram_read_transactions", kernel)
                 if "dram_read_transactions" in mv else 0)
        writes = (_parse_count(mv["dram_write_transactions"],
                               "dram_write_transactions", kernel)
                  if "dram_write_transactions" in mv else 0)
        bytes_read = float(reads * TRANSACTION_BYTES)
        bytes_written = float(writes * TRANSACTION_BYTES)
        transactions = reads + writes
    return KernelProfile(kernel_name=kernel, vendor=Vendor.NVIDIA,
                         runtime_s=runtime, bytes_read=bytes_read,
                         bytes_written=bytes_written,
                         executed_instructions=executed,
                         transactions=transactions)


_PROFILE_FIELDS = tuple(f.name for f in fields(KernelProfile))
_COUNT_FIELDS = ("valu_instructions", "salu_instructions",
                 "executed_instructions", "transactions")


def load_profiles_json(data: str | bytes) -> list[KernelProfile]:
    """Load profiles from the canonical JSON format.

    The document is an array of objects (a single object is also
    accepted) whose keys are exactly the :class:`KernelProfile` field
    names; ``vendor`` is the string ``"AMD"`` or ``"NVIDIA"``.  Unknown
    fields are rejected.  This lets published counter tables be fed to
    the toolkit without fabricating a CSV.
    """
    text = _as_text(data)
    if not text.strip():
        raise EmptyInput("profile JSON is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidProfile(f"profile JSON is invalid: {exc}") from None
    if isinstance(doc, dict):
        doc = [doc]
    if not isinstance(doc, list):
        raise InvalidProfile("profile JSON must be an object or array")
    profiles = []
    for i, entry in enumerate(doc):
        if not isinstance(entry, dict):
            raise InvalidProfile(f"profile entry {i} is not a JSON object")
        unknown = set(entry) - set(_PROFILE_FIELDS)
        if unknown:
            raise InvalidProfile(
                f"profile entry {i}: unknown field(s) "
                f"{', '.join(sorted(unknown))}")
        kwargs = {k: v for k, v in entry.items() if v is not None}
        for key in ("kernel_name", "vendor", "runtime_s"):
            if key not in kwargs:
                raise InvalidProfile(f"profile entry {i}: missing {key!r}")
        try:
            kwargs["vendor"] = Vendor(str(kwargs["vendor"]).upper())
        except ValueError:
            raise InvalidProfile(
                f"profile entry {i}: vendor must be AMD or NVIDIA") from None
        for f in ("runtime_s", "bytes_read", "bytes_written"):
            if f in kwargs:
                if not isinstance(kwargs[f], (int, float)) \
                        or isinstance(kwargs[f], bool):
                    raise InvalidProfile(
                        f"profile entry {i}: {f} must be a number")
                kwargs[f] = float(kwargs[f])
        for f in _COUNT_FIELDS:
            v = kwargs.get(f)
            if isinstance(v, float) and v.is_integer():
                kwargs[f] = int(v)
        try:
            profiles.append(KernelProfile(**kwargs))
        except (ValueError, TypeError) as exc:
            raise InvalidProfile(f"profile entry {i}: {exc}") from None
    return profiles


def _merge_group(group: list[KernelProfile], how: str) -> KernelProfile:
    n = len(group)
    runtime = sum(p.runtime_s for p in group)
    bytes_read = sum(p.bytes_read for p in group)
    bytes_written = sum(p.bytes_written for p in group)
    counts: dict[str, int | None] = {}
    for f in _COUNT_FIELDS:
        present = [getattr(p, f) for p in group if getattr(p, f) is not None]
        counts[f] = sum(present) if present else None
    if how == "mean":
        runtime /= n
        bytes_read /= n
        bytes_written /= n
        counts = {f: (round(v / n) if v is not None else None)
                  for f, v in counts.items()}
    return KernelProfile(kernel_name=group[0].kernel_name,
                         vendor=group[0].vendor, runtime_s=runtime,
                         bytes_read=bytes_read, bytes_written=bytes_written,
                         **counts)


def aggregate_profiles(profiles: list[KernelProfile],
                       how: str) -> list[KernelProfile]:
    """Merge repeated invocations of the same kernel.

    ``how="sum"`` totals runtime, bytes, and counters across invocations;
    ``how="mean"`` divides those totals by the invocation count (counter
    means are rounded to the nearest integer).  Kernels keep their first
    appearance order; by default the toolkit does no merging at all and
    every invocation stays a separate profile.
    """
    if how not in ("sum", "mean"):
        raise ValueError("how must be 'sum' or 'mean'")
    groups: dict[tuple[str, Vendor], list[KernelProfile]] = {}
    for p in profiles:
        groups.setdefault((p.kernel_name, p.vendor), []).append(p)
    return [_merge_group(g, how) for g in groups.values()]

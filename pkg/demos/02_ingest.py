"""
Parsing profiler exports and benchmark logs
===========================================

Raw counter files in, normalized per-kernel profiles out.  Three input
formats: rocprof CSVs (AMD), nvprof metric CSVs (NVIDIA), and
BabelStream run logs for measured bandwidth.
"""

from pathlib import Path

from iroofline import (
    StreamFunction,
    load_profiles_json,
    normalize,
    parse_babelstream_log,
    parse_nvprof_csv,
    parse_rocprof_csv,
)

DATA = Path(__file__).parent / "data"

# A rocprof export keeps one row per kernel dispatch.  Parsing preserves
# the raw counter strings...
(record,) = parse_rocprof_csv((DATA / "mi60_lwfa.csv").read_text())
print("raw rocprof record:", record.kernel_name)
for key, value in record.metric_values.items():
    print(f"  {key:>14} = {value}")

# ...and normalization applies the unit conversions: FETCH_SIZE and
# WRITE_SIZE are kilobytes (x1024 to bytes), DurationNs is nanoseconds.
profile = normalize(record)
print(f"\nnormalized: {profile.bytes_read:.0f} B read, "
      f"{profile.bytes_written:.0f} B written, {profile.runtime_s} s, "
      f"valu={profile.valu_instructions}, salu={profile.salu_instructions}")

# nvprof metric exports are one row per kernel x metric; the parser
# pivots them into one record per kernel.  Byte totals come from the
# dram transaction counters (32 bytes each).
(nv_record,) = parse_nvprof_csv((DATA / "v100_lwfa_nvprof.csv").read_text())
nv_profile = normalize(nv_record)
print(f"\nv100 profile: inst_executed={nv_profile.executed_instructions}, "
      f"{nv_profile.transactions} dram transactions, "
      f"{nv_profile.bytes_read + nv_profile.bytes_written:.3e} B total")

# BabelStream logs give the measured memory bandwidth; the Copy row is
# the conventional ceiling choice.
rows = parse_babelstream_log((DATA / "babelstream_mi60.log").read_text())
for m in rows:
    marker = "  <-- ceiling" if m.function is StreamFunction.COPY else ""
    print(f"{m.function.value:>6}: {m.value_gbps:10.3f} GB/s{marker}")

# Published counter tables can skip the CSV dance entirely: the
# canonical JSON profile format takes the normalized field names as-is.
(direct,) = load_profiles_json((DATA / "table1_mi60.json").read_text())
print(f"\nfrom JSON: {direct.kernel_name}, {direct.bytes_read:.0f} B read, "
      f"{direct.runtime_s} s")

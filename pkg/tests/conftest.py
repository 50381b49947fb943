"""Shared fixtures: published counter values and sample input texts.

The per-GPU reference rows below are the frozen inputs and expected
outputs the reproduction tests check against.  Derived quantities
(achieved GIPS, intensity) were published rounded to three decimals, so
reproduction checks allow 3% relative slack; everything else is exact.
"""

import json

import pytest
from hypothesis import strategies as st

from iroofline.ingest import RawKernelRecord, SourceFormat

# LWFA ComputeCurrent kernel, one row per GPU:
# inputs (instructions, bytes, runtime) and published derived values.
TABLE_LWFA = {
    "v100": dict(vendor="NVIDIA", group=32, instructions=279_498_240,
                 bytes_read=267_280_000_000.0, bytes_written=97_329_000_000.0,
                 runtime_s=0.0040, gips=2.178, intensity=0.006),
    "mi60": dict(vendor="AMD", group=64, instructions=502_440_960,
                 bytes_read=1_125_436_000.0, bytes_written=432_711_000.0,
                 runtime_s=0.0127, gips=0.620, intensity=0.398),
    "mi100": dict(vendor="AMD", group=64, instructions=449_796_480,
                  bytes_read=1_124_711_000.0, bytes_written=408_483_000.0,
                  runtime_s=0.0025, gips=2.856, intensity=1.863),
}

# TWEAC ComputeCurrent kernel, same structure.
TABLE_TWEAC = {
    "v100": dict(vendor="NVIDIA", group=32, instructions=60_149_000_000,
                 bytes_read=40_931_000_000.0, bytes_written=1_810_100_000.0,
                 runtime_s=0.283, gips=6.634, intensity=0.155),
    "mi60": dict(vendor="AMD", group=64, instructions=90_319_028_127,
                 bytes_read=11_451_009_000.0, bytes_written=785_101_000.0,
                 runtime_s=0.394, gips=3.586, intensity=0.293),
    "mi100": dict(vendor="AMD", group=64, instructions=78_488_570_820,
                  bytes_read=11_460_394_000.0, bytes_written=792_172_000.0,
                  runtime_s=0.246, gips=4.993, intensity=0.408),
}

# rocprof export for the MI60 LWFA ComputeCurrent kernel.  FETCH_SIZE and
# WRITE_SIZE are kilobytes; x1024 reproduces the byte totals above to
# within 4e-9 relative.  SQ_INSTS_VALU x 4 equals the instruction total.
ROCPROF_MI60_LWFA = (
    "KernelName,DurationNs,FETCH_SIZE,WRITE_SIZE,SQ_INSTS_VALU,SQ_INSTS_SALU\n"
    "ComputeCurrent,12700000,1099058.59,422569.34,125610240,0\n"
)

BABELSTREAM_MI60 = """\
BabelStream
Version: 3.4
Implementation: HIP
Running kernels 100 times
Precision: double
Array size: 268.4 MB (=0.3 GB)
Total size: 805.3 MB (=0.8 GB)
Function    MBytes/sec  Min (sec)   Max         Average
Copy        808975.476  0.00066     0.00079     0.00069
Mul         793416.538  0.00068     0.00081     0.00071
Add         811341.217  0.00099     0.00112     0.00104
Triad       812976.085  0.00099     0.00111     0.00103
Dot         835822.713  0.00064     0.00078     0.00068
"""

BABELSTREAM_MI100 = """\
Function    MBytes/sec  Min (sec)   Max         Average
Copy        933355.781  0.00058     0.00066     0.00060
Triad       901371.129  0.00089     0.00098     0.00092
"""

NVPROF_V100_LWFA = """\
==42== NVPROF is profiling process 42, command: ./simulation
==42== Profiling application: ./simulation
==42== Metric result:
"Device","Kernel","Invocations","Metric Name","Metric Description","Min","Max","Avg"
"Tesla V100-SXM2-16GB (0)","ComputeCurrent","1","inst_executed","Instructions Executed","279498240","279498240","279498240"
"Tesla V100-SXM2-16GB (0)","ComputeCurrent","1","dram_read_transactions","Device Memory Read Transactions","8352500000","8352500000","8352500000"
"Tesla V100-SXM2-16GB (0)","ComputeCurrent","1","dram_write_transactions","Device Memory Write Transactions","3041531250","3041531250","3041531250"
"Tesla V100-SXM2-16GB (0)","ComputeCurrent","1","duration","Kernel Duration","0.0040","0.0040","0.0040"
"""


def profile_json_entry(gpu: str, row: dict, kernel="ComputeCurrent") -> dict:
    """Canonical-JSON profile object for one reference row."""
    entry = {
        "kernel_name": kernel,
        "vendor": row["vendor"],
        "runtime_s": row["runtime_s"],
        "bytes_read": row["bytes_read"],
        "bytes_written": row["bytes_written"],
    }
    if row["vendor"] == "AMD":
        # Counter split is not published; fold everything into the
        # vector counter (total = valu x 4 + salu).
        entry["valu_instructions"] = row["instructions"] // 4
        entry["salu_instructions"] = row["instructions"] % 4
    else:
        entry["executed_instructions"] = row["instructions"]
    return entry


def profile_json_text(gpu: str, row: dict, **kwargs) -> str:
    return json.dumps([profile_json_entry(gpu, row, **kwargs)])


@pytest.fixture
def lwfa_fixture_dir(tmp_path):
    """Directory with the MI60 LWFA rocprof CSV and BabelStream log."""
    (tmp_path / "mi60_lwfa.csv").write_text(ROCPROF_MI60_LWFA)
    (tmp_path / "babelstream_mi60.log").write_text(BABELSTREAM_MI60)
    return tmp_path


# Strategy for random raw records over the canonical rocprof column set.
# Kernel names avoid leading/trailing whitespace (the parser strips cell
# padding); DurationNs and one instruction counter are always present so
# every record is also normalizable.
_NAME_ST = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
             "_<>(), ",
    min_size=1, max_size=30,
).filter(lambda s: s == s.strip() and s)

_DECIMAL_ST = st.one_of(
    st.integers(0, 10**15).map(str),
    st.tuples(st.integers(0, 10**9), st.integers(0, 999)).map(
        lambda t: f"{t[0]}.{t[1]:03d}"),
)


@st.composite
def rocprof_records(draw):
    n = draw(st.integers(1, 5))
    recs = []
    for _ in range(n):
        count = st.integers(0, 10**15).map(str)
        values = {"DurationNs": draw(st.integers(1, 10**12).map(str)),
                  "SQ_INSTS_VALU": draw(count)}
        if draw(st.booleans()):
            values["SQ_INSTS_SALU"] = draw(count)
        for col in ("FETCH_SIZE", "WRITE_SIZE"):
            if draw(st.booleans()):
                values[col] = draw(_DECIMAL_ST)
        recs.append(RawKernelRecord(kernel_name=draw(_NAME_ST),
                                    metric_values=values,
                                    source_format=SourceFormat.ROCPROF_CSV))
    return recs

"""Instruction aggregation, group scaling, achieved GIPS, and intensities.

All rates here are expressed at the execution-group level: raw per-thread
instruction counters are divided by the group size (64 for an AMD HPC
wavefront, 32 for an NVIDIA warp) before any throughput is formed.  That
makes cross-vendor numbers comparable only with care -- the same raw
instruction count scores twice the GIPS on a 32-wide machine as on a
64-wide one, purely from the scaling divisor.

Intensity comes in three flavors:

* ``INTENSITY_PERFORMANCE`` (the default): scaled instructions divided
  by (bytes moved x runtime).  GPU counter reports conventionally
  tabulate this measure under a plain inst/byte label even though it
  carries an extra 1/seconds factor; it is computed as-is here so
  recomputed tables match their sources, discrepancy and all.
* ``PER_BYTE``: scaled instructions per byte moved; the runtime-free,
  dimensionally conventional x-axis.
* ``PER_TRANSACTION``: scaled instructions per 32-byte memory
  transaction.  Only available for NVIDIA profiles; AMD profilers expose
  no transaction counts.

Every function is pure and stateless.  Derived quantities use double
precision; raw counters stay exact integers (Python integers do not
wrap, so the instruction total can never silently overflow).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import (
    ModeUnsupported,
    NoInstructionMetric,
    NonPositiveRuntime,
    ZeroTraffic,
    ZeroTransactions,
)
from .hardware import TRANSACTION_BYTES, GpuSpec, Vendor
from .ingest import KernelProfile

GIGA = 1.0e9

# SQ_INSTS_VALU counts issues per SIMD; GCN/CDNA compute units have four
# vector SIMDs, so the vector count is scaled up by 4.  The scalar unit
# is one per CU and needs no scaling.
VECTOR_SIMDS_PER_CU = 4


@dataclass(frozen=True)
class UnitConventions:
    """Unit constants for transaction-based rescaling."""

    transaction_bytes: int = TRANSACTION_BYTES

    def __post_init__(self):
        if self.transaction_bytes <= 0:
            raise ValueError("transaction_bytes must be positive")


DEFAULT_UNITS = UnitConventions()


class IntensityMode(Enum):
    INTENSITY_PERFORMANCE = "intensity-performance"
    PER_BYTE = "per-byte"
    PER_TRANSACTION = "per-transaction"


class MemoryLevel(Enum):
    HBM = "HBM"
    L1 = "L1"
    L2 = "L2"


@dataclass(frozen=True)
class AchievedPoint:
    """One kernel's (intensity, GIPS) coordinate on a roofline."""

    kernel_name: str
    gips: float
    intensity: float
    intensity_mode: IntensityMode
    memory_level: MemoryLevel = MemoryLevel.HBM

    def __post_init__(self):
        if self.gips < 0 or self.intensity < 0:
            raise ValueError("gips and intensity must be non-negative")


def total_instructions_amd(valu: int, salu: int) -> int:
    """Total issued compute instructions from the two AMD counters.

    ``valu x 4 + salu``: the vector counter is per SIMD (four per compute
    unit), the scalar counter already covers the whole unit.
    """
    if valu < 0 or salu < 0:
        raise ValueError("instruction counters must be non-negative")
    return valu * VECTOR_SIMDS_PER_CU + salu


def scaled_instructions(instructions: int, group_size: int) -> float:
    """Rescale a raw instruction count to the execution-group level."""
    if group_size <= 0:
        raise ValueError("group_size must be positive")
    return instructions / group_size


def achieved_gips(instructions: int, group_size: int,
                  runtime_s: float) -> float:
    """Achieved billions of group-scaled instructions per second."""
    if not runtime_s > 0:
        raise NonPositiveRuntime(f"runtime {runtime_s} s is not positive")
    return scaled_instructions(instructions, group_size) / (GIGA * runtime_s)


def intensity_performance(instructions: int, group_size: int,
                          bytes_read: float, bytes_written: float,
                          runtime_s: float) -> float:
    """Group-scaled instructions over (bytes moved x runtime).

    The published unit label is inst/byte although the formula divides by
    runtime as well; see the module docstring.  Use
    :func:`classic_intensity` for the runtime-free measure.
    """
    if not runtime_s > 0:
        raise NonPositiveRuntime(f"runtime {runtime_s} s is not positive")
    traffic = bytes_read + bytes_written
    if not traffic > 0:
        raise ZeroTraffic("bytes_read + bytes_written must be positive")
    return scaled_instructions(instructions, group_size) / (traffic * runtime_s)


def classic_intensity(instructions: int, group_size: int,
                      bytes_total: float) -> float:
    """Group-scaled instructions per byte of memory traffic."""
    if not bytes_total > 0:
        raise ZeroTraffic("bytes_total must be positive")
    return scaled_instructions(instructions, group_size) / bytes_total


def transaction_intensity(instructions: int, group_size: int,
                          transactions: int) -> float:
    """Group-scaled instructions per memory transaction."""
    if transactions <= 0:
        raise ZeroTransactions("transaction count must be positive")
    return scaled_instructions(instructions, group_size) / transactions


def gbps_to_gtxns(gbps: float, conv: UnitConventions = DEFAULT_UNITS) -> float:
    """Convert a GB/s bandwidth to billions of transactions per second."""
    if gbps < 0:
        raise ValueError("bandwidth must be non-negative")
    return gbps / conv.transaction_bytes


def resolve_instructions(profile: KernelProfile) -> int:
    """Total instruction count for a profile, per its vendor's counters.

    AMD: ``valu x 4 + salu`` with an absent counter treated as zero (at
    least one must be present).  NVIDIA: the single executed-instruction
    counter, which covers all instruction types, not just compute.
    """
    if profile.vendor is Vendor.AMD:
        if (profile.valu_instructions is None
                and profile.salu_instructions is None):
            raise NoInstructionMetric(
                f"kernel {profile.kernel_name!r}: no AMD instruction counters")
        return total_instructions_amd(profile.valu_instructions or 0,
                                      profile.salu_instructions or 0)
    if profile.executed_instructions is None:
        raise NoInstructionMetric(
            f"kernel {profile.kernel_name!r}: no executed_instructions")
    return profile.executed_instructions


def point_for_profile(profile: KernelProfile, spec: GpuSpec,
                      mode: IntensityMode,
                      memory_level: MemoryLevel = MemoryLevel.HBM
                      ) -> AchievedPoint:
    """Compute a kernel's achieved point for one intensity mode.

    Per-transaction intensity is refused for AMD profiles, and so are
    cache-level points: the AMD profiler exposes neither transaction
    counts nor per-level traffic, only HBM totals.
    """
    if profile.vendor is Vendor.AMD:
        if mode is IntensityMode.PER_TRANSACTION:
            raise ModeUnsupported(
                "per-transaction intensity is unavailable for AMD profiles "
                "(no transaction counters)")
        if memory_level is not MemoryLevel.HBM:
            raise ModeUnsupported(
                f"AMD profiles carry HBM traffic only, not "
                f"{memory_level.value}")
    instructions = resolve_instructions(profile)
    gips = achieved_gips(instructions, spec.execution_group_size,
                         profile.runtime_s)
    if mode is IntensityMode.INTENSITY_PERFORMANCE:
        intensity = intensity_performance(
            instructions, spec.execution_group_size,
            profile.bytes_read, profile.bytes_written, profile.runtime_s)
    elif mode is IntensityMode.PER_BYTE:
        intensity = classic_intensity(
            instructions, spec.execution_group_size,
            profile.bytes_read + profile.bytes_written)
    else:
        if profile.transactions is None:
            raise ZeroTransactions(
                f"kernel {profile.kernel_name!r}: no transaction count")
        intensity = transaction_intensity(
            instructions, spec.execution_group_size, profile.transactions)
    return AchievedPoint(kernel_name=profile.kernel_name, gips=gips,
                         intensity=intensity, intensity_mode=mode,
                         memory_level=memory_level)

"""Static GPU hardware descriptors and theoretical ceiling derivation.

A :class:`GpuSpec` carries the handful of numbers the ceiling formulas
need: execution-block count (AMD compute units / NVIDIA streaming
multiprocessors), schedulers per block, issue rate, clock, and the size
of the basic execution group (64-thread wavefront on AMD HPC parts,
32-thread warp on NVIDIA).

The registry ships with the three GPUs this toolkit was calibrated on
(``v100``, ``mi60``, ``mi100``).  Note that the theoretical bandwidth
figures for the AMD parts are vendor-datasheet defaults, not measured or
otherwise validated values; override them with a user spec file if you
have better numbers (see :func:`load_spec_file`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

from .errors import InvalidSpec, UnknownGpu

if TYPE_CHECKING:  # pragma: no cover
    from .ingest import BandwidthMeasurement

# Memory transactions are 32 bytes on the NVIDIA GPUs targeted here; the
# per-transaction bandwidth unit (GTXN/s) is GB/s divided by this.
TRANSACTION_BYTES = 32


class Vendor(Enum):
    AMD = "AMD"
    NVIDIA = "NVIDIA"


class BandwidthSource(Enum):
    THEORETICAL = "theoretical"
    MEASURED = "measured"


@dataclass(frozen=True)
class GpuSpec:
    """Static hardware descriptor feeding the ceiling formulas.

    All numeric fields must be strictly positive.  ``execution_group_size``
    is the number of threads in the hardware's basic execution group and
    is the divisor used when scaling raw instruction counters.
    """

    name: str
    vendor: Vendor
    compute_units: int
    schedulers_per_unit: int
    ipc: int
    frequency_ghz: float
    execution_group_size: int
    theoretical_bandwidth_gbps: float

    def __post_init__(self):
        if not self.name:
            raise InvalidSpec("GPU spec needs a non-empty name")
        if not isinstance(self.vendor, Vendor):
            raise InvalidSpec(f"{self.name}: vendor must be a Vendor enum")
        for f in ("compute_units", "schedulers_per_unit", "ipc",
                  "execution_group_size"):
            v = getattr(self, f)
            if not isinstance(v, int) or v <= 0:
                raise InvalidSpec(f"{self.name}: {f} must be a positive integer")
        for f in ("frequency_ghz", "theoretical_bandwidth_gbps"):
            v = getattr(self, f)
            if not v > 0:
                raise InvalidSpec(f"{self.name}: {f} must be positive")


@dataclass(frozen=True)
class CeilingSet:
    """Compute and memory ceilings for one GPU.

    ``bandwidth_gtxns`` is only populated when the caller asks for a
    transaction-unit ceiling and always equals ``bandwidth_gbps / 32``.
    """

    peak_gips: float
    bandwidth_gbps: float
    bandwidth_gtxns: float | None
    bandwidth_source: BandwidthSource

    def __post_init__(self):
        if self.bandwidth_gtxns is not None and \
                self.bandwidth_gtxns != self.bandwidth_gbps / TRANSACTION_BYTES:
            raise InvalidSpec(
                "bandwidth_gtxns must equal bandwidth_gbps / "
                f"{TRANSACTION_BYTES}")


def peak_gips(spec: GpuSpec) -> float:
    """Theoretical peak GIPS: blocks x schedulers x IPC x GHz.

    With IPC instructions issued per cycle per scheduler, every scheduler
    retires ``ipc * frequency_ghz`` billion instructions per second.
    """
    return (spec.compute_units * spec.schedulers_per_unit * spec.ipc
            * spec.frequency_ghz)


def ceilings(spec: GpuSpec,
             measured: "BandwidthMeasurement | None" = None,
             emit_gtxns: bool = False) -> CeilingSet:
    """Derive the ceiling set for a GPU.

    A measured bandwidth (e.g. from a BabelStream run) takes precedence
    over the spec's theoretical figure.  ``emit_gtxns`` additionally
    reports the bandwidth in billions of 32-byte transactions per second,
    the unit used on NVIDIA-style plots.
    """
    if measured is not None:
        if not measured.value_gbps > 0:
            raise InvalidSpec("measured bandwidth must be positive")
        bw = measured.value_gbps
        source = BandwidthSource.MEASURED
    else:
        bw = spec.theoretical_bandwidth_gbps
        source = BandwidthSource.THEORETICAL
    gtxns = bw / TRANSACTION_BYTES if emit_gtxns else None
    return CeilingSet(peak_gips=peak_gips(spec), bandwidth_gbps=bw,
                      bandwidth_gtxns=gtxns, bandwidth_source=source)


BUILTIN_SPECS: tuple[GpuSpec, ...] = (
    GpuSpec(name="v100", vendor=Vendor.NVIDIA, compute_units=80,
            schedulers_per_unit=4, ipc=1, frequency_ghz=1.530,
            execution_group_size=32, theoretical_bandwidth_gbps=900.0),
    GpuSpec(name="mi60", vendor=Vendor.AMD, compute_units=64,
            schedulers_per_unit=1, ipc=1, frequency_ghz=1.800,
            execution_group_size=64, theoretical_bandwidth_gbps=1024.0),
    GpuSpec(name="mi100", vendor=Vendor.AMD, compute_units=120,
            schedulers_per_unit=1, ipc=1, frequency_ghz=1.502,
            execution_group_size=64, theoretical_bandwidth_gbps=1024.0),
)


class SpecRegistry:
    """Immutable name -> GpuSpec table: built-ins plus user overrides.

    Lookup is case-insensitive.  User specs shadow built-ins of the same
    name.  Instances never mutate after construction, so they are safe to
    share between threads.
    """

    def __init__(self, user_specs: Iterable[GpuSpec] = ()):
        table: dict[str, GpuSpec] = {s.name.lower(): s for s in BUILTIN_SPECS}
        for s in user_specs:
            table[s.name.lower()] = s
        self._table = table

    def lookup(self, name: str) -> GpuSpec:
        try:
            return self._table[name.lower()]
        except KeyError:
            raise UnknownGpu(name, self.names()) from None

    def names(self) -> list[str]:
        return [s.name for s in self._table.values()]

    def specs(self) -> list[GpuSpec]:
        return list(self._table.values())

    @classmethod
    def from_spec_file(cls, path: str | Path) -> "SpecRegistry":
        return cls(load_spec_file(Path(path).read_text()))


_FIELD_NAMES = tuple(f.name for f in fields(GpuSpec))
_INT_FIELDS = ("compute_units", "schedulers_per_unit", "ipc",
               "execution_group_size")


def load_spec_file(text: str) -> list[GpuSpec]:
    """Parse a user GPU spec file.

    The file is JSON: either one object or an array of objects, each with
    exactly the :class:`GpuSpec` field names.  Unknown fields are
    rejected so typos do not silently fall back to defaults.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"spec file is not valid JSON: {exc}") from None
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise InvalidSpec("spec file must be a JSON object or array of objects")
    specs = []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict):
            raise InvalidSpec(f"spec entry {i} is not a JSON object")
        unknown = set(entry) - set(_FIELD_NAMES)
        if unknown:
            raise InvalidSpec(
                f"spec entry {i}: unknown field(s) {', '.join(sorted(unknown))}")
        missing = set(_FIELD_NAMES) - set(entry)
        if missing:
            raise InvalidSpec(
                f"spec entry {i}: missing field(s) {', '.join(sorted(missing))}")
        kwargs = dict(entry)
        try:
            kwargs["vendor"] = Vendor(str(entry["vendor"]).upper())
        except ValueError:
            raise InvalidSpec(
                f"spec entry {i}: vendor must be AMD or NVIDIA") from None
        for f in _INT_FIELDS:
            v = kwargs[f]
            if isinstance(v, float) and v.is_integer():
                kwargs[f] = int(v)
        specs.append(GpuSpec(**kwargs))
    return specs


_DEFAULT_REGISTRY = SpecRegistry()


def lookup_spec(name: str) -> GpuSpec:
    """Case-insensitive lookup against the built-in registry."""
    return _DEFAULT_REGISTRY.lookup(name)

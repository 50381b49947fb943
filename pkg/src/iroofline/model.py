"""Roofline model assembly, bound classification, and comparison tables.

A :class:`RooflineModel` is a compute ceiling, a memory ceiling, and the
achieved points of one GPU under one intensity mode.  The ridge point is
where the sloped memory roof meets the flat compute roof; kernels landing
left of it are memory-bound.

Models are immutable once built and safe for concurrent reads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence, Union

from . import metrics
from .errors import (InconsistentMode, NoInstructionMetric, ZeroTraffic,
                     ZeroTransactions)
from .hardware import CeilingSet, GpuSpec, Vendor
from .ingest import KernelProfile
from .metrics import AchievedPoint, IntensityMode


class Boundedness(Enum):
    MEMORY_BOUND = "memory-bound"
    COMPUTE_BOUND = "compute-bound"


@dataclass(frozen=True)
class RooflineModel:
    gpu: GpuSpec
    ceilings: CeilingSet
    points: tuple[AchievedPoint, ...]
    intensity_mode: IntensityMode
    ridge_intensity: float


def roof_bandwidth(ceilings: CeilingSet, mode: IntensityMode) -> float:
    """Bandwidth in the unit matching the intensity mode."""
    if mode is IntensityMode.PER_TRANSACTION:
        if ceilings.bandwidth_gtxns is None:
            raise InconsistentMode(
                "per-transaction mode needs a GTXN/s ceiling "
                "(build ceilings with emit_gtxns=True)")
        return ceilings.bandwidth_gtxns
    return ceilings.bandwidth_gbps


def build_model(spec: GpuSpec, ceilings: CeilingSet,
                profiles: Sequence[KernelProfile],
                mode: IntensityMode) -> RooflineModel:
    """Assemble a roofline model from ceilings and kernel profiles.

    The ceilings must match the mode: a GTXN/s ceiling is required for
    (and only for) per-transaction mode, and per-transaction mode is
    refused outright for AMD GPUs.  Points are sorted by intensity.
    """
    if mode is IntensityMode.PER_TRANSACTION:
        if spec.vendor is Vendor.AMD:
            raise InconsistentMode(
                f"{spec.name}: per-transaction rooflines are not available "
                "for AMD GPUs (no transaction counters)")
    elif ceilings.bandwidth_gtxns is not None:
        raise InconsistentMode(
            f"ceilings carry a GTXN/s value but mode is {mode.value}")
    bandwidth = roof_bandwidth(ceilings, mode)
    points = sorted(
        (metrics.point_for_profile(p, spec, mode) for p in profiles),
        key=lambda pt: pt.intensity)
    return RooflineModel(gpu=spec, ceilings=ceilings, points=tuple(points),
                         intensity_mode=mode,
                         ridge_intensity=ceilings.peak_gips / bandwidth)


def attainable_gips(model: RooflineModel, intensity: float) -> float:
    """Roofline envelope: min(peak, bandwidth x intensity).

    Evaluated as a branch on the ridge so that the ridge point itself
    lands exactly on the compute ceiling (a literal min() can fall one
    rounding step short after the peak/bandwidth division round-trips).
    """
    if intensity >= model.ridge_intensity:
        return model.ceilings.peak_gips
    return roof_bandwidth(model.ceilings, model.intensity_mode) * intensity


def classify(point: AchievedPoint, model: RooflineModel) -> Boundedness:
    """Memory-bound left of the ridge; compute-bound at or right of it."""
    if point.intensity < model.ridge_intensity:
        return Boundedness.MEMORY_BOUND
    return Boundedness.COMPUTE_BOUND


# ---------------------------------------------------------------------------
# Comparison tables

Cell = Union[int, float, str, None]

ROW_LABELS = (
    "Execution Time (s)",
    "Compute Units/SMs",
    "IPC",
    "Frequency (GHz)",
    "Schedulers",
    "Peak GIPS",
    "Achieved GIPS",
    "Instructions",
    "Bytes Read",
    "Bytes Written",
    "Instruction Intensity",
)


@dataclass(frozen=True)
class ComparisonTable:
    """Row-labeled, one-column-per-GPU tabulation.

    ``None`` cells mean "no data" and render as ``n/a``; numeric cells
    are kept numeric so renderers can pick the formatting.
    """

    columns: tuple[str, ...]
    rows: tuple[tuple[str, tuple[Cell, ...]], ...]


def _as_cell_bytes(value: float) -> Cell:
    # Published tables carry whole-byte totals; keep them integer-looking.
    if float(value).is_integer():
        return int(value)
    return value


def _column_cells(model: RooflineModel,
                  profile: KernelProfile | None) -> list[Cell]:
    spec = model.gpu
    cells: list[Cell] = [None] * len(ROW_LABELS)
    cells[1] = spec.compute_units
    cells[2] = spec.ipc
    cells[3] = spec.frequency_ghz
    cells[4] = spec.schedulers_per_unit
    cells[5] = model.ceilings.peak_gips
    if profile is None:
        return cells
    cells[0] = profile.runtime_s
    try:
        instructions = metrics.resolve_instructions(profile)
    except NoInstructionMetric:
        return cells
    cells[7] = instructions
    cells[6] = metrics.achieved_gips(instructions, spec.execution_group_size,
                                     profile.runtime_s)
    traffic = profile.bytes_read + profile.bytes_written
    if traffic > 0:
        cells[8] = _as_cell_bytes(profile.bytes_read)
        cells[9] = _as_cell_bytes(profile.bytes_written)
    try:
        point = metrics.point_for_profile(profile, spec, model.intensity_mode)
        cells[10] = point.intensity
    except (ZeroTraffic, ZeroTransactions):
        pass
    return cells


def compare(models: Sequence[RooflineModel],
            profiles_by_gpu: Mapping[str, Sequence[KernelProfile]]
            ) -> ComparisonTable:
    """Build the eleven-row comparison table across GPUs.

    One column per (model, profile) pair; a model with no profiles still
    gets a column with its static hardware rows filled.  Derived rows
    (achieved GIPS, instructions, intensity) are recomputed through the
    same metric functions the models use, never copied from elsewhere.
    Missing measurements degrade to ``n/a`` cells rather than failing.
    """
    if not models:
        raise ValueError("compare needs at least one model")
    columns: list[str] = []
    per_column: list[list[Cell]] = []
    for model in models:
        profiles = list(profiles_by_gpu.get(model.gpu.name, ()))
        if not profiles:
            columns.append(model.gpu.name)
            per_column.append(_column_cells(model, None))
            continue
        for profile in profiles:
            label = model.gpu.name if len(profiles) == 1 else (
                f"{model.gpu.name}:{profile.kernel_name}")
            columns.append(label)
            per_column.append(_column_cells(model, profile))
    rows = tuple(
        (label, tuple(col[i] for col in per_column))
        for i, label in enumerate(ROW_LABELS))
    return ComparisonTable(columns=tuple(columns), rows=rows)


# ---------------------------------------------------------------------------
# Serialization

def model_to_dict(model: RooflineModel) -> dict:
    """Plain-dict form of a model with stable field names."""
    return {
        "gpu": {
            "name": model.gpu.name,
            "vendor": model.gpu.vendor.value,
            "compute_units": model.gpu.compute_units,
            "schedulers_per_unit": model.gpu.schedulers_per_unit,
            "ipc": model.gpu.ipc,
            "frequency_ghz": model.gpu.frequency_ghz,
            "execution_group_size": model.gpu.execution_group_size,
            "theoretical_bandwidth_gbps": model.gpu.theoretical_bandwidth_gbps,
        },
        "ceilings": {
            "peak_gips": model.ceilings.peak_gips,
            "bandwidth_gbps": model.ceilings.bandwidth_gbps,
            "bandwidth_gtxns": model.ceilings.bandwidth_gtxns,
            "bandwidth_source": model.ceilings.bandwidth_source.value,
        },
        "intensity_mode": model.intensity_mode.value,
        "ridge_intensity": model.ridge_intensity,
        "points": [
            {
                "kernel_name": p.kernel_name,
                "gips": p.gips,
                "intensity": p.intensity,
                "intensity_mode": p.intensity_mode.value,
                "memory_level": p.memory_level.value,
            }
            for p in model.points
        ],
    }


def model_to_json(model: RooflineModel) -> str:
    """Deterministic JSON serialization of a model."""
    return json.dumps(model_to_dict(model), indent=2) + "\n"

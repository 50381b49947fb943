"""Instruction roofline models for AMD and NVIDIA GPUs.

Turns hardware-counter exports (rocprof/nvprof CSVs, BabelStream logs,
or canonical JSON profiles) into instruction roofline models: compute
and bandwidth ceilings, achieved (intensity, GIPS) points, bound
classification, SVG plots, and cross-GPU comparison tables.
"""

from .errors import (
    EmptyInput,
    InconsistentMode,
    InvalidProfile,
    InvalidSpec,
    MalformedRow,
    MissingColumn,
    MissingDuration,
    ModeUnsupported,
    NoFunctionsFound,
    NoInstructionMetric,
    NonPositiveRuntime,
    NonPositiveValue,
    RooflineError,
    UnknownGpu,
    ZeroTraffic,
    ZeroTransactions,
)
from .hardware import (
    BUILTIN_SPECS,
    TRANSACTION_BYTES,
    BandwidthSource,
    CeilingSet,
    GpuSpec,
    SpecRegistry,
    Vendor,
    ceilings,
    load_spec_file,
    lookup_spec,
    peak_gips,
)
from .ingest import (
    BandwidthMeasurement,
    KernelProfile,
    RawKernelRecord,
    SourceFormat,
    StreamFunction,
    aggregate_profiles,
    load_profiles_json,
    normalize,
    parse_babelstream_log,
    parse_nvprof_csv,
    parse_rocprof_csv,
    records_to_csv,
)
from .metrics import (
    AchievedPoint,
    IntensityMode,
    MemoryLevel,
    UnitConventions,
    achieved_gips,
    classic_intensity,
    gbps_to_gtxns,
    intensity_performance,
    point_for_profile,
    resolve_instructions,
    scaled_instructions,
    total_instructions_amd,
    transaction_intensity,
)
from .model import (
    Boundedness,
    ComparisonTable,
    RooflineModel,
    attainable_gips,
    build_model,
    classify,
    compare,
    model_to_dict,
    model_to_json,
    roof_bandwidth,
)
from .render import LogAxis, PlotOptions, TableFormat, render_svg, render_table

__version__ = "0.1.0"

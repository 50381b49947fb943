"""Command-line interface: ingestion -> metrics -> model -> rendering.

Subcommands::

    iroofline specs                       list known GPU specs
    iroofline model   --gpu mi60 --input rocprof:run.csv [...]
    iroofline plot    --gpu mi60 --input rocprof:run.csv --out-svg r.svg
    iroofline compare --config runs.json --out-table markdown:cmp.md

Inputs are tagged with their format: ``rocprof:<path>``,
``nvprof:<path>``, or ``profile-json:<path>`` (the canonical JSON profile
format).  A JSON config file mirroring the flag names can supply any
setting; explicit flags win.  The ``ROOFLINE_SPECS`` environment variable
points at a user GPU spec file whose entries shadow the built-ins.

Identical invocations on identical files produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import ingest, model as model_mod, render
from .errors import NoFunctionsFound, RooflineError
from .hardware import SpecRegistry, ceilings, load_spec_file
from .ingest import BandwidthMeasurement, KernelProfile, StreamFunction
from .metrics import IntensityMode
from .render import PlotOptions, TableFormat

SPECS_ENV_VAR = "ROOFLINE_SPECS"

INPUT_FORMATS = ("rocprof", "nvprof", "profile-json")

# Flag spellings for the intensity modes.
MODE_FLAGS = {
    "eq2": IntensityMode.INTENSITY_PERFORMANCE,
    "perbyte": IntensityMode.PER_BYTE,
    "pertxn": IntensityMode.PER_TRANSACTION,
}

TABLE_FORMATS = {
    "markdown": TableFormat.MARKDOWN,
    "md": TableFormat.MARKDOWN,
    "csv": TableFormat.CSV,
    "plain": TableFormat.PLAIN,
}


@dataclass
class RunConfig:
    """One GPU's run settings; None fields fall back to defaults."""

    gpu: str | None = None
    inputs: list[str] | None = None          # "fmt:path" strings
    bandwidth_log: str | None = None
    bandwidth_function: str | None = None    # Copy/Mul/Add/Triad/Dot
    intensity_mode: str | None = None        # eq2|perbyte|pertxn
    kb_factor: int | None = None
    aggregate: str | None = None             # off|sum|mean
    out_svg: str | None = None
    out_table: str | None = None             # "fmt" or "fmt:path"
    out_model: str | None = None

    def resolved(self) -> "RunConfig":
        cfg = replace(self)
        cfg.inputs = list(cfg.inputs or [])
        cfg.bandwidth_function = cfg.bandwidth_function or "Copy"
        cfg.intensity_mode = cfg.intensity_mode or "eq2"
        cfg.kb_factor = cfg.kb_factor if cfg.kb_factor is not None else 1024
        cfg.aggregate = cfg.aggregate or "off"
        return cfg


def _config_from_dict(data: dict, where: str) -> RunConfig:
    allowed = set(RunConfig.__dataclass_fields__)
    unknown = set(data) - allowed
    if unknown:
        raise RooflineError(
            f"{where}: unknown config field(s) {', '.join(sorted(unknown))}")
    return RunConfig(**data)


def _load_config_file(path: str) -> list[RunConfig]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise RooflineError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise RooflineError(f"config {path} is not valid JSON: {exc}") from None
    entries = doc if isinstance(doc, list) else [doc]
    return [_config_from_dict(e, f"config {path} entry {i}")
            for i, e in enumerate(entries)]


def _merge_flags(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    """Overlay explicitly-given flags onto a config; flags win."""
    for field in RunConfig.__dataclass_fields__:
        value = getattr(args, field, None)
        if value is not None and value != []:
            setattr(cfg, field, value)
    return cfg


def _registry() -> SpecRegistry:
    path = os.environ.get(SPECS_ENV_VAR)
    if not path:
        return SpecRegistry()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise RooflineError(
            f"cannot read GPU spec file {path} ({SPECS_ENV_VAR}): {exc}"
        ) from None
    return SpecRegistry(load_spec_file(text))


def _split_tagged(value: str, valid: tuple[str, ...], what: str) -> tuple[str, str]:
    tag, sep, path = value.partition(":")
    if not sep or tag not in valid or not path:
        raise RooflineError(
            f"bad {what} {value!r}: expected <fmt>:<path> with fmt one of "
            f"{', '.join(valid)}")
    return tag, path


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise RooflineError(f"cannot read input {path}: {exc}") from None


def _load_profiles(cfg: RunConfig) -> list[KernelProfile]:
    if not cfg.inputs:
        raise RooflineError("no inputs given (use --input <fmt>:<path>)")
    profiles: list[KernelProfile] = []
    for item in cfg.inputs:
        fmt, path = _split_tagged(item, INPUT_FORMATS, "input")
        text = _read_file(path)
        try:
            if fmt == "rocprof":
                records = ingest.parse_rocprof_csv(text)
                profiles += [ingest.normalize(r, kb_factor=cfg.kb_factor)
                             for r in records]
            elif fmt == "nvprof":
                records = ingest.parse_nvprof_csv(text)
                profiles += [ingest.normalize(r, kb_factor=cfg.kb_factor)
                             for r in records]
            else:
                profiles += ingest.load_profiles_json(text)
        except RooflineError as exc:
            raise RooflineError(f"{path}: {exc}") from None
    if cfg.aggregate != "off":
        profiles = ingest.aggregate_profiles(profiles, cfg.aggregate)
    return profiles


def _measured_bandwidth(cfg: RunConfig) -> BandwidthMeasurement | None:
    if not cfg.bandwidth_log:
        return None
    try:
        fn = StreamFunction(cfg.bandwidth_function.capitalize())
    except ValueError:
        raise RooflineError(
            f"unknown bandwidth function {cfg.bandwidth_function!r}; pick "
            f"one of {', '.join(f.value for f in StreamFunction)}") from None
    text = _read_file(cfg.bandwidth_log)
    try:
        measurements = ingest.parse_babelstream_log(text)
    except NoFunctionsFound as exc:
        raise RooflineError(f"{cfg.bandwidth_log}: {exc}") from None
    for m in measurements:
        if m.function is fn:
            return m
    raise RooflineError(
        f"{cfg.bandwidth_log}: no {fn.value} row in benchmark log")


def _build_model(cfg: RunConfig, registry: SpecRegistry):
    if not cfg.gpu:
        raise RooflineError("no GPU given (use --gpu <name>)")
    spec = registry.lookup(cfg.gpu)
    mode = MODE_FLAGS[cfg.intensity_mode]
    profiles = _load_profiles(cfg)
    measured = _measured_bandwidth(cfg)
    ceil = ceilings(spec, measured,
                    emit_gtxns=(mode is IntensityMode.PER_TRANSACTION))
    return model_mod.build_model(spec, ceil, profiles, mode), profiles


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text)


def _table_destination(cfg: RunConfig) -> tuple[TableFormat, str | None]:
    value = cfg.out_table or "plain"
    fmt_name, sep, path = value.partition(":")
    if fmt_name not in TABLE_FORMATS:
        raise RooflineError(
            f"bad table format {fmt_name!r}; pick one of "
            f"{', '.join(sorted(set(TABLE_FORMATS)))}")
    return TABLE_FORMATS[fmt_name], (path if sep and path else None)


# ---------------------------------------------------------------------------
# Subcommands

def cmd_specs(args: argparse.Namespace) -> int:
    registry = _registry()
    header = f"{'name':<12} {'vendor':<7} {'CU/SM':>5} {'sched':>5} " \
             f"{'IPC':>3} {'GHz':>6} {'group':>5} {'BW GB/s':>8}"
    print(header)
    for s in registry.specs():
        print(f"{s.name:<12} {s.vendor.value:<7} {s.compute_units:>5} "
              f"{s.schedulers_per_unit:>5} {s.ipc:>3} "
              f"{s.frequency_ghz:>6.3f} {s.execution_group_size:>5} "
              f"{s.theoretical_bandwidth_gbps:>8.1f}")
    return 0


def cmd_model(args: argparse.Namespace) -> int:
    cfg = _merge_flags(_single_config(args), args).resolved()
    result, _ = _build_model(cfg, _registry())
    text = model_mod.model_to_json(result)
    if cfg.out_model:
        _write_text(cfg.out_model, text)
        print(f"wrote model: {cfg.out_model}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    cfg = _merge_flags(_single_config(args), args).resolved()
    if not cfg.out_svg:
        raise RooflineError("plot needs --out-svg <path>")
    result, _ = _build_model(cfg, _registry())
    opts = PlotOptions(title=f"{result.gpu.name} instruction roofline")
    svg = render.render_svg(result, opts)
    Path(cfg.out_svg).write_bytes(svg)
    print(f"wrote plot: {cfg.out_svg}")
    if cfg.out_model:
        _write_text(cfg.out_model, model_mod.model_to_json(result))
        print(f"wrote model: {cfg.out_model}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    if args.config:
        configs = [_merge_flags(c, args) for c in _load_config_file(args.config)]
    else:
        configs = [_merge_flags(RunConfig(), args)]
    configs = [c.resolved() for c in configs]
    registry = _registry()
    models = []
    profiles_by_gpu: dict[str, list[KernelProfile]] = {}
    failures = 0
    for cfg in configs:
        try:
            built, profiles = _build_model(cfg, registry)
        except RooflineError as exc:
            failures += 1
            print(f"warning: skipping {cfg.gpu or '<no gpu>'}: {exc}",
                  file=sys.stderr)
            continue
        models.append(built)
        profiles_by_gpu.setdefault(built.gpu.name, []).extend(profiles)
    if not models:
        raise RooflineError("no GPU produced a usable model")
    table = model_mod.compare(models, profiles_by_gpu)
    fmt, path = _table_destination(configs[0])
    text = render.render_table(table, fmt)
    if path:
        _write_text(path, text)
        print(f"wrote table: {path}")
    else:
        sys.stdout.write(text)
    return 0


def _single_config(args: argparse.Namespace) -> RunConfig:
    if getattr(args, "config", None):
        entries = _load_config_file(args.config)
        if len(entries) != 1:
            raise RooflineError(
                f"config {args.config}: expected exactly one entry for this "
                f"command, found {len(entries)}")
        return entries[0]
    return RunConfig()


# ---------------------------------------------------------------------------
# Argument parsing

def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--gpu", help="GPU name from the spec registry")
    p.add_argument("--input", dest="inputs", action="append",
                   metavar="FMT:PATH",
                   help="input file tagged rocprof:, nvprof:, or "
                        "profile-json: (repeatable)")
    p.add_argument("--bandwidth-log", dest="bandwidth_log",
                   help="BabelStream run log for a measured bandwidth ceiling")
    p.add_argument("--bandwidth-fn", dest="bandwidth_function",
                   choices=[f.value for f in StreamFunction],
                   help="benchmark function to read from the log "
                        "(default Copy)")
    p.add_argument("--mode", dest="intensity_mode",
                   choices=sorted(MODE_FLAGS),
                   help="intensity mode (default eq2)")
    p.add_argument("--kb", dest="kb_factor", type=int, choices=(1024, 1000),
                   help="bytes per profiler kilobyte (default 1024)")
    p.add_argument("--aggregate", choices=("off", "sum", "mean"),
                   help="merge repeated kernel invocations (default off)")
    p.add_argument("--out-svg", dest="out_svg", help="SVG output path")
    p.add_argument("--out-table", dest="out_table", metavar="FMT[:PATH]",
                   help="table format markdown|csv|plain, optionally with "
                        "an output path (default: plain to stdout)")
    p.add_argument("--out-model", dest="out_model",
                   help="model JSON output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iroofline",
        description="Build instruction roofline models from GPU profiler "
                    "counter exports.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("specs", help="list known GPU specs")
    p.set_defaults(func=cmd_specs)

    p = sub.add_parser("model", help="build a roofline model, emit JSON")
    _add_run_flags(p)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("plot", help="build a model and render an SVG plot")
    _add_run_flags(p)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("compare",
                       help="tabulate several GPUs side by side")
    _add_run_flags(p)
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RooflineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""
Rendering plots and comparison tables
=====================================

SVG rooflines (deterministic, diffable) and the side-by-side GPU table.
Writes demos/out/mi60_vs_mi100.svg next to this script.
"""

from pathlib import Path

from iroofline import (
    IntensityMode,
    PlotOptions,
    StreamFunction,
    TableFormat,
    build_model,
    ceilings,
    compare,
    load_profiles_json,
    lookup_spec,
    normalize,
    parse_babelstream_log,
    parse_rocprof_csv,
    render_svg,
    render_table,
)

DATA = Path(__file__).parent / "data"
OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)


def amd_model(gpu):
    spec = lookup_spec(gpu)
    profiles = [normalize(r) for r in parse_rocprof_csv(
        (DATA / f"{gpu}_lwfa.csv").read_text())]
    copy = next(m for m in parse_babelstream_log(
        (DATA / f"babelstream_{gpu}.log").read_text())
        if m.function is StreamFunction.COPY)
    return build_model(spec, ceilings(spec, copy), profiles,
                       IntensityMode.INTENSITY_PERFORMANCE), profiles


# One SVG per model; identical inputs always produce identical bytes, so
# the files are safe to commit and diff.
for gpu in ("mi60", "mi100"):
    model, _ = amd_model(gpu)
    opts = PlotOptions(title=f"{gpu} instruction roofline",
                       x_range=(1e-3, 1e3), y_range=(1e-2, 1e3))
    path = OUT / f"{gpu}_lwfa.svg"
    path.write_bytes(render_svg(model, opts))
    print(f"wrote {path}")

# The comparison table mirrors the published layout: eleven rows, one
# column per GPU.  Here all three GPUs come from canonical JSON inputs.
models, by_gpu = [], {}
for gpu in ("v100", "mi60", "mi100"):
    spec = lookup_spec(gpu)
    profiles = load_profiles_json((DATA / f"table1_{gpu}.json").read_text())
    models.append(build_model(spec, ceilings(spec), profiles,
                              IntensityMode.INTENSITY_PERFORMANCE))
    by_gpu[gpu] = profiles

table = compare(models, by_gpu)
print()
print(render_table(table, TableFormat.PLAIN))

print("same table as markdown:")
print(render_table(table, TableFormat.MARKDOWN))

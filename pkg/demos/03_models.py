"""
Building roofline models and classifying kernels
================================================

Ceilings + profiles = a roofline model: a ridge point, achieved points,
and a memory-bound/compute-bound verdict per kernel.
"""

from pathlib import Path

from iroofline import (
    IntensityMode,
    StreamFunction,
    attainable_gips,
    build_model,
    ceilings,
    classify,
    lookup_spec,
    model_to_json,
    normalize,
    parse_babelstream_log,
    parse_rocprof_csv,
)

DATA = Path(__file__).parent / "data"

# Ingest the MI60 kernel profile and its measured bandwidth.
spec = lookup_spec("mi60")
profiles = [normalize(r) for r in
            parse_rocprof_csv((DATA / "mi60_lwfa.csv").read_text())]
copy = next(m for m in
            parse_babelstream_log((DATA / "babelstream_mi60.log").read_text())
            if m.function is StreamFunction.COPY)

# AMD models use GB/s on the bandwidth axis, and the default intensity
# measure divides scaled instructions by (bytes x runtime).
model = build_model(spec, ceilings(spec, copy), profiles,
                    IntensityMode.INTENSITY_PERFORMANCE)
print(f"peak {model.ceilings.peak_gips:.2f} GIPS, "
      f"bandwidth {model.ceilings.bandwidth_gbps:.3f} GB/s "
      f"({model.ceilings.bandwidth_source.value})")
print(f"ridge at {model.ridge_intensity:.4f}")

for point in model.points:
    verdict = classify(point, model)
    roof = attainable_gips(model, point.intensity)
    print(f"{point.kernel_name}: ({point.intensity:.3f}, {point.gips:.3f}) "
          f"-> {verdict.value}; roof there allows {roof:.2f} GIPS "
          f"({point.gips / roof:.2%} of it)")

# The envelope itself: linear in intensity until the ridge, flat after.
print("\nattainable GIPS across intensities:")
for x in (0.01, 0.1, model.ridge_intensity, 1.0, 10.0):
    print(f"  intensity {x:8.4f} -> {attainable_gips(model, x):8.2f} GIPS")

# Models serialize to JSON with stable field names (this is what the
# command-line `model` subcommand writes).
print("\nmodel JSON:")
print(model_to_json(model))

"""
GPU specs and roofline ceilings
===============================

Where the two roofs of an instruction roofline come from: the compute
ceiling is derived from a handful of hardware numbers, the memory
ceiling from either a datasheet figure or a measured bandwidth.
"""

from iroofline import (
    BUILTIN_SPECS,
    GpuSpec,
    Vendor,
    ceilings,
    gbps_to_gtxns,
    lookup_spec,
    peak_gips,
)

# The registry ships with the three GPUs the formulas were calibrated
# on.  Lookup is case-insensitive.
for spec in BUILTIN_SPECS:
    print(f"{spec.name:>6}: {spec.compute_units} units x "
          f"{spec.schedulers_per_unit} schedulers x {spec.ipc} IPC x "
          f"{spec.frequency_ghz} GHz = {peak_gips(spec):.2f} peak GIPS")

# The compute ceiling is just the product of those four numbers.  The
# scheduler count is what separates the v100 from the AMD parts: with a
# single scheduler per unit its ceiling would drop by 4x.
v100 = lookup_spec("V100")
print(f"\nv100 with 1 scheduler/SM would peak at "
      f"{v100.compute_units * 1 * v100.ipc * v100.frequency_ghz:.1f} GIPS")

# Without a measurement, the memory ceiling falls back to the spec's
# theoretical bandwidth.  Note the AMD defaults are datasheet values --
# override them with your own spec file if you have better numbers.
mi60 = lookup_spec("mi60")
print(f"\nmi60 theoretical ceilings: {ceilings(mi60)}")

# NVIDIA-style plots use transactions instead of bytes on the bandwidth
# axis: GB/s divided by the 32-byte transaction size.
print(f"\n900 GB/s = {gbps_to_gtxns(900.0)} GTXN/s")
print(ceilings(v100, emit_gtxns=True))

# User-defined GPUs are plain data; anything with positive numbers goes.
custom = GpuSpec(name="mi250x-gcd", vendor=Vendor.AMD, compute_units=110,
                 schedulers_per_unit=1, ipc=1, frequency_ghz=1.7,
                 execution_group_size=64,
                 theoretical_bandwidth_gbps=1638.4)
print(f"\n{custom.name}: {peak_gips(custom):.2f} peak GIPS, "
      f"ridge at {peak_gips(custom) / custom.theoretical_bandwidth_gbps:.4f} "
      f"inst/byte")

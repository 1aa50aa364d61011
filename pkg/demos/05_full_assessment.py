"""The whole pipeline in one run: generate, assess, report.

Equivalent to the CLI flow

    simcred gen --out demo_data
    simcred assess demo_data/manifest.json --format md

but driven through the library so each stage is visible.  The manifest
carries one performance test (four sensor-noise rows), one time-domain step
test and one sweep-frequency test, all comparing a reference plant against
a slightly mistuned model.
"""

import tempfile
from pathlib import Path

from simcred import (
    emit_report,
    load_manifest,
    render_markdown,
    run_assessment,
    write_demo_dataset,
)

workdir = Path(tempfile.mkdtemp(prefix="simcred_demo_"))

manifest_path = write_demo_dataset(workdir / "data", seed=0)
print(f"dataset + manifest written under {manifest_path.parent}")
for path in sorted(manifest_path.parent.iterdir()):
    print(f"  {path.name:<18} {path.stat().st_size:>9} bytes")
print()

manifest = load_manifest(manifest_path)
print(f"loaded {len(manifest.tests)} tests; weights (p, t, f) = "
      f"({manifest.config.alpha_p:g}, {manifest.config.alpha_t:g}, {manifest.config.alpha_f:g})")

report = run_assessment(manifest, timestamp="2026-01-01T00:00:00+00:00")

print()
print("per-test outcomes:")
for record in report.tests:
    if record.status == "assessed":
        print(f"  {record.name:<24} {record.kind:<12} eta = {100 * record.index:6.2f}%")
    else:
        print(f"  {record.name:<24} {record.kind:<12} INVALID: {record.invalid_reason}")

v = report.verdict
print()
print(f"category averages: p = {100 * v.eta_bar_p:.2f}%, "
      f"t = {100 * v.eta_bar_t:.2f}%, f = {100 * v.eta_bar_f:.2f}%")
print(f"overall index eta_all = {100 * v.eta_all:.2f}%")
print(f"worst case    eta_min = {100 * v.eta_min:.2f}%  (from {v.min_source})")
print(f"gate (eta_min >= {report.config.eps_min:g}): {'PASSED' if v.gate_passed else 'FAILED'}")

out = workdir / "report"
for fmt in ("json", "md", "plotdata"):
    for path in emit_report(report, fmt, out):
        print(f"wrote {path}")

print()
print("rendered markdown:")
print(render_markdown(report))

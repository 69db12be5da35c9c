"""
Regenerate every figure dataset
Runs all presets in sequence and reports the crossing of each g line
"""
# ruff : noqa : E402

import sys
from pathlib import Path

from pandera.errors import SchemaError

project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from src.shared.exceptions import RefrigeratorError
from src.shared.logging import setup_logging
from src.sweeps.crossings import find_zero_crossing
from src.sweeps.emitter import emit
from src.sweeps.runner import run_sweep
from src.sweeps.spec import FIGURE_PRESETS

OUTPUT_DIR = project_root / "data" / "figures"


def main():
    setup_logging(log_level="INFO")

    print("=" * 60)
    print("Figure Dataset Generation")
    print("=" * 60)

    results = {}
    for figure_id, preset in FIGURE_PRESETS.items():
        print(f"\n→ {figure_id}: {preset.description}")
        spec = preset.to_spec()
        try:
            result = run_sweep(spec)
            path = OUTPUT_DIR / f"{figure_id}.csv"
            emit(result, "csv", path)
            roots = find_zero_crossing(spec)
        except (RefrigeratorError, SchemaError) as e:
            print(f"✗ {figure_id} failed: {e}")
            results[figure_id] = False
            continue

        print(f"✓ {len(result.table)} rows written to {path}")
        if result.skipped:
            print(f"  {len(result.skipped)} points skipped")
        for line in spec.lines:
            line_roots = [f"{c.value:.4f}" for c in roots if c.g == line.g]
            fraction = line.g / line.omega_H
            print(f"  g={fraction:.3f} omega_H: Qdot_C = 0 at T_H = {line_roots or 'none'}")
        results[figure_id] = True

    # Summary
    print("\n" + "=" * 60)
    print("Generation Summary")
    print("=" * 60)

    total = len(results)
    successful = sum(1 for v in results.values() if v)

    print(f"Total Figures: {total}")
    print(f"Successful: {successful}")
    print(f"Failed: {total - successful}")

    for figure_id, success in results.items():
        status = "✓" if success else "✗"
        print(f"  {status} {figure_id}")

    print("=" * 60)

    return 0 if all(results.values()) else 1


if __name__ == "__main__":
    sys.exit(main())

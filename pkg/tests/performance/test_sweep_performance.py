"""
Timing checks for full-size preset sweeps
"""
import time

from src.refrigerator.thermo import analyze
from src.sweeps.runner import run_sweep
from src.sweeps.spec import get_preset


def test_single_point_is_fast(weak_params):
    analyze(weak_params)
    start = time.perf_counter()
    for _ in range(20):
        analyze(weak_params)
    assert (time.perf_counter() - start) / 20 < 0.1


def test_full_preset_sweep_finishes_quickly():
    spec = get_preset("fig1").to_spec()
    start = time.perf_counter()
    result = run_sweep(spec, max_workers=4)
    elapsed = time.perf_counter() - start
    assert len(result.table) == 200
    assert elapsed < 60.0

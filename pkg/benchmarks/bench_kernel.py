#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernels on the hot workloads.

Usage: python3 benchmarks/bench_kernel.py [--quick]

Workloads: answer-set enumeration (all-interval series), an unsatisfiability
proof (pigeon hole), and symmetry detection (pigeon hole, support encoding,
where refinement dominates).  Both kernels must produce identical results;
the script asserts that while timing them.
"""

import argparse
import time

from symbreak import _kernel_py

try:
    from symbreak import _kernel
    BACKENDS = [("c", _kernel), ("python", _kernel_py)]
except ImportError:
    BACKENDS = [("python", _kernel_py)]


def _with_backend(module, fn):
    """Run fn with symbreak.kernel temporarily pointing at `module`."""
    from symbreak import kernel
    saved = (kernel.NogoodEngine, kernel.refine_partition, kernel.BACKEND)
    kernel.NogoodEngine = module.NogoodEngine
    kernel.refine_partition = module.refine_partition
    kernel.BACKEND = module.BACKEND
    # propagation/autgrp bound the names at import time; rebind them too
    from symbreak import autgrp, propagation
    saved_prop = propagation.NogoodEngine
    saved_aut = autgrp.refine_partition
    propagation.NogoodEngine = module.NogoodEngine
    autgrp.refine_partition = module.refine_partition
    try:
        t0 = time.perf_counter()
        result = fn()
        return result, time.perf_counter() - t0
    finally:
        kernel.NogoodEngine, kernel.refine_partition, kernel.BACKEND = saved
        propagation.NogoodEngine = saved_prop
        autgrp.refine_partition = saved_aut


def workloads(quick):
    from symbreak.families import gen_allint, gen_pigeons
    from symbreak.propagation import solve_tight
    from symbreak.autgrp import detect_symmetries
    from symbreak.permgroup import PermGroup

    allint_n = 6 if quick else 8
    pigeon_solve_n = 5 if quick else 7
    pigeon_detect_n = 8 if quick else 11

    yield (f"solve all-interval {allint_n} (count all)",
           lambda: len(solve_tight(gen_allint(allint_n))))
    yield (f"refute pigeon hole {pigeon_solve_n}",
           lambda: len(solve_tight(gen_pigeons(pigeon_solve_n))))

    def detect():
        gens, _ = detect_symmetries(gen_pigeons(pigeon_detect_n, "support"))
        return PermGroup(gens).order()

    yield (f"detect pigeon hole {pigeon_detect_n} (support)", detect)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller instances")
    args = ap.parse_args()

    if len(BACKENDS) == 1:
        print("compiled kernel not built; timing the pure-Python kernel only")
    for name, fn in workloads(args.quick):
        results = {}
        times = {}
        for backend, module in BACKENDS:
            results[backend], times[backend] = _with_backend(module, fn)
        line = f"{name:44s}"
        for backend, _ in BACKENDS:
            line += f"  {backend}: {times[backend]:7.2f}s"
        if len(results) == 2:
            assert results["c"] == results["python"], "backends disagree!"
            line += f"  speedup: {times['python'] / max(times['c'], 1e-9):5.1f}x"
        print(line + f"  (result: {results[list(results)[0]]})")


if __name__ == "__main__":
    main()

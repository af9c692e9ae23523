"""Compare the numba kernels against the pure-python fallback.

Times the two hot paths on identical inputs with both engines:

* the red-blue merge loop (``learn_mooremi`` end to end), and
* the pairwise distinguishing-suffix search (``characteristic_sample``).

Usage::

    python3 benchmarks/bench_kernels.py [--states N] [--repeats K]

The numba engine is warmed up before timing so compilation cost is not
attributed to the first measurement.
"""

from __future__ import annotations

import argparse
import statistics
import time

import moorelearn as ml
from moorelearn._kernels import NUMBA_AVAILABLE, warmup


def time_call(fn, repeats: int) -> float:
    best = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best.append(time.perf_counter() - t0)
    return statistics.median(best)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--states", type=int, default=40,
                        help="target machine size (default 40)")
    parser.add_argument("--inputs", type=int, default=10)
    parser.add_argument("--outputs", type=int, default=10)
    parser.add_argument("--repeats", type=int, default=5,
                        help="repetitions per measurement (median reported)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    engines = ["python"]
    if NUMBA_AVAILABLE:
        warmup("numba")
        engines.append("numba")
    else:
        print("numba not importable; timing the python engine only")

    machine = ml.random_minimal_moore(args.seed, n_states=args.states,
                                      n_inputs=args.inputs,
                                      n_outputs=args.outputs)
    sample = ml.characteristic_sample(machine).sample
    print(f"machine: {args.states} states, {args.inputs} inputs, "
          f"{args.outputs} outputs; training sample: {len(sample)} traces")

    cases = {
        "mooremi merge loop":
            lambda engine: ml.learn_mooremi(sample, engine=engine),
        "distinguishing-suffix search":
            lambda engine: ml.characteristic_sample(machine, engine=engine),
    }

    results: dict[str, dict[str, float]] = {}
    for name, call in cases.items():
        results[name] = {
            engine: time_call(lambda: call(engine), args.repeats)
            for engine in engines
        }

    width = max(len(n) for n in cases)
    header = f"{'case':<{width}}  " + "".join(f"{e:>12}" for e in engines)
    if len(engines) == 2:
        header += f"{'speedup':>10}"
    print()
    print(header)
    print("-" * len(header))
    for name, times in results.items():
        row = f"{name:<{width}}  " + "".join(
            f"{times[e] * 1000:>10.2f}ms" for e in engines)
        if len(engines) == 2:
            row += f"{times['python'] / times['numba']:>9.1f}x"
        print(row)

    for name, times in results.items():
        for engine in engines:
            out = ml.learn_mooremi(sample, engine=engine).machine
            assert ml.isomorphic(out, machine), \
                f"{engine} engine failed to recover the machine"
    print("\nboth engines recover the target machine exactly")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

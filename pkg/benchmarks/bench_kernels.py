"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Workloads mirror the library's hot paths: the family average behind
scaling_verify, gate-list evaluation for the cipher circuits, single-wire
Hadamards on a 20-qubit state, and parity labelling of a large table.
"""
import argparse
import timeit

import numpy as np

from hashedpf import closedform, kernels, shor
from hashedpf.evenmansour import EMInstance, compile_em


def workloads(rng):
    T = closedform.shor_table(shor.OrderInstance(21, 2, 9), 9)
    W, cols = T.W, T.columns
    gates = compile_em(EMInstance.random(16, 8, rng)).array()
    words = np.arange(1 << 16, dtype=np.int64)
    vec = rng.normal(size=1 << 20) + 1j * rng.normal(size=1 << 20)
    values = rng.integers(0, 1 << 30, size=1 << 20, dtype=np.int64)
    seeds = [int(s) for s in rng.integers(0, 1 << 30, size=4)]
    A = rng.normal(size=(1 << 12, 64)) + 0j
    return {
        "family_average shor(21) t=2": lambda k: k.family_average(W, cols, 5, 2),
        "eval_gates em n=16 r=8, 2^16 words": lambda k: k.eval_gates(words, gates, 16),
        "hadamard_wire 20 qubits, wire 7": lambda k: k.hadamard_wire(vec, 20, 7),
        "parity_labels 2^20 values, t=4": lambda k: k.parity_labels(values, seeds),
        "fwht 2^12 x 64": lambda k: k.fwht(A.copy()),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    names = sorted(backends)
    print(f"backends: {', '.join(names)} (default: {kernels.BACKEND})")
    header = f"{'workload':40s}" + "".join(f"{n:>12s}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>10s}"
    print(header)
    for label, fn in workloads(np.random.default_rng(0)).items():
        times = {}
        for n in names:
            mod = backends[n]
            fn(mod)  # warm up
            times[n] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        row = f"{label:40s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()

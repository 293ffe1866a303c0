#!/usr/bin/env python3
"""Time the numba kernels against their pure-numpy fallbacks.

Run from the repository root:

    PYTHONPATH=src python3 benchmarks/compare_backends.py

Numba kernels are warmed up once before timing so compilation does not count.
"""

import time

import numpy as np

from parrondo import kernels

REPEATS = 5


def timeit(fn, *args):
    best = float("inf")
    for _ in range(REPEATS):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_fwht(n_qubits=20):
    base = np.random.default_rng(1).standard_normal(1 << n_qubits)
    rows = []
    for name, fn in _impls("fwht_inplace"):
        fn(base.copy())  # warm-up / JIT
        rows.append((name, timeit(lambda f=fn: f(base.copy()))))
    return f"walsh-hadamard transform, 2^{n_qubits} amplitudes", rows


def bench_parity_flip(n_qubits=20):
    base = np.random.default_rng(2).standard_normal(1 << n_qubits)
    mask = 0b1011011
    rows = []
    for name, fn in _impls("parity_flip_inplace"):
        fn(base.copy(), mask)
        rows.append((name, timeit(lambda f=fn: f(base.copy(), mask))))
    return f"phase-oracle sign flips, 2^{n_qubits} amplitudes", rows


def bench_ring_walk(steps=10_000_000):
    rng = np.random.default_rng(3)
    modulus = 21
    increments = rng.integers(0, modulus, size=steps)
    win = np.zeros(modulus, dtype=np.uint8)
    win[:6] = 1
    win[16:] = 1
    rows = []
    for name, fn in _impls("ring_walk_wins"):
        fn(increments, modulus, win)
        rows.append((name, timeit(fn, increments, modulus, win)))
    return f"wheel walk, {steps} steps", rows


def bench_letter_stream(letters=10_000_000):
    bits = np.random.default_rng(4).integers(0, 2, size=letters, dtype=np.uint8)
    rows = []
    for name, fn in _impls("push_letters_until"):
        fn(bits[:16], 0, 10**9)
        rows.append((name, timeit(fn, bits, 0, 10**9)))
    return f"letter-stream automaton, {letters} letters", rows


def _impls(stem):
    pairs = [("numpy", getattr(kernels, f"{stem}_numpy", None))]
    if pairs[0][1] is None:  # the automaton fallback is the uncompiled loop
        pairs = [("numpy", kernels._push_letters_loops)]
    jit = getattr(kernels, f"{stem}_numba", None)
    if jit is not None:
        pairs.append(("numba", jit))
    return pairs


def main():
    print(f"active backend: {kernels.BACKEND}")
    if kernels.BACKEND != "numba":
        print("numba unavailable or disabled; timing fallbacks only")
    for bench in (bench_fwht, bench_parity_flip, bench_ring_walk, bench_letter_stream):
        label, rows = bench()
        print(f"\n{label}")
        base = dict(rows).get("numpy")
        for name, seconds in rows:
            speedup = f"  ({base / seconds:.1f}x vs numpy)" if name == "numba" else ""
            print(f"  {name:6s} {seconds * 1e3:10.2f} ms{speedup}")


if __name__ == "__main__":
    main()

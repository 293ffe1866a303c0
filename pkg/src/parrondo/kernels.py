"""Hot numeric kernels: numba-compiled loops with pure-numpy fallbacks.

The backend is selected once at import time.  Set ``PARRONDO_BACKEND=numpy``
to force the fallbacks, ``PARRONDO_BACKEND=numba`` to insist on the compiled
path (ImportError if numba is missing).  Unset, numba is used when it imports
cleanly.  Both backends consume the same pre-drawn random inputs and produce
identical outputs, so seeded experiments reproduce regardless of selection;
``benchmarks/compare_backends.py`` times the two side by side.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "BACKEND",
    "fwht_inplace",
    "parity_flip_inplace",
    "ring_walk_wins",
    "push_letters_until",
]


def _fwht_loops(amps):
    # unnormalised in-place Walsh-Hadamard butterflies, natural ordering
    n = amps.size
    h = 1
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                x = amps[j]
                y = amps[j + h]
                amps[j] = x + y
                amps[j + h] = x - y
        h *= 2


def fwht_inplace_numpy(amps):
    """Unnormalised in-place Walsh-Hadamard transform, vectorised butterflies."""
    n = amps.size
    h = 1
    while h < n:
        view = amps.reshape(-1, 2, h)
        top = view[:, 0, :].copy()
        view[:, 0, :] += view[:, 1, :]
        view[:, 1, :] = top - view[:, 1, :]
        h *= 2


def _parity_flip_loops(amps, mask):
    for x in range(amps.size):
        v = x & mask
        v ^= v >> 32
        v ^= v >> 16
        v ^= v >> 8
        v ^= v >> 4
        v ^= v >> 2
        v ^= v >> 1
        if v & 1:
            amps[x] = -amps[x]


def parity_flip_inplace_numpy(amps, mask):
    """Negate amplitudes at indices with odd popcount(index & mask)."""
    idx = np.arange(amps.size, dtype=np.uint64)
    odd = (np.bitwise_count(idx & np.uint64(mask)) & 1).astype(bool)
    amps[odd] *= -1.0


def _ring_walk_loops(increments, modulus, win_table):
    j = 0
    wins = 0
    for t in range(increments.size):
        j = (j + increments[t]) % modulus
        wins += win_table[j]
    return wins


def ring_walk_wins_numpy(increments, modulus, win_table):
    """Winning-round count of the wheel walk started at position 0."""
    positions = np.cumsum(increments) % modulus
    return int(win_table[positions].sum())


def _push_letters_loops(bits, level, target):
    # bits: 1 = A (sign flip at the target index), 0 = B (diffusion)
    for t in range(bits.size):
        if bits[t] == 1:
            level = level - 1 if level & 1 else level + 1
        elif level & 1:
            level += 1
        elif level > 0:
            level -= 1
        if level == target:
            return t + 1, level, True
    return bits.size, level, False


_choice = os.environ.get("PARRONDO_BACKEND", "").strip().lower()
if _choice not in ("", "numba", "numpy"):
    raise ValueError(
        f"PARRONDO_BACKEND must be 'numba' or 'numpy', got {_choice!r}"
    )

_njit = None
if _choice != "numpy":
    try:
        from numba import njit as _njit
    except ImportError:
        if _choice == "numba":
            raise
        _njit = None

if _njit is not None:
    BACKEND = "numba"
    fwht_inplace_numba = _njit(cache=True)(_fwht_loops)
    parity_flip_inplace_numba = _njit(cache=True)(_parity_flip_loops)
    ring_walk_wins_numba = _njit(cache=True)(_ring_walk_loops)
    push_letters_until_numba = _njit(cache=True)(_push_letters_loops)

    fwht_inplace = fwht_inplace_numba
    parity_flip_inplace = parity_flip_inplace_numba
    ring_walk_wins = ring_walk_wins_numba
    push_letters_until = push_letters_until_numba
else:
    BACKEND = "numpy"
    fwht_inplace = fwht_inplace_numpy
    parity_flip_inplace = parity_flip_inplace_numpy
    ring_walk_wins = ring_walk_wins_numpy
    # the reflecting automaton is inherently sequential; the fallback is the
    # same loop uncompiled
    push_letters_until = _push_letters_loops

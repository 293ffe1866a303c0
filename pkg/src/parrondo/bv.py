"""The unreliable-oracle guessing game on n qubits.

The player tries to land on a hidden nonzero string alpha by running the
three-step sequence H..O..H from |0...0>.  The catch: the phase oracle O only
fires on a random half of the eligible basis states (those y with
y . alpha = 1), so each play happens against a concrete noise realization.
Success probabilities are computed from amplitudes, never sampled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import statevec

NOISELESS = "noiseless"
FIXED_HALF = "fixed-half"
INDEPENDENT = "independent"
NOISE_MODES = (NOISELESS, FIXED_HALF, INDEPENDENT)

__all__ = [
    "NOISELESS",
    "FIXED_HALF",
    "INDEPENDENT",
    "NOISE_MODES",
    "NoiseRealization",
    "BvResult",
    "flip_candidates",
    "draw_realization",
    "noisy_oracle",
    "run_game",
    "exact_success",
    "single_reflection_baseline",
    "independent_exhaustive_mean",
]


def _dot(x: int, alpha: int) -> int:
    """Bitwise inner product modulo 2."""
    return (x & alpha).bit_count() & 1


def _check_alpha(n: int, alpha: int) -> None:
    if not (0 <= alpha < (1 << n)):
        raise ValueError(f"alpha {alpha} out of range for {n} qubits")
    if alpha == 0:
        raise ValueError("the hidden string alpha must be nonzero")


def flip_candidates(n: int, alpha: int) -> np.ndarray:
    """All basis indices y with y . alpha = 1, ascending; 2**(n-1) of them."""
    _check_alpha(n, alpha)
    idx = np.arange(1 << n, dtype=np.uint64)
    odd = (np.bitwise_count(idx & np.uint64(alpha)) & 1).astype(bool)
    return np.nonzero(odd)[0].astype(np.int64)


@dataclass(frozen=True)
class NoiseRealization:
    """One concrete noise draw: the eligible indices the oracle left unflipped."""

    qubits: int
    alpha: int
    unflipped: frozenset[int]

    def __post_init__(self):
        _check_alpha(self.qubits, self.alpha)
        object.__setattr__(self, "unflipped", frozenset(self.unflipped))
        for y in self.unflipped:
            if not (0 <= y < (1 << self.qubits)) or _dot(y, self.alpha) != 1:
                raise ValueError(
                    f"unflipped index {y} does not satisfy y . alpha = 1"
                )


@dataclass(frozen=True)
class BvResult:
    success_probability: float
    realization: NoiseRealization


def draw_realization(
    n: int, alpha: int, mode: str, rng: np.random.Generator
) -> NoiseRealization:
    """Sample the unflipped subset for one play.

    fixed-half leaves exactly 2**(n-2) of the 2**(n-1) eligible indices
    unflipped; independent tosses a fair coin per eligible index; noiseless
    flips them all.
    """
    candidates = flip_candidates(n, alpha)
    if mode == NOISELESS:
        unflipped: frozenset[int] = frozenset()
    elif mode == FIXED_HALF:
        if n < 2:
            raise ValueError("fixed-half noise needs n >= 2")
        size = 1 << (n - 2)
        unflipped = frozenset(
            int(y) for y in rng.choice(candidates, size=size, replace=False)
        )
    elif mode == INDEPENDENT:
        coins = rng.integers(0, 2, size=candidates.size).astype(bool)
        unflipped = frozenset(int(y) for y in candidates[coins])
    else:
        raise ValueError(f"unknown noise mode {mode!r}; expected one of {NOISE_MODES}")
    return NoiseRealization(qubits=n, alpha=alpha, unflipped=unflipped)


def noisy_oracle(state, realization: NoiseRealization) -> np.ndarray:
    """Apply the unreliable phase oracle for one realization.

    Amplitudes at x with x . alpha = 0 are untouched; eligible amplitudes are
    negated unless their index sits in the unflipped set.  Norm is preserved
    exactly (every factor is +-1).
    """
    n = statevec.num_qubits(state)
    if n != realization.qubits:
        raise ValueError(
            f"realization is for {realization.qubits} qubits, state has {n}"
        )
    out = np.array(state, dtype=np.float64, copy=True)
    flips = flip_candidates(n, realization.alpha)
    if realization.unflipped:
        keep = np.fromiter(sorted(realization.unflipped), dtype=np.int64)
        flips = np.setdiff1d(flips, keep, assume_unique=True)
    out[flips] = -out[flips]
    return out


def run_game(n: int, alpha: int, mode: str, seed: int) -> BvResult:
    """One seeded play of H..O..H from |0...0>, success read off the amplitudes."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    _check_alpha(n, alpha)
    rng = np.random.default_rng(seed)
    realization = draw_realization(n, alpha, mode, rng)
    state = statevec.hadamard_all(statevec.basis_state(n, 0))
    state = noisy_oracle(state, realization)
    state = statevec.hadamard_all(state)
    return BvResult(statevec.probability_of(state, alpha), realization)


def exact_success(n: int, unflipped_count: int) -> float:
    """Closed-form success probability (1 - u / 2**(n-1))**2.

    The final amplitude on alpha is 1 - 2u/2**n: every unflipped eligible
    index moves weight 2/2**n off the matched phase pattern.
    """
    half = 1 << (n - 1)
    if not (0 <= unflipped_count <= half):
        raise ValueError(f"unflipped count {unflipped_count} outside [0, {half}]")
    return (1.0 - unflipped_count / half) ** 2


def single_reflection_baseline(n: int, alpha: int, y: int) -> float:
    """Success when the player reflects about a single |y> instead of the oracle.

    Evaluates |<alpha| H (flip y) H |0...0>|**2 through the state-vector
    pipeline; the value is 4/4**n for every eligible y.
    """
    _check_alpha(n, alpha)
    if _dot(y, alpha) != 1:
        raise ValueError(f"reflection index y={y} must satisfy y . alpha = 1")
    state = statevec.hadamard_all(statevec.basis_state(n, 0))
    state = statevec.flip_sign_at(state, y)
    state = statevec.hadamard_all(state)
    return statevec.probability_of(state, alpha)


def independent_exhaustive_mean(n: int, alpha: int) -> float:
    """Mean success over all 2**(2**(n-1)) equally likely independent draws.

    Exhaustive enumeration; limited to n <= 4 where the subset count stays at
    or below 256.
    """
    if n < 2 or n > 4:
        raise ValueError("exhaustive enumeration supports 2 <= n <= 4")
    _check_alpha(n, alpha)
    candidates = [int(y) for y in flip_candidates(n, alpha)]
    base = statevec.hadamard_all(statevec.basis_state(n, 0))
    total = 0.0
    for bits in range(1 << len(candidates)):
        unflipped = frozenset(
            c for i, c in enumerate(candidates) if (bits >> i) & 1
        )
        realization = NoiseRealization(n, alpha, unflipped)
        state = statevec.hadamard_all(noisy_oracle(base, realization))
        total += statevec.probability_of(state, alpha)
    return total / (1 << len(candidates))

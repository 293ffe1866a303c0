"""The stopping game over random reflection sequences.

Letters arrive i.i.d. with equal probability: A reflects the state about the
target basis vector (a sign flip at one index), B reflects about the uniform
start state (diffusion).  Both letters square to the identity and B fixes the
start state, so any finite prefix collapses to an alternating word that is
fully described by a single integer length: even length 2j means j complete
B*A rounds, odd length adds one leading A.  One B*A round is exactly one
amplitude-amplification iteration, which is what makes waiting for the right
reduced length a winning strategy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels, statevec

LETTER_A = "A"
LETTER_B = "B"
DEFAULT_LETTER_CAP = 10_000_000

_STREAM_BLOCK = 1 << 14

__all__ = [
    "LETTER_A",
    "LETTER_B",
    "DEFAULT_LETTER_CAP",
    "StoppingCapExceeded",
    "StoppingStrategy",
    "PlayRecord",
    "WaitingTimeStats",
    "reduce_push",
    "realize_word",
    "success_after_k",
    "canonical_k",
    "best_k",
    "play",
    "waiting_time_stats",
    "expected_stopping_index",
]


class StoppingCapExceeded(RuntimeError):
    """A play consumed its letter cap without reaching the stopping length."""


def reduce_push(length: int, letter: str) -> int:
    """Feed one letter into the streamed reduced word, returning the new length.

    New letters multiply on the left.  At even length (word starts with B or
    is empty) an A extends and a B cancels, except that B on the empty word is
    absorbed by the start state; at odd length (word starts with A) the roles
    swap.
    """
    if length < 0:
        raise ValueError(f"reduced length must be >= 0, got {length}")
    if letter == LETTER_A:
        return length - 1 if length % 2 else length + 1
    if letter == LETTER_B:
        if length % 2:
            return length + 1
        return length - 1 if length > 0 else 0
    raise ValueError(f"letter must be 'A' or 'B', got {letter!r}")


def realize_word(length: int, n: int, alpha: int) -> np.ndarray:
    """Apply the reduced word of the given length to the uniform start state.

    Even length 2j runs j rounds of sign-flip-then-diffusion; odd length adds
    one more sign flip on top.
    """
    if length < 0:
        raise ValueError(f"reduced length must be >= 0, got {length}")
    state = statevec.uniform_state(n)
    for _ in range(length // 2):
        state = statevec.diffusion(statevec.flip_sign_at(state, alpha))
    if length % 2:
        state = statevec.flip_sign_at(state, alpha)
    return state


def success_after_k(n: int, k: int) -> float:
    """Closed-form success sin((2k+1) * asin(2**(-n/2)))**2 after k full rounds."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if k < 0:
        raise ValueError(f"round count k must be >= 0, got {k}")
    return math.sin((2 * k + 1) * math.asin(2.0 ** (-n / 2.0))) ** 2


def canonical_k(n: int) -> int:
    """The textbook round count ceil(pi * sqrt(2**n) / 4).

    A 1e-9 guard keeps values that are integers up to float rounding from
    being bumped one step too high by ceil.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return math.ceil(math.pi * math.sqrt(2.0**n) / 4.0 - 1e-9)


def best_k(n: int) -> int:
    """Round count maximising the closed-form success, by direct scan.

    Scans k in [0, canonical_k(n) + 2]; ties resolve to the smaller k.  This
    repairs the small-n cases where the ceiling rule overshoots the optimum.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return max(range(canonical_k(n) + 3), key=lambda k: success_after_k(n, k))


@dataclass(frozen=True)
class StoppingStrategy:
    """Stop at the first moment the reduced word holds target_k full rounds."""

    target_k: int

    def __post_init__(self):
        if self.target_k < 1:
            raise ValueError(f"target_k must be >= 1, got {self.target_k}")


@dataclass(frozen=True)
class PlayRecord:
    """Outcome of one play: letters consumed, exact success, and its seed."""

    stopping_index: int
    success_probability: float
    sequence_seed: int


@dataclass(frozen=True)
class WaitingTimeStats:
    """Empirical summary of stopping indices over independent plays."""

    trials: int
    mean: float
    variance: float
    max: int
    cap_exceeded: int


def _stopping_index(rng: np.random.Generator, target_length: int, letter_cap: int) -> int:
    """Letters consumed until the reduced length first equals target_length."""
    consumed = 0
    level = 0
    while consumed < letter_cap:
        block = rng.integers(
            0, 2, size=min(_STREAM_BLOCK, letter_cap - consumed), dtype=np.uint8
        )
        used, level, hit = kernels.push_letters_until(block, level, target_length)
        consumed += int(used)
        if hit:
            return consumed
    raise StoppingCapExceeded(
        f"no stop at reduced length {target_length} within {letter_cap} letters"
    )


def play(
    n: int,
    alpha: int,
    strategy: StoppingStrategy,
    seed: int,
    letter_cap: int = DEFAULT_LETTER_CAP,
) -> PlayRecord:
    """One seeded play: stream letters, stop, realise the word, measure.

    The reflected letter walk reaches every even level with probability one,
    so the cap only turns pathological seeds into a loud StoppingCapExceeded
    instead of a hang.
    """
    rng = np.random.default_rng(seed)
    stopping_index = _stopping_index(rng, 2 * strategy.target_k, letter_cap)
    state = realize_word(2 * strategy.target_k, n, alpha)
    return PlayRecord(
        stopping_index=stopping_index,
        success_probability=statevec.probability_of(state, alpha),
        sequence_seed=seed,
    )


def expected_stopping_index(target_k: int) -> Fraction:
    """Exact expected letters until the reduced length first reaches 2*target_k.

    First-step analysis of the letter walk (reflected at zero, lazy there
    because B on the empty word is absorbed): with L = 2*target_k and E_i the
    expected remaining letters from level i, E_L = 0, E_0 = 2 + E_1, and
    E_i = 1 + (E_{i-1} + E_{i+1})/2 in between.  Solved exactly by forward
    elimination of the tridiagonal system.
    """
    if target_k < 1:
        raise ValueError(f"target_k must be >= 1, got {target_k}")
    level_count = 2 * target_k
    # express E_i = a_i + b_i * E_{i+1}
    a = [Fraction(0)] * level_count
    b = [Fraction(0)] * level_count
    a[0], b[0] = Fraction(2), Fraction(1)
    for i in range(1, level_count):
        denom = 1 - b[i - 1] / 2
        a[i] = (1 + a[i - 1] / 2) / denom
        b[i] = Fraction(1, 2) / denom
    value = Fraction(0)
    for i in range(level_count - 1, -1, -1):
        value = a[i] + b[i] * value
    return value


def waiting_time_stats(
    target_k: int,
    trials: int,
    seed: int,
    letter_cap: int = DEFAULT_LETTER_CAP,
) -> WaitingTimeStats:
    """Distribution of the stopping index over independent seeded plays.

    Plays that hit the letter cap are counted in cap_exceeded and excluded
    from the moments.  The state vector never enters: waiting times depend
    only on the letter stream.
    """
    if target_k < 1:
        raise ValueError(f"target_k must be >= 1, got {target_k}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    times = []
    cap_exceeded = 0
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        try:
            times.append(_stopping_index(rng, 2 * target_k, letter_cap))
        except StoppingCapExceeded:
            cap_exceeded += 1
    if times:
        arr = np.array(times, dtype=np.float64)
        mean, variance, peak = float(arr.mean()), float(arr.var()), int(arr.max())
    else:
        mean, variance, peak = math.nan, math.nan, 0
    return WaitingTimeStats(
        trials=trials,
        mean=mean,
        variance=variance,
        max=peak,
        cap_exceeded=cap_exceeded,
    )

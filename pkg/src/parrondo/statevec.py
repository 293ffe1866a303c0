"""Real-amplitude state vectors and the operators the quantum games use.

Every operator here (Hadamard layer, phase oracles, single-index sign flips,
diffusion) is real orthogonal, so amplitudes are plain float64 arrays of
length 2**n.  Functions are pure at the interface: inputs are copied, outputs
are fresh arrays.
"""

from __future__ import annotations

import numpy as np

from . import kernels

MAX_QUBITS = 24  # dense float64 amplitude vector stays under ~128 MB

__all__ = [
    "MAX_QUBITS",
    "num_qubits",
    "uniform_state",
    "basis_state",
    "hadamard_all",
    "phase_oracle",
    "flip_sign_at",
    "diffusion",
    "probability_of",
    "sample_basis",
]


def num_qubits(state) -> int:
    """Qubit count of a state vector; rejects lengths that are not 2**n, n >= 1."""
    size = int(np.size(state))
    n = size.bit_length() - 1
    if n < 1 or (1 << n) != size:
        raise ValueError(f"state length {size} is not a power of two >= 2")
    return n


def _check_qubit_count(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not (1 <= n <= MAX_QUBITS):
        raise ValueError(f"qubit count must be an integer in [1, {MAX_QUBITS}], got {n!r}")


def _check_index(n: int, x: int) -> None:
    if not (0 <= x < (1 << n)):
        raise ValueError(f"basis index {x} out of range for {n} qubits")


def uniform_state(n: int) -> np.ndarray:
    """Equal superposition over all 2**n basis states."""
    _check_qubit_count(n)
    return np.full(1 << n, 2.0 ** (-n / 2.0))


def basis_state(n: int, x: int) -> np.ndarray:
    """Computational basis state |x> on n qubits."""
    _check_qubit_count(n)
    _check_index(n, x)
    state = np.zeros(1 << n)
    state[x] = 1.0
    return state


def hadamard_all(state) -> np.ndarray:
    """Apply a Hadamard to every qubit (normalised fast Walsh-Hadamard transform)."""
    out = np.array(state, dtype=np.float64, copy=True)
    n = num_qubits(out)
    kernels.fwht_inplace(out)
    out *= 2.0 ** (-n / 2.0)
    return out


def phase_oracle(state, alpha: int) -> np.ndarray:
    """Multiply the amplitude at |x> by (-1)**(x . alpha), the bitwise dot mod 2."""
    out = np.array(state, dtype=np.float64, copy=True)
    n = num_qubits(out)
    _check_index(n, alpha)
    kernels.parity_flip_inplace(out, alpha)
    return out


def flip_sign_at(state, y: int) -> np.ndarray:
    """Negate the single amplitude at basis index y."""
    out = np.array(state, dtype=np.float64, copy=True)
    n = num_qubits(out)
    _check_index(n, y)
    out[y] = -out[y]
    return out


def diffusion(state) -> np.ndarray:
    """Reflect about the uniform superposition: v -> 2|psi><psi|v - v.

    With |psi> uniform this is elementwise 2*mean(v) - v.
    """
    arr = np.asarray(state, dtype=np.float64)
    num_qubits(arr)
    return 2.0 * float(arr.mean()) - arr


def probability_of(state, x: int) -> float:
    """Measurement probability of basis outcome x: squared amplitude."""
    arr = np.asarray(state, dtype=np.float64)
    n = num_qubits(arr)
    _check_index(n, x)
    return float(arr[x] ** 2)


def sample_basis(state, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Draw computational-basis measurement outcomes from the state.

    Demonstration helper for the CLI; analyses use exact amplitudes instead.
    """
    arr = np.asarray(state, dtype=np.float64)
    num_qubits(arr)
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = arr * arr
    p = p / p.sum()
    return rng.choice(arr.size, size=shots, p=p)

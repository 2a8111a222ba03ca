"""Dense statevector storage, Pauli-rotation kernels, expectations and sampling.

The rotation kernel never materializes a matrix: exp(-i theta P) pairs
amplitude indices k and k ^ x_mask, with the per-pair phase read off the
z mask and the Y count, so one term application costs O(2^N).

Shot sampling uses the Philox-4x64 counter-based generator keyed as
(seed, 0) with a zero counter, drawing uniform doubles and inverting the
cumulative distribution.  Given the same (state, shots, seed) the counts
are identical across runs and platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NormDriftError
from .pauli import PauliString, PauliSum, _PHASES, _parity_of_masked

# Unitary applications must keep the norm within this drift before we call it a bug.
NORM_DRIFT_LIMIT = 1e-8

UNITARITY_TOL = 1e-10


@dataclass
class StateVector:
    """2^N complex amplitudes; qubit q is bit q of the basis index."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        dim = 1 << self.n_qubits
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (dim,):
            raise ValueError(
                f"expected {dim} amplitudes for {self.n_qubits} qubits, "
                f"got shape {self.amplitudes.shape}"
            )

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())


@dataclass
class ShotCounts:
    """Outcome histogram of repeated Z-basis measurements."""

    n_qubits: int
    shots: int
    counts: dict[int, int]
    seed: int

    def __post_init__(self):
        total = sum(self.counts.values())
        if total != self.shots:
            raise ValueError(f"counts sum to {total}, expected {self.shots}")


def basis_state(n_qubits: int, k: int) -> StateVector:
    """The computational basis state |k>."""
    dim = 1 << n_qubits
    if not 0 <= k < dim:
        raise ValueError(f"basis index {k} out of range for {n_qubits} qubits")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[k] = 1.0
    return StateVector(n_qubits, amps)


def _check_norm(state: StateVector) -> None:
    drift = abs(state.norm() - 1.0)
    if drift > NORM_DRIFT_LIMIT:
        raise NormDriftError(f"state norm drifted by {drift:.3e} (> {NORM_DRIFT_LIMIT:g})")


def pauli_column_phases(p: PauliString, indices: np.ndarray) -> np.ndarray:
    """Phases f(k) with P|k> = f(k) |k ^ x_mask> for the given basis indices."""
    signs = 1.0 - 2.0 * _parity_of_masked(indices, p.z_mask)
    return (p.phase * _PHASES[p.y_count % 4]) * signs


def apply_pauli_string(p: PauliString, vec: np.ndarray) -> np.ndarray:
    """P applied to a raw amplitude array (new array)."""
    indices = np.arange(vec.shape[0], dtype=np.int64)
    out = np.empty_like(vec)
    out[indices ^ np.int64(p.x_mask)] = pauli_column_phases(p, indices) * vec
    return out


def apply_pauli_rotation(state: StateVector, p: PauliString, theta: float) -> StateVector:
    """In place: state <- exp(-i theta P) state, with P a phase +1 string."""
    if p.n_qubits != state.n_qubits:
        raise ValueError(f"qubit count mismatch: {p.n_qubits} vs {state.n_qubits}")
    if p.phase != 1:
        raise ValueError("rotation generator must have phase +1")
    amps = state.amplitudes
    if p.x_mask == 0:
        # Diagonal string: pure phase per basis state.
        indices = np.arange(amps.shape[0], dtype=np.int64)
        signs = 1.0 - 2.0 * _parity_of_masked(indices, p.z_mask)
        amps *= np.exp(-1j * theta * signs)
    else:
        # Pair k with k ^ x_mask; pick the half where the pivot bit is clear.
        pivot = p.x_mask & (-p.x_mask)
        indices = np.arange(amps.shape[0], dtype=np.int64)
        low = indices[(indices & pivot) == 0]
        high = low ^ np.int64(p.x_mask)
        phase_low = pauli_column_phases(p, low)  # P|low> = phase_low |high>
        cos_t = math.cos(theta)
        msin_t = -1j * math.sin(theta)
        a = amps[low].copy()
        b = amps[high]
        # Hermiticity of a phase +1 string gives <low|P|high> = conj(phase_low).
        amps[low] = cos_t * a + msin_t * np.conj(phase_low) * b
        amps[high] = cos_t * b + msin_t * phase_low * a
    _check_norm(state)
    return state


def apply_dense(state: StateVector, u: np.ndarray) -> StateVector:
    """state <- u state after validating that u is unitary."""
    dim = state.dim
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix, got {u.shape}")
    dev = float(np.max(np.abs(u @ u.conj().T - np.eye(dim))))
    if dev > UNITARITY_TOL:
        raise ValueError(f"matrix is not unitary: max |u u^dag - 1| = {dev:.3e}")
    state.amplitudes = u @ state.amplitudes
    _check_norm(state)
    return state


def expectation_zdiag(state: StateVector, weights) -> float:
    """Sum_k |amp_k|^2 w(k) for a diagonal observable.

    ``weights`` is either a callable on basis indices or an array of length 2^N.
    """
    probs = state.probabilities()
    if callable(weights):
        w = np.fromiter((weights(k) for k in range(state.dim)), dtype=np.float64, count=state.dim)
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (state.dim,):
            raise ValueError(f"weights must have length {state.dim}, got shape {w.shape}")
    return float(probs @ w)


def expectation_pauli_sum(state: StateVector, a: PauliSum) -> float:
    """<state| A |state> as a real number (imaginary residue must be tiny)."""
    if a.n_qubits != state.n_qubits:
        raise ValueError(f"qubit count mismatch: {a.n_qubits} vs {state.n_qubits}")
    vec = state.amplitudes
    acc = np.zeros_like(vec)
    for coeff, string in a.terms:
        acc += coeff * apply_pauli_string(string, vec)
    value = complex(np.vdot(vec, acc))
    if abs(value.imag) > 1e-10:
        raise RuntimeError(f"expectation has imaginary residue {value.imag:.3e}")
    return value.real


def sample_z_basis(state: StateVector, shots: int, seed: int) -> ShotCounts:
    """Draw independent Z-basis outcomes from |amp|^2; deterministic per seed."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = state.probabilities()
    cumulative = np.cumsum(probs)
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    draws = rng.random(shots)
    outcomes = np.searchsorted(cumulative, draws, side="right")
    outcomes = np.minimum(outcomes, state.dim - 1)
    values, freqs = np.unique(outcomes, return_counts=True)
    counts = {int(v): int(c) for v, c in zip(values, freqs)}
    return ShotCounts(n_qubits=state.n_qubits, shots=shots, counts=counts, seed=seed)

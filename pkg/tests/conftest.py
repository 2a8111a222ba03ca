"""Shared test fixtures and the independent dense oracle.

Everything here builds matrices the naive way (nested Kronecker products
from label strings), deliberately avoiding the package's mask-based fast
paths so the two implementations check each other.
"""

import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
PAULI_MATS = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
LOWERING = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|


def kron_chain(ops):
    """Tensor product with qubit 0 as the least significant index bit."""
    out = np.array([[1.0 + 0j]])
    for op in reversed(list(ops)):
        out = np.kron(out, op)
    return out


def dense_from_label(label, phase=1):
    """Naive dense realization of a Pauli label (character q acts on qubit q)."""
    return phase * kron_chain(PAULI_MATS[ch] for ch in label)


def dense_from_terms(n_qubits, terms):
    """Dense realization of [(coeff, label), ...]."""
    dim = 1 << n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, label in terms:
        out += coeff * dense_from_label(label)
    return out


def naive_jw_annihilation(n_sites, x):
    """chi(x) built directly from per-site matrices: lowering at x, -iZ below."""
    ops = []
    for j in range(n_sites):
        if j < x:
            ops.append(-1j * PAULI_MATS["Z"])
        elif j == x:
            ops.append(LOWERING)
        else:
            ops.append(I2)
    return kron_chain(ops)


def random_label(rng, n_qubits, allow_identity=True):
    chars = "IXYZ" if allow_identity else "XYZ"
    while True:
        label = "".join(rng.choice(list(chars)) for _ in range(n_qubits))
        if allow_identity or set(label) != {"I"}:
            return label


def random_state(rng, n_qubits):
    dim = 1 << n_qubits
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


# Independent transcription of the published N=8 Hamiltonian pieces, used to
# cross-check the package's builders and fixture.
H1_LABELS = (
    ["I" * q + "XX" + "I" * (6 - q) for q in range(7)]
    + ["I" * q + "YY" + "I" * (6 - q) for q in range(7)]
    + ["XZZZZZZX", "YZZZZZZY"]
)
H1_TERMS = [(0.5, label) for label in H1_LABELS]
H2_TERMS = [(0.5, "I" * q + "Z" + "I" * (7 - q)) for q in range(8)]
H3_TERMS = [(0.5 * (-1) ** q, "I" * q + "Z" + "I" * (7 - q)) for q in range(8)]


def dense_n8_hamiltonian(hubble, mass, t):
    """-h1 + (h/2) h2 + (m e^{ht}) h3, realized naively."""
    out = -dense_from_terms(8, H1_TERMS)
    out += (hubble / 2.0) * dense_from_terms(8, H2_TERMS)
    out += mass * np.exp(hubble * t) * dense_from_terms(8, H3_TERMS)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)

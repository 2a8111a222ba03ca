"""N-qubit Pauli strings and weighted Pauli sums in symplectic bitmask form.

A Pauli string is stored as a pair of bitmasks: bit q of ``x_mask`` is set
iff X or Y acts on qubit q, bit q of ``z_mask`` iff Z or Y acts there
(Y = both bits, with the implicit factor i tracked in ``phase``).  Qubit q
corresponds to bit q of the computational basis index, so qubit 0 is the
least significant bit.

Text labels use one character per qubit with position q at character q,
e.g. ``XXIIIIII`` is X(0)X(1) on eight qubits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ResourceLimitError

# Largest register for which dense 2^N x 2^N realizations are allowed.
DENSE_QUBIT_LIMIT = 14

# Coefficients folded from string phases must be real up to this residue.
IMAG_COEFF_TOL = 1e-12

_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)  # i**k for k = 0..3
_PHASE_CANON = {1 + 0j: 1 + 0j, 1j: 1j, -1 + 0j: -1 + 0j, -1j: -1j}

_AXIS_MASKS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_MASKS_AXIS = {v: k for k, v in _AXIS_MASKS.items()}


def _parity_of_masked(indices: np.ndarray, mask: int) -> np.ndarray:
    """Parity of popcount(indices & mask), elementwise, as 0/1 int array."""
    return (np.bitwise_count(indices & np.int64(mask)) & 1).astype(np.int64)


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis times a phase from {1, -1, i, -i}."""

    n_qubits: int
    x_mask: int
    z_mask: int
    phase: complex = 1 + 0j

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        full = (1 << self.n_qubits) - 1
        if not 0 <= self.x_mask <= full:
            raise ValueError(f"x_mask {self.x_mask:#x} out of range for {self.n_qubits} qubits")
        if not 0 <= self.z_mask <= full:
            raise ValueError(f"z_mask {self.z_mask:#x} out of range for {self.n_qubits} qubits")
        if self.phase not in _PHASE_CANON:
            raise ValueError(f"phase must be one of 1, -1, i, -i, got {self.phase!r}")
        object.__setattr__(self, "phase", _PHASE_CANON[self.phase])

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0)

    @classmethod
    def from_label(cls, label: str, phase: complex = 1 + 0j) -> "PauliString":
        """Build from an IXYZ label with character q acting on qubit q."""
        x_mask = z_mask = 0
        for q, ch in enumerate(label):
            try:
                bx, bz = _AXIS_MASKS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli character {ch!r} in label {label!r}") from None
            x_mask |= bx << q
            z_mask |= bz << q
        return cls(len(label), x_mask, z_mask, phase)

    def label(self) -> str:
        return "".join(
            _MASKS_AXIS[(self.x_mask >> q) & 1, (self.z_mask >> q) & 1]
            for q in range(self.n_qubits)
        )

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def y_count(self) -> int:
        return (self.x_mask & self.z_mask).bit_count()

    def key(self) -> tuple[int, int]:
        """Phase-free identity of the string, used for merging and ordering."""
        return (self.z_mask, self.x_mask)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def to_dense(self) -> np.ndarray:
        """Explicit 2^N x 2^N matrix (qubit 0 = least significant index bit)."""
        if self.n_qubits > DENSE_QUBIT_LIMIT:
            raise ResourceLimitError(
                f"dense realization limited to {DENSE_QUBIT_LIMIT} qubits, got {self.n_qubits}"
            )
        dim = 1 << self.n_qubits
        cols = np.arange(dim, dtype=np.int64)
        rows = cols ^ np.int64(self.x_mask)
        signs = 1.0 - 2.0 * _parity_of_masked(cols, self.z_mask)
        vals = (self.phase * _PHASES[self.y_count % 4]) * signs
        mat = np.zeros((dim, dim), dtype=np.complex128)
        mat[rows, cols] = vals
        return mat


def single_site(n_qubits: int, site: int, axis: str) -> PauliString:
    """The string acting with the given Pauli axis on one site, identity elsewhere."""
    if not 0 <= site < n_qubits:
        raise ValueError(f"site {site} out of range for {n_qubits} qubits")
    if axis not in ("X", "Y", "Z"):
        raise ValueError(f"axis must be 'X', 'Y' or 'Z', got {axis!r}")
    bx, bz = _AXIS_MASKS[axis]
    return PauliString(n_qubits, bx << site, bz << site)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Product pq with the accumulated phase; masks are XORed."""
    if p.n_qubits != q.n_qubits:
        raise ValueError(f"qubit count mismatch: {p.n_qubits} vs {q.n_qubits}")
    x3 = p.x_mask ^ q.x_mask
    z3 = p.z_mask ^ q.z_mask
    # Phase bookkeeping for the per-site convention sigma(x,z) = i^(xz) X^x Z^z:
    # reordering Z^z1 past X^x2 yields (-1)^(z1.x2), and each operand/result
    # carries its own i^(xz) normalization.
    exp = (
        (p.x_mask & p.z_mask).bit_count()
        + (q.x_mask & q.z_mask).bit_count()
        + 2 * (p.z_mask & q.x_mask).bit_count()
        - (x3 & z3).bit_count()
    ) % 4
    return PauliString(p.n_qubits, x3, z3, p.phase * q.phase * _PHASES[exp])


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff pq = qp, from the symplectic parity of the masks."""
    if p.n_qubits != q.n_qubits:
        raise ValueError(f"qubit count mismatch: {p.n_qubits} vs {q.n_qubits}")
    anti = (p.x_mask & q.z_mask).bit_count() + (p.z_mask & q.x_mask).bit_count()
    return anti % 2 == 0


class PauliSum:
    """A weighted sum of Pauli strings, merged and deterministically ordered.

    Terms are normalized so every stored string has phase +1, with phases
    folded into the coefficients.  By default coefficients must come out
    real (Hermitian operator); ``require_real=False`` lifts that for
    intermediate results such as commutators.
    """

    __slots__ = ("n_qubits", "terms")

    def __init__(
        self,
        n_qubits: int,
        terms: Iterable[tuple[complex, PauliString]] = (),
        require_real: bool = True,
    ):
        if n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {n_qubits}")
        merged: dict[tuple[int, int], complex] = {}
        for coeff, string in terms:
            if string.n_qubits != n_qubits:
                raise ValueError(
                    f"term on {string.n_qubits} qubits in a {n_qubits}-qubit sum"
                )
            folded = complex(coeff) * string.phase
            key = string.key()
            merged[key] = merged.get(key, 0j) + folded
        out = []
        for (z_mask, x_mask), coeff in merged.items():
            if coeff == 0:
                continue
            if require_real and abs(coeff.imag) > IMAG_COEFF_TOL:
                raise ValueError(
                    f"residual imaginary coefficient {coeff.imag:g} on term "
                    f"(x={x_mask:#x}, z={z_mask:#x})"
                )
            if coeff.imag == 0:
                coeff = coeff.real
            out.append((coeff, PauliString(n_qubits, x_mask, z_mask)))
        out.sort(key=lambda item: item[1].key())
        self.n_qubits = n_qubits
        self.terms = tuple(out)

    @classmethod
    def from_label_terms(
        cls, n_qubits: int, label_terms: Iterable[tuple[float, str]]
    ) -> "PauliSum":
        return cls(
            n_qubits,
            [(coeff, PauliString.from_label(label)) for coeff, label in label_terms],
        )

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.terms == other.terms

    def __hash__(self):
        return hash((self.n_qubits, self.terms))

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        if self.n_qubits != other.n_qubits:
            raise ValueError(f"qubit count mismatch: {self.n_qubits} vs {other.n_qubits}")
        return PauliSum(self.n_qubits, list(self.terms) + list(other.terms), require_real=False)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "PauliSum":
        return PauliSum(
            self.n_qubits,
            [(coeff * scalar, string) for coeff, string in self.terms],
            require_real=False,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "PauliSum":
        return (-1.0) * self

    def __repr__(self) -> str:
        return f"PauliSum(n_qubits={self.n_qubits}, n_terms={len(self.terms)})"

    def to_dense(self) -> np.ndarray:
        """Explicit matrix under the qubit-0-is-LSB convention."""
        if self.n_qubits > DENSE_QUBIT_LIMIT:
            raise ResourceLimitError(
                f"dense realization limited to {DENSE_QUBIT_LIMIT} qubits, got {self.n_qubits}"
            )
        dim = 1 << self.n_qubits
        mat = np.zeros((dim, dim), dtype=np.complex128)
        cols = np.arange(dim, dtype=np.int64)
        for coeff, string in self.terms:
            rows = cols ^ np.int64(string.x_mask)
            signs = 1.0 - 2.0 * _parity_of_masked(cols, string.z_mask)
            mat[rows, cols] += (coeff * _PHASES[string.y_count % 4]) * signs
        return mat

    def to_text(self) -> str:
        """One term per line: ``<coefficient> <label>``, 17 significant digits."""
        lines = []
        for coeff, string in self.terms:
            c = complex(coeff)
            if c.imag != 0:
                raise ValueError("textual form is defined for real-coefficient sums only")
            lines.append(f"{c.real:.17g} {string.label()}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str, n_qubits: int | None = None) -> "PauliSum":
        terms = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            coeff_str, label = line.split()
            if n_qubits is None:
                n_qubits = len(label)
            terms.append((float(coeff_str), PauliString.from_label(label)))
        if n_qubits is None:
            raise ValueError("cannot infer qubit count from empty text")
        return cls(n_qubits, terms)


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """ab - ba as a merged PauliSum; an exact zero has an empty term list.

    The result of commuting two Hermitian sums is anti-Hermitian, so its
    coefficients are imaginary; realness is deliberately not enforced here.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    terms: list[tuple[complex, PauliString]] = []
    for ca, pa in a.terms:
        for cb, pb in b.terms:
            if commutes(pa, pb):
                continue
            # pq = -qp here, so ab - ba contributes 2 ca cb (pa pb).
            terms.append((2 * ca * cb, multiply(pa, pb)))
    return PauliSum(a.n_qubits, terms, require_real=False)

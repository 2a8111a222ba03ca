"""Lattice Hamiltonian of a free staggered fermion in a 1+1D de Sitter universe.

The qubit register holds N staggered sites (site x = qubit x, N even).  In
lattice units (a = 1) the Hamiltonian is

    aH(t) = hopping + h * charge_term + m * e^{h t} * mass_term

with a nearest-neighbour XX+YY hopping part, a boundary string closing the
chain (sign (-1)^{N/2}, Z string over the interior sites), a uniform
(1/4) sum of Z giving the Hubble charge term and a staggered (1/2) sum of
alternating Z giving the mass term.  Constant identity offsets are dropped;
they only contribute a global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import ResourceLimitError
from .pauli import PauliString, PauliSum, single_site

# Dense Jordan-Wigner oracles are memory-guarded.
JW_QUBIT_LIMIT = 12
BILINEAR_QUBIT_LIMIT = 10


@dataclass(frozen=True)
class ModelParams:
    """Lattice size and physical couplings, all dimensionless (a = 1)."""

    n_sites: int
    hubble: float
    mass: float

    def __post_init__(self):
        if self.n_sites < 4 or self.n_sites % 2 != 0:
            raise ValueError(f"n_sites must be an even integer >= 4, got {self.n_sites}")
        for name in ("hubble", "mass"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class HamiltonianParts:
    """Time-independent pieces; time enters only through scalar prefactors."""

    hopping: PauliSum
    charge: PauliSum
    mass_term: PauliSum


def _check_sites(n_sites: int) -> None:
    if n_sites < 4 or n_sites % 2 != 0:
        raise ValueError(f"n_sites must be an even integer >= 4, got {n_sites}")


def _bond(n_sites: int, x: int, axis: str) -> PauliString:
    return single_site(n_sites, x, axis) * single_site(n_sites, x + 1, axis)


def _boundary_string(n_sites: int, axis: str) -> PauliString:
    """axis(0) Z(1) ... Z(N-2) axis(N-1); disjoint supports, so phase +1."""
    label = axis + "Z" * (n_sites - 2) + axis
    return PauliString.from_label(label)


def build_hopping(n_sites: int) -> PauliSum:
    """Kinetic part: -(1/2) sum of bulk XX+YY bonds plus the signed boundary pair."""
    _check_sites(n_sites)
    terms: list[tuple[float, PauliString]] = []
    for x in range(n_sites - 1):
        terms.append((-0.5, _bond(n_sites, x, "X")))
        terms.append((-0.5, _bond(n_sites, x, "Y")))
    boundary_coeff = -((-1) ** (n_sites // 2)) / 2.0
    terms.append((boundary_coeff, _boundary_string(n_sites, "X")))
    terms.append((boundary_coeff, _boundary_string(n_sites, "Y")))
    return PauliSum(n_sites, terms)


def build_charge_term(n_sites: int) -> PauliSum:
    """(1/4) sum of Z(x); the Hubble rate multiplies this at assembly."""
    _check_sites(n_sites)
    return PauliSum(n_sites, [(0.25, single_site(n_sites, x, "Z")) for x in range(n_sites)])


def build_mass_term(n_sites: int) -> PauliSum:
    """(1/2) sum of (-1)^x Z(x), positive at x = 0; m e^{ht} multiplies at assembly."""
    _check_sites(n_sites)
    return PauliSum(
        n_sites,
        [(0.5 * (-1) ** x, single_site(n_sites, x, "Z")) for x in range(n_sites)],
    )


def hamiltonian_parts(n_sites: int) -> HamiltonianParts:
    return HamiltonianParts(
        hopping=build_hopping(n_sites),
        charge=build_charge_term(n_sites),
        mass_term=build_mass_term(n_sites),
    )


def scale_factor(params: ModelParams, t: float) -> float:
    """de Sitter scale factor g(t) = e^{h t}."""
    return math.exp(params.hubble * t)


def hamiltonian_at(params: ModelParams, t: float, parts: HamiltonianParts | None = None) -> PauliSum:
    """aH(t) assembled from the static parts and the scalar prefactors."""
    if not math.isfinite(t) or t < 0:
        raise ValueError(f"t must be finite and >= 0, got {t}")
    if parts is None:
        parts = hamiltonian_parts(params.n_sites)
    return (
        parts.hopping
        + params.hubble * parts.charge
        + params.mass * scale_factor(params, t) * parts.mass_term
    )


def total_sz(n_sites: int) -> PauliSum:
    """The conserved charge sum of sigma^z(x)."""
    return PauliSum(n_sites, [(1.0, single_site(n_sites, x, "Z")) for x in range(n_sites)])


# ---------------------------------------------------------------------------
# Dense Jordan-Wigner oracle machinery
# ---------------------------------------------------------------------------

def jw_fermion_op(n_sites: int, x: int) -> np.ndarray:
    """Dense annihilation operator chi(x) = ((X - iY)/2)(x) prod_{j<x} (-i Z(j)).

    Occupied site <-> qubit in |0>, so chi maps |0> to |1> on its site with
    the Jordan-Wigner string restoring fermionic anticommutation.
    """
    if n_sites > JW_QUBIT_LIMIT:
        raise ResourceLimitError(
            f"dense Jordan-Wigner operators limited to {JW_QUBIT_LIMIT} qubits, got {n_sites}"
        )
    if not 0 <= x < n_sites:
        raise ValueError(f"site {x} out of range for {n_sites} sites")
    if x == 0:
        string_x = single_site(n_sites, 0, "X")
        string_y = single_site(n_sites, 0, "Y")
    else:
        z_label = "".join("Z" if j < x else "I" for j in range(n_sites))
        z_string = PauliString.from_label(z_label)
        string_x = single_site(n_sites, x, "X") * z_string
        string_y = single_site(n_sites, x, "Y") * z_string
    prefactor = (-1j) ** x
    return 0.5 * prefactor * (string_x.to_dense() - 1j * string_y.to_dense())


@dataclass(frozen=True)
class BilinearReport:
    """Max elementwise deviation between fermionic and Pauli realizations."""

    kinetic_dev: float
    charge_dev: float
    mass_dev: float

    def max_dev(self) -> float:
        return max(self.kinetic_dev, self.charge_dev, self.mass_dev)


def verify_bilinears(n_sites: int) -> BilinearReport:
    """Check the three staggered-fermion bilinear identities by dense equality.

    The Dirac field packs two staggered sites per spinor, psi(X) =
    (chi(X), chi(X+1)) at even X, with a forward difference on the upper
    component and a backward difference on the lower one.  Site indices wrap
    periodically (mod N); the boundary string's (-1)^{N/2} sign then emerges
    from the Jordan-Wigner tails on the wrapped terms.
    """
    _check_sites(n_sites)
    if n_sites > BILINEAR_QUBIT_LIMIT:
        raise ResourceLimitError(
            f"bilinear verification limited to {BILINEAR_QUBIT_LIMIT} qubits, got {n_sites}"
        )
    dim = 1 << n_sites
    chi = [jw_fermion_op(n_sites, x) for x in range(n_sites)]
    chi_dag = [op.conj().T for op in chi]

    def chi_wrapped(x: int) -> np.ndarray:
        return chi[x % n_sites]

    # Kinetic bilinear: psibar i gamma^1 d psi with gamma^0 gamma^1 = -i sigma^x
    # in spinor space, i.e. -i (psi0^dag dpsi1 + psi1^dag dpsi0) per Dirac site.
    kinetic_fermi = np.zeros((dim, dim), dtype=np.complex128)
    for X in range(0, n_sites, 2):
        psi0_dag = chi_wrapped(X).conj().T
        psi1_dag = chi_wrapped(X + 1).conj().T
        dpsi0 = chi_wrapped(X + 2) - chi_wrapped(X)
        dpsi1 = chi_wrapped(X + 1) - chi_wrapped(X - 1)
        kinetic_fermi += -1j * (psi0_dag @ dpsi1 + psi1_dag @ dpsi0)
    kinetic_pauli = (-1.0 * build_hopping(n_sites)).to_dense()
    kinetic_dev = float(np.max(np.abs(kinetic_fermi - kinetic_pauli)))

    # Charge bilinear: sum chi^dag chi = sum (1 + Z)/2.
    charge_fermi = sum(chi_dag[x] @ chi[x] for x in range(n_sites))
    charge_pauli = (2.0 * build_charge_term(n_sites)).to_dense()
    charge_pauli += (n_sites / 2.0) * np.eye(dim)
    charge_dev = float(np.max(np.abs(charge_fermi - charge_pauli)))

    # Mass bilinear: sum (-1)^x chi^dag chi = sum (-1)^x (1 + Z)/2; the
    # identity piece cancels for even N.
    mass_fermi = sum((-1) ** x * (chi_dag[x] @ chi[x]) for x in range(n_sites))
    mass_pauli = build_mass_term(n_sites).to_dense()
    mass_dev = float(np.max(np.abs(mass_fermi - mass_pauli)))

    return BilinearReport(kinetic_dev, charge_dev, mass_dev)


# ---------------------------------------------------------------------------
# N = 8 golden fixture, shipped as hand-transcribed text files
# ---------------------------------------------------------------------------

def _load_fixture(name: str) -> PauliSum:
    text = resources.files("dsfermion").joinpath(f"fixtures/{name}.txt").read_text()
    return PauliSum.from_text(text, n_qubits=8)


def n8_fixture() -> tuple[PauliSum, PauliSum, PauliSum]:
    """Hand-transcribed (h1, h2, h3) with aH = -h1 + (h/2) h2 + (m e^{ht}) h3.

    Used only as a golden fixture against the builders; the term lists live
    in fixtures/n8_h*.txt in the textual Pauli-sum format.
    """
    return _load_fixture("n8_h1"), _load_fixture("n8_h2"), _load_fixture("n8_h3")

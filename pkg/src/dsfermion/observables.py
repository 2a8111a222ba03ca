"""Observables of the expanding-universe fermion, from amplitudes or shot counts.

All quantities are diagonal in the Z basis.  A site is occupied when its
qubit is |0> (occupation (1 + sigma^z)/2), and the comoving volume factor
e^{h t} multiplies density, polarization and chiral condensate.  The
two-site density correlation C carries no volume factor; it is the plain
product expectation n(0) n(1) of site occupations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .state import ShotCounts, StateVector, expectation_zdiag


@dataclass(frozen=True)
class ShotErrors:
    """Standard errors of the shot-based estimators (sample std dev / sqrt(shots))."""

    density: tuple[float, ...]
    n_total: float
    correlation_C: float
    polarization_over_e: float
    chiral_c: float
    total_sz: float


@dataclass(frozen=True)
class ObservableRecord:
    """One snapshot's worth of observables."""

    t: float
    density: tuple[float, ...]
    n_total: float
    correlation_C: float
    polarization_over_e: float
    chiral_c: float
    energy: float
    total_sz: float
    norm: float
    source: str  # "exact" or "shots"
    shot_errors: ShotErrors | None = None


def _occupations(n_qubits: int) -> np.ndarray:
    """occ[x, k] = 1 if site x is occupied (bit x of k clear) in basis state k."""
    indices = np.arange(1 << n_qubits, dtype=np.int64)
    bits = (indices[None, :] >> np.arange(n_qubits, dtype=np.int64)[:, None]) & 1
    return 1.0 - bits.astype(np.float64)


def fermion_density(state: StateVector, t: float, hubble: float) -> np.ndarray:
    """Per-site fermion density n(x, t) = e^{h t} <(1 + sigma^z(x))/2>."""
    probs = state.probabilities()
    occ = _occupations(state.n_qubits)
    return math.exp(hubble * t) * (occ @ probs)


def density_correlation(state: StateVector, t: float, hubble: float) -> float:
    """C(t) = <(1 + Z(0) Z(1) + Z(0) + Z(1))/4>, i.e. the joint occupation of
    sites 0 and 1.  No volume factor enters here (t and hubble are accepted
    for interface uniformity)."""
    del t, hubble
    if state.n_qubits < 2:
        raise ValueError("density correlation needs at least two sites")
    occ = _occupations(state.n_qubits)
    return expectation_zdiag(state, occ[0] * occ[1])


def polarization(state: StateVector, t: float, hubble: float) -> float:
    """p(t)/e = e^{h t} sum_x x <(1 + sigma^z(x))/2>."""
    occ = _occupations(state.n_qubits)
    weights = np.arange(state.n_qubits, dtype=np.float64) @ occ
    return math.exp(hubble * t) * expectation_zdiag(state, weights)


def chiral_condensate(state: StateVector, t: float, hubble: float) -> float:
    """c(t) = e^{h t} sum_x (-1)^x <(1 + sigma^z(x))/2>."""
    occ = _occupations(state.n_qubits)
    signs = (-1.0) ** np.arange(state.n_qubits, dtype=np.float64)
    return math.exp(hubble * t) * expectation_zdiag(state, signs @ occ)


def total_charge(state: StateVector) -> float:
    """<sum_x sigma^z(x)>; conserved along the evolution."""
    indices = np.arange(state.dim, dtype=np.int64)
    sz = state.n_qubits - 2.0 * np.bitwise_count(indices).astype(np.float64)
    return expectation_zdiag(state, sz)


def exact_record(
    state: StateVector, t: float, hubble: float, energy: float = math.nan
) -> ObservableRecord:
    """Assemble a snapshot record from exact amplitudes.

    The energy is supplied by the caller (it needs the Hamiltonian, which
    this module deliberately does not know about).
    """
    density = fermion_density(state, t, hubble)
    return ObservableRecord(
        t=t,
        density=tuple(float(v) for v in density),
        n_total=float(density.sum()),
        correlation_C=density_correlation(state, t, hubble),
        polarization_over_e=polarization(state, t, hubble),
        chiral_c=chiral_condensate(state, t, hubble),
        energy=energy,
        total_sz=total_charge(state),
        norm=state.norm(),
        source="exact",
    )


def estimators_from_counts(counts: ShotCounts, t: float, hubble: float) -> ObservableRecord:
    """Replace quantum expectations by shot-frequency averages.

    Standard error per quantity is the sample standard deviation of the
    per-shot values divided by sqrt(shots).  The energy is not measurable in
    a single Z-basis setting and is reported as NaN.
    """
    if not counts.counts:
        raise ValueError("empty shot counts")
    n = counts.n_qubits
    outcomes = np.fromiter(counts.counts.keys(), dtype=np.int64, count=len(counts.counts))
    freqs = np.fromiter(counts.counts.values(), dtype=np.float64, count=len(counts.counts))
    shots = float(counts.shots)
    volume = math.exp(hubble * t)

    bits = (outcomes[None, :] >> np.arange(n, dtype=np.int64)[:, None]) & 1
    occ = 1.0 - bits.astype(np.float64)  # occ[x, outcome]

    positions = np.arange(n, dtype=np.float64)
    signs = (-1.0) ** positions

    # Per-outcome values of each observable; shot statistics weight by counts.
    per_density = volume * occ
    per_n_total = per_density.sum(axis=0)
    per_corr = occ[0] * occ[1] if n >= 2 else np.zeros_like(per_n_total)
    per_polar = volume * (positions @ occ)
    per_chiral = volume * (signs @ occ)
    per_sz = n - 2.0 * np.bitwise_count(outcomes).astype(np.float64)

    def mean_and_err(values: np.ndarray) -> tuple[float, float]:
        mean = float(values @ freqs / shots)
        if shots > 1:
            var = float(((values - mean) ** 2) @ freqs / (shots - 1.0))
        else:
            var = 0.0
        return mean, math.sqrt(max(var, 0.0) / shots)

    dens_stats = [mean_and_err(per_density[x]) for x in range(n)]
    n_total, n_total_err = mean_and_err(per_n_total)
    corr, corr_err = mean_and_err(per_corr)
    polar, polar_err = mean_and_err(per_polar)
    chiral, chiral_err = mean_and_err(per_chiral)
    sz, sz_err = mean_and_err(per_sz)

    return ObservableRecord(
        t=t,
        density=tuple(m for m, _ in dens_stats),
        n_total=n_total,
        correlation_C=corr,
        polarization_over_e=polar,
        chiral_c=chiral,
        energy=math.nan,
        total_sz=sz,
        norm=math.nan,
        source="shots",
        shot_errors=ShotErrors(
            density=tuple(e for _, e in dens_stats),
            n_total=n_total_err,
            correlation_C=corr_err,
            polarization_over_e=polar_err,
            chiral_c=chiral_err,
            total_sz=sz_err,
        ),
    )


def hole_circular_variance(density: np.ndarray, t: float, hubble: float) -> float:
    """Circular variance 1 - |R| of the hole distribution q(x) = 1 - n(x)/e^{ht}.

    Diagnostic added by this package (not one of the published observables):
    the lattice is periodic, so spreading is measured with the directional
    resultant R = sum_x q(x) exp(2 pi i x / N) after normalizing sum q = 1.
    Returns 0 for a hole-free state.
    """
    density = np.asarray(density, dtype=np.float64)
    n = density.shape[0]
    q = 1.0 - density / math.exp(hubble * t)
    total = q.sum()
    if total <= 1e-12:
        return 0.0
    q = q / total
    resultant = abs(np.sum(q * np.exp(2j * np.pi * np.arange(n) / n)))
    return float(1.0 - resultant)

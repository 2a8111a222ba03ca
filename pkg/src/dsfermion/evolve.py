"""First-order Trotter evolution of the time-dependent Hamiltonian, plus a
fine-grained exact propagator used as a verification oracle.

Term order within one Trotter step is fixed: bulk bonds in ascending order
(XX then YY on each bond), then the boundary string pair, then the diagonal
layer of single-qubit Z rotations.  XX and YY on the same bond commute, so
the paired application equals the exponential of their sum exactly; that sum
commutes with the total charge sum of Z, which is why the charge is conserved
along the Trotter trajectory at any step size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .model import (
    HamiltonianParts,
    ModelParams,
    hamiltonian_at,
    hamiltonian_parts,
    scale_factor,
)
from .observables import ObservableRecord, exact_record
from .pauli import PauliString, single_site
from .state import StateVector, apply_pauli_rotation, expectation_pauli_sum

EXACT_QUBIT_LIMIT = 12

TIME_SAMPLINGS = ("left", "midpoint")


@dataclass(frozen=True)
class TrotterPlan:
    """Step count, step size and sampling rule for the time-dependent coefficient."""

    steps: int
    dt: float
    time_sampling: str = "midpoint"
    snapshot_every: int = 1

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.steps > 0 and self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.time_sampling not in TIME_SAMPLINGS:
            raise ValueError(f"time_sampling must be one of {TIME_SAMPLINGS}")
        if self.snapshot_every < 1:
            raise ValueError(f"snapshot_every must be >= 1, got {self.snapshot_every}")

    @classmethod
    def for_total_time(
        cls,
        t_total: float,
        steps: int,
        time_sampling: str = "midpoint",
        snapshot_every: int = 1,
    ) -> "TrotterPlan":
        dt = t_total / steps if steps > 0 else 0.0
        return cls(steps=steps, dt=dt, time_sampling=time_sampling, snapshot_every=snapshot_every)

    @property
    def t_total(self) -> float:
        return self.steps * self.dt

    def sample_time(self, step_index: int) -> float:
        """Time at which e^{h t} is sampled inside step ``step_index``."""
        if self.time_sampling == "left":
            return step_index * self.dt
        return (step_index + 0.5) * self.dt


@dataclass
class Trajectory:
    """Snapshot times, observable records and (optionally) retained states."""

    times: list[float]
    records: list[ObservableRecord]
    states: list[StateVector] | None = None


@dataclass
class TrotterErrorPoint:
    steps: int
    state_distance: float
    observable_deltas: dict[str, float]


class _Schedule:
    """Precomputed term order for one lattice size."""

    def __init__(self, n_sites: int):
        self.n_sites = n_sites
        hopping: list[tuple[PauliString, float]] = []
        for x in range(n_sites - 1):
            xx = single_site(n_sites, x, "X") * single_site(n_sites, x + 1, "X")
            yy = single_site(n_sites, x, "Y") * single_site(n_sites, x + 1, "Y")
            hopping.append((xx, -0.5))
            hopping.append((yy, -0.5))
        boundary_coeff = -((-1) ** (n_sites // 2)) / 2.0
        for axis in ("X", "Y"):
            label = axis + "Z" * (n_sites - 2) + axis
            hopping.append((PauliString.from_label(label), boundary_coeff))
        self.hopping = hopping
        self.z_strings = [single_site(n_sites, x, "Z") for x in range(n_sites)]


def trotter_step(
    state: StateVector,
    params: ModelParams,
    t_sample: float,
    dt: float,
    schedule: _Schedule | None = None,
) -> StateVector:
    """One first-order Trotter step of width dt, sampling e^{h t} at t_sample."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if schedule is None or schedule.n_sites != params.n_sites:
        schedule = _Schedule(params.n_sites)
    for string, coeff in schedule.hopping:
        apply_pauli_rotation(state, string, coeff * dt)
    mass_coeff = params.mass * scale_factor(params, t_sample) / 2.0
    for x, z_string in enumerate(schedule.z_strings):
        theta = dt * (params.hubble / 4.0 + mass_coeff * (-1) ** x)
        apply_pauli_rotation(state, z_string, theta)
    return state


def trotter_evolve(
    initial: StateVector,
    params: ModelParams,
    plan: TrotterPlan,
    keep_states: bool = False,
    parts: HamiltonianParts | None = None,
) -> Trajectory:
    """Iterate trotter_step, recording an observable snapshot every
    ``snapshot_every`` steps (the t = 0 snapshot and the final step are
    always recorded)."""
    if initial.n_qubits != params.n_sites:
        raise ValueError(
            f"state has {initial.n_qubits} qubits but the model has {params.n_sites} sites"
        )
    if parts is None:
        parts = hamiltonian_parts(params.n_sites)
    schedule = _Schedule(params.n_sites)
    state = initial.copy()

    times: list[float] = []
    records: list[ObservableRecord] = []
    states: list[StateVector] | None = [] if keep_states else None

    def snapshot(t_now: float) -> None:
        energy = expectation_pauli_sum(state, hamiltonian_at(params, t_now, parts))
        times.append(t_now)
        records.append(exact_record(state, t_now, params.hubble, energy=energy))
        if states is not None:
            states.append(state.copy())

    snapshot(0.0)
    for k in range(plan.steps):
        trotter_step(state, params, plan.sample_time(k), plan.dt, schedule)
        if (k + 1) % plan.snapshot_every == 0 or k + 1 == plan.steps:
            snapshot((k + 1) * plan.dt)
    return Trajectory(times=times, records=records, states=states)


# ---------------------------------------------------------------------------
# Exact time-ordered propagator oracle
# ---------------------------------------------------------------------------

def _taylor_apply(static: np.ndarray, diag: np.ndarray, vec: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i dt (static + diag)) vec via the Taylor series on the vector.

    Used only when the spectral-norm bound of dt*H is below 1, where the
    series converges to machine precision in a handful of matvecs.
    """
    out = vec.copy()
    term = vec
    for k in range(1, 80):
        term = (-1j * dt / k) * (static @ term + diag * term)
        out = out + term
        if np.linalg.norm(term) < 1e-17:
            return out
    raise RuntimeError("propagator series failed to converge")  # pragma: no cover


def exact_evolve(
    initial: StateVector,
    params: ModelParams,
    t_total: float,
    substeps: int,
    parts: HamiltonianParts | None = None,
) -> StateVector:
    """Midpoint-sampled piecewise-constant propagator.

    Splits [0, t_total] into ``substeps`` intervals and applies
    exp(-i aH(t_mid) dt) on each, t_mid the interval midpoint.  Second-order
    accurate in the substep width; callers double ``substeps`` until two
    successive results agree (see exact_evolve_converged).
    """
    if initial.n_qubits > EXACT_QUBIT_LIMIT:
        raise ResourceLimitError(
            f"exact propagator limited to {EXACT_QUBIT_LIMIT} qubits, got {initial.n_qubits}"
        )
    if initial.n_qubits != params.n_sites:
        raise ValueError(
            f"state has {initial.n_qubits} qubits but the model has {params.n_sites} sites"
        )
    if substeps < 1:
        raise ValueError(f"substeps must be >= 1, got {substeps}")
    if t_total < 0 or not math.isfinite(t_total):
        raise ValueError(f"t_total must be finite and >= 0, got {t_total}")
    if t_total == 0:
        return initial.copy()

    if parts is None:
        parts = hamiltonian_parts(params.n_sites)
    static = (parts.hopping + params.hubble * parts.charge).to_dense()
    mass_diag = np.real(np.diag(parts.mass_term.to_dense()))

    dt = t_total / substeps
    # Cheap upper bound on ||aH|| from the term coefficients.
    coeff_bound = sum(abs(c) for c, _ in parts.hopping.terms)
    coeff_bound += params.hubble * params.n_sites / 4.0
    coeff_bound += params.mass * scale_factor(params, t_total) * params.n_sites / 2.0
    use_series = coeff_bound * dt < 1.0

    vec = initial.amplitudes.copy()
    for k in range(substeps):
        f = params.mass * scale_factor(params, (k + 0.5) * dt)
        diag = f * mass_diag
        if use_series:
            vec = _taylor_apply(static, diag, vec, dt)
        else:
            w, v = np.linalg.eigh(static + np.diag(diag))
            vec = v @ (np.exp(-1j * w * dt) * (v.conj().T @ vec))
    return StateVector(initial.n_qubits, vec)


@dataclass(frozen=True)
class ExactOracleResult:
    state: StateVector
    substeps: int
    delta: float  # norm difference between the last two doublings


def exact_evolve_converged(
    initial: StateVector,
    params: ModelParams,
    t_total: float,
    substeps_start: int = 256,
    tol: float = 1e-10,
    max_substeps: int = 1 << 18,
    parts: HamiltonianParts | None = None,
) -> ExactOracleResult:
    """Double the substep count until successive results differ by < tol in norm."""
    if parts is None:
        parts = hamiltonian_parts(params.n_sites)
    substeps = max(1, substeps_start)
    prev = exact_evolve(initial, params, t_total, substeps, parts)
    while True:
        substeps *= 2
        cur = exact_evolve(initial, params, t_total, substeps, parts)
        delta = float(np.linalg.norm(cur.amplitudes - prev.amplitudes))
        if delta < tol:
            return ExactOracleResult(state=cur, substeps=substeps, delta=delta)
        if substeps >= max_substeps:
            raise RuntimeError(
                f"oracle did not converge below {tol:g} within {max_substeps} substeps "
                f"(last delta {delta:.3e})"
            )
        prev = cur


def state_distance(a: StateVector, b: StateVector) -> float:
    """Norm of the difference after aligning global phases.

    Each state is rotated by the phase of its amplitude at the index where
    ``b`` (the reference) has its largest magnitude.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    j = int(np.argmax(np.abs(b.amplitudes)))
    va, vb = a.amplitudes, b.amplitudes
    pa = va[j] / abs(va[j]) if abs(va[j]) > 1e-12 else 1.0
    pb = vb[j] / abs(vb[j])
    return float(np.linalg.norm(va / pa - vb / pb))


_SCAN_OBSERVABLES = (
    "n_total",
    "correlation_C",
    "polarization_over_e",
    "chiral_c",
    "energy",
    "total_sz",
)


def trotter_error_scan(
    params: ModelParams,
    initial: StateVector,
    t_total: float,
    step_counts: list[int],
    time_sampling: str = "midpoint",
    oracle_substeps_start: int = 256,
    oracle_tol: float = 1e-10,
) -> list[TrotterErrorPoint]:
    """Distance and per-observable deviation of Trotter evolution vs the oracle."""
    if not step_counts:
        raise ValueError("step_counts must not be empty")
    parts = hamiltonian_parts(params.n_sites)
    oracle = exact_evolve_converged(
        initial, params, t_total, substeps_start=oracle_substeps_start, tol=oracle_tol, parts=parts
    )
    ref_energy = expectation_pauli_sum(oracle.state, hamiltonian_at(params, t_total, parts))
    ref_record = exact_record(oracle.state, t_total, params.hubble, energy=ref_energy)

    points = []
    for steps in step_counts:
        plan = TrotterPlan.for_total_time(
            t_total, steps, time_sampling=time_sampling, snapshot_every=max(1, steps)
        )
        trajectory = trotter_evolve(initial, params, plan, keep_states=True, parts=parts)
        final = trajectory.states[-1]
        record = trajectory.records[-1]
        deltas = {
            name: abs(getattr(record, name) - getattr(ref_record, name))
            for name in _SCAN_OBSERVABLES
        }
        points.append(
            TrotterErrorPoint(
                steps=steps,
                state_distance=state_distance(final, oracle.state),
                observable_deltas=deltas,
            )
        )
    return points

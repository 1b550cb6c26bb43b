"""Exact triad evolution and the analytic collision recurrence.

The brute-force path builds the full probe x sample x ancilla state,
conjugates it with e^(-iHt) obtained by eigendecomposition, and partial
traces; it is the oracle every closed form is checked against.

Basis ordering: |i_P j_s k_v> at flat index 4*i + 2*j + k (ancilla index
fastest), so the two states coupled by the interaction sit at indices
1 = |0 0 1> and 6 = |1 1 0>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CollisionParams,
    MachineConfig,
    collision_params,
    stable_logistic,
    thermal_population,
)

#: Flat indices of the swap-coupled pair |0_P 0_s 1_v> and |1_P 1_s 0_v>.
COUPLED_STATES = (1, 6)

# exp(k * log1p(-r)) underflows to exactly 0 once k*|log1p(-r)| exceeds ~745.1;
# past that threshold the transient is numerically at its fixed point.
_UNDERFLOW_EXPONENT = 745.2


def contraction_power(r: float, k: int) -> float:
    """(1 - r)^k in log space, exact at k = 0 and clean at underflow."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return 1.0
    if r >= 1.0:
        return 0.0
    log_q = math.log1p(-r)
    if k * (-log_q) > _UNDERFLOW_EXPONENT:
        return 0.0
    return math.exp(k * log_q)


@dataclass(frozen=True)
class ProbeState:
    """Diagonal probe state: ground population plus a collision counter."""

    p0: float
    k: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p0 <= 1.0:
            raise ValueError("p0 must lie in [0, 1]")
        if self.k < 0:
            raise ValueError("k must be >= 0")


@dataclass(frozen=True)
class TriadState:
    """Populations of the 8-dimensional probe x sample x ancilla space.

    ``rho`` optionally carries the full 8x8 matrix for the oracle path
    with coherences; when absent the state is diagonal by construction.
    """

    populations: np.ndarray
    rho: np.ndarray | None = None

    def __post_init__(self) -> None:
        pops = np.asarray(self.populations, dtype=float)
        if pops.shape != (8,):
            raise ValueError("populations must have shape (8,)")
        if abs(float(pops.sum()) - 1.0) > 1e-12:
            raise ValueError("populations must sum to 1 within 1e-12")
        if np.any(pops < -1e-15):
            raise ValueError("populations must be nonnegative")


def triad_product_state(probe_p0: float, config: MachineConfig) -> TriadState:
    """Diagonal product state  probe (x) sample Gibbs (x) ancilla Gibbs."""
    sample = thermal_population(config.eps_s, config.T)
    ancilla = thermal_population(config.eps_v, config.T_v)
    p_probe = np.array([probe_p0, 1.0 - probe_p0])
    p_sample = np.array([sample.p0, sample.p1])
    p_ancilla = np.array([ancilla.p0, ancilla.p1])
    return TriadState(populations=np.kron(np.kron(p_probe, p_sample), p_ancilla))


def build_triad_hamiltonian(config: MachineConfig, detuning: float = 0.0) -> np.ndarray:
    """Free Hamiltonian plus the three-body swap coupling, as an 8x8 matrix.

    ``detuning`` shifts the ancilla gap by delta away from resonance; the
    default 0 keeps [H_I, H_free] = 0 exactly.
    """
    eps_v = config.eps_v + detuning
    h = np.zeros((8, 8))
    for i in range(2):
        for j in range(2):
            for k in range(2):
                idx = 4 * i + 2 * j + k
                h[idx, idx] = i * config.eps_p + j * config.eps_s + k * eps_v
    a, b = COUPLED_STATES
    h[a, b] = config.eps_I
    h[b, a] = config.eps_I
    return h


def exact_unitary(hamiltonian: np.ndarray, t: float) -> np.ndarray:
    """e^(-i H t) by eigendecomposition of a Hermitian matrix."""
    h = np.asarray(hamiltonian)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("hamiltonian must be square")
    scale = max(1.0, float(np.abs(h).max()))
    if np.abs(h - h.conj().T).max() > 1e-12 * scale:
        raise ValueError("hamiltonian must be Hermitian")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def _reduce_to_probe(rho: np.ndarray) -> np.ndarray:
    """Partial trace of an 8x8 state over sample and ancilla."""
    return np.einsum("ijkljk->il", rho.reshape(2, 2, 2, 2, 2, 2))


def collide_oracle_matrix(
    rho_probe: np.ndarray, config: MachineConfig, t: float | None = None
) -> np.ndarray:
    """One collision on an arbitrary 2x2 probe state, full matrix path.

    Builds rho_P (x) rho_s (x) rho_v, conjugates with the exact unitary at
    time t (default: the full-swap time pi / (2 eps_I)) and partial traces
    back to the probe.
    """
    sample = thermal_population(config.eps_s, config.T)
    ancilla = thermal_population(config.eps_v, config.T_v)
    rho_sv = np.kron(np.diag([sample.p0, sample.p1]), np.diag([ancilla.p0, ancilla.p1]))
    rho = np.kron(np.asarray(rho_probe, dtype=complex), rho_sv)
    if t is None:
        t = config.collision_time
    u = exact_unitary(build_triad_hamiltonian(config), t)
    return _reduce_to_probe(u @ rho @ u.conj().T)


def collide_oracle(probe: ProbeState, config: MachineConfig) -> ProbeState:
    """One collision of a diagonal probe, via the brute-force matrix path."""
    rho_probe = np.diag([probe.p0, 1.0 - probe.p0]).astype(complex)
    reduced = collide_oracle_matrix(rho_probe, config)
    return ProbeState(p0=min(1.0, max(0.0, float(reduced[0, 0].real))), k=probe.k + 1)


def collide_analytic(p0: float, params: CollisionParams) -> float:
    """Closed-form collision map  p0 -> (1 - r) p0 + r p0_inf."""
    return (1.0 - params.r) * p0 + params.r * params.p0_inf


def transient_population(k: int, p00: float, params: CollisionParams) -> float:
    """Probe ground population after k completed collisions.

    p0_k = [1 - (1-r)^k] p0_inf + (1-r)^k p00; k = 0 returns p00.
    """
    q = contraction_power(params.r, k)
    return (1.0 - q) * params.p0_inf + q * p00


def steady_population(config: MachineConfig) -> float:
    """Unique fixed point of the collision map, 1/(1 + e^(eps_s/T - eps_v/T_v))."""
    return collision_params(config).p0_inf


# ----------------------------------------------------------------------
# Samples with more than two levels
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class DLevelSample:
    """Thermal d-level sample with one addressed pair of levels.

    ``levels`` are the energies sorted ascending; the machine couples the
    probe and ancilla to the pair ``(j, j')`` with energies
    levels[j'] > levels[j].
    """

    levels: tuple[float, ...]
    temperature: float
    pair: tuple[int, int]

    def __post_init__(self) -> None:
        d = len(self.levels)
        if d < 2:
            raise ValueError("need at least two levels")
        if any(b < a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be sorted ascending")
        if self.temperature <= 0.0:
            raise ValueError("temperature must be > 0")
        j, jp = self.pair
        if not (0 <= j < d and 0 <= jp < d) or j == jp:
            raise ValueError("pair must be two distinct level indices")
        if self.levels[jp] <= self.levels[j]:
            raise ValueError("pair must be ordered with levels[j'] > levels[j]")

    @property
    def pair_gap(self) -> float:
        j, jp = self.pair
        return self.levels[jp] - self.levels[j]

    def populations(self) -> np.ndarray:
        """Normalized Gibbs populations over all d levels."""
        e = np.asarray(self.levels, dtype=float)
        w = np.exp(-(e - e.min()) / self.temperature)
        return w / w.sum()

    @property
    def pair_weight(self) -> float:
        """w = p_j + p_j', the probability the addressed pair is occupied."""
        pops = self.populations()
        j, jp = self.pair
        return float(pops[j] + pops[jp])


def reduce_d_level(
    sample: DLevelSample, config: MachineConfig
) -> tuple[float, CollisionParams]:
    """Reduce a d-level sample to an effective two-level collision.

    Conditioned on the addressed pair, the sample is a Gibbs qubit with gap
    levels[j'] - levels[j] at the sample temperature; the unconditioned
    one-collision probe map is p0 -> (1 - w r') p0 + w r' p0_inf, i.e. the
    two-level map with rate rescaled by the pair weight w and an unchanged
    fixed point.  Returns (w, two-level CollisionParams).

    The machine must be built on the pair gap: eps_v = pair_gap + eps_p.
    """
    gap = sample.pair_gap
    if abs(config.eps_s - gap) > 1e-9 * max(gap, config.eps_s):
        raise ValueError(
            "config.eps_s must equal the addressed pair gap "
            f"(got {config.eps_s}, pair gap {gap})"
        )
    pair_qubit = thermal_population(gap, sample.temperature)
    ancilla = thermal_population(config.eps_v, config.T_v)
    r_pair = pair_qubit.p1 * ancilla.p0 + pair_qubit.p0 * ancilla.p1
    x = gap / sample.temperature - config.eps_v / config.T_v
    return sample.pair_weight, CollisionParams(r=r_pair, p0_inf=stable_logistic(-x))


def collide_oracle_dlevel(
    p0_probe: float, sample: DLevelSample, config: MachineConfig
) -> float:
    """One collision against a d-level sample, full (4 d)-dimensional oracle.

    Basis index (i_P * d + level) * 2 + k_v; the interaction couples
    |0_P j 1_v> with |1_P j' 0_v> at strength eps_I.
    """
    d = len(sample.levels)
    dim = 4 * d
    j, jp = sample.pair

    def idx(i: int, lvl: int, kv: int) -> int:
        return (i * d + lvl) * 2 + kv

    ancilla = thermal_population(config.eps_v, config.T_v)
    h = np.zeros((dim, dim))
    for i in range(2):
        for lvl in range(d):
            for kv in range(2):
                h[idx(i, lvl, kv), idx(i, lvl, kv)] = (
                    i * config.eps_p + sample.levels[lvl] + kv * config.eps_v
                )
    a, b = idx(0, j, 1), idx(1, jp, 0)
    h[a, b] = config.eps_I
    h[b, a] = config.eps_I

    pops_s = sample.populations()
    pops = np.kron(
        np.kron(np.array([p0_probe, 1.0 - p0_probe]), pops_s),
        np.array([ancilla.p0, ancilla.p1]),
    )
    u = exact_unitary(h, config.collision_time)
    rho = u @ np.diag(pops).astype(complex) @ u.conj().T
    reduced = np.einsum("ijkljk->il", rho.reshape(2, d, 2, 2, d, 2))
    return float(reduced[0, 0].real)

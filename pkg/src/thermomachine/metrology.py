"""Fisher information, sensitivities and signal-to-noise ratios.

Every SNR here is assembled from populations and sensitivities through the
single pipeline  snr = T * sqrt(M * F)  with  F = lambda^2 / (p0 p1); the
equivalent closed forms are kept in the test suite as regression
cross-checks rather than duplicated as code paths.

SNR means T / (estimation error), so larger is better and the Cramer-Rao
bound for M independent binary energy measurements reads
snr <= T * sqrt(M * F).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .core import MachineConfig, collision_params, stable_logistic, thermal_population
from .dynamics import contraction_power

#: Asymptotic ratio between the best two-outcome measurement on k thermal
#: qubits and the full k-qubit energy measurement; emitted alongside ratio
#: tables as a labeled reference line.
SQRT_TWO_OVER_PI = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class SnrPoint:
    """One evaluated SNR with its ingredients.

    ``k`` is the collision count (math.inf for the steady state), ``M`` the
    number of energy measurements.  ``singular`` marks boundary populations
    (p0 in {0, 1}) where the Fisher information diverges and the SNR is
    reported as an explicit undefined variant instead of NaN.
    """

    T: float
    M: int
    k: float
    snr: float
    sensitivity: float
    fisher: float
    singular: bool = False


def fisher_binary(p0: float, sensitivity: float) -> float:
    """Fisher information of a binary outcome: lambda^2 / (p0 (1 - p0)).

    Boundary populations are the signaled singularity (math.inf, never
    NaN); an interior point with zero sensitivity carries no information.
    """
    if p0 <= 0.0 or p0 >= 1.0:
        return math.inf
    if sensitivity == 0.0:
        return 0.0
    return sensitivity * sensitivity / (p0 * (1.0 - p0))


def _fisher_two_sided(p0: float, p1: float, sensitivity: float) -> float:
    # Same quantity as fisher_binary, but with the excited population given
    # explicitly so exponential tails keep full relative precision.
    if p0 <= 0.0 or p1 <= 0.0:
        return math.inf
    if sensitivity == 0.0:
        return 0.0
    return sensitivity * sensitivity / (p0 * p1)


def _snr_point(
    T: float, M: int, k: float, p0: float, p1: float, sensitivity: float
) -> SnrPoint:
    if M < 1:
        raise ValueError("M must be >= 1")
    fisher = _fisher_two_sided(p0, p1, sensitivity)
    singular = math.isinf(fisher)
    snr = math.inf if singular else T * math.sqrt(M * fisher)
    return SnrPoint(
        T=T, M=M, k=k, snr=snr, sensitivity=sensitivity, fisher=fisher, singular=singular
    )


def _steady_pair(config: MachineConfig) -> tuple[float, float]:
    x = config.eps_s / config.T - config.eps_v / config.T_v
    return stable_logistic(-x), stable_logistic(x)


def sensitivity_steady(config: MachineConfig) -> float:
    """d p0_inf / dT = p0_inf p1_inf eps_s / T^2."""
    p0, p1 = _steady_pair(config)
    return p0 * p1 * config.eps_s / (config.T * config.T)


def jump_rate_derivative(config: MachineConfig) -> float:
    """dr/dT = (d p1_s / dT)(p0_v - p1_v); only the sample depends on T."""
    sample = thermal_population(config.eps_s, config.T)
    ancilla = thermal_population(config.eps_v, config.T_v)
    dp1s = sample.p0 * sample.p1 * config.eps_s / (config.T * config.T)
    return dp1s * (ancilla.p0 - ancilla.p1)


def sensitivity_transient(k: int, p00: float, config: MachineConfig) -> float:
    """d p0_k / dT after k completed collisions.

    [1 - (1-r)^k] lambda_inf + k (p0_inf - p00) (dr/dT) (1-r)^(k-1);
    k = 0 returns 0 (the initial state carries no temperature information).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return 0.0
    params = collision_params(config)
    q_k = contraction_power(params.r, k)
    q_km1 = contraction_power(params.r, k - 1)
    lam_inf = sensitivity_steady(config)
    return (1.0 - q_k) * lam_inf + k * (params.p0_inf - p00) * jump_rate_derivative(
        config
    ) * q_km1


def snr_steady(config: MachineConfig, M: int = 1) -> SnrPoint:
    """Steady-state SNR of the probe for M energy measurements.

    The steady sensitivity is p0 p1 eps_s/T^2, so the Fisher information
    reduces to sensitivity * eps_s/T^2 with no population division; deep
    exponential tails therefore underflow to the true limit 0 instead of
    tripping the boundary singularity.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    lam = sensitivity_steady(config)
    fisher = lam * config.eps_s / (config.T * config.T)
    return SnrPoint(
        T=config.T,
        M=M,
        k=math.inf,
        snr=config.T * math.sqrt(M * fisher),
        sensitivity=lam,
        fisher=fisher,
    )


def snr_transient(k: int, p00: float, config: MachineConfig, M: int = 1) -> SnrPoint:
    """Transient SNR after k collisions from initial ground population p00."""
    params = collision_params(config)
    q = contraction_power(params.r, k)
    p0_inf, p1_inf = _steady_pair(config)
    p0 = (1.0 - q) * p0_inf + q * p00
    p1 = (1.0 - q) * p1_inf + q * (1.0 - p00)
    return _snr_point(
        T=config.T,
        M=M,
        k=float(k),
        p0=p0,
        p1=p1,
        sensitivity=sensitivity_transient(k, p00, config),
    )


def snr_thermal(T: float, gap: float, M: int = 1) -> float:
    """SNR of a probe fully thermalized at T with the given gap.

    Equals sqrt(M) e^(-gap/2T) / (1 + e^(-gap/T)) * (gap/T); evaluated via
    the common population/sensitivity pipeline.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    qubit = thermal_population(gap, T)
    lam = qubit.p0 * qubit.p1 * gap / (T * T)
    return T * math.sqrt(M * lam * gap / (T * T))


def max_thermal_snr(
    T: float, M: int = 1, gap_lo: float | None = None, gap_hi: float | None = None
) -> tuple[float, float]:
    """Maximize the thermal SNR over the probe gap at fixed T.

    Golden-section search on the unimodal gap profile; returns
    (gap_at_max, max_snr).
    """
    lo = gap_lo if gap_lo is not None else 1e-3 * T
    hi = gap_hi if gap_hi is not None else 20.0 * T
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = snr_thermal(T, c, M), snr_thermal(T, d, M)
    for _ in range(200):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = snr_thermal(T, c, M)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = snr_thermal(T, d, M)
        if b - a < 1e-12 * max(1.0, b):
            break
    gap = 0.5 * (a + b)
    return gap, snr_thermal(T, gap, M)


@dataclass(frozen=True)
class NoisyAncillaSpec:
    """Relative error on the ancilla bath temperature used for gap tuning.

    ``sign`` is +1 when the estimate overshoots (T_v (1 + delta)) and -1
    when it undershoots.  delta_Tv_rel <= 1/2 keeps the undershoot peak
    inside the prior interval.
    """

    delta_Tv_rel: float
    sign: int = 1

    def __post_init__(self) -> None:
        if self.delta_Tv_rel < 0.0:
            raise ValueError("delta_Tv_rel must be >= 0")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


def _mistuned_config(config: MachineConfig, noisy: NoisyAncillaSpec) -> MachineConfig:
    """Config whose ancilla gap was tuned with the erroneous T_v estimate."""
    tv_est = config.T_v * (1.0 + noisy.sign * noisy.delta_Tv_rel)
    eps_p = config.eps_s * (tv_est - config.T_prior) / config.T_prior
    if eps_p < 0.0:
        raise ValueError("mistuned ancilla gap falls below the sample gap")
    return replace(config, eps_p=eps_p)


def snr_noisy_ancilla(
    config: MachineConfig, noisy: NoisyAncillaSpec, M: int = 1
) -> SnrPoint:
    """Steady SNR when the tuning used T_v (1 +/- delta) instead of T_v.

    Realized as the ordinary steady SNR of the mistuned machine, so the
    exponent becomes (eps_s/T) x_T with x_T = 1 - (T/T_prior)(1 +/- delta).
    """
    return snr_steady(_mistuned_config(config, noisy), M)


def noisy_peak(
    config: MachineConfig, noisy: NoisyAncillaSpec, M: int = 1
) -> tuple[float, SnrPoint]:
    """Temperature and value of the x_T = 0 peak of the noisy-tuned SNR.

    The peak sits at T = T_prior / (1 +/- delta) with value
    (sqrt(M)/2)(1 +/- delta) eps_s / T_prior.
    """
    t_peak = config.T_prior / (1.0 + noisy.sign * noisy.delta_Tv_rel)
    point = snr_noisy_ancilla(replace(config, T=t_peak), noisy, M)
    return t_peak, point


def noisy_peak_in_prior(config: MachineConfig, noisy: NoisyAncillaSpec) -> bool:
    """Whether the x_T = 0 peak lies in the prior interval (0, 2 T_prior].

    The right endpoint counts as inside: the undershoot branch at
    delta = 1/2 peaks exactly at 2 T_prior.
    """
    t_peak = config.T_prior / (1.0 + noisy.sign * noisy.delta_Tv_rel)
    return 0.0 < t_peak <= 2.0 * config.T_prior


def snr_sample_bound(k: int, T: float, eps_s: float) -> float:
    """Best SNR of an energy measurement on k sample qubits directly.

    sqrt(k e^(-eps_s/T)) / (1 + e^(-eps_s/T)) * (eps_s/T); any probe scheme
    that consumed k qubits is bounded by this.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    x = eps_s / T
    e = math.exp(-x)
    return math.sqrt(k * e) / (1.0 + e) * x


def required_interactions(target_snr: float, T: float, eps_s: float) -> int:
    """Smallest k whose k-qubit bound reaches target_snr.

    Closed-form inversion of the sqrt(k) scaling, then an exact adjustment
    against snr_sample_bound itself.
    """
    if target_snr <= 0.0:
        raise ValueError("target_snr must be > 0")
    per_qubit = snr_sample_bound(1, T, eps_s)
    if per_qubit == 0.0:
        raise ValueError("bound vanishes at this gap/temperature")
    k = max(1, math.ceil((target_snr / per_qubit) ** 2 - 1e-9))
    while snr_sample_bound(k, T, eps_s) < target_snr:
        k += 1
    while k > 1 and snr_sample_bound(k - 1, T, eps_s) >= target_snr:
        k -= 1
    return k

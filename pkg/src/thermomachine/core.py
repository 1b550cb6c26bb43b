"""Domain types and thermal building blocks for the collisional thermometer.

Unit conventions: a single shared arbitrary energy unit with k_B = hbar = 1,
so temperatures are energies and all Gibbs exponents are plain ratios.
Exponents are always formed as differences of energy/temperature ratios
(never as ratios of exponentials) and fed through a sign-branched logistic,
so populations stay finite and exact at extreme arguments.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass


class GapOrderingWarning(UserWarning):
    """Ancilla bath colder than twice the prior temperature.

    The tuning rule then yields a probe gap smaller than the sample gap.
    Every closed form below remains valid; only the gap-ordering argument
    for ultracold operation is lost.
    """


def stable_logistic(x: float) -> float:
    """1 / (1 + e^-x), branched on the sign of x to avoid overflow."""
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


@dataclass(frozen=True)
class ThermalQubit:
    """Gibbs populations of a two-level system with gap ``gap`` at ``temperature``."""

    gap: float
    temperature: float
    p0: float
    p1: float


def thermal_population(gap: float, temperature: float) -> ThermalQubit:
    """Thermal ground/excited populations: p0 = 1 / (1 + e^(-gap/T)).

    Parameters
    ----------
    gap : float
        Energy gap, >= 0.
    temperature : float
        Temperature, strictly > 0 (T -> 0 is handled only as analytic
        limits inside the metrology formulas, never as a Gibbs state).
    """
    if temperature <= 0.0:
        raise ValueError(f"temperature must be > 0, got {temperature}")
    if gap < 0.0:
        raise ValueError(f"gap must be >= 0, got {gap}")
    x = gap / temperature
    # Both populations from the logistic in their own scale: 1 - p0 would
    # quantize a cold qubit's excited population at the ulp of 1.
    return ThermalQubit(
        gap=gap, temperature=temperature, p0=stable_logistic(x), p1=stable_logistic(-x)
    )


@dataclass(frozen=True)
class MachineConfig:
    """Full parameter set of one probe/sample/ancilla machine.

    ``eps_s`` and ``eps_p`` are stored; the ancilla gap is the derived
    property ``eps_v = eps_s + eps_p`` so the three-body resonance holds
    exactly by construction.

    Fields
    ------
    eps_s : sample qubit gap (> 0)
    eps_p : probe gap (>= 0)
    T : sample temperature, the estimand (> 0)
    T_v : ancilla bath temperature (> 0)
    T_prior : prior temperature, half the assumed upper bound on T (> 0)
    eps_I : three-body coupling strength (> 0); collision time is pi/(2 eps_I)
    p00 : initial probe ground population in [0, 1]
    """

    eps_s: float
    eps_p: float
    T: float
    T_v: float
    T_prior: float
    eps_I: float = 1.0
    p00: float = 1.0

    def __post_init__(self) -> None:
        if self.eps_s <= 0.0:
            raise ValueError("eps_s must be > 0")
        if self.eps_p < 0.0:
            raise ValueError("eps_p must be >= 0")
        for name in ("T", "T_v", "T_prior"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be > 0")
        if self.eps_I <= 0.0:
            raise ValueError("eps_I must be > 0")
        if not 0.0 <= self.p00 <= 1.0:
            raise ValueError("p00 must lie in [0, 1]")

    @property
    def eps_v(self) -> float:
        """Ancilla gap; equals eps_s + eps_p exactly (resonance)."""
        return self.eps_s + self.eps_p

    @property
    def collision_time(self) -> float:
        """Duration of one full-swap collision, pi / (2 eps_I)."""
        return math.pi / (2.0 * self.eps_I)


def tune_config(
    eps_s: float,
    T: float,
    T_prior: float,
    T_v: float,
    eps_I: float = 1.0,
    p00: float = 1.0,
    strict: bool = False,
) -> MachineConfig:
    """Build a machine with the ancilla gap set by the prior-temperature rule.

    The ancilla gap is tuned to eps_v = (T_v / T_prior) * eps_s, hence
    eps_p = eps_s * (T_v - T_prior) / T_prior.  T_v >= 2 * T_prior keeps
    eps_p >= eps_s; a smaller bath temperature is flagged with
    :class:`GapOrderingWarning` (or raises when ``strict``).
    """
    if T_prior <= 0.0 or T_v <= 0.0:
        raise ValueError("T_prior and T_v must be > 0")
    if T_v < 2.0 * T_prior:
        msg = (
            f"T_v = {T_v} < 2 * T_prior = {2.0 * T_prior}: "
            "probe gap falls below the sample gap"
        )
        if strict:
            raise ValueError(msg)
        warnings.warn(msg, GapOrderingWarning, stacklevel=2)
    eps_p = eps_s * (T_v - T_prior) / T_prior
    if eps_p < 0.0:
        raise ValueError("tuning rule requires T_v >= T_prior")
    return MachineConfig(
        eps_s=eps_s, eps_p=eps_p, T=T, T_v=T_v, T_prior=T_prior, eps_I=eps_I, p00=p00
    )


@dataclass(frozen=True)
class CollisionParams:
    """The pair (r, p0_inf) that fully determines the probe dynamics.

    r is the per-collision jump rate and p0_inf the steady ground
    population; the probe map is p0 -> (1 - r) p0 + r p0_inf.
    """

    r: float
    p0_inf: float


def collision_params(config: MachineConfig) -> CollisionParams:
    """Jump rate and fixed point of the collision map for ``config``.

    r = p1_s p0_v + p0_s p1_v from the sample and ancilla Gibbs states;
    p0_inf = 1 / (1 + e^(eps_s/T - eps_v/T_v)).
    """
    sample = thermal_population(config.eps_s, config.T)
    ancilla = thermal_population(config.eps_v, config.T_v)
    r = sample.p1 * ancilla.p0 + sample.p0 * ancilla.p1
    x = config.eps_s / config.T - config.eps_v / config.T_v
    return CollisionParams(r=r, p0_inf=stable_logistic(-x))

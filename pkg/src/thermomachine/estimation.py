"""Monte Carlo measurement simulation and maximum-likelihood inversion.

Random number contract
----------------------
All randomness comes from numpy's Philox 4x64 counter-based generator.  A
measurement record is produced by drawing one uniform per measurement and
counting ground outcomes (u < p0), i.e. plain Bernoulli inversion, so a
given (p0, M, seed) triple yields the same counts on every platform that
runs the same numpy stream.  Per-trial seeds are split from the master
seed as  SeedSequence(master, spawn_key=(trial,)) -> first uint64, which
makes trials independent of execution order and safe to run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .core import MachineConfig, collision_params, stable_logistic
from .dynamics import steady_population, transient_population
from .metrology import snr_steady, snr_transient

#: Fixed default master seed so bare invocations are reproducible.
DEFAULT_SEED = 0x5EED

#: Lower edge of the search interval, as a fraction of its upper edge; the
#: open end T -> 0 of the prior interval is represented by this point.
_INTERVAL_FLOOR = 1e-12

#: Empirical CRB checks are only meaningful for M >= this (ML regularity).
SMALL_M_THRESHOLD = 1000


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome counts of M probe energy measurements at fixed p0."""

    m0: int
    M: int
    seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.m0 <= self.M:
            raise ValueError("need 0 <= m0 <= M")


@dataclass(frozen=True)
class EstimationReport:
    """Aggregate of a simulate/estimate study.

    ``empirical_snr`` is T_true / sample standard deviation of the
    estimates (the statistical-spread reading of the error), ``rmse`` the
    root-mean-square error against T_true for transparency, and
    ``crb_snr`` the Cramer-Rao prediction at the same (model, M).
    """

    t_hat_mean: float
    t_hat_std: float
    rmse: float
    empirical_snr: float
    crb_snr: float
    trials: int
    clamped_fraction: float
    small_m_warning: bool = False
    singular: bool = False


def trial_seed(master_seed: int, trial: int) -> int:
    """Per-trial 64-bit seed split from the master seed (documented above)."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(trial,))
    return int(ss.generate_state(1, np.uint64)[0])


def sample_measurements(p0: float, M: int, seed: int) -> MeasurementRecord:
    """Draw m0 ~ Binomial(M, p0) from the Philox stream keyed by ``seed``."""
    if M < 1:
        raise ValueError("M must be >= 1")
    if not 0.0 <= p0 <= 1.0:
        raise ValueError("p0 must lie in [0, 1]")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    m0 = int(np.count_nonzero(rng.random(M) < p0))
    return MeasurementRecord(m0=m0, M=M, seed=seed)


def ml_estimate(
    record: MeasurementRecord,
    model: Callable[[float], float],
    interval: tuple[float, float],
    monotone: bool = True,
    grid_points: int = 1024,
) -> tuple[float, bool]:
    """Maximum-likelihood temperature from a measurement record.

    ``model`` maps T to the ground probability p0(T) on ``interval``; the
    estimate is clamped to the interval endpoints when the likelihood peaks
    outside, and the flag in the returned (T_hat, clamped) pair says so.

    With ``monotone`` (the steady-state model) the ML condition
    p0(T_hat) = m0/M is solved by bisection to 5e-13 of the interval width
    (1e-12 T_prior on the canonical prior interval (0, 2 T_prior));
    otherwise (transient models) the binomial log-likelihood is maximized
    on a dense grid and refined by golden-section search.
    """
    lo, hi = interval
    if not 0.0 < lo < hi:
        raise ValueError("interval must satisfy 0 < lo < hi")
    if monotone:
        return _invert_monotone(record, model, lo, hi)
    return _maximize_likelihood(record, model, lo, hi, grid_points)


def _invert_monotone(
    record: MeasurementRecord,
    model: Callable[[float], float],
    lo: float,
    hi: float,
) -> tuple[float, bool]:
    target = record.m0 / record.M
    p_lo, p_hi = model(lo), model(hi)
    increasing = p_hi >= p_lo
    if record.m0 == 0 or record.m0 == record.M:
        # Boundary counts: the residual keeps one sign on the whole interval.
        want_high_p0 = record.m0 == record.M
        return (hi, True) if want_high_p0 == increasing else (lo, True)
    f_lo = p_lo - target
    f_hi = p_hi - target
    if not increasing:
        f_lo, f_hi = -f_lo, -f_hi
    if f_lo > 0.0:
        return lo, True
    if f_hi < 0.0:
        return hi, True
    a, b = lo, hi
    tol = 5e-13 * (hi - lo)
    while b - a > tol:
        mid = 0.5 * (a + b)
        f_mid = model(mid) - target
        if not increasing:
            f_mid = -f_mid
        if f_mid <= 0.0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b), False


def _log_likelihood(record: MeasurementRecord, p0: float) -> float:
    m0, m1 = record.m0, record.M - record.m0
    ll = 0.0
    if m0 > 0:
        if p0 <= 0.0:
            return -math.inf
        ll += m0 * math.log(p0)
    if m1 > 0:
        if p0 >= 1.0:
            return -math.inf
        ll += m1 * math.log1p(-p0)
    return ll


def _maximize_likelihood(
    record: MeasurementRecord,
    model: Callable[[float], float],
    lo: float,
    hi: float,
    grid_points: int,
) -> tuple[float, bool]:
    grid = np.linspace(lo, hi, grid_points)
    values = [_log_likelihood(record, model(t)) for t in grid]
    best = int(np.argmax(values))
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, grid_points - 1)]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc = _log_likelihood(record, model(c))
    fd = _log_likelihood(record, model(d))
    for _ in range(120):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = _log_likelihood(record, model(c))
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = _log_likelihood(record, model(d))
        if b - a < 1e-13 * (hi - lo):
            break
    t_hat = 0.5 * (a + b)
    edge = 2e-12 * (hi - lo)
    clamped = t_hat <= lo + edge or t_hat >= hi - edge
    if clamped:
        t_hat = lo if t_hat <= lo + edge else hi
    return t_hat, clamped


def steady_model(config: MachineConfig) -> Callable[[float], float]:
    """T -> steady ground population, with all other machine knobs fixed."""

    eps_s, eps_v, t_v = config.eps_s, config.eps_v, config.T_v

    def p0_of(T: float) -> float:
        return stable_logistic(eps_v / t_v - eps_s / T)

    return p0_of


def transient_model(config: MachineConfig, k: int, p00: float) -> Callable[[float], float]:
    """T -> probe ground population after k collisions from p00."""

    def p0_of(T: float) -> float:
        params = collision_params(replace(config, T=T))
        return transient_population(k, p00, params)

    return p0_of


def prior_interval(config: MachineConfig) -> tuple[float, float]:
    """Numerical search interval for the prior knowledge T in (0, 2 T_prior)."""
    hi = 2.0 * config.T_prior
    return _INTERVAL_FLOOR * hi, hi


def empirical_snr_study(
    config: MachineConfig,
    M: int,
    trials: int,
    seed: int = DEFAULT_SEED,
    k: int | None = None,
    p00: float | None = None,
) -> EstimationReport:
    """Run ``trials`` independent simulate/estimate rounds and aggregate.

    ``k`` = None uses the steady-state model (monotone inversion); an
    integer k uses the transient model after k collisions from initial
    ground population ``p00`` (default: the config's).  Identical inputs
    give a bit-identical report.  The empirical spread needs a real
    ensemble, hence the floor on ``trials``.
    """
    if trials < 100:
        raise ValueError("trials must be >= 100")
    if p00 is None:
        p00 = config.p00

    if k is None:
        p_true = steady_population(config)
        model = steady_model(config)
        monotone = True
        crb = snr_steady(config, M)
    else:
        p_true = transient_population(k, p00, collision_params(config))
        model = transient_model(config, k, p00)
        monotone = False
        crb = snr_transient(k, p00, config, M)

    singular = p_true <= 0.0 or p_true >= 1.0
    interval = prior_interval(config)
    estimates = np.empty(trials)
    clamped = 0
    for i in range(trials):
        record = sample_measurements(p_true, M, trial_seed(seed, i))
        t_hat, was_clamped = ml_estimate(record, model, interval, monotone=monotone)
        estimates[i] = t_hat
        clamped += was_clamped

    std = float(estimates.std(ddof=1)) if trials > 1 else 0.0
    rmse = float(np.sqrt(np.mean((estimates - config.T) ** 2)))
    empirical = config.T / std if std > 0.0 else math.inf
    return EstimationReport(
        t_hat_mean=float(estimates.mean()),
        t_hat_std=std,
        rmse=rmse,
        empirical_snr=empirical,
        crb_snr=crb.snr,
        trials=trials,
        clamped_fraction=clamped / trials,
        small_m_warning=M < SMALL_M_THRESHOLD,
        singular=singular,
    )

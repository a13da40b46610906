"""Monte Carlo verification of the analytic growth rates.

Simulation draws waiting times in fixed blocks of 2**16, with block
``b`` seeded by ``SeedSequence(entropy=seed, spawn_key=(b,))``.  Two
consequences the tests rely on:

* results are byte-identical for any worker count, because parallelism
  only distributes whole blocks whose outputs land in disjoint slices
  (or are reduced by order-independent integer counts);
* for a fixed seed, a longer run extends a shorter one -- the first
  draws of a 10**6-round trajectory are exactly the 10**3-round
  trajectory's draws.

One uniform variate is consumed per waiting time, for geometric and
table rules alike.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .gamble import GambleSpec, PlayerState, Table, growth_factor

_BLOCK_SIZE = 1 << 16


class NonpositiveReturnError(ArithmeticError):
    """A log-scale estimate met a round with nonpositive resulting wealth."""


class BankruptTrajectoryError(NonpositiveReturnError):
    """The trajectory hit bankruptcy; growth-rate estimates do not exist."""


@dataclass(frozen=True)
class SimulationConfig:
    """Reproducibility and execution knobs for the samplers.

    Args:
        seed: Nonnegative integer seeding the whole experiment.
        workers: Thread count; any value yields identical results.
    """

    seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ValueError(f"workers must be a positive integer, got {self.workers!r}")


@dataclass(frozen=True)
class SampleStats:
    """A Monte Carlo estimate with its standard error and draw census.

    ``frequencies`` maps each waiting time ``n`` that occurred to its
    number of occurrences; the counts sum to ``count`` and ``max_n`` is
    the largest key.  The census makes the estimate auditable: any
    statistic over the draws can be recomputed from it.
    """

    estimate: float
    stderr: float
    count: int
    frequencies: Dict[int, int]
    max_n: int


def _frequencies_from_counts(counts: np.ndarray) -> Dict[int, int]:
    """Occurrence map ``{n: count}`` from a bincount array, zeros dropped."""
    return {int(n): int(c) for n, c in enumerate(counts) if c and n}


def _frequency_map(draws: np.ndarray) -> Dict[int, int]:
    """Occurrence count per waiting time, keyed by ``n`` in ascending order."""
    return _frequencies_from_counts(np.bincount(draws))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One player's simulated wealth history.

    Wealth is stored in log scale (``log_wealth_path[t]`` is the log
    wealth after ``t`` rounds, index 0 being the starting wealth), which
    survives growth rates whose cumulative effect overflows a double.
    On bankruptcy the path stops at the last positive wealth,
    ``bankrupt_at`` records the fatal 1-based round, and
    ``bankrupt_wealth`` the nonpositive wealth that round produced.
    """

    state: PlayerState
    spec: GambleSpec
    waiting_times: np.ndarray = field(repr=False)
    log_wealth_path: np.ndarray = field(repr=False)
    bankrupt_at: Optional[int] = None
    bankrupt_wealth: Optional[float] = None

    @property
    def rounds(self) -> int:
        """Number of rounds actually played (shorter on bankruptcy)."""
        return len(self.waiting_times)

    @property
    def wealth_path(self) -> np.ndarray:
        """Wealth per round in ordinary units (may overflow to inf)."""
        return np.exp(self.log_wealth_path)

    def growth_factors(self) -> np.ndarray:
        """Exact per-round growth factors implied by the drawn outcomes."""
        lookup = _factor_lookup(self.state, self.spec, int(self.waiting_times.max()))
        return lookup[self.waiting_times - 1]


def _block_generator(seed: int, block: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    return np.random.Generator(np.random.PCG64(seq))


def _block_waiting_times(spec: GambleSpec, seed: int, block: int) -> np.ndarray:
    """All 2**16 waiting times of one block (callers slice a prefix)."""
    gen = _block_generator(seed, block)
    uniforms = gen.random(_BLOCK_SIZE)
    rule = spec.payout_rule
    if isinstance(rule, Table):
        cumulative = np.cumsum([p for p, _ in rule.rows])
        idx = np.searchsorted(cumulative, uniforms, side="right")
        return np.minimum(idx, len(rule.rows) - 1).astype(np.int64) + 1
    # inverse CDF of the geometric law: P(n > k) = (1-p)^k
    shifted = 1.0 - uniforms  # (0, 1]: keeps log finite
    draws = np.ceil(np.log(shifted) / math.log1p(-spec.probability_parameter))
    return np.maximum(draws, 1.0).astype(np.int64)


def draw_waiting_times(
    spec: GambleSpec, count: int, config: Optional[SimulationConfig] = None
) -> np.ndarray:
    """First ``count`` waiting times of the seeded experiment.

    The sequence depends only on the seed (and the gamble's law), never
    on ``count`` or ``workers``: asking for more draws extends the same
    sequence.

    Args:
        spec: Gamble specification.
        count: Number of draws (positive).
        config: Seed and worker count.

    Returns:
        Array of ``count`` waiting times (1-based, dtype int64).
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count!r}")
    config = config or SimulationConfig()
    blocks = (count + _BLOCK_SIZE - 1) // _BLOCK_SIZE
    out = np.empty(count, dtype=np.int64)

    def fill(block: int) -> None:
        lo = block * _BLOCK_SIZE
        hi = min(lo + _BLOCK_SIZE, count)
        out[lo:hi] = _block_waiting_times(spec, config.seed, block)[: hi - lo]

    if config.workers == 1 or blocks == 1:
        for b in range(blocks):
            fill(b)
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            list(pool.map(fill, range(blocks)))
    return out


def _factor_lookup(state: PlayerState, spec: GambleSpec, max_n: int) -> np.ndarray:
    """Growth factor for each waiting time 1..max_n (index n-1)."""
    return np.array(
        [growth_factor(state, spec, n) for n in range(1, max_n + 1)], dtype=np.float64
    )


def simulate_trajectory(
    state: PlayerState,
    spec: GambleSpec,
    rounds: int,
    config: Optional[SimulationConfig] = None,
) -> Trajectory:
    """Play the gamble ``rounds`` times at a fixed ticket price.

    Each round multiplies wealth by an independent copy of the growth
    factor ``(wealth - price + payout) / wealth`` evaluated at the
    starting state, so the log-wealth path is a random walk whose drift
    is the time-average growth rate.  A round whose factor is
    nonpositive bankrupts the player and ends the trajectory.

    Args:
        state: Wealth and ticket price.
        spec: Gamble specification.
        rounds: Number of rounds to attempt (positive).
        config: Seed and worker count.

    Returns:
        A :class:`Trajectory`.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be positive, got {rounds!r}")
    config = config or SimulationConfig()
    draws = draw_waiting_times(spec, rounds, config)
    lookup = _factor_lookup(state, spec, int(draws.max()))
    factors = lookup[draws - 1]

    bankrupt_at: Optional[int] = None
    bankrupt_wealth: Optional[float] = None
    fatal = np.nonzero(factors <= 0.0)[0]
    if fatal.size:
        cut = int(fatal[0])  # 0-based round index of the fatal draw
        bankrupt_at = cut + 1
        draws = draws[: cut + 1]
        surviving = factors[:cut]
    else:
        surviving = factors

    log_path = np.empty(len(surviving) + 1, dtype=np.float64)
    log_path[0] = math.log(state.wealth)
    np.cumsum(np.log(surviving), out=log_path[1:])
    log_path[1:] += log_path[0]
    if bankrupt_at is not None:
        bankrupt_wealth = float(math.exp(log_path[-1]) * lookup[draws[-1] - 1])
    return Trajectory(
        state=state,
        spec=spec,
        waiting_times=draws,
        log_wealth_path=log_path,
        bankrupt_at=bankrupt_at,
        bankrupt_wealth=bankrupt_wealth,
    )


def time_average_estimate(trajectory: Trajectory) -> SampleStats:
    """Realized per-round growth rate of log wealth along one trajectory.

    Args:
        trajectory: A non-bankrupt trajectory of at least two rounds.

    Returns:
        Mean log growth per round, with the standard error of the
        per-round log increments.

    Raises:
        BankruptTrajectoryError: If the trajectory ended in bankruptcy.
    """
    if trajectory.bankrupt_at is not None:
        raise BankruptTrajectoryError(
            f"trajectory went bankrupt at round {trajectory.bankrupt_at}"
        )
    path = trajectory.log_wealth_path
    rounds = len(path) - 1
    if rounds < 2:
        raise ValueError("need at least 2 rounds to estimate a standard error")
    increments = np.diff(path)
    estimate = float((path[-1] - path[0]) / rounds)
    stderr = float(increments.std(ddof=1) / math.sqrt(rounds))
    frequencies = _frequency_map(trajectory.waiting_times)
    return SampleStats(
        estimate=estimate,
        stderr=stderr,
        count=rounds,
        frequencies=frequencies,
        max_n=max(frequencies),
    )


def subinterval_estimate(
    state: PlayerState,
    spec: GambleSpec,
    subintervals: int,
    config: Optional[SimulationConfig] = None,
) -> SampleStats:
    """Growth rate from returns that each act for a fraction of a unit time.

    One time unit is divided into ``q = subintervals`` slices, and ``q``
    freshly sampled returns each govern the wealth for one slice: return
    ``r`` held for ``1/q`` of a unit contributes the per-unit simple
    rate ``q * (r**(1/q) - 1)``, and the estimate is the average
    contribution.  At ``q = 1`` this is the plain rate of return
    ``r - 1`` of a single round -- the quantity whose expectation is the
    ensemble average -- while for large ``q`` it approaches the
    time-average growth rate.  The slide between those limits as ``q``
    grows is the gamble's non-ergodicity made visible on one sample.

    The ``q`` returns are the first ``q`` draws of the seeded
    experiment, the same draws a trajectory from the same config plays.

    Args:
        state: Wealth and ticket price.
        spec: Gamble specification.
        subintervals: Number of slices ``q`` (positive).
        config: Seed and worker count.

    Returns:
        Mean per-unit-time rate over the ``q`` returns and its standard
        error (infinite when ``q == 1``: one return carries no spread).

    Raises:
        NonpositiveReturnError: If any sampled return is nonpositive;
            fractional holding of such a return has no real rate.
    """
    q = subintervals
    if q < 1:
        raise ValueError(f"subintervals must be positive, got {subintervals!r}")
    config = config or SimulationConfig()
    draws = draw_waiting_times(spec, q, config)
    lookup = _factor_lookup(state, spec, int(draws.max()))
    factors = lookup[draws - 1]
    if np.any(factors <= 0.0):
        fatal = int(np.nonzero(factors <= 0.0)[0][0]) + 1
        raise NonpositiveReturnError(
            f"draw {fatal} yields a nonpositive return; no real "
            f"fractional-period rate exists at this ticket price"
        )
    frequencies = _frequency_map(draws)
    max_n = max(frequencies)
    if q == 1:
        return SampleStats(
            estimate=float(factors[0] - 1.0),
            stderr=math.inf,
            count=1,
            frequencies=frequencies,
            max_n=max_n,
        )
    rates = q * np.expm1(np.log(factors) / q)
    return SampleStats(
        estimate=float(rates.mean()),
        stderr=float(rates.std(ddof=1) / math.sqrt(q)),
        count=q,
        frequencies=frequencies,
        max_n=max_n,
    )


def ensemble_average_estimate(
    state: PlayerState,
    spec: GambleSpec,
    samples: int,
    config: Optional[SimulationConfig] = None,
) -> SampleStats:
    """Average single-round growth factor across independent players.

    Every sample is one player playing one round from the same starting
    state; the statistic is the plain arithmetic mean of their growth
    factors, whose log is the ensemble growth rate.  For the classic
    doubling lottery this estimate creeps upward without bound as the
    sample grows -- the expectation it chases is infinite -- while the
    time-average estimate of the same gamble settles near its finite
    analytic value.

    Args:
        state: Wealth and ticket price.
        spec: Gamble specification.
        samples: Number of independent players (at least 2).
        config: Seed and worker count.

    Returns:
        Mean growth factor and its standard error.  When the payout
        distribution has infinite variance (the unbounded doubling
        rule), the reported standard error is unreliable: it is the
        sample standard error of a statistic with no population
        analogue, and it understates how far the mean sits from any
        stable value.
    """
    if samples < 2:
        raise ValueError(f"samples must be at least 2, got {samples!r}")
    config = config or SimulationConfig()
    blocks = (samples + _BLOCK_SIZE - 1) // _BLOCK_SIZE

    def block_counts(block: int) -> np.ndarray:
        lo = block * _BLOCK_SIZE
        hi = min(lo + _BLOCK_SIZE, samples)
        draws = _block_waiting_times(spec, config.seed, block)[: hi - lo]
        return np.bincount(draws)

    if config.workers == 1 or blocks == 1:
        partials = [block_counts(b) for b in range(blocks)]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            partials = list(pool.map(block_counts, range(blocks)))

    width = max(len(c) for c in partials)
    counts = np.zeros(width, dtype=np.int64)
    for c in partials:
        counts[: len(c)] += c
    # counts[n] players drew waiting time n; n = 0 never occurs
    lookup = _factor_lookup(state, spec, width - 1)
    weights = counts[1:].astype(np.float64)
    mean = float(weights @ lookup / samples)
    variance = float(weights @ (lookup - mean) ** 2 / (samples - 1))
    stderr = math.sqrt(variance / samples)
    frequencies = _frequencies_from_counts(counts)
    return SampleStats(
        estimate=mean,
        stderr=stderr,
        count=samples,
        frequencies=frequencies,
        max_n=max(frequencies),
    )

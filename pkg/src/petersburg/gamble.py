"""Gamble specifications and per-outcome quantities.

A gamble is resolved by a waiting time ``n = 1, 2, ...``: the number of
coin tosses up to and including the first heads.  Waiting times follow a
geometric distribution, ``P(n) = (1 - p)**(n - 1) * p``, except for
explicit table gambles which carry their own probabilities.  Each payout
rule maps a waiting time to a dollar payout; the growth factor of a round
is the ratio of wealth after the round to wealth before it.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union


class OutOfSupportError(LookupError):
    """Raised when an outcome index lies beyond a finite payout table."""


@dataclass(frozen=True)
class BernoulliOriginal:
    """Classic doubling payout: waiting time ``n`` pays ``2**(n - 1)``.

    The payout for ``n`` beyond the range of a double saturates to
    ``inf``; series evaluation handles those indices in log space.
    """


@dataclass(frozen=True)
class Menger:
    """Wealth-scaled super-exponential payout: ``n`` pays ``w * (exp(2**n) - 1)``.

    Payouts exceed the double range from ``n = 10`` on and saturate to
    ``inf``; series evaluation handles them in log space.
    """


@dataclass(frozen=True)
class Capped:
    """Doubling payout with a hard bank limit.

    Waiting time ``n`` pays ``2**(n - 1)`` as long as that amount does not
    exceed ``max_payout``.  Runs past the limit are not honoured at all and
    pay nothing: the cap removes the infinite tail of the payout schedule
    rather than clamping it, so a $1e9 cap turns the infinite expected
    payout into exactly $15.
    """

    max_payout: float

    def __post_init__(self) -> None:
        if not (isinstance(self.max_payout, (int, float)) and math.isfinite(self.max_payout)):
            raise ValueError(f"max_payout must be finite, got {self.max_payout!r}")
        if self.max_payout <= 0:
            raise ValueError(f"max_payout must be positive, got {self.max_payout!r}")


@dataclass(frozen=True)
class Table:
    """Explicit finite gamble given as ``(probability, payout)`` rows.

    Probabilities must be strictly positive and sum to one within
    ``probability_tolerance``.  Row ``i`` (1-based) plays the role of
    waiting time ``i``; the geometric parameter of the enclosing spec is
    ignored.
    """

    rows: Tuple[Tuple[float, float], ...]
    probability_tolerance: float = 1e-9

    def __post_init__(self) -> None:
        rows = tuple((float(p), float(m)) for p, m in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise ValueError("payout table must have at least one row")
        total = 0.0
        for i, (p, m) in enumerate(rows, start=1):
            if not (math.isfinite(p) and math.isfinite(m)):
                raise ValueError(f"table row {i} is not finite: ({p!r}, {m!r})")
            if p <= 0.0:
                raise ValueError(f"table row {i} has nonpositive probability {p!r}")
            total += p
        if abs(total - 1.0) > self.probability_tolerance:
            raise ValueError(
                f"table probabilities sum to {total!r}, expected 1 within "
                f"{self.probability_tolerance!r}"
            )


PayoutRule = Union[BernoulliOriginal, Menger, Capped, Table]


@dataclass(frozen=True)
class GambleSpec:
    """A gamble: a payout rule plus the geometric waiting-time parameter.

    Args:
        payout_rule: One of :class:`BernoulliOriginal`, :class:`Menger`,
            :class:`Capped` or :class:`Table`.  Defaults to the classic
            doubling lottery.
        probability_parameter: Per-toss success probability ``p`` of the
            geometric waiting time, strictly between 0 and 1.  Ignored by
            table gambles, which carry their own probabilities.
    """

    payout_rule: PayoutRule = field(default_factory=BernoulliOriginal)
    probability_parameter: float = 0.5

    def __post_init__(self) -> None:
        p = self.probability_parameter
        if not (isinstance(p, (int, float)) and math.isfinite(p) and 0.0 < p < 1.0):
            raise ValueError(f"probability_parameter must lie in (0, 1), got {p!r}")


@dataclass(frozen=True)
class PlayerState:
    """Wealth of the player and the ticket price on offer.

    Args:
        wealth: Current wealth, strictly positive.
        ticket_price: Price of one round, nonnegative.
    """

    wealth: float
    ticket_price: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.wealth) and self.wealth > 0.0):
            raise ValueError(f"wealth must be positive and finite, got {self.wealth!r}")
        if not (math.isfinite(self.ticket_price) and self.ticket_price >= 0.0):
            raise ValueError(
                f"ticket_price must be nonnegative and finite, got {self.ticket_price!r}"
            )


def _check_waiting_time(n: int) -> int:
    if n != int(n) or n < 1:
        raise ValueError(f"waiting time must be a positive integer, got {n!r}")
    return int(n)


def cap_point(max_payout: float) -> int:
    """Largest waiting time whose doubling payout stays within the cap.

    Returns 0 when even the first payout of $1 exceeds the cap.
    """
    if max_payout < 1.0:
        return 0
    k = int(math.floor(math.log2(max_payout))) + 1
    # guard against float rounding of log2 near exact powers of two
    while k >= 1 and math.ldexp(1.0, k - 1) > max_payout:
        k -= 1
    while k < 1075 and math.ldexp(1.0, k) <= max_payout:
        k += 1
    return k


def payout(spec: GambleSpec, n: int, wealth: float = 1.0) -> float:
    """Dollar payout of outcome ``n``.

    Args:
        spec: Gamble specification.
        n: Waiting time (positive integer).
        wealth: Player wealth entering the round; only the wealth-scaled
            Menger rule depends on it.

    Returns:
        The payout in dollars.  Amounts beyond the double range saturate
        to ``inf``.

    Raises:
        OutOfSupportError: If ``n`` lies beyond a finite payout table.
    """
    n = _check_waiting_time(n)
    rule = spec.payout_rule
    if isinstance(rule, Table):
        if n > len(rule.rows):
            raise OutOfSupportError(f"outcome {n} beyond table of {len(rule.rows)} rows")
        return rule.rows[n - 1][1]
    if isinstance(rule, Menger):
        try:
            return wealth * math.expm1(2.0 ** n)
        except OverflowError:
            return math.inf
    try:
        base = math.ldexp(1.0, n - 1)
    except OverflowError:
        base = math.inf
    if isinstance(rule, Capped):
        return base if base <= rule.max_payout else 0.0
    return base


def probability(spec: GambleSpec, n: int) -> float:
    """Probability of outcome ``n`` under the spec's waiting-time law."""
    n = _check_waiting_time(n)
    rule = spec.payout_rule
    if isinstance(rule, Table):
        if n > len(rule.rows):
            raise OutOfSupportError(f"outcome {n} beyond table of {len(rule.rows)} rows")
        return rule.rows[n - 1][0]
    p = spec.probability_parameter
    return p * (1.0 - p) ** (n - 1)


def growth_factor(state: PlayerState, spec: GambleSpec, n: int) -> float:
    """Per-round growth factor ``(wealth - price + payout) / wealth``.

    May be zero or negative when the ticket price exceeds wealth plus the
    round's payout; such a round bankrupts the player.
    """
    m = payout(spec, n, state.wealth)
    return (state.wealth - state.ticket_price + m) / state.wealth


def support_size(spec: GambleSpec) -> Optional[int]:
    """Number of outcomes, or ``None`` for an infinite-support gamble."""
    rule = spec.payout_rule
    return len(rule.rows) if isinstance(rule, Table) else None


def min_payout(spec: GambleSpec, wealth: float = 1.0) -> float:
    """Smallest payout over the gamble's support.

    Determines the bankruptcy threshold on the ticket price: a price of
    ``wealth + min_payout`` or more makes some outcome nonpositive.
    """
    rule = spec.payout_rule
    if isinstance(rule, Table):
        return min(m for _, m in rule.rows)
    if isinstance(rule, Capped):
        # runs past the cap pay nothing
        return 0.0
    return payout(spec, 1, wealth)


def load_table(path: str, probability_tolerance: float = 1e-9) -> Table:
    """Load a payout table from a two-column CSV file.

    The file must start with a header row, followed by
    ``probability,payout`` rows.

    Args:
        path: CSV file path.
        probability_tolerance: Allowed deviation of the probability column
            sum from one.

    Returns:
        The validated :class:`Table`.

    Raises:
        ValueError: On a missing header, malformed rows, or probabilities
            that fail validation.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty table file") from None
        try:
            float(header[0])
        except (ValueError, IndexError):
            pass  # non-numeric first row: the required header
        else:
            raise ValueError(f"{path}: missing header row")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric row {row!r}") from None
    try:
        return Table(tuple(rows), probability_tolerance=probability_tolerance)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None

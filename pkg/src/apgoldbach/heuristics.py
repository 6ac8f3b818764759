"""Probabilistic model for exceptional-set growth.

Representations of an even n are modeled as g2(n) independent draws
landing uniformly in r = floor(2*phi(m)^2/m) admissible residue-pair
classes; the chance that some class stays empty is the coupon-collector
tail P(W_r > g2(n)).  g2(n) itself is approximated by its conjectural
average 2n/(ln n)^2.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .primes import PrimeTable
from .summaries import totient

# Exact rational evaluation of the tail is used inside this range; beyond
# it the alternating inclusion-exclusion sum is evaluated in floats with
# exact (fsum) accumulation.
EXACT_TAIL_MAX_R = 30
EXACT_TAIL_MAX_K = 500


def g2_estimate(n: int) -> float:
    """Average-order estimate 2n/(ln n)^2 for the ordered pair count."""
    if n < 4 or n % 2 != 0:
        raise ValueError(f"n={n} must be even and >= 4")
    return 2 * n / math.log(n) ** 2


def g2_exact(n: int, table: PrimeTable) -> int:
    """Ordered prime pairs (p, q) with p + q = n; 0 for odd n."""
    if n > table.limit:
        raise ValueError(f"n={n} exceeds table limit {table.limit}")
    if n < 4:
        return 0
    ps = table.primes(hi=n - 2)
    mask = table.mask(n)
    return int(mask[n - ps].sum())


@lru_cache(maxsize=None)
def _stirling_row(k: int) -> tuple[int, ...]:
    """Row k of the second-kind Stirling triangle, entries r = 0..k."""
    if k == 0:
        return (1,)
    prev = _stirling_row(k - 1)
    row = [0] * (k + 1)
    for r in range(1, k + 1):
        below = prev[r] if r < k else 0
        row[r] = r * below + prev[r - 1]
    return tuple(row)


def stirling2(k: int, r: int) -> int:
    """Stirling number of the second kind, exact."""
    if k < 0 or r < 0:
        raise ValueError("k and r must be nonnegative")
    if r > k:
        return 0
    return _stirling_row(k)[r]


def bell_number(k: int) -> int:
    """Partition count of a k-set; row sum of the Stirling triangle."""
    return sum(_stirling_row(k))


def harmonic(r: int) -> Fraction:
    if r < 1:
        raise ValueError(f"r={r} must be >= 1")
    return sum((Fraction(1, j) for j in range(1, r + 1)), Fraction(0))


def coupon_expected_wait(r: int) -> float:
    """Expected draws to fill all r boxes: r * H_r."""
    return float(r * harmonic(r))


def coupon_tail(r: int, k: int) -> float:
    """P(W_r > k): probability some box is still empty after k draws.

    Closed form 1 - r! S(k, r) / r^k in exact rationals within the exact
    range; inclusion-exclusion with fsum accumulation beyond it (the
    alternating sum cancels catastrophically in naive float order).
    """
    if r < 1 or k < 0:
        raise ValueError("need r >= 1 and k >= 0")
    if k < r:
        return 1.0
    if r == 1:
        return 0.0
    if r <= EXACT_TAIL_MAX_R and k <= EXACT_TAIL_MAX_K:
        val = 1 - Fraction(math.factorial(r) * stirling2(k, r), r**k)
        return float(val)
    terms = [
        (-1) ** (j + 1) * math.comb(r, j) * (1 - j / r) ** k
        for j in range(1, r)
    ]
    return min(1.0, max(0.0, math.fsum(terms)))


def coupon_tail_inclusion_exclusion(r: int, k: int) -> Fraction:
    """Inclusion-exclusion form of P(W_r > k) in exact rationals.

    Independent route for cross-checking the factorial/Stirling form.
    """
    if r < 1 or k < 0:
        raise ValueError("need r >= 1 and k >= 0")
    return sum(
        ((-1) ** (j + 1) * math.comb(r, j) * Fraction(r - j, r) ** k
         for j in range(1, r)),
        Fraction(0),
    )


@dataclass(frozen=True)
class CouponModel:
    """Model state for a fixed even modulus."""

    m: int
    r: int
    alpha: float
    harmonic_r: float

    @classmethod
    def for_modulus(cls, m: int) -> "CouponModel":
        if m < 2 or m % 2 != 0:
            raise ValueError(f"modulus must be a positive even integer, got {m}")
        r = (2 * totient(m) ** 2) // m
        if r < 1:
            raise ValueError(f"m={m} gives r=0 admissible classes on average")
        return cls(m=m, r=r, alpha=1 - 1 / r, harmonic_r=float(harmonic(r)))

    @property
    def expected_wait(self) -> float:
        return self.r * self.harmonic_r


@dataclass(frozen=True)
class TruncatedSum:
    value: float
    tail_bound: float


def expected_exception_length(m: int, N: int) -> TruncatedSum:
    """Model mean of |E_{a,b,m}|: (1/m) * sum_{n=2..N} alpha^(2n/(ln n)^2).

    The reported tail bound majorizes the discarded n > N terms by a
    geometric series: the exponent f(n) = 2n/(ln n)^2 is increasing and
    convex-minorized by f(N) + f'(N)(n - N) for n >= N >= 10.
    """
    if N < 10:
        raise ValueError(f"N={N} must be >= 10")
    model = CouponModel.for_modulus(m)
    alpha = model.alpha
    if alpha == 0.0:
        return TruncatedSum(value=0.0, tail_bound=0.0)

    n = np.arange(2, N + 1, dtype=np.float64)
    exponents = 2 * n / np.log(n) ** 2
    value = float(np.sum(np.power(alpha, exponents))) / m

    lnN = math.log(N)
    f_N = 2 * N / lnN**2
    fprime_N = 2 * (lnN - 2) / lnN**3
    beta = alpha**fprime_N
    tail = (alpha**f_N) * beta / (1 - beta) / m
    return TruncatedSum(value=value, tail_bound=tail)


@dataclass(frozen=True)
class BoundPrediction:
    m: int
    e_max_bound: float
    expected_length: float


def predict_bounds(m: int, c: float, delta: float) -> BoundPrediction:
    """Model growth predictions: largest exception O(m^2 (ln m)^2) with
    constant c, and mean set length r^(1/delta)/(2m)."""
    if m < 4:
        raise ValueError(f"m={m} must be >= 4")
    if c <= 0:
        raise ValueError(f"c={c} must be positive")
    if not 0 < delta < 1:
        raise ValueError(f"delta={delta} must lie in (0, 1)")
    model = CouponModel.for_modulus(m)
    return BoundPrediction(
        m=m,
        e_max_bound=c * m * m * math.log(m) ** 2,
        expected_length=model.r ** (1 / delta) / (2 * m),
    )


def simulate_coupon(r: int, k: int, trials: int, seed: int) -> float:
    """Monte Carlo estimate of P(W_r > k); reproducible given seed."""
    if r < 1 or k < 0 or trials < 1:
        raise ValueError("need r >= 1, k >= 0, trials >= 1")
    if k == 0:
        return 1.0  # no draws, every box still empty
    rng = np.random.default_rng(seed)
    empty = 0
    chunk = max(1, min(trials, 10**7 // max(k, 1)))
    done = 0
    while done < trials:
        t = min(chunk, trials - done)
        draws = rng.integers(0, r, size=(t, k))
        present = np.zeros((t, r), dtype=bool)
        present[np.arange(t)[:, None], draws] = True
        empty += int((present.sum(axis=1) < r).sum())
        done += t
    return empty / trials

"""Aggregate per-modulus exceptional-set data into table rows and
growth-comparison series.

Averages are kept as exact fractions internally and rounded only at
emission (half away from zero, 3 decimals, trailing zeros trimmed but at
least one decimal kept) so the emitted tables are byte-reproducible.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .partitions import ExceptionalSet


def totient(m: int) -> int:
    return sum(1 for a in range(1, m + 1) if math.gcd(a, m) == 1)


def format_average(x: Fraction) -> str:
    """Round to 3 decimals, half away from zero, trim trailing zeros."""
    scaled = x * 1000
    q = scaled.numerator // scaled.denominator
    if scaled - q >= Fraction(1, 2):
        q += 1
    s = f"{q // 1000}.{q % 1000:03d}".rstrip("0")
    if s.endswith("."):
        s += "0"
    return s


def format_percent(x: Fraction) -> str:
    """One decimal, half away from zero."""
    scaled = x * 1000  # x is a fraction, percent wants x*100 at 1 decimal
    q = scaled.numerator // scaled.denominator
    if scaled - q >= Fraction(1, 2):
        q += 1
    return f"{q // 10}.{q % 10}"


@dataclass(frozen=True)
class FamilyStats:
    """min/avg/max set length, largest exception, and exception counts
    without / with multiplicity, over one family of ordered pairs."""

    l_min: int
    l_avg: Fraction
    l_max: int
    e_max: int
    e_count: int
    e_count_mult: int


@dataclass(frozen=True)
class ModulusSummary:
    """One table row: restricted (b = -a) and unrestricted aggregates."""

    m: int
    restricted: FamilyStats
    unrestricted: FamilyStats

    def csv_row(self) -> str:
        parts = [str(self.m)]
        for fam in (self.restricted, self.unrestricted):
            parts += [
                str(fam.l_min),
                format_average(fam.l_avg),
                str(fam.l_max),
                str(fam.e_max),
                str(fam.e_count),
                str(fam.e_count_mult),
            ]
        return ",".join(parts)


TABLE1_HEADER = (
    "m,L0_min,L0_avg,L0_max,E0_max,e0_m,e0_tilde_m,"
    "L_min,L_avg,L_max,E_max,e_m,e_tilde_m"
)

TABLE2_HEADER = "m,count,percent"


@dataclass(frozen=True)
class EmptyPairCount:
    m: int
    z_m: int
    total_pairs: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.z_m, self.total_pairs)

    def csv_row(self) -> str:
        return f"{self.m},{self.z_m},{format_percent(self.fraction)}"


def _require_complete(sets: dict[tuple[int, int], ExceptionalSet], m: int) -> list[int]:
    units = [a for a in range(1, m) if math.gcd(a, m) == 1]
    missing = [(a, b) for a in units for b in units if (a, b) not in sets]
    if missing:
        raise ValueError(f"missing ordered pairs for m={m}: {missing}")
    return units


def _family_stats(lengths: list[int], maxima: list[int], unions: list[set]) -> FamilyStats:
    union = set().union(*unions) if unions else set()
    return FamilyStats(
        l_min=min(lengths),
        l_avg=Fraction(sum(lengths), len(lengths)),
        l_max=max(lengths),
        e_max=max(maxima) if maxima else 0,
        e_count=len(union),
        e_count_mult=sum(lengths),
    )


def summarize_modulus(
    sets: dict[tuple[int, int], ExceptionalSet], m: int
) -> ModulusSummary:
    """The twelve aggregates over ordered admissible pairs for m."""
    units = _require_complete(sets, m)

    def stats(pairs):
        lengths, maxima, unions = [], [], []
        for key in pairs:
            es = sets[key]
            lengths.append(len(es.elements))
            unions.append(set(es.elements))
            if es.elements:
                maxima.append(es.elements[-1])
        return _family_stats(lengths, maxima, unions)

    all_pairs = [(a, b) for a in units for b in units]
    restricted_pairs = [(a, (-a) % m) for a in units]
    return ModulusSummary(
        m=m,
        restricted=stats(restricted_pairs),
        unrestricted=stats(all_pairs),
    )


def count_empty_pairs(
    sets: dict[tuple[int, int], ExceptionalSet], m: int
) -> EmptyPairCount:
    """Ordered admissible pairs whose exceptional set is empty."""
    units = _require_complete(sets, m)
    z = sum(
        1 for a in units for b in units if not sets[(a, b)].elements
    )
    return EmptyPairCount(m=m, z_m=z, total_pairs=len(units) ** 2)


GROWTH_HEADER = "m,E_max,phi,8m2,16m2,2m2_ln_m,4m2_ln_m"


@dataclass(frozen=True)
class GrowthRow:
    m: int
    e_max: int
    phi: int

    def csv_row(self) -> str:
        m = self.m
        lnm = math.log(m)
        return (
            f"{m},{self.e_max},{self.phi},{8 * m * m},{16 * m * m},"
            f"{2 * m * m * lnm:.6g},{4 * m * m * lnm:.6g}"
        )


def growth_series(summaries: list[ModulusSummary]) -> list[GrowthRow]:
    """Plot-ready growth comparison rows, one per modulus."""
    return [
        GrowthRow(m=s.m, e_max=s.unrestricted.e_max, phi=totient(s.m))
        for s in summaries
    ]

"""Goldbach representations with both primes in arithmetic progressions:
exceptional sets, reproducible tables, and a coupon-collector growth
model."""

from .partitions import (
    AdmissiblePair,
    ExceptionalSet,
    PartitionWitness,
    exceptional_set,
    exceptional_sets_for_modulus,
    find_witness,
)
from .primes import PrimeTable, is_prime, primes_in_class, sieve_primes

__all__ = [
    "AdmissiblePair",
    "ExceptionalSet",
    "PartitionWitness",
    "PrimeTable",
    "exceptional_set",
    "exceptional_sets_for_modulus",
    "find_witness",
    "is_prime",
    "primes_in_class",
    "sieve_primes",
]

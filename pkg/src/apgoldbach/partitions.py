"""Exceptional sets for Goldbach representations with both primes in
fixed residue classes.

The engine is two-staged: a vectorized scan marks every candidate n that
has a representation p + q with a small p (p <= M) drawn from the a-class
and q <= N from the b-class; the few unmarked candidates are then resolved
exhaustively with the deterministic primality test.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .primes import PrimeTable, is_prime, sieve_primes

# Stage-1 primes handled with whole-array ORs before switching to the
# narrow per-candidate scan.
_VECTOR_PHASE_PRIMES = 64


def default_stage1_bound(m: int) -> int:
    """Adaptive bound M for the small prime set; grows with the modulus."""
    return max(10**4, math.ceil(m * math.log(max(m, 3)) ** 2 * 50))


@dataclass(frozen=True, order=True)
class AdmissiblePair:
    """Residues (a, b) coprime to an even modulus m."""

    a: int
    b: int
    m: int

    def __post_init__(self):
        if self.m < 2 or self.m % 2 != 0:
            raise ValueError(
                f"modulus must be a positive even integer, got {self.m} "
                "(double an odd modulus instead)"
            )
        for r in (self.a, self.b):
            if not 0 < r < self.m:
                raise ValueError(f"residue {r} not a canonical unit in (0, {self.m})")
            if math.gcd(r, self.m) != 1:
                raise ValueError(f"residue {r} not coprime to modulus {self.m}")

    @property
    def swapped(self) -> "AdmissiblePair":
        return AdmissiblePair(self.b, self.a, self.m)

    @property
    def target_residue(self) -> int:
        """Residue class of the even numbers this pair can represent."""
        return (self.a + self.b) % self.m


@dataclass(frozen=True)
class PartitionWitness:
    n: int
    p: int
    q: int


@dataclass(frozen=True)
class ExceptionalSet:
    """All even n <= search_limit in the pair's class with no representation."""

    pair: AdmissiblePair
    search_limit: int
    stage1_bound: int
    elements: tuple[int, ...]
    stage1_survivors: int  # candidates that reached stage 2 but are not exceptions
    confirmed: bool

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def max_element(self) -> int:
        return self.elements[-1] if self.elements else 0


def find_witness(
    n: int,
    pair: AdmissiblePair,
    oracle: Callable[[int], bool] = is_prime,
) -> Optional[PartitionWitness]:
    """Representation n = p + q with p = a, q = b (mod m), smallest p.

    Scans p ascending through the a-class; q = n - p automatically lies in
    the b-class.  Returns None when no p <= n - 2 works.
    """
    if n % 2 != 0:
        raise ValueError(f"n={n} must be even")
    if n % pair.m != pair.target_residue:
        raise ValueError(
            f"n={n} is not congruent to a+b={pair.a + pair.b} mod {pair.m}"
        )
    p = pair.a
    while p <= n - 2:
        if oracle(p) and oracle(n - p):
            return PartitionWitness(n=n, p=p, q=n - p)
        p += pair.m
    return None


def _candidate_params(pair: AdmissiblePair, N: int) -> tuple[int, int, int, int]:
    """Candidate n = c + k*m for k0 <= k <= kmax, plus carry t with
    a + b = c + t*m."""
    m = pair.m
    c = pair.target_residue
    t = (pair.a + pair.b - c) // m
    k0 = 1 if c < 2 else 0  # n >= 2; c == 0 means multiples of m
    kmax = (N - c) // m
    return c, t, k0, kmax


def _stage1_unresolved(
    pair: AdmissiblePair, N: int, M: int, table: PrimeTable
) -> list[int]:
    """Candidates n <= N not representable with p <= M; ascending."""
    m = pair.m
    c, t, k0, kmax = _candidate_params(pair, N)
    if kmax < k0:
        return []

    ps = table.primes(hi=N)
    qs = ps[ps % m == pair.b]
    qidx = (qs - pair.b) // m  # q = b + j*m
    qlen = int(qidx[-1]) + 1 if len(qidx) else 0
    qmask = np.zeros(qlen, dtype=bool)
    qmask[qidx] = True

    p_small = ps[(ps % m == pair.a) & (ps <= M)]
    pidx = (p_small - pair.a) // m  # p = a + i*m

    mark = np.zeros(kmax + 1, dtype=bool)
    # marking: p + q = c + (i + j + t)*m, so prime index i shifts qmask by i + t
    head = pidx[:_VECTOR_PHASE_PRIMES]
    for i in head:
        lo = int(i) + t
        if lo > kmax:
            continue
        span = min(qlen, kmax + 1 - lo)
        if span > 0:
            mark[lo : lo + span] |= qmask[:span]

    unresolved = np.flatnonzero(~mark)
    unresolved = unresolved[unresolved >= k0]
    for i in pidx[_VECTOR_PHASE_PRIMES:]:
        if len(unresolved) == 0:
            break
        j = unresolved - int(i) - t
        ok = (j >= 0) & (j < qlen)
        hit = np.zeros(len(unresolved), dtype=bool)
        hit[ok] = qmask[j[ok]]
        unresolved = unresolved[~hit]
    return [int(c + k * m) for k in unresolved]


def exceptional_set(
    pair: AdmissiblePair,
    N: int,
    M: Optional[int] = None,
    table: Optional[PrimeTable] = None,
) -> ExceptionalSet:
    """Compute E_{a,b,m} up to N with the two-stage algorithm."""
    if N < 2:
        raise ValueError(f"search limit N={N} must be >= 2")
    if M is None:
        M = min(default_stage1_bound(pair.m), N)
    if M > N:
        raise ValueError(f"stage-1 bound M={M} exceeds N={N}")
    if table is None:
        table = sieve_primes(N)
    elif table.limit < N:
        raise ValueError(f"table limit {table.limit} below N={N}")

    survivors = _stage1_unresolved(pair, N, M, table)
    elements = [n for n in survivors if find_witness(n, pair) is None]
    return ExceptionalSet(
        pair=pair,
        search_limit=N,
        stage1_bound=M,
        elements=tuple(elements),
        stage1_survivors=len(survivors) - len(elements),
        confirmed=True,
    )


def exceptional_sets_for_modulus(
    m: int,
    N: int,
    M: Optional[int] = None,
    table: Optional[PrimeTable] = None,
) -> dict[tuple[int, int], ExceptionalSet]:
    """E_{a,b,m} for every ordered admissible pair, keyed by (a, b).

    Each unordered pair is resolved once (the element sets are symmetric);
    stage-1 diagnostics are computed per orientation, since the roles of
    the small-prime class and the long class differ.
    """
    if m < 2 or m % 2 != 0:
        raise ValueError(
            f"modulus must be a positive even integer, got {m} "
            "(double an odd modulus instead)"
        )
    if M is None:
        M = min(default_stage1_bound(m), N)
    if table is None:
        table = sieve_primes(N)

    units = [a for a in range(1, m) if math.gcd(a, m) == 1]
    out: dict[tuple[int, int], ExceptionalSet] = {}
    for a in units:
        for b in units:
            if a > b:
                continue
            pair = AdmissiblePair(a, b, m)
            forward = exceptional_set(pair, N, M=M, table=table)
            out[(a, b)] = forward
            if a != b:
                rev = pair.swapped
                rev_survivors = _stage1_unresolved(rev, N, M, table)
                out[(b, a)] = ExceptionalSet(
                    pair=rev,
                    search_limit=N,
                    stage1_bound=M,
                    elements=forward.elements,
                    stage1_survivors=len(rev_survivors) - len(forward.elements),
                    confirmed=True,
                )
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class SurvivorDiagnostic:
    """Stage-1 survivor counts for a whole modulus under several tallies.

    ordered_with_multiplicity sums the per-orientation counts over all
    ordered pairs; distinct_n counts distinct surviving values across
    pairs; unordered_canonical runs stage 1 once per unordered pair with
    the smaller residue as the small-prime class.
    """

    m: int
    N: int
    M: int
    ordered_with_multiplicity: int
    distinct_n: int
    unordered_canonical: int


def stage1_survivor_diagnostic(
    m: int, N: int, M: int, table: Optional[PrimeTable] = None
) -> SurvivorDiagnostic:
    """Count stage-1 survivors (unresolved non-exceptions) for modulus m."""
    if table is None:
        table = sieve_primes(N)
    sets = exceptional_sets_for_modulus(m, N, M=M, table=table)
    ordered = sum(es.stage1_survivors for es in sets.values())
    canonical = sum(
        es.stage1_survivors for (a, b), es in sets.items() if a <= b
    )
    distinct: set[int] = set()
    for (a, b), es in sets.items():
        exceptions = set(es.elements)
        unres = _stage1_unresolved(AdmissiblePair(a, b, m), N, M, table)
        distinct.update(n for n in unres if n not in exceptions)
    return SurvivorDiagnostic(
        m=m,
        N=N,
        M=M,
        ordered_with_multiplicity=ordered,
        distinct_n=len(distinct),
        unordered_canonical=canonical,
    )


# ---------------------------------------------------------------------------
# Residue-constrained verification of the explicit conjectures


@dataclass(frozen=True)
class ViolationReport:
    """Even n in the stated class with no representation p + q where
    p = residue and q = -residue (mod modulus), unless q_residue overrides."""

    modulus: int
    residue: int
    violations: tuple[int, ...]


def _class_violations(
    cands: np.ndarray,
    p_class: np.ndarray,
    q_ok: np.ndarray,
    M: int,
) -> list[int]:
    """Candidates n with no n = p + q, p in p_class, q_ok[q]; ascending.

    p_class is the full sorted list of admissible p up to max(cands); the
    staged scan only uses p <= M for the wide phase, then checks survivors
    against the whole class.
    """
    if len(cands) == 0:
        return []
    p_small = p_class[p_class <= M]

    ok = np.zeros(len(cands), dtype=bool)
    for p in p_small[:_VECTOR_PHASE_PRIMES]:
        q = cands - int(p)
        valid = q >= 2
        hit = np.zeros(len(cands), dtype=bool)
        hit[valid] = q_ok[q[valid]]
        ok |= hit

    pending = cands[~ok]
    for p in p_small[_VECTOR_PHASE_PRIMES:]:
        if len(pending) == 0:
            break
        q = pending - int(p)
        valid = q >= 2
        hit = np.zeros(len(pending), dtype=bool)
        hit[valid] = q_ok[q[valid]]
        pending = pending[~hit]

    violations = []
    p_all = [int(p) for p in p_class]
    for n in pending:
        n = int(n)
        if not any(p <= n - 2 and q_ok[n - p] for p in p_all):
            violations.append(n)
    return violations


def _residue_pair_violations(
    m0: int,
    a: int,
    N: int,
    table: PrimeTable,
    b: Optional[int] = None,
) -> ViolationReport:
    """Violations among even multiples of m0 for p = a, q = b (mod m0).

    b defaults to -a mod m0.  Works for odd and even m0 alike.
    """
    if b is None:
        b = (-a) % m0
    step = m0 if m0 % 2 == 0 else 2 * m0
    first = step  # smallest positive even multiple
    cands = np.arange(first, N + 1, step, dtype=np.int64)

    ps = table.primes(hi=N)
    p_class = ps[ps % m0 == a % m0]
    pm = table.mask(N)
    q_ok = pm.copy()
    q_ok &= (np.arange(N + 1) % m0) == (b % m0)
    M = default_stage1_bound(step)
    return ViolationReport(
        modulus=m0,
        residue=a % m0,
        violations=tuple(_class_violations(cands, p_class, q_ok, M)),
    )


MOD4_CASES = ("i", "ii", "iii", "iv")


def verify_conjecture_mod4(
    case: str, N: int, table: Optional[PrimeTable] = None
) -> tuple[int, ...]:
    """Violations of the stated mod-4 representation case up to N.

    Cases: (i) even n > 4 with p = 3 mod 4 and q unrestricted;
    (ii) n = 0 mod 4 with p = 1, q = 3 mod 4; (iii) n = 2 mod 4 with
    p = q = 3 mod 4; (iv) n = 2 mod 4 with p = q = 1 mod 4.  Cases
    (ii)-(iv) report the small exceptions; case (i) excludes n <= 4 by
    its statement.
    """
    if case not in MOD4_CASES:
        raise ValueError(f"unknown case {case!r}, expected one of {MOD4_CASES}")
    if N < 2:
        raise ValueError(f"N={N} must be >= 2")
    if table is None:
        table = sieve_primes(N)
    pm = table.mask(N)
    ps = table.primes(hi=N)
    residues = np.arange(N + 1) % 4

    if case == "i":
        cands = np.arange(6, N + 1, 2, dtype=np.int64)
        p_class = ps[ps % 4 == 3]
        q_ok = pm.copy()  # q unrestricted
    elif case == "ii":
        cands = np.arange(4, N + 1, 4, dtype=np.int64)
        p_class = ps[ps % 4 == 1]
        q_ok = pm & (residues == 3)
    elif case == "iii":
        cands = np.arange(2, N + 1, 4, dtype=np.int64)
        p_class = ps[ps % 4 == 3]
        q_ok = pm & (residues == 3)
    else:  # iv
        cands = np.arange(2, N + 1, 4, dtype=np.int64)
        p_class = ps[ps % 4 == 1]
        q_ok = pm & (residues == 1)
    return tuple(_class_violations(cands, p_class, q_ok, default_stage1_bound(4)))


SAMPLE_ITEMS = ("i", "ii", "iii", "iv", "v", "vi", "vii")

# (modulus, p-residues checked) per item; item vii takes a caller residue.
_SAMPLE_SPECS = {
    "i": (3, (1,)),
    "ii": (5, (2, 1)),
    "iii": (7, (3,)),
    "iv": (11, (3,)),
    "v": (8, (3,)),
    "vi": (16, (3,)),
}


def verify_conjecture_samples(
    item: str,
    N: int,
    a: Optional[int] = None,
    table: Optional[PrimeTable] = None,
) -> tuple[ViolationReport, ...]:
    """Violations for the sample single-progression conjectures.

    Each item asserts every even multiple of the stated modulus is p + q
    with p = r and q = -r (mod modulus); item (ii) checks both stated
    residues, item (vii) checks a caller-supplied residue mod 60.
    """
    if item not in SAMPLE_ITEMS:
        raise ValueError(f"unknown item {item!r}, expected one of {SAMPLE_ITEMS}")
    if table is None:
        table = sieve_primes(N)

    if item == "vii":
        if a is None:
            raise ValueError("item vii requires a residue a coprime to 60")
        if math.gcd(a, 60) != 1:
            raise ValueError(f"a={a} is not coprime to 60")
        if a % 60 in (1, 59, 11, 49):
            raise ValueError(
                f"a={a} is congruent to +-1 or +-11 mod 60, excluded by the statement"
            )
        return (_residue_pair_violations(60, a, N, table),)

    m0, residues = _SAMPLE_SPECS[item]
    return tuple(_residue_pair_violations(m0, r, N, table) for r in residues)


def verify_ternary(
    N: int, table: Optional[PrimeTable] = None
) -> tuple[int, ...]:
    """Odd n with 5 < n <= N not of the form p + q + r with
    p = q = 2 (mod 3) and r prime.

    Tries r in {3, 5, 7} first (exactly one leaves n - r = 4 mod 6), then
    falls back to a full scan over r.
    """
    if N < 7:
        raise ValueError(f"N={N} must be >= 7")
    if table is None:
        table = sieve_primes(N)
    pm = table.mask(N)
    ps = table.primes(hi=N)

    # representable even k = 1 mod 3 as p + q with p, q = 2 mod 3 (2 included)
    p_class = ps[ps % 3 == 2]
    q_ok = pm & ((np.arange(N + 1) % 3) == 2)
    cands = np.arange(4, N + 1, 6, dtype=np.int64)  # even, = 1 mod 3
    binary_violations = set(
        _class_violations(cands, p_class, q_ok, default_stage1_bound(6))
    )
    rep = np.zeros(N + 1, dtype=bool)
    rep[cands] = True
    for k in binary_violations:
        rep[k] = False

    n_arr = np.arange(7, N + 1, 2, dtype=np.int64)
    good = np.zeros(len(n_arr), dtype=bool)
    for r in (3, 5, 7):
        k = n_arr - r
        valid = k >= 4
        hit = np.zeros(len(n_arr), dtype=bool)
        hit[valid] = rep[k[valid]]
        good |= hit

    violations = []
    small_rs = [int(r) for r in ps]
    for n in n_arr[~good]:
        n = int(n)
        if not any(r <= n - 4 and rep[n - r] for r in small_rs):
            violations.append(n)
    return tuple(violations)

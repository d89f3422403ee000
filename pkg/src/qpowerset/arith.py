"""Integer side: factorization, q-free parts, power residues, witness primes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

import numpy as np

from . import gf
from .errors import DividesInput, EmptySet, InputTooLarge, ZeroElement, ZeroInput

MAX_ABS = 2**63
DEFAULT_WITNESS_BOUND = 10**6
_SCALAR_LIMIT = 1 << 16
_BLOCK = 6 * (1 << 20)


@dataclass(frozen=True)
class FactoredInteger:
    """A nonzero integer as a sign and a prime -> exponent map."""

    sign: int
    factors: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        clean = {}
        for p, e in self.factors.items():
            if e < 0:
                raise ValueError(f"negative exponent for {p}")
            if e and not gf._is_prime(p):
                raise ValueError(f"{p} is not prime")
            if e:
                clean[int(p)] = int(e)
        object.__setattr__(self, "factors", dict(sorted(clean.items())))

    def __hash__(self):
        return hash((self.sign, tuple(self.factors.items())))

    @property
    def value(self) -> int:
        return self.sign * math.prod(p**e for p, e in self.factors.items())

    def __str__(self):
        if not self.factors:
            return str(self.sign)
        body = "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors.items())
        return ("-" if self.sign < 0 else "") + body


@dataclass(frozen=True)
class QFreeClass:
    """The class of an integer under exponent congruence mod q at every prime.

    ``exponents`` holds the reduced exponents in ``[1, q-1]``; the empty map
    is the class of the perfect q-th powers.
    """

    q: int
    exponents: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        gf.check_modulus(self.q)
        red = {int(p): int(e) % self.q for p, e in self.exponents.items()}
        object.__setattr__(self, "exponents", {p: e for p, e in sorted(red.items()) if e})

    def __hash__(self):
        return hash((self.q, tuple(self.exponents.items())))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(self.exponents)

    @property
    def is_trivial(self) -> bool:
        return not self.exponents

    def value(self) -> int:
        """The q-free representative ``rad_q(|n|)`` as an integer."""
        return math.prod(p**e for p, e in self.exponents.items())

    def vector(self, primes: Iterable[int]) -> tuple[int, ...]:
        return tuple(self.exponents.get(p, 0) for p in primes)


Element = Union[int, FactoredInteger, Mapping[int, int]]


def factorize(n: int) -> FactoredInteger:
    """Trial-division factorization of a nonzero ``n`` with ``|n| < 2**63``."""
    if n == 0:
        raise ZeroInput("0 has no factorization")
    if abs(n) >= MAX_ABS:
        raise InputTooLarge(f"|{n}| is not below 2^63")
    sign = 1 if n > 0 else -1
    m = abs(n)
    factors: dict[int, int] = {}
    for p in (2, 3):
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
    d = 5
    step = 2
    while d * d <= m and d < _SCALAR_LIMIT:
        while m % d == 0:
            factors[d] = factors.get(d, 0) + 1
            m //= d
        d += step
        step = 6 - step
    if d * d <= m:
        m = _vector_trial_division(m, d, factors)
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    return FactoredInteger(sign, factors)


def _vector_trial_division(m: int, start: int, factors: dict[int, int]) -> int:
    """Continue trial division from ``start`` in numpy blocks of 6k+-1
    candidates, stopping as soon as the cofactor is prime."""
    steps = np.arange(0, _BLOCK, 6, dtype=np.int64)
    lo = start - start % 6
    while m > 1 and not gf._is_prime(m) and lo <= math.isqrt(m):
        hits = []
        for off in (1, 5):
            cand = steps + (lo + off)
            hits += cand[np.int64(m) % cand == 0].tolist()
        for d in sorted(d for d in hits if d >= start):
            while m % d == 0:
                factors[d] = factors.get(d, 0) + 1
                m //= d
        lo += _BLOCK
    return m


def as_factored(x: Element) -> FactoredInteger:
    """Accept an int, a FactoredInteger or a ``{prime: exponent}`` map."""
    if isinstance(x, FactoredInteger):
        return x
    if isinstance(x, Mapping):
        return FactoredInteger(1, dict(x))
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        if x == 0:
            raise ZeroElement("0 cannot belong to the set")
        return factorize(int(x))
    raise TypeError(f"cannot interpret {x!r} as a nonzero integer")


def rad_q(n: Element, q: int) -> QFreeClass:
    """q-free class of ``n``: exponents reduced mod q, sign discarded."""
    gf.check_modulus(q)
    return QFreeClass(q, as_factored(n).factors)


def is_perfect_qth_power(n: Element, q: int) -> bool:
    return rad_q(n, q).is_trivial


def is_qth_power_residue(b: Element, p: int, q: int) -> bool:
    """Is ``b`` a q-th power modulo the prime ``p``?"""
    gf.check_modulus(q)
    if p == q:
        raise DividesInput("p must differ from q")
    residue = _residue(b, p)
    if residue == 0:
        raise DividesInput(f"{p} divides the input")
    if p % q != 1:
        return True
    return pow(residue, (p - 1) // q, p) == 1


def _residue(b: Element, p: int) -> int:
    if isinstance(b, (int, np.integer)) and not isinstance(b, bool):
        return int(b) % p
    f = as_factored(b)
    r = f.sign % p
    for prime, e in f.factors.items():
        r = r * pow(prime, e, p) % p
    return r


def primes_up_to(bound: int) -> np.ndarray:
    """Sieve of Eratosthenes."""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.nonzero(sieve)[0].astype(np.int64)


@dataclass(frozen=True)
class WitnessReport:
    witness: int | None
    searched_bound: int
    skipped: tuple[int, ...] = ()


def witness_prime(B: Iterable[Element], q: int, bound: int = DEFAULT_WITNESS_BOUND) -> WitnessReport:
    """Smallest prime ``p <= bound``, ``p = 1 mod q``, coprime to every element,
    modulo which no element of ``B`` is a q-th power.

    Primes dividing ``q * prod |b|`` are reported in ``skipped``.
    """
    gf.check_modulus(q)
    if bound < 1:
        raise ValueError("bound must be positive")
    elems = [as_factored(b) for b in B]
    if not elems:
        raise EmptySet("B is empty")
    bad = {q} | {p for f in elems for p in f.factors}
    skipped = tuple(sorted(p for p in bad if p <= bound))
    for p in primes_up_to(bound):
        p = int(p)
        if p % q != 1 or p in bad:
            continue
        if not any(is_qth_power_residue(f, p, q) for f in elems):
            return WitnessReport(p, bound, skipped)
    return WitnessReport(None, bound, skipped)

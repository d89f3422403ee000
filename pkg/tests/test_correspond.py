import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qpowerset import arith, correspond, equiv, projgeom
from qpowerset.arith import FactoredInteger
from qpowerset.correspond import decide_locally, realize, verify_certificate
from qpowerset.errors import (
    CapExceeded,
    DuplicatePrimes,
    EmptySet,
    LengthMismatch,
    PerfectPowerPresent,
    SinglePrimeSupport,
    UnitElement,
    UnsupportedK,
    WrongPrimeCount,
    ZeroExponent,
)

from oracles import blocks, exponent_vectors, locally_by_primes, minimal_blocking, rank_mod
from strategies import exponent_sets

LINE_Q7 = [2, 15, 30, 60, 120, 240, 480, 960]
REDUCED_Q7 = [2, 3, 6, 12, 24, 48, 96, 192]


def brute_report(ints, q):
    """Blocking / minimality / dimension straight from the exponent vectors."""
    primes, vecs = exponent_vectors(ints, q)
    k = len(primes)
    pts = {tuple(x * pow(next(a for a in v if a), q - 2, q) % q for x in v) for v in vecs}
    pts = sorted(pts)
    locally = blocks(pts, q, k)
    minimal = locally and len(pts) == len(ints) and minimal_blocking(pts, q, k)
    return locally, minimal, rank_mod(vecs, q) - 1


def test_cube_line_example():
    rep = decide_locally([2, 3, 6, 18], 3)
    assert (rep.locally, rep.minimal, rep.dimension, rep.trivial) == (True, True, 1, False)
    assert verify_certificate(rep, [2, 3, 6, 18])
    assert brute_report([2, 3, 6, 18], 3) == (True, True, 1)


def test_seventh_power_line_example():
    rep = decide_locally(LINE_Q7, 7)
    assert rep.locally and rep.dimension == 1 and rep.minimal
    reduced, g = correspond.reduce_primes(LINE_Q7, 7, [2, 3])
    assert {arith.rad_q(b, 7) for b in reduced} == {arith.rad_q(b, 7) for b in REDUCED_Q7}
    assert decide_locally(reduced, 7).locally


def test_seventh_power_counterexample():
    B = [2, 3, 4, 5, 6, 10, 15, 25]
    rep = decide_locally(B, 7)
    assert not rep.locally
    assert rep.certificate.kind == "missing-hyperplane"
    y = rep.certificate.data["normal"]
    _, vecs = exponent_vectors(B, 7)
    assert all(sum(a * b for a, b in zip(y, v)) % 7 for v in vecs)
    assert verify_certificate(rep, B)
    assert arith.witness_prime(B, 7, 10**4).witness is not None


def test_fifth_power_factored_example():
    B = [FactoredInteger(1, {2: i, 3: i, 7: 1}) for i in range(1, 5)] + [FactoredInteger(1, {2: 1, 3: 1}), 7]
    rep = decide_locally(B, 5)
    assert rep.locally and rep.dimension == 1 and rep.minimal
    literal = [6, 7, 42, 252, 1512, 18114]
    assert not decide_locally(literal, 5).locally


def test_trivial_set():
    rep = decide_locally([8, 3], 3)
    assert rep.locally and rep.trivial
    assert rep.certificate.kind == "trivial-element"
    assert verify_certificate(rep, [8, 3])


def test_single_prime_support():
    rep = decide_locally([2, 4], 3)
    assert not rep.locally
    assert rep.certificate.kind == "single-prime"
    assert verify_certificate(rep, [2, 4])
    P = rep.certificate.data["witness_prime"]
    assert not locally_by_primes([2, 4], 3, [P])


def test_duplicate_classes_are_not_minimal():
    # 2 and 2*3^3 share a class
    rep = decide_locally([2, 3, 6, 18, 54], 3)
    assert rep.locally and not rep.minimal
    assert rep.classes == 4 and rep.size == 5
    assert verify_certificate(rep, [2, 3, 6, 18, 54])


def test_input_errors():
    with pytest.raises(EmptySet):
        decide_locally([], 3)
    with pytest.raises(UnitElement):
        correspond.point_set_of([1, 2, 3], 3)
    with pytest.raises(PerfectPowerPresent):
        correspond.point_set_of([8, 2, 3], 3)
    with pytest.raises(SinglePrimeSupport):
        correspond.point_set_of([2, 4], 3)
    with pytest.raises(PerfectPowerPresent):
        correspond.skalba_check([27, 2], 3)


@given(exponent_sets(qs=(3, 5, 7), max_k=3, max_size=6))
def test_decision_matches_brute_force(data):
    q, vectors, primes, ints = data
    rep = decide_locally(ints, q)
    if len({p for v in vectors for p, e in zip(primes, v) if e}) < 2:
        assert not rep.locally
        return
    assert (rep.locally, rep.minimal if rep.locally else False, rep.dimension) == brute_report(ints, q)


@given(exponent_sets(qs=(3, 5), max_k=3, max_size=6))
def test_three_oracles_agree(data):
    q, _, _, ints = data
    verdict = decide_locally(ints, q).locally
    assert correspond.skalba_check(ints, q) == verdict
    assert correspond.skalba_check(ints, q, method="direct") == verdict
    assert correspond.covering_check(ints, q) == verdict


@given(exponent_sets(qs=(3, 5, 7), max_k=4, max_size=9))
def test_certificates_replay(data):
    q, _, _, ints = data
    rep = decide_locally(ints, q)
    assert verify_certificate(rep, ints)


def test_tampered_certificate_fails_replay():
    rep = decide_locally([2, 3, 4, 5, 6, 10, 15, 25], 7)
    bad = correspond.Certificate("missing-hyperplane", {"normal": [1, 0, 0]})
    forged = correspond.LocalPowerReport(**{**rep.__dict__, "certificate": bad})
    assert not verify_certificate(forged, [2, 3, 4, 5, 6, 10, 15, 25])


@given(exponent_sets(qs=(3, 5), max_k=3, max_size=6), st.data())
def test_exponentiation_invariance(data, draw):
    q, _, _, ints = data
    c = draw.draw(st.lists(st.integers(1, q - 1), min_size=len(ints), max_size=len(ints)))
    powered = correspond.exponentiate(ints, c, q)
    assert decide_locally(powered, q).locally == decide_locally(ints, q).locally


def test_exponentiate_errors():
    with pytest.raises(ZeroExponent):
        correspond.exponentiate([2, 3], [1, 3], 3)
    with pytest.raises(LengthMismatch):
        correspond.exponentiate([2, 3], [1], 3)
    assert correspond.exponentiate([FactoredInteger(1, {2: 1})], [2], 3) == [FactoredInteger(1, {2: 2})]


@given(exponent_sets(qs=(3, 5), max_k=3, min_size=2, max_size=7), st.integers(0, 2**32))
def test_pgl_invariance(data, seed):
    q, vectors, primes, ints = data
    k = len(primes)
    if k < 2:
        return
    g = equiv.random_pgl(k, q, np.random.default_rng(seed))
    image = [g(v) for v in vectors]
    moved = realize(image, primes)
    assert decide_locally(moved, q).locally == decide_locally(ints, q).locally


@given(exponent_sets(qs=(3, 5), max_k=4, min_size=2, max_size=7))
def test_reduce_primes_replay(data):
    q, vectors, primes, ints = data
    if len({p for v in vectors for p, e in zip(primes, v) if e}) < 2:
        return
    m, s = correspond.point_set_of(ints, q)
    r = projgeom.span_projective_dimension(s) + 1
    targets = [13, 17, 19, 23][:r]
    reduced, g = correspond.reduce_primes(ints, q, targets)
    assert len(reduced) == len(ints) == len(set(reduced))
    assert {p for b in reduced for p in arith.rad_q(b, q).primes} <= set(targets)
    assert len({p for b in reduced for p in arith.rad_q(b, q).primes}) == r
    embedded = [arith.rad_q(b, q).vector(targets) + (0,) * (m.k - r) for b in reduced]
    assert equiv.apply(g, s) == projgeom.PointSet.of(q, embedded, k=m.k)
    assert decide_locally(reduced, q).locally == decide_locally(ints, q).locally


def test_reduce_primes_errors():
    with pytest.raises(WrongPrimeCount):
        correspond.reduce_primes([2, 3, 6, 18], 3, [2, 3, 5])
    with pytest.raises(DuplicatePrimes):
        correspond.reduce_primes([2, 3, 6, 18], 3, [2, 2])


def test_reduce_keeps_already_reduced_classes():
    reduced, g = correspond.reduce_primes([2, 3, 6, 18], 3, [2, 3])
    assert reduced == [2, 3, 6, 18]
    assert g == equiv.PglElement.identity(2, 3)


def test_dimension():
    assert correspond.dimension([2, 3, 6, 18], 3) == 1
    assert correspond.dimension([2, 3, 5], 3) == 2


@pytest.mark.parametrize(
    "q,k,upper",
    [
        (3, 4, 10),
        (5, 4, 26),
        (7, 3, 7 * math.sqrt(7) + 1 - (math.sqrt(7) - 2) * (3 - math.sqrt(7)) * 7 / 4),
        (3, 3, 3 * math.sqrt(3) + 1 - (math.sqrt(3) - 1) * (2 - math.sqrt(3)) * 3 / 4),
        (5, 3, 5 * math.sqrt(5) + 1),
        (3, 6, 28),
    ],
)
def test_size_bounds(q, k, upper):
    b = correspond.size_bounds(q, k)
    assert b.lower_any == q + 1
    assert b.lower_nontrivial == Fraction(3 * (q + 1), 2)
    assert math.isclose(b.upper, upper, rel_tol=1e-12)


def test_size_bounds_errors():
    with pytest.raises(UnsupportedK):
        correspond.size_bounds(3, 2)


def test_skalba_cap():
    with pytest.raises(CapExceeded):
        correspond.skalba_check(list(range(2, 12)), 7)

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import factorint, primerange

from qpowerset import arith
from qpowerset.arith import FactoredInteger
from qpowerset.errors import DividesInput, InputTooLarge, ZeroElement, ZeroInput

from oracles import has_qth_power_mod, locally_by_primes


@given(st.integers(-(2**40), 2**40).filter(bool))
def test_factorize_matches_sympy(n):
    f = arith.factorize(n)
    assert f.value == n
    assert f.factors == {p: e for p, e in factorint(abs(n)).items()}


@pytest.mark.parametrize("n", [2**61 - 1, 2**62, 3**39, (2**31 - 1) * 2])
def test_factorize_large(n):
    f = arith.factorize(n)
    assert f.value == n
    assert f.factors == factorint(n)


def test_factorize_bounds():
    with pytest.raises(ZeroInput):
        arith.factorize(0)
    with pytest.raises(InputTooLarge):
        arith.factorize(2**63)
    with pytest.raises(InputTooLarge):
        arith.factorize(-(2**63))
    assert arith.factorize(-1) == FactoredInteger(-1, {})


def test_factored_integer():
    f = FactoredInteger(1, {2: 4, 3: 4, 7: 1})
    assert f.value == 9072
    assert str(f) == "2^4*3^4*7"
    assert str(FactoredInteger(-1, {5: 1})) == "-5"
    assert hash(f) == hash(FactoredInteger(1, {7: 1, 3: 4, 2: 4}))
    with pytest.raises(ValueError):
        FactoredInteger(1, {4: 1})
    with pytest.raises(ValueError):
        FactoredInteger(2, {})


def test_as_factored():
    assert arith.as_factored({2: 1, 3: 2}).value == 18
    assert arith.as_factored(18) == arith.as_factored({2: 1, 3: 2})
    with pytest.raises(ZeroElement):
        arith.as_factored(0)
    with pytest.raises(TypeError):
        arith.as_factored("18")


@given(st.sampled_from([3, 5, 7]), st.integers(1, 10**9))
def test_rad_q(q, n):
    c = arith.rad_q(n, q)
    assert all(1 <= e < q for e in c.exponents.values())
    assert {p: e % q for p, e in factorint(n).items() if e % q} == c.exponents
    # n / rad_q(n) is a perfect q-th power
    quotient = n // c.value()
    assert n % c.value() == 0
    assert arith.is_perfect_qth_power(quotient, q)
    assert arith.is_perfect_qth_power(n, q) == (round(n ** (1 / q)) ** q == n)


def test_negative_numbers_are_qth_powers_of_negatives():
    assert arith.is_perfect_qth_power(-27, 3)
    assert arith.rad_q(-54, 3) == arith.rad_q(2, 3)


@given(st.sampled_from([3, 5, 7]), st.sampled_from(list(primerange(5, 200))), st.integers(1, 10**6))
def test_residue_matches_table(q, p, b):
    if p == q or b % p == 0:
        return
    assert arith.is_qth_power_residue(b, p, q) == has_qth_power_mod(b, p, q)
    assert arith.is_qth_power_residue(arith.factorize(b), p, q) == has_qth_power_mod(b, p, q)


def test_residue_errors():
    with pytest.raises(DividesInput):
        arith.is_qth_power_residue(14, 7, 3)
    with pytest.raises(DividesInput):
        arith.is_qth_power_residue(2, 3, 3)


@pytest.mark.parametrize("bound", [0, 1, 2, 100, 10_000])
def test_sieve(bound):
    assert arith.primes_up_to(bound).tolist() == list(primerange(2, bound + 1))


def brute_witness(ints, q, bound):
    for p in primerange(2, bound + 1):
        if p % q != 1 or any(n % p == 0 for n in ints):
            continue
        if not any(has_qth_power_mod(n, p, q) for n in ints):
            return p
    return None


@pytest.mark.parametrize(
    "ints,q",
    [([2, 3, 6], 3), ([2], 3), ([2, 3], 5), ([2, 3, 6, 18], 3), ([2, 3, 4, 5, 6, 10, 15, 25], 7), ([5, 7, 35], 3)],
)
def test_witness_matches_brute_force(ints, q):
    expected = brute_witness(ints, q, 3000)
    assert arith.witness_prime(ints, q, 3000).witness == expected


def test_witness_known_values():
    rep = arith.witness_prime([2, 3, 6], 3, 1000)
    assert rep.witness == 13
    assert rep.skipped == (2, 3)
    assert arith.witness_prime([2, 3, 6, 18], 3, 10**5).witness is None
    with pytest.raises(ValueError):
        arith.witness_prime([2], 3, 0)


def test_locally_set_sees_power_everywhere():
    assert locally_by_primes([2, 3, 6, 18], 3, list(primerange(2, 5000)))
    assert not locally_by_primes([2, 3, 6], 3, list(primerange(2, 5000)))


def test_factorize_balanced_semiprime_near_limit():
    n = 3037000453 * 3037000493
    assert n < 2**63
    assert arith.factorize(n).factors == {3037000453: 1, 3037000493: 1}


@given(st.integers(-10, 2**63))
def test_primality_matches_sympy(n):
    from sympy import isprime

    from qpowerset.gf import _is_prime

    assert _is_prime(n) == isprime(n)

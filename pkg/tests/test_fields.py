import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracjump import FieldElement, Modulus
from fracjump.errors import ModulusMismatchError, ParameterRangeError
from fracjump.fields import is_prime, xgcd_inverse

PRIMES = [2, 3, 5, 7, 101, 65537, (1 << 61) - 1]


def test_add_examples(m101):
    assert (m101.element(64) + m101.element(50)).value == 13  # 114 mod 101
    assert (m101.element(0) + m101.element(7)).value == 7
    m2 = Modulus(2)
    assert (m2.element(1) + m2.element(1)).value == 0


def test_mul_examples(m101):
    assert (m101.element(4) * m101.element(64)).value == 54  # 256 mod 101
    for x in range(101):
        assert (m101.element(1) * m101.element(x)).value == x
    m5 = Modulus(5)
    assert (m5.element(3) * m5.element(2)).value == 1


def test_inv_examples(m101):
    assert m101.element(2).inv().value == 51
    assert m101.element(1).inv().value == 1
    # exhaustive-search oracle over F_7
    m7 = Modulus(7)
    brute = next(b for b in range(1, 7) if 3 * b % 7 == 1)
    assert m7.element(3).inv().value == brute == 5


def test_inv_zero_raises(m101):
    with pytest.raises(ZeroDivisionError):
        m101.element(0).inv()


def test_pow_examples(m101):
    assert (m101.element(2) ** 100).value == 1  # Fermat
    assert (m101.element(5) ** 0).value == 1
    assert (m101.element(0) ** 0).value == 1
    assert (Modulus(5).element(2) ** 3).value == 3


def test_mismatched_moduli_rejected(m101):
    other = Modulus(7)
    with pytest.raises(ModulusMismatchError):
        m101.element(1) + other.element(1)
    with pytest.raises(ModulusMismatchError):
        m101.element(1) * other.element(1)


def test_modulus_validation():
    with pytest.raises(ParameterRangeError):
        Modulus(1)
    with pytest.raises(ParameterRangeError):
        Modulus(100)  # composite
    with pytest.raises(ParameterRangeError):
        Modulus(1 << 61)  # over the cap even if prime-shaped
    Modulus(2)  # smallest allowed


def test_is_prime_small():
    known = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(50):
        assert is_prime(n) == (n in known)


def test_is_prime_carmichael_and_large():
    assert not is_prime(561)
    assert not is_prime(341550071728321)
    assert is_prime((1 << 61) - 1)  # Mersenne prime
    assert not is_prime((1 << 61) - 3)


@given(st.sampled_from(PRIMES), st.integers(min_value=0, max_value=1 << 62),
       st.integers(min_value=0, max_value=1 << 62),
       st.integers(min_value=0, max_value=1 << 62))
@settings(max_examples=200)
def test_field_axioms(p, a, b, c):
    m = Modulus(p)
    x, y, z = m.element(a), m.element(b), m.element(c)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x


@given(st.sampled_from(PRIMES), st.integers(min_value=1, max_value=1 << 62))
@settings(max_examples=200)
def test_inverse_property(p, a):
    m = Modulus(p)
    x = m.element(a)
    if x.value == 0:
        return
    assert (x * x.inv()).value == 1
    assert (x ** (p - 1)).value == 1
    assert xgcd_inverse(x.value, p) == pow(x.value, -1, p)


@given(st.sampled_from(PRIMES), st.integers(min_value=0, max_value=1 << 62),
       st.integers(min_value=0, max_value=10 ** 30))
@settings(max_examples=100)
def test_pow_matches_builtin(p, a, e):
    m = Modulus(p)
    assert (m.element(a) ** e).value == pow(a % p, e, p)

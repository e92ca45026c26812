"""Exact arithmetic in prime fields F_p.

Residues are plain Python ints in [0, p); the modulus is capped below
2^61 so that a product of two residues stays within a 128-bit
intermediate on any platform (Python ints are unbounded, the cap keeps
the representation portable and benchmark-comparable).  Order
computations and factorization exponents use Python's native
arbitrary-precision ints directly.
"""

from __future__ import annotations

from .errors import ModulusMismatchError, ParameterRangeError

MODULUS_CAP = 1 << 61

# Witness set proven complete for every n < 3,317,044,064,679,887,385,961,981
# (Sorenson & Webster), which covers the full modulus range and the
# factorization range up to ~2^81.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

MR_PROVEN_BOUND = 3317044064679887385961981


def _miller_rabin_witness(a: int, d: int, r: int, n: int) -> bool:
    """True if base a proves n composite (n - 1 = d * 2^r, d odd)."""
    a %= n
    if a == 0:
        return False
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a / n) for odd n > 0."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_prp(n: int) -> bool:
    """Strong Lucas probable-prime test with Selfridge's parameters."""
    if n % 2 == 0 or n < 3:
        return n == 2
    # Perfect squares admit no D with (D/n) = -1; rule them out first.
    r = int(n ** 0.5)
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    if r * r == n:
        return False
    d = 5
    while _jacobi(d, n) != -1:
        d = -(d + 2) if d > 0 else -(d - 2)
    q = (1 - d) % n
    q = q * pow(4, -1, n) % n
    # n + 1 = k * 2^s with k odd
    k = n + 1
    s = 0
    while k % 2 == 0:
        k //= 2
        s += 1
    # Lucas chain for U_k, V_k with P = 1
    u, v, qk = 1, 1, q
    for bit in bin(k)[3:]:
        u = u * v % n
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (u + v) % n, (v + d * u) % n
            if u % 2:
                u += n
            if v % 2:
                v += n
            u, v = u // 2 % n, v // 2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = qk * qk % n
    return False


def is_prime(n: int) -> bool:
    """Deterministic primality check for n < 3.3e24 (proven witness set).

    Above that bound (possible only for factorization intermediates up
    to 2^96) the result is Miller-Rabin on the same bases plus a strong
    Lucas test, the combination with no known counterexample.
    """
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if any(_miller_rabin_witness(a, d, r, n) for a in _MR_BASES):
        return False
    if n < MR_PROVEN_BOUND:
        return True
    return _strong_lucas_prp(n)


def xgcd_inverse(a: int, p: int) -> int:
    """Inverse of a mod p by the extended Euclidean algorithm; a != 0."""
    if a % p == 0:
        raise ZeroDivisionError("0 has no inverse")
    t, new_t = 0, 1
    r, new_r = p, a % p
    while new_r:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    if r != 1:
        raise ZeroDivisionError(f"{a} not invertible mod {p}")
    return t % p


class Modulus:
    """A prime modulus p with 2 <= p < 2^61, certified at construction."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not 2 <= p < MODULUS_CAP:
            raise ParameterRangeError(f"modulus must satisfy 2 <= p < 2^61, got {p}")
        if not is_prime(p):
            raise ParameterRangeError(f"modulus {p} is not prime")
        self.p = p

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1 % self.p, self)

    def __eq__(self, other):
        return isinstance(other, Modulus) and self.p == other.p

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return f"Modulus({self.p})"


class FieldElement:
    """Residue in [0, p) over a shared :class:`Modulus`.

    Immutable; all operations are pure and thread-safe.
    """

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: Modulus):
        self.value = value % modulus.p
        self.modulus = modulus

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.modulus.p != self.modulus.p:
                raise ModulusMismatchError(
                    f"mixed moduli {self.modulus.p} and {other.modulus.p}")
            return other
        if isinstance(other, int):
            return FieldElement(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement((self.value + o.value) % self.modulus.p, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement((self.value - o.value) % self.modulus.p, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement((self.value * o.value) % self.modulus.p, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inv()

    def __neg__(self):
        return FieldElement(-self.value % self.modulus.p, self.modulus)

    def inv(self) -> "FieldElement":
        """Multiplicative inverse via extended Euclid; raises on zero."""
        return FieldElement(xgcd_inverse(self.value, self.modulus.p), self.modulus)

    def __pow__(self, exponent: int) -> "FieldElement":
        """Square-and-multiply power; exponent is any nonnegative int
        (arbitrary precision), with 0^0 = 1."""
        if exponent < 0:
            return self.inv() ** (-exponent)
        return FieldElement(pow(self.value, exponent, self.modulus.p), self.modulus)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.modulus.p
        return (isinstance(other, FieldElement)
                and self.value == other.value
                and self.modulus.p == other.modulus.p)

    def __hash__(self):
        return hash((self.value, self.modulus.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.modulus.p})"

"""Univariate polynomials over F_p and the projective-primitivity
certifier.

The transitivity certificate for an automorphism [M] of P^n is a
property of the characteristic polynomial of M: irreducible, and a root
generates the quotient group F_{p^m}^* / F_p^*.  The order check runs
against the factorization of N = (p^m - 1)/(p - 1), so this module also
carries an integer factorizer (trial division below 10^6, then Pollard
rho with primality certification of every reported factor).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ParameterRangeError, SearchExhaustedError
from .fields import Modulus, is_prime, xgcd_inverse
from .projective import SquareMatrix

FACTOR_RANGE_CAP = 1 << 96
_TRIAL_BOUND = 10 ** 6
_trial_primes: Optional[list] = None


class Polynomial:
    """Dense univariate polynomial over F_p, coefficients lowest first."""

    __slots__ = ("coeffs", "modulus")

    def __init__(self, coeffs: Sequence[int], modulus: Modulus):
        p = modulus.p
        vals = [c % p for c in coeffs]
        while vals and vals[-1] == 0:
            vals.pop()
        self.coeffs = tuple(vals)
        self.modulus = modulus

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def monic(self) -> "Polynomial":
        if self.is_zero() or self.is_monic():
            return self
        inv = xgcd_inverse(self.coeffs[-1], self.modulus.p)
        return Polynomial([c * inv for c in self.coeffs], self.modulus)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        p = self.modulus.p
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return Polynomial(out, self.modulus)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        p = self.modulus.p
        out = list(self.coeffs) + [0] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] = (out[i] - c) % p
        return Polynomial(out, self.modulus)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial([], self.modulus)
        p = self.modulus.p
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = (out[i + j] + a * b) % p
        return Polynomial(out, self.modulus)

    def __mod__(self, divisor: "Polynomial") -> "Polynomial":
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.modulus.p
        rem = list(self.coeffs)
        d = divisor.coeffs
        lead_inv = xgcd_inverse(d[-1], p)
        while len(rem) >= len(d) and rem:
            factor = rem[-1] * lead_inv % p
            shift = len(rem) - len(d)
            if factor:
                for i, c in enumerate(d):
                    rem[shift + i] = (rem[shift + i] - factor * c) % p
            rem.pop()
        return Polynomial(rem, self.modulus)

    def powmod(self, exponent: int, mod: "Polynomial") -> "Polynomial":
        """self^exponent reduced mod `mod` by square-and-multiply."""
        if exponent < 0:
            raise ParameterRangeError("negative polynomial exponent")
        result = Polynomial([1], self.modulus)
        base = self % mod
        e = exponent
        while e:
            if e & 1:
                result = result * base % mod
            base = base * base % mod
            e >>= 1
        return result

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def evaluate(self, x: int) -> int:
        p = self.modulus.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return acc

    def __eq__(self, other):
        return (isinstance(other, Polynomial)
                and self.coeffs == other.coeffs
                and self.modulus.p == other.modulus.p)

    def __hash__(self):
        return hash((self.coeffs, self.modulus.p))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("T" if c == 1 else f"{c}*T")
            else:
                parts.append(f"T^{i}" if c == 1 else f"{c}*T^{i}")
        return " + ".join(parts)


def x_polynomial(modulus: Modulus) -> Polynomial:
    return Polynomial([0, 1], modulus)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs, primes increasing."""

    factors: tuple

    def primes(self) -> list:
        return [q for q, _ in self.factors]

    def recompose(self) -> int:
        value = 1
        for q, e in self.factors:
            value *= q ** e
        return value


def _trial_prime_list() -> list:
    global _trial_primes
    if _trial_primes is None:
        sieve = bytearray([1]) * _TRIAL_BOUND
        sieve[0] = sieve[1] = 0
        for i in range(2, int(_TRIAL_BOUND ** 0.5) + 1):
            if sieve[i]:
                sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
        _trial_primes = [i for i in range(_TRIAL_BOUND) if sieve[i]]
    return _trial_primes


def _pollard_rho(n: int) -> int:
    """Brent-cycle Pollard rho; returns a nontrivial factor of composite odd n."""
    from math import gcd

    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


def factor_integer(N: int) -> Factorization:
    """Complete prime factorization of 2 <= N < 2^96.

    Every factor reported has passed the primality certification in
    :func:`fracjump.fields.is_prime`; the supported range is enforced
    so an infeasible input fails loudly instead of silently stalling.
    """
    if N < 2:
        raise ParameterRangeError("factor_integer needs N >= 2")
    if N >= FACTOR_RANGE_CAP:
        raise ParameterRangeError(f"N = {N} exceeds the supported range 2^96")
    counts: dict = {}
    m = N
    for q in _trial_prime_list():
        if q * q > m:
            break
        while m % q == 0:
            counts[q] = counts.get(q, 0) + 1
            m //= q
    stack = [m] if m > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return Factorization(tuple(sorted(counts.items())))


def char_poly(M: SquareMatrix) -> Polynomial:
    """Characteristic polynomial det(T*Id - M), monic of degree dim(M).

    Division-free (Berkowitz-style Toeplitz recursion), so small
    characteristic p <= dim(M) is handled exactly.
    """
    p = M.modulus.p
    m = M.dim
    rows = M.rows
    # coefficients highest degree first; start from the empty matrix
    poly = [1 % p]
    for i in range(m - 1, -1, -1):
        k = m - i  # size of the principal submatrix rows[i:, i:]
        a = rows[i][i]
        r_vec = [rows[i][j] for j in range(i + 1, m)]
        c_vec = [rows[j][i] for j in range(i + 1, m)]
        # Toeplitz column: 1, -a, -(R C), -(R A1 C), -(R A1^2 C), ...
        t = [1 % p, -a % p]
        cur = list(c_vec)
        for _ in range(k - 1):
            t.append(-sum(rv * cv for rv, cv in zip(r_vec, cur)) % p)
            cur = [sum(rows[i + 1 + u][i + 1 + w] * cur[w] for w in range(k - 1)) % p
                   for u in range(k - 1)]
        new_poly = [0] * (k + 1)
        for j in range(k + 1):
            acc = 0
            for u in range(min(j, k) + 1):
                if u < len(t) and j - u < len(poly):
                    acc += t[u] * poly[j - u]
            new_poly[j] = acc % p
        poly = new_poly
    return Polynomial(list(reversed(poly)), M.modulus)


def char_poly_cofactor(M: SquareMatrix) -> Polynomial:
    """Independent oracle: det(T*Id - M) by Laplace cofactor expansion
    over the polynomial ring.  Exponential cost; intended for dim <= 4.
    """
    modulus = M.modulus
    dim = M.dim

    def entry(i, j):
        base = [-M.rows[i][j]]
        if i == j:
            base.append(1)
        return Polynomial(base, modulus)

    def det(rows_idx, cols_idx):
        if len(rows_idx) == 1:
            return entry(rows_idx[0], cols_idx[0])
        acc = Polynomial([], modulus)
        i = rows_idx[0]
        for pos, j in enumerate(cols_idx):
            minor = det(rows_idx[1:], cols_idx[:pos] + cols_idx[pos + 1:])
            term = entry(i, j) * minor
            if pos % 2:
                acc = acc - term
            else:
                acc = acc + term
        return acc

    idx = tuple(range(dim))
    return det(idx, idx)


def is_irreducible(f: Polynomial) -> bool:
    """Rabin's irreducibility test over F_p."""
    f = f.monic()
    m = f.degree
    if m < 1:
        raise ParameterRangeError("irreducibility needs degree >= 1")
    if m == 1:
        return True
    p = f.modulus.p
    x = x_polynomial(f.modulus)
    for ell in set(factor_integer(m).primes()):
        g = x.powmod(p ** (m // ell), f) - x
        if g.gcd(f).degree != 0:
            return False
    return x.powmod(p ** m, f) == x % f


def _subgroup_index_order_check(f: Polynomial, group_order: int) -> bool:
    """True iff the root class of irreducible f has full order: for
    every prime ell | group_order, T^(group_order/ell) mod f is not in
    the accepted kernel (constant polynomial)."""
    x = x_polynomial(f.modulus)
    for ell in set(factor_integer(group_order).primes()):
        if x.powmod(group_order // ell, f).is_constant():
            return False
    return True


def is_projectively_primitive(f: Polynomial) -> bool:
    """True iff f is irreducible and a root's class generates
    F_{p^m}^* / F_p^*.

    The class order always divides N = (p^m - 1)/(p - 1) (the norm of a
    root lies in F_p^*), so it suffices that T^(N/ell) mod f is
    non-constant for every prime ell | N.
    """
    f = f.monic()
    m = f.degree
    if m < 1:
        raise ParameterRangeError("projective primitivity needs degree >= 1")
    if not is_irreducible(f):
        return False
    if f.coeffs[0] == 0:
        return False  # only f = T; its root 0 is not a unit
    if m == 1:
        return True  # the quotient group is trivial
    p = f.modulus.p
    N = (p ** m - 1) // (p - 1)
    return _subgroup_index_order_check(f, N)


def is_primitive(f: Polynomial) -> bool:
    """True iff f is irreducible and a root generates F_{p^m}^*."""
    f = f.monic()
    m = f.degree
    if m < 1:
        raise ParameterRangeError("primitivity needs degree >= 1")
    if not is_irreducible(f):
        return False
    if f.coeffs[0] == 0:
        return False
    p = f.modulus.p
    order = p ** m - 1
    if order == 1:
        return True
    x = x_polynomial(f.modulus)
    one = Polynomial([1], f.modulus)
    for ell in set(factor_integer(order).primes()):
        if x.powmod(order // ell, f) == one:
            return False
    return True


def symmetric_lift(value: int, p: int) -> int:
    """Lift a residue to the representative in (-p/2, p/2]."""
    value %= p
    return value if value <= p // 2 else value - p


def find_projectively_primitive(modulus: Modulus, degree: int,
                                coeff_bound: int, seed: int = 0) -> Polynomial:
    """Search for a monic projectively primitive polynomial whose
    non-leading coefficients have symmetric lifts of absolute value at
    most coeff_bound.

    Deterministic: candidates are enumerated in shells of increasing
    max |coefficient|; inside a shell the order is lexicographic over
    the lifted coefficient vectors, rotated by an offset derived from
    the seed.  Raises SearchExhaustedError when the bound is exhausted.
    """
    if degree < 2:
        raise ParameterRangeError("search needs degree >= 2")
    if coeff_bound < 0:
        raise ParameterRangeError("coeff_bound must be >= 0")
    p = modulus.p
    lift_lo, lift_hi = -((p - 1) // 2), p // 2
    for shell in range(0, coeff_bound + 1):
        lo, hi = max(lift_lo, -shell), min(lift_hi, shell)
        if lo > hi:
            break
        candidates = [vec for vec in itertools.product(range(lo, hi + 1), repeat=degree)
                      if shell == 0 or max(abs(v) for v in vec) == shell]
        if not candidates:
            continue
        offset = seed % len(candidates)
        for idx in range(len(candidates)):
            vec = candidates[(idx + offset) % len(candidates)]
            f = Polynomial(list(vec) + [1], modulus)
            if f.degree == degree and is_projectively_primitive(f):
                return f
    raise SearchExhaustedError(
        f"no projectively primitive polynomial of degree {degree} over F_{p} "
        f"with |coefficients| <= {coeff_bound}")


def companion_matrix(f: Polynomial) -> SquareMatrix:
    """Companion matrix C of a monic f with char_poly(C) = f."""
    if not f.is_monic():
        raise ParameterRangeError("companion matrix needs a monic polynomial")
    m = f.degree
    if m < 1:
        raise ParameterRangeError("companion matrix needs degree >= 1")
    p = f.modulus.p
    rows = [[0] * m for _ in range(m)]
    for i in range(1, m):
        rows[i][i - 1] = 1
    for i in range(m):
        rows[i][m - 1] = -f.coeffs[i] % p
    return SquareMatrix(rows, f.modulus)

"""The fractional-jump generator on F_p^n.

A transitive automorphism [M] of P^n induces a transitive map psi on
the affine space: iterate M on the lift of x until the image returns to
the chart U, then de-homogenize.  Concretely psi is piecewise rational
of degree 1: on the i-th piece it is given by the rows of M^i acting on
(x_1, ..., x_n, 1), numerators from the first n rows and the shared
denominator from the last.  The number of pieces (the absolute jump
index) is at most n+1 and is computed here by linear algebra on the
denominator forms, never by enumeration.

The n = 1 instance with M = [[b, a], [1, 0]] is the classical inversive
congruential generator psi(x) = a/x + b, psi(0) = b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import NonPrimitiveError, ParameterRangeError
from .fields import Modulus
from .poly import Polynomial, char_poly, companion_matrix, is_projectively_primitive
from .projective import AffineSubspace, SquareMatrix, solve_affine_system

PARAMS_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RationalAffineMap:
    """One piece of the jump: n affine numerators over a shared affine
    denominator, all read off one invertible (n+1)x(n+1) matrix.

    Row j of ``numerators`` holds (c_{j,1}, ..., c_{j,n}, c_{j,0}): the
    coefficients of x_1..x_n followed by the constant term, matching the
    matrix row acting on (x_1, ..., x_n, 1).  ``denominator`` has the
    same layout.
    """

    numerators: tuple
    denominator: tuple
    p: int

    def evaluate(self, x: Sequence[int]) -> tuple:
        den = self.denominator[-1]
        for c, v in zip(self.denominator, x):
            den += c * v
        den %= self.p
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        dinv = pow(den, -1, self.p)
        out = []
        for row in self.numerators:
            num = row[-1]
            for c, v in zip(row, x):
                num += c * v
            out.append(num % self.p * dinv % self.p)
        return tuple(out)


@dataclass
class GeneratorState:
    """Mutable cursor: current point plus position in the snake stream.

    Single-owner; share the immutable FractionalJump across threads and
    give each consumer its own state.
    """

    x: tuple
    snake_pos: int = 0


class FractionalJump:
    """Precomputed fractional jump of a certified transitive [M]."""

    __slots__ = ("modulus", "n", "M", "powers", "jump_index",
                 "characteristic", "_den_rows", "_num_rows", "_vanishing")

    def __init__(self, M: SquareMatrix, characteristic: Polynomial,
                 powers: list, jump_index: int, vanishing: list):
        self.modulus = M.modulus
        self.n = M.dim - 1
        self.M = M
        self.powers = tuple(powers)
        self.jump_index = jump_index
        self.characteristic = characteristic
        self._vanishing = tuple(vanishing)
        # flat evaluation tables for the hot loop
        self._den_rows = tuple(P.rows[-1] for P in self.powers)
        self._num_rows = tuple(P.rows[:-1] for P in self.powers)

    @property
    def p(self) -> int:
        return self.modulus.p

    def piece(self, i: int) -> RationalAffineMap:
        """The rational map applied on U_i, 1 <= i <= jump_index."""
        if not 1 <= i <= self.jump_index:
            raise ParameterRangeError(f"piece index {i} outside 1..{self.jump_index}")
        P = self.powers[i - 1]
        return RationalAffineMap(P.rows[:-1], P.rows[-1], self.p)

    def vanishing_set(self, i: int) -> Optional[AffineSubspace]:
        """V_i = common zero set of the first i denominator forms;
        None when empty.  V_{jump_index} is always None."""
        if not 1 <= i <= self.jump_index:
            raise ParameterRangeError(f"index {i} outside 1..{self.jump_index}")
        return self._vanishing[i - 1]

    def step(self, x: Sequence[int]) -> tuple:
        """One application of psi; total on F_p^n."""
        p = self.modulus.p
        for den_row, num_rows in zip(self._den_rows, self._num_rows):
            den = den_row[-1]
            for c, v in zip(den_row, x):
                den += c * v
            den %= p
            if den:
                dinv = pow(den, -1, p)
                out = []
                for row in num_rows:
                    num = row[-1]
                    for c, v in zip(row, x):
                        num += c * v
                    out.append(num % p * dinv % p)
                return tuple(out)
        raise RuntimeError("no piece applied; V_J was not empty")  # pragma: no cover

    def step_indexed(self, x: Sequence[int]) -> tuple:
        """Like step but also returns the piece index used."""
        p = self.modulus.p
        for i, (den_row, num_rows) in enumerate(zip(self._den_rows, self._num_rows), start=1):
            den = den_row[-1]
            for c, v in zip(den_row, x):
                den += c * v
            den %= p
            if den:
                dinv = pow(den, -1, p)
                out = []
                for row in num_rows:
                    num = row[-1]
                    for c, v in zip(row, x):
                        num += c * v
                    out.append(num % p * dinv % p)
                return tuple(out), i
        raise RuntimeError("no piece applied; V_J was not empty")  # pragma: no cover

    def step_counted(self, x: Sequence[int], counters: dict) -> tuple:
        """Instrumented step: tallies inversions, full multiplications
        (both operands data-dependent residues) and coefficient
        multiplications into ``counters``."""
        p = self.modulus.p
        for den_row, num_rows in zip(self._den_rows, self._num_rows):
            den = den_row[-1]
            for c, v in zip(den_row, x):
                den += c * v
                counters["mul_coeff"] += 1
            den %= p
            if den:
                dinv = pow(den, -1, p)
                counters["inv"] += 1
                out = []
                for row in num_rows:
                    num = row[-1]
                    for c, v in zip(row, x):
                        num += c * v
                        counters["mul_coeff"] += 1
                    out.append(num % p * dinv % p)
                    counters["mul_full"] += 1
                return tuple(out)
        raise RuntimeError("no piece applied")  # pragma: no cover

    def next_point(self, state: GeneratorState) -> tuple:
        """Advance the state by one full point and return it."""
        state.x = self.step(state.x)
        return state.x

    def next_scalar(self, state: GeneratorState) -> int:
        """Next element of the snake stream: coordinates of successive
        points in order, starting with the seed's own coordinates."""
        v = state.x[state.snake_pos]
        state.snake_pos += 1
        if state.snake_pos == self.n:
            state.snake_pos = 0
            state.x = self.step(state.x)
        return v

    def state(self, x: Optional[Sequence[int]] = None) -> GeneratorState:
        """Fresh stream state; default seed is the origin."""
        if x is None:
            x = (0,) * self.n
        x = tuple(v % self.p for v in x)
        if len(x) != self.n:
            raise ParameterRangeError(f"seed point must have {self.n} coordinates")
        return GeneratorState(x)

    def to_params(self) -> dict:
        return {
            "schema_version": PARAMS_SCHEMA_VERSION,
            "p": self.p,
            "n": self.n,
            "matrix": [list(row) for row in self.M.rows],
        }

    def __repr__(self):
        return (f"FractionalJump(p={self.p}, n={self.n}, "
                f"jump_index={self.jump_index})")


def build_jump(M: SquareMatrix) -> FractionalJump:
    """Construct the fractional jump of [M].

    Refuses any matrix whose characteristic polynomial is not
    projectively primitive (equivalently: [M] not transitive on P^n).
    The absolute jump index is the least i for which the affine system
    b^(1) = ... = b^(i) = 0 is unsolvable, decided by rank computation.
    """
    chi = char_poly(M)
    if not is_projectively_primitive(chi):
        raise NonPrimitiveError(chi)
    p = M.modulus.p
    n = M.dim - 1
    powers = []
    vanishing = []
    den_rows = []
    rhs = []
    current = M
    for i in range(1, n + 2):
        powers.append(current)
        row = current.rows[-1]
        den_rows.append(row[:-1])
        rhs.append(-row[-1] % p)
        solution = solve_affine_system(den_rows, rhs, p)
        vanishing.append(solution)
        if solution is None:
            return FractionalJump(M, chi, powers, i, vanishing)
        current = current @ M
    raise RuntimeError("jump index exceeded n+1 for a certified matrix")  # pragma: no cover


def make_icg(modulus: Modulus, a: int, b: int) -> FractionalJump:
    """The inversive congruential generator psi(x) = a/x + b with
    psi(0) = b, as the n = 1 fractional jump of [[b, a], [1, 0]]."""
    p = modulus.p
    a %= p
    b %= p
    if a == 0:
        raise NonPrimitiveError(
            Polynomial([0, -b, 1], modulus),
            "ICG needs a != 0 (the matrix [[b, a], [1, 0]] must be invertible)")
    M = SquareMatrix([[b, a], [1, 0]], modulus)
    return build_jump(M)


def from_params(params: dict) -> FractionalJump:
    """Build a generator from its JSON parameter form.

    Accepts {"p", "n", "matrix"} with an explicit (n+1)x(n+1) matrix, or
    {"p", "n", "char_poly", "form": "companion"} with the full monic
    coefficient list c_0..c_{n+1} (lowest first).
    """
    try:
        p = int(params["p"])
        n = int(params["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterRangeError(f"bad generator parameters: {exc}") from None
    modulus = Modulus(p)
    if "matrix" in params:
        rows = params["matrix"]
        if len(rows) != n + 1:
            raise ParameterRangeError(f"matrix must be {n + 1}x{n + 1}")
        return build_jump(SquareMatrix(rows, modulus))
    if "char_poly" in params:
        if params.get("form", "companion") != "companion":
            raise ParameterRangeError(f"unknown form {params.get('form')!r}")
        coeffs = [int(c) for c in params["char_poly"]]
        if len(coeffs) != n + 2:
            raise ParameterRangeError(
                f"char_poly needs {n + 2} coefficients (degree {n + 1}, monic)")
        f = Polynomial(coeffs, modulus)
        if f.degree != n + 1 or not f.is_monic():
            raise ParameterRangeError("char_poly must be monic of degree n+1")
        return build_jump(companion_matrix(f))
    raise ParameterRangeError("parameters need either 'matrix' or 'char_poly'")

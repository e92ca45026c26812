"""Projective space over F_p: points, automorphisms, and brute-force
orbit machinery.

Everything here is an exact, enumeration-based oracle: projective
transitivity is decided by walking an orbit, affine transitivity by
exhausting all maps.  Guards keep the exhaustive paths at desk scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import ParameterRangeError, ResourceLimitError
from .fields import Modulus, xgcd_inverse

PROJECTIVE_ENUM_CAP = 1 << 24
AFFINE_ENUM_CAP = 1 << 22
AFFINE_CENSUS_CAP = 1 << 22


class SquareMatrix:
    """Square matrix over F_p, rows stored as tuples of ints in [0, p)."""

    __slots__ = ("rows", "modulus")

    def __init__(self, rows: Sequence[Sequence[int]], modulus: Modulus):
        p = modulus.p
        dim = len(rows)
        self.rows = tuple(tuple(v % p for v in row) for row in rows)
        for row in self.rows:
            if len(row) != dim:
                raise ParameterRangeError("matrix must be square")
        self.modulus = modulus

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, dim: int, modulus: Modulus) -> "SquareMatrix":
        return cls([[1 if i == j else 0 for j in range(dim)] for i in range(dim)], modulus)

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        p = self.modulus.p
        n = self.dim
        brows = other.rows
        return SquareMatrix(
            [[sum(arow[k] * brows[k][j] for k in range(n)) % p for j in range(n)]
             for arow in self.rows],
            self.modulus)

    def matvec(self, v: Sequence[int]) -> tuple:
        p = self.modulus.p
        return tuple(sum(c * x for c, x in zip(row, v)) % p for row in self.rows)

    def scaled(self, scalar: int) -> "SquareMatrix":
        p = self.modulus.p
        s = scalar % p
        return SquareMatrix([[v * s % p for v in row] for row in self.rows], self.modulus)

    def det(self) -> int:
        """Determinant by Gaussian elimination mod p."""
        p = self.modulus.p
        a = [list(row) for row in self.rows]
        n = self.dim
        det = 1
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col]), None)
            if pivot is None:
                return 0
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det % p
            det = det * a[col][col] % p
            inv = xgcd_inverse(a[col][col], p)
            for r in range(col + 1, n):
                if a[r][col]:
                    factor = a[r][col] * inv % p
                    a[r] = [(x - factor * y) % p for x, y in zip(a[r], a[col])]
        return det

    def is_invertible(self) -> bool:
        return self.det() != 0

    def __eq__(self, other):
        return (isinstance(other, SquareMatrix)
                and self.rows == other.rows
                and self.modulus.p == other.modulus.p)

    def __hash__(self):
        return hash((self.rows, self.modulus.p))

    def __repr__(self):
        return f"SquareMatrix({[list(r) for r in self.rows]}, p={self.modulus.p})"


def matrix_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of an arbitrary (possibly non-square) matrix over F_p."""
    a = [list(r) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if a[r][col] % p), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = xgcd_inverse(a[rank][col] % p, p)
        a[rank] = [v * inv % p for v in a[rank]]
        for r in range(nrows):
            if r != rank and a[r][col] % p:
                factor = a[r][col] % p
                a[r] = [(x - factor * y) % p for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


@dataclass(frozen=True)
class AffineSubspace:
    """Solution set of a consistent affine system over F_p^n.

    ``particular`` is one solution; ``basis`` spans the homogeneous
    solutions, so the full set is particular + span(basis).
    """

    particular: tuple
    basis: tuple
    p: int

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def size(self) -> int:
        return self.p ** self.dimension

    def points(self, cap: int = 1 << 16) -> list:
        if self.size() > cap:
            raise ResourceLimitError(f"subspace has {self.size()} points, cap {cap}")
        p = self.p
        n = len(self.particular)
        out = []
        for coeffs in itertools.product(range(p), repeat=self.dimension):
            pt = list(self.particular)
            for c, vec in zip(coeffs, self.basis):
                for i in range(n):
                    pt[i] = (pt[i] + c * vec[i]) % p
            out.append(tuple(pt))
        return out


def solve_affine_system(rows: Sequence[Sequence[int]],
                        rhs: Sequence[int],
                        p: int) -> Optional[AffineSubspace]:
    """Solve A x = rhs over F_p; None when inconsistent."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    aug = [[rows[r][c] % p for c in range(ncols)] + [rhs[r] % p] for r in range(nrows)]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if aug[r][col]), None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        inv = xgcd_inverse(aug[rank][col], p)
        aug[rank] = [v * inv % p for v in aug[rank]]
        for r in range(nrows):
            if r != rank and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [(x - factor * y) % p for x, y in zip(aug[r], aug[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, nrows):
        if aug[r][ncols]:
            return None
    particular = [0] * ncols
    for r, col in enumerate(pivots):
        particular[col] = aug[r][ncols]
    free_cols = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free_cols:
        vec = [0] * ncols
        vec[fc] = 1
        for r, col in enumerate(pivots):
            vec[col] = -aug[r][fc] % p
        basis.append(tuple(vec))
    return AffineSubspace(tuple(particular), tuple(basis), p)


class ProjectivePoint:
    """Point of P^n in canonical form: last nonzero coordinate is 1.

    With that scaling, membership in the affine chart U (last
    coordinate nonzero) is a single comparison and equality is
    coordinate-wise.
    """

    __slots__ = ("coords", "modulus")

    def __init__(self, coords: Sequence[int], modulus: Modulus):
        p = modulus.p
        vals = [v % p for v in coords]
        last = next((i for i in range(len(vals) - 1, -1, -1) if vals[i]), None)
        if last is None:
            raise ParameterRangeError("the zero vector is not a projective point")
        if vals[last] != 1:
            inv = xgcd_inverse(vals[last], p)
            vals = [v * inv % p for v in vals]
        self.coords = tuple(vals)
        self.modulus = modulus

    def __eq__(self, other):
        return (isinstance(other, ProjectivePoint)
                and self.coords == other.coords
                and self.modulus.p == other.modulus.p)

    def __hash__(self):
        return hash((self.coords, self.modulus.p))

    def __repr__(self):
        return "[" + ":".join(str(v) for v in self.coords) + "]"


def apply(M: SquareMatrix, P: ProjectivePoint) -> ProjectivePoint:
    """Image of P under the automorphism represented by M (canonical form)."""
    if M.dim != len(P.coords):
        raise ParameterRangeError("dimension mismatch")
    return ProjectivePoint(M.matvec(P.coords), M.modulus)


def in_hyperplane_H(P: ProjectivePoint) -> bool:
    """True iff P lies on the hyperplane at infinity (last coordinate 0)."""
    return P.coords[-1] == 0


def projective_space_size(p: int, n: int) -> int:
    return (p ** (n + 1) - 1) // (p - 1)


def enumerate_projective_space(modulus: Modulus, n: int) -> Iterator[ProjectivePoint]:
    """Yield every class of P^n exactly once.

    Order: affine charts with last nonzero coordinate at index k, k
    descending from n to 0; within a chart the free coordinates run in
    lexicographic order (last coordinate fastest).
    """
    p = modulus.p
    total = projective_space_size(p, n)
    if total > PROJECTIVE_ENUM_CAP:
        raise ResourceLimitError(f"|P^{n}(F_{p})| = {total} exceeds enumeration cap")
    for k in range(n, -1, -1):
        tail = (0,) * (n - k)
        for free in itertools.product(range(p), repeat=k):
            yield ProjectivePoint(free + (1,) + tail, modulus)


def is_transitive_bruteforce(M: SquareMatrix) -> bool:
    """Exhaustive transitivity check: a bijection of a finite set is
    transitive iff one orbit has full length."""
    modulus = M.modulus
    n = M.dim - 1
    total = projective_space_size(modulus.p, n)
    if total > PROJECTIVE_ENUM_CAP:
        raise ResourceLimitError(f"|P^{n}(F_{modulus.p})| = {total} exceeds enumeration cap")
    if not M.is_invertible():
        raise ParameterRangeError("matrix is singular")
    start = ProjectivePoint((0,) * n + (1,), modulus)
    current = apply(M, start)
    length = 1
    while current != start:
        current = apply(M, current)
        length += 1
        if length > total:
            raise RuntimeError("orbit exceeded space size")  # pragma: no cover
    return length == total


def fractional_jump_pointwise(M: SquareMatrix, x: Sequence[int]) -> tuple:
    """Evaluate the fractional jump of [M] at one affine point by direct
    projective iteration: lift x, apply M until the image returns to the
    chart U, then de-homogenize.

    Works for any invertible M (no transitivity needed); serves as the
    independent oracle for the piecewise-rational evaluator.
    """
    modulus = M.modulus
    p = modulus.p
    n = M.dim - 1
    v = tuple(c % p for c in x) + (1,)
    cap = projective_space_size(p, n) + 1
    for _ in range(cap):
        v = M.matvec(v)
        if v[-1]:
            inv = xgcd_inverse(v[-1], p)
            return tuple(c * inv % p for c in v[:-1])
    raise ParameterRangeError("orbit never returned to the affine chart")  # pragma: no cover


@dataclass(frozen=True)
class AffineMap:
    """x -> A x + b on F_p^n with A invertible."""

    A: SquareMatrix
    b: tuple

    def __post_init__(self):
        if not self.A.is_invertible():
            raise ParameterRangeError("affine map needs an invertible matrix")

    def __call__(self, x: Sequence[int]) -> tuple:
        p = self.A.modulus.p
        return tuple((v + c) % p for v, c in zip(self.A.matvec(x), self.b))


def affine_orbit_length(f: AffineMap, start: Sequence[int]) -> int:
    """Least m >= 1 with f^m(start) = start."""
    p = f.A.modulus.p
    n = f.A.dim
    if p ** n > AFFINE_ENUM_CAP:
        raise ResourceLimitError(f"{p}^{n} exceeds affine enumeration cap")
    start = tuple(v % p for v in start)
    current = f(start)
    length = 1
    while current != start:
        current = f(current)
        length += 1
    return length


def _general_linear_group(modulus: Modulus, n: int) -> Iterator[SquareMatrix]:
    p = modulus.p
    for entries in itertools.product(range(p), repeat=n * n):
        M = SquareMatrix([entries[i * n:(i + 1) * n] for i in range(n)], modulus)
        if M.is_invertible():
            yield M


def general_linear_order(p: int, n: int) -> int:
    order = 1
    for i in range(n):
        order *= p ** n - p ** i
    return order


@dataclass
class CensusReport:
    """Exhaustive census of transitive affine maps on F_p^n."""

    p: int
    n: int
    total_maps: int
    transitive_maps: list

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "total_maps": self.total_maps,
            "transitive_maps": [
                {"A": [list(row) for row in m.A.rows], "b": list(m.b)}
                for m in self.transitive_maps
            ],
        }


def affine_transitivity_census(modulus: Modulus, n: int) -> CensusReport:
    """Enumerate every affine map of F_p^n and list the transitive ones."""
    p = modulus.p
    total = general_linear_order(p, n) * p ** n
    if total > AFFINE_CENSUS_CAP:
        raise ResourceLimitError(f"census over {total} affine maps exceeds cap")
    space = p ** n
    found = []
    for A in _general_linear_group(modulus, n):
        for b in itertools.product(range(p), repeat=n):
            f = AffineMap(A, b)
            if affine_orbit_length(f, (0,) * n) == space:
                found.append(f)
    return CensusReport(p, n, total, found)

"""Empirical validation of the generator's distribution claims.

Four families of checks, all exact:

* full-orbit certification by exhaustive marking,
* subspace uniformity of consecutive projective iterates (rank checks),
* exponential character sums against the explicit-constant bound
  3((s+d)/n+1) p^(n-1) + 4(s/n+1) p^(n-1/2),
* star discrepancy of snake windows, computed exactly (sorted-order
  formula for s=1, critical-box sweep for s=2).

Character sums are accumulated counting-first: integer counts per phase
class in F_p, then a single length-p complex reduction, so the only
floating-point error is the final rounding per residue class.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ParameterRangeError, ResourceLimitError
from .jumps import FractionalJump, from_params
from .projective import ProjectivePoint, SquareMatrix, apply, matrix_rank

FULL_ORBIT_CAP = 1 << 26
EXP_SUM_CAP = 1 << 22
SECOND_MOMENT_CAP = 1 << 26
DISCREPANCY_CAP_1D = 10 ** 6
DISCREPANCY_CAP_2D = 5000


def _point_index(x: Sequence[int], p: int) -> int:
    idx = 0
    for v in reversed(x):
        idx = idx * p + v
    return idx


def _index_point(idx: int, p: int, n: int) -> tuple:
    out = []
    for _ in range(n):
        out.append(idx % p)
        idx //= p
    return tuple(out)


def full_orbit_certify(fj: FractionalJump) -> tuple:
    """Iterate from the origin marking visited points.

    Returns (certified, period): certified is True iff all p^n points
    are visited exactly once before the orbit closes at the origin.
    """
    p, n = fj.p, fj.n
    size = p ** n
    if size > FULL_ORBIT_CAP:
        raise ResourceLimitError(f"p^n = {size} exceeds certification cap")
    visited = bytearray(size)
    start = (0,) * n
    visited[0] = 1
    x = fj.step(start)
    steps = 1
    while x != start:
        idx = _point_index(x, p)
        if visited[idx]:
            return False, steps
        visited[idx] = 1
        x = fj.step(x)
        steps += 1
    return steps == size, steps


def orbit_piece_index_profile(fj: FractionalJump) -> dict:
    """Count how often each piece index fires over one full orbit."""
    p, n = fj.p, fj.n
    size = p ** n
    if size > FULL_ORBIT_CAP:
        raise ResourceLimitError(f"p^n = {size} exceeds certification cap")
    counts = {i: 0 for i in range(1, fj.jump_index + 1)}
    x = (0,) * n
    for _ in range(size):
        x, i = fj.step_indexed(x)
        counts[i] += 1
    return counts


def subspace_uniformity_check(M: SquareMatrix, windows: int,
                              start: Optional[Sequence[int]] = None,
                              ds: Optional[Sequence[int]] = None) -> bool:
    """Check that no d+2 consecutive projective iterates lie in a
    d-dimensional projective subspace, for each d in 1..n-1.

    Works on any invertible matrix so a non-transitive control can be
    planted; a transitive one never violates.
    """
    n = M.dim - 1
    if n < 2:
        raise ParameterRangeError("subspace uniformity needs n >= 2")
    if ds is None:
        ds = range(1, n)
    ds = sorted(set(ds))
    if not ds or ds[0] < 1 or ds[-1] > n - 1:
        raise ParameterRangeError(f"window dimensions must lie in 1..{n - 1}")
    if start is None:
        start = (0,) * n + (1,)
    P = ProjectivePoint(start, M.modulus)
    max_d = ds[-1]
    reps = [P.coords]
    for _ in range(windows + max_d):
        P = apply(M, P)
        reps.append(P.coords)
    p = M.modulus.p
    for m in range(windows):
        for d in ds:
            if matrix_rank(reps[m:m + d + 2], p) < d + 2:
                return False
    return True


def snake_values(fj: FractionalJump, x: Sequence[int], count: int) -> list:
    """First `count` snake values v_1..v_count from seed x (v_{kn+j} is
    the j-th coordinate of the k-th iterate, the seed being iterate 0)."""
    vals: list = []
    cur = tuple(v % fj.p for v in x)
    while len(vals) < count:
        vals.extend(cur)
        cur = fj.step(cur)
    return vals[:count]


def snake_table(fj: FractionalJump, count: int) -> list:
    """Snake rows for every x in F_p^n, indexed by mixed-radix point
    index.  Shared across repeated character-sum checks."""
    p, n = fj.p, fj.n
    return [snake_values(fj, _index_point(idx, p, n), count)
            for idx in range(p ** n)]


@dataclass
class ExpSumReport:
    """One exponential-sum comparison against the explicit bound."""

    p: int
    n: int
    s: int
    d: int
    j0: int
    h: tuple
    lhs: float
    rhs: float
    passed: bool

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "s": self.s, "d": self.d,
                "j0": self.j0, "h": list(self.h), "lhs": self.lhs,
                "rhs": self.rhs, "pass": self.passed}


def _expsum_counts_chunk(params: dict, s: int, d: int, j0: int,
                         h: Sequence[int], lo: int, hi: int) -> list:
    fj = from_params(params)
    p, n = fj.p, fj.n
    need = j0 + d + s - 1
    counts = [0] * p
    for idx in range(lo, hi):
        v = snake_values(fj, _index_point(idx, p, n), need)
        z = 0
        for j in range(s):
            z += h[j] * (v[j0 + d + j - 1] - v[j0 + j - 1])
        counts[z % p] += 1
    return counts


def exp_sum_check(fj: FractionalJump, s: int, d: int, j0: int,
                  h: Sequence[int], table: Optional[list] = None,
                  workers: int = 1) -> ExpSumReport:
    """Exact |sum over F_p^n of e_p(sum_j h_j (v_{j0+d+j} - v_{j0+j}))|
    compared with 3((s+d)/n+1) p^(n-1) + 4(s/n+1) p^(n-1/2).
    """
    p, n = fj.p, fj.n
    h = tuple(int(v) % p for v in h)
    if len(h) != s or not any(h):
        raise ParameterRangeError("h must be a nonzero vector of length s")
    if j0 < 1:
        raise ParameterRangeError("j0 must be >= 1")
    if not 1 <= d <= (p - 1) * n - s:
        raise ParameterRangeError(
            f"d = {d} outside the bound's range 1..{(p - 1) * n - s}")
    size = p ** n
    if size > EXP_SUM_CAP:
        raise ResourceLimitError(f"p^n = {size} exceeds exponential-sum cap")
    counts = [0] * p
    if table is not None:
        for v in table:
            z = 0
            for j in range(s):
                z += h[j] * (v[j0 + d + j - 1] - v[j0 + j - 1])
            counts[z % p] += 1
    elif workers > 1:
        params = fj.to_params()
        bounds = [size * w // workers for w in range(workers + 1)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_expsum_counts_chunk, params, s, d, j0, h,
                                   bounds[w], bounds[w + 1])
                       for w in range(workers)]
            for fut in futures:
                for z, c in enumerate(fut.result()):
                    counts[z] += c
    else:
        need = j0 + d + s - 1
        for idx in range(size):
            v = snake_values(fj, _index_point(idx, p, n), need)
            z = 0
            for j in range(s):
                z += h[j] * (v[j0 + d + j - 1] - v[j0 + j - 1])
            counts[z % p] += 1
    re_part = sum(c * math.cos(2 * math.pi * z / p) for z, c in enumerate(counts))
    im_part = sum(c * math.sin(2 * math.pi * z / p) for z, c in enumerate(counts))
    lhs = math.hypot(re_part, im_part)
    rhs = 3 * ((s + d) / n + 1) * p ** (n - 1) + 4 * (s / n + 1) * p ** (n - 0.5)
    return ExpSumReport(p, n, s, d, j0, h, lhs, rhs, lhs <= rhs)


@dataclass
class SecondMomentReport:
    """Second moment of windowed character sums, reported as a ratio
    against K p^n + K^2 p^(n-1/2) (the bound's implicit constant is not
    published, so there is no pass/fail)."""

    p: int
    n: int
    s: int
    j0: int
    K: int
    h: tuple
    lhs: float
    reference: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.reference

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "s": self.s, "j0": self.j0,
                "K": self.K, "h": list(self.h), "lhs": self.lhs,
                "reference": self.reference, "ratio": self.ratio}


def _moment_diff_counts_chunk(params: dict, s: int, j0: int, K: int,
                              h: Sequence[int], lo: int, hi: int) -> list:
    fj = from_params(params)
    p, n = fj.p, fj.n
    need = j0 + s + K - 2
    diff_counts = [0] * p
    for idx in range(lo, hi):
        v = snake_values(fj, _index_point(idx, p, n), need)
        phase_counts = [0] * p
        for k in range(K):
            z = 0
            for j in range(s):
                z += h[j] * v[j0 + j + k - 1]
            phase_counts[z % p] += 1
        for delta in range(p):
            acc = 0
            for z in range(p):
                cz = phase_counts[z]
                if cz:
                    acc += cz * phase_counts[(z + delta) % p]
            diff_counts[delta] += acc
    return diff_counts


def second_moment_report(fj: FractionalJump, s: int, j0: int, K: int,
                         h: Sequence[int], workers: int = 1) -> SecondMomentReport:
    """Exact sum over x of |sum_{k<K} e_p(sum_j h_j v_{j0+j+k}(x))|^2.

    Counting-first: the squared modulus is expanded into integer counts
    of phase differences, summed over all x, then reduced once against
    the length-p cosine table.
    """
    p, n = fj.p, fj.n
    h = tuple(int(v) % p for v in h)
    if len(h) != s or not any(h):
        raise ParameterRangeError("h must be a nonzero vector of length s")
    if j0 < 1:
        raise ParameterRangeError("j0 must be >= 1")
    size = p ** n
    if not 1 <= K <= size:
        raise ParameterRangeError(f"K = {K} outside 1..p^n")
    if size * K > SECOND_MOMENT_CAP:
        raise ResourceLimitError(f"p^n * K = {size * K} exceeds cap")
    diff_counts = [0] * p
    if workers > 1:
        params = fj.to_params()
        bounds = [size * w // workers for w in range(workers + 1)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_moment_diff_counts_chunk, params, s, j0, K,
                                   h, bounds[w], bounds[w + 1])
                       for w in range(workers)]
            for fut in futures:
                for delta, c in enumerate(fut.result()):
                    diff_counts[delta] += c
    else:
        need = j0 + s + K - 2
        for idx in range(size):
            v = snake_values(fj, _index_point(idx, p, n), need)
            phase_counts = [0] * p
            for k in range(K):
                z = 0
                for j in range(s):
                    z += h[j] * v[j0 + j + k - 1]
                phase_counts[z % p] += 1
            for delta in range(p):
                acc = 0
                for z in range(p):
                    cz = phase_counts[z]
                    if cz:
                        acc += cz * phase_counts[(z + delta) % p]
                diff_counts[delta] += acc
    lhs = sum(c * math.cos(2 * math.pi * delta / p)
              for delta, c in enumerate(diff_counts))
    reference = K * size + K * K * p ** (n - 0.5)
    return SecondMomentReport(p, n, s, j0, K, h, lhs, reference)


def star_discrepancy_1d(samples: Sequence[float]) -> float:
    """Exact star discrepancy of a finite sequence in [0, 1) via the
    sorted-order formula (float arithmetic; see the residue variants
    for the fully exact rational result)."""
    xs = sorted(samples)
    N = len(xs)
    if N == 0:
        raise ParameterRangeError("empty sample")
    best = 0.0
    for i, x in enumerate(xs, start=1):
        best = max(best, i / N - x, x - (i - 1) / N)
    return best


def star_discrepancy_1d_residues(residues: Sequence[int], p: int) -> Fraction:
    """Exact star discrepancy of (v/p for v in residues) as a rational.

    All critical values are (i*p - v*N) / (N*p); the maximum is taken
    over integer numerators, so the result carries no rounding at all.
    """
    vs = sorted(residues)
    N = len(vs)
    if N == 0:
        raise ParameterRangeError("empty sample")
    best = 0
    for i, v in enumerate(vs, start=1):
        best = max(best, i * p - v * N, v * N - (i - 1) * p)
    return Fraction(best, N * p)


def star_discrepancy_2d_residues(pairs: Sequence[tuple], p: int) -> Fraction:
    """Exact star discrepancy of ((vx/p, vy/p) for pairs) as a rational.

    Sweeps the critical anchored boxes over the distinct-coordinate
    grid: closed counts at sample coordinates for the overfull side,
    open counts at sample coordinates and at 1 for the underfull side.
    Numerators are compared over the common denominator N * p^2.
    """
    import numpy as np

    N = len(pairs)
    if N == 0:
        raise ParameterRangeError("empty sample")
    pts = np.asarray(pairs, dtype=np.int64)
    xs = np.unique(pts[:, 0])
    ys = np.unique(pts[:, 1])
    xi = np.searchsorted(xs, pts[:, 0])
    yi = np.searchsorted(ys, pts[:, 1])
    counts = np.zeros((len(xs), len(ys)), dtype=np.int64)
    np.add.at(counts, (xi, yi), 1)
    closed = counts.cumsum(axis=0).cumsum(axis=1)
    pp = p * p
    if pp * N < (1 << 62):  # numerators fit int64
        over = int((closed * pp - np.outer(xs, ys) * N).max())
        xg = np.append(xs, p)
        yg = np.append(ys, p)
        open_counts = np.zeros((len(xg), len(yg)), dtype=np.int64)
        open_counts[1:, 1:] = closed
        under = int((np.outer(xg, yg) * N - open_counts * pp).max())
    else:
        xs_l, ys_l = [int(v) for v in xs], [int(v) for v in ys]
        closed_l = [[int(c) for c in row] for row in closed]
        over = max(closed_l[i][j] * pp - xs_l[i] * ys_l[j] * N
                   for i in range(len(xs_l)) for j in range(len(ys_l)))
        xg = xs_l + [p]
        yg = ys_l + [p]
        under = max(xg[i] * yg[j] * N
                    - (closed_l[i - 1][j - 1] if i and j else 0) * pp
                    for i in range(len(xg)) for j in range(len(yg)))
    return Fraction(max(over, under, 0), N * pp)


@dataclass
class DiscrepancyReport:
    """Exact star discrepancy of snake windows plus the trend-only
    reference curve (N^{-1/3} + p^{-1/4}) (log N)^s log p.

    ``d_star_exact`` is the (numerator, denominator) pair of the exact
    rational value; ``d_star`` is its float image.  The extreme
    discrepancy D over all boxes satisfies d_star <= D <= 2^s * d_star.
    """

    p: int
    n: int
    s: int
    N: int
    x0: tuple
    d_star: float
    d_star_exact: tuple
    bound: float

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "s": self.s, "N": self.N,
                "x0": list(self.x0), "d_star": self.d_star,
                "d_star_exact": list(self.d_star_exact),
                "bound": self.bound,
                "extreme_sandwich": [self.d_star, 2 ** self.s * self.d_star]}


def discrepancy_report(fj: FractionalJump, s: int, N: int,
                       x0: Optional[Sequence[int]] = None) -> DiscrepancyReport:
    """Star discrepancy of the windows (v_{m+1}/p, ..., v_{m+s}/p),
    m = 0..N-1, of the snake stream from seed x0 (default origin)."""
    p = fj.p
    if s not in (1, 2):
        raise ParameterRangeError("window dimension s must be 1 or 2")
    cap = DISCREPANCY_CAP_1D if s == 1 else DISCREPANCY_CAP_2D
    if not 1 <= N <= cap:
        raise ParameterRangeError(f"N = {N} outside 1..{cap} for s = {s}")
    if x0 is None:
        x0 = (0,) * fj.n
    x0 = tuple(v % p for v in x0)
    vals = snake_values(fj, x0, N + s - 1)
    if s == 1:
        exact = star_discrepancy_1d_residues(vals[:N], p)
    else:
        exact = star_discrepancy_2d_residues([(vals[m], vals[m + 1])
                                              for m in range(N)], p)
    bound = (N ** (-1 / 3) + p ** (-1 / 4)) * math.log(N + 1) ** s * math.log(p)
    return DiscrepancyReport(p, fj.n, s, N, x0, float(exact),
                             (exact.numerator, exact.denominator), bound)


def full_snake_period(fj: FractionalJump) -> int:
    """Length of one full period of the scalar stream: n * p^n."""
    return fj.n * fj.p ** fj.n

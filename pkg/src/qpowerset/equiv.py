"""PGL(k, q) acting on point sets, and geometric q-equivalence.

Equivalence is decided by screening with cheap invariants (size, span
dimension, hyperplane intersection spectrum) and then by an exact search.
Both sets are first moved into the coordinate subspace of their span. Then
the search fixes a frame of the first set and tries every ordered tuple of
the second set as its image. A frame is d+2 points in general position. When
the first set has no frame (e.g. a line plus one point), the search fixes a
basis instead and also runs over the diagonal scalings left undetermined.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import gf, projgeom
from .errors import AmbientMismatch, CapExceeded, DimensionMismatch, Singular
from .projgeom import PointSet

MAX_SET_SIZE = 64
MAX_SPAN_DIMENSION = 3


@dataclass(frozen=True)
class PglElement:
    """An invertible matrix up to scalars; the first nonzero entry (row-major) is 1."""

    q: int
    matrix: gf.Matrix

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], q: int) -> "PglElement":
        m = gf.matrix(rows, q)
        if not m or len(m) != len(m[0]):
            raise DimensionMismatch("a PGL element needs a square matrix")
        if gf.mat_rank(m, q) != len(m):
            raise Singular("matrix is not invertible")
        lead = next(x for row in m for x in row if x)
        s = gf.inv(lead, q)
        return cls(q, tuple(tuple(x * s % q for x in row) for row in m))

    @classmethod
    def identity(cls, k: int, q: int) -> "PglElement":
        return cls.of(gf.identity(k), q)

    @property
    def k(self) -> int:
        return len(self.matrix)

    def inverse(self) -> "PglElement":
        return PglElement.of(gf.mat_inverse(self.matrix, self.q), self.q)

    def __matmul__(self, other: "PglElement") -> "PglElement":
        return PglElement.of(gf.matmul(self.matrix, other.matrix, self.q), self.q)

    def __call__(self, p: Sequence[int]) -> tuple[int, ...]:
        return projgeom.normalize(gf.matvec(self.matrix, p, self.q), self.q)


@dataclass(frozen=True)
class EquivCertificate:
    equivalent: bool
    witness: PglElement | None = None
    separating_invariant: str | None = None


def apply(g: PglElement, s: PointSet) -> PointSet:
    if g.k != s.k or g.q != s.q:
        raise DimensionMismatch("group element and point set live in different spaces")
    return PointSet(s.q, s.k, frozenset(g(p) for p in s.points))


def _general_position(vectors: Sequence[Sequence[int]], n: int, q: int) -> bool:
    """Every n of the given vectors are linearly independent in F_q^n."""
    return all(gf.mat_rank(sub, q) == n for sub in itertools.combinations(vectors, n))


def _frame_map(src: Sequence[Sequence[int]], dst: Sequence[Sequence[int]], q: int) -> gf.Matrix | None:
    """The matrix sending the frame ``src`` to ``dst`` point by point, if ``dst``
    is a frame too. Both hold n+1 vectors of F_q^n."""
    n = len(src) - 1

    def scaled_basis(frame):
        basis_t = gf.transpose(tuple(frame[:n]))
        try:
            lam = gf.matvec(gf.mat_inverse(basis_t, q), frame[n], q)
        except Singular:
            return None
        if not all(lam):
            return None
        return tuple(tuple(basis_t[i][j] * lam[j] % q for j in range(n)) for i in range(n))

    a, b = scaled_basis(src), scaled_basis(dst)
    if a is None or b is None:
        return None
    return gf.matmul(b, gf.mat_inverse(a, q), q)


def _first_frame(points: Sequence[Sequence[int]], n: int, q: int) -> tuple | None:
    for tup in itertools.permutations(points, n + 1):
        if _general_position(tup, n, q):
            return tup
    return None


def _first_basis(points: Sequence[Sequence[int]], n: int, q: int) -> tuple:
    basis: list = []
    for p in points:
        if gf.mat_rank(basis + [p], q) > len(basis):
            basis.append(p)
    return tuple(basis[:n])


def _candidate_maps(src_pts: list, dst_pts: list, n: int, q: int) -> Iterator[gf.Matrix]:
    frame = _first_frame(src_pts, n, q)
    if frame is not None:
        for tup in itertools.permutations(dst_pts, n + 1):
            m = _frame_map(frame, tup, q)
            if m is not None:
                yield m
        return
    basis = _first_basis(src_pts, n, q)
    src_inv = gf.mat_inverse(gf.transpose(basis), q)
    for tup in itertools.permutations(dst_pts, n):
        if gf.mat_rank(tup, q) != n:
            continue
        dst_t = gf.transpose(tup)
        for scales in itertools.product(range(1, q), repeat=n - 1):
            lam = (1,) + scales
            d = tuple(tuple(dst_t[i][j] * lam[j] % q for j in range(n)) for i in range(n))
            yield gf.matmul(d, src_inv, q)


def _span_chart(s: PointSet) -> tuple[gf.Matrix, int]:
    """Invertible g with g(span s) = first r coordinates; returns (g, r)."""
    from .correspond import _reduction_map

    return _reduction_map(s.sorted(), s.q, s.k)


def _embed(m: gf.Matrix, k: int) -> gf.Matrix:
    n = len(m)
    return tuple(
        tuple(m[i][j] if i < n and j < n else int(i == j) for j in range(k)) for i in range(k)
    )


def points_equivalent(
    s: PointSet,
    t: PointSet,
    screen: bool = True,
    max_size: int = MAX_SET_SIZE,
) -> EquivCertificate:
    """Is there g in PGL(k, q) with g(s) = t? Returns the first witness found."""
    if s.q != t.q or s.k != t.k:
        raise AmbientMismatch("sets live in different projective spaces")
    q, k = s.q, s.k
    if len(s) != len(t):
        return EquivCertificate(False, separating_invariant="size")
    if not s.points:
        return EquivCertificate(True, PglElement.identity(k, q))
    if len(t) > max_size:
        raise CapExceeded(f"sets of size {len(t)} exceed the search cap {max_size}")
    d = projgeom.span_projective_dimension(s)
    if d != projgeom.span_projective_dimension(t):
        return EquivCertificate(False, separating_invariant="span dimension")
    if d > MAX_SPAN_DIMENSION:
        raise CapExceeded(f"span dimension {d} exceeds {MAX_SPAN_DIMENSION}")
    if screen and projgeom.hyperplane_spectrum(s) != projgeom.hyperplane_spectrum(t):
        return EquivCertificate(False, separating_invariant="hyperplane spectrum")
    n = d + 1
    gs, _ = _span_chart(s)
    gt, _ = _span_chart(t)
    s_loc = sorted(projgeom.normalize(gf.matvec(gs, p, q)[:n], q) for p in s.sorted())
    t_loc = sorted(projgeom.normalize(gf.matvec(gt, p, q)[:n], q) for p in t.sorted())
    t_set = frozenset(t_loc)
    if n == 1:
        h = ((1,),)
    else:
        h = None
        for m in _candidate_maps(s_loc, t_loc, n, q):
            if all(projgeom.normalize(gf.matvec(m, p, q), q) in t_set for p in s_loc):
                h = m
                break
    if h is None:
        return EquivCertificate(False)
    full = gf.matmul(gf.mat_inverse(gt, q), gf.matmul(_embed(h, k), gs, q), q)
    return EquivCertificate(True, PglElement.of(full, q))


def sets_equivalent(B, B2, q: int, screen: bool = True) -> EquivCertificate:
    """Geometric q-equivalence of two integer sets over their joint prime support."""
    from .correspond import exponent_matrix, point_set_of

    point_set_of(B, q)
    point_set_of(B2, q)
    ma = exponent_matrix(B, q)
    mb = exponent_matrix(B2, q)
    primes = sorted(set(ma.primes) | set(mb.primes))
    sa = exponent_matrix(B, q, primes).point_set()
    sb = exponent_matrix(B2, q, primes).point_set()
    return points_equivalent(sa, sb, screen=screen)


def random_pgl(k: int, q: int, rng) -> PglElement:
    """Uniform-ish random element, by rejection sampling of invertible matrices."""
    while True:
        rows = [[int(rng.integers(q)) for _ in range(k)] for _ in range(k)]
        if gf.mat_rank(rows, q) == k:
            return PglElement.of(rows, q)

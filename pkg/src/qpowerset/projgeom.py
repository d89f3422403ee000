"""Points, hyperplanes and blocking sets of the projective space PG(F_q^k).

A point is stored as its canonical representative: the coordinate tuple whose
first nonzero entry is 1. Hyperplanes are stored the same way through their
normal vector, and the duality between the two simply reinterprets the
coordinates.

Incidence-heavy queries (blocking, essential points, spectra) build a
hyperplane-by-point incidence matrix with numpy in chunks of hyperplanes.
Hyperplanes are always scanned in lexicographic order of their normals, so
"first" witnesses are well defined.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import gf
from .errors import (
    CapExceeded,
    DimensionMismatch,
    EmptySet,
    EqualPoints,
    NotBlocking,
    NotCoplanar,
    PointInSet,
    ZeroVector,
)

Point = tuple[int, ...]

DEFAULT_CAP = 500_000
_CHUNK = 65_536


@dataclass(frozen=True, order=True)
class Hyperplane:
    normal: Point

    def __str__(self):
        terms = [f"{c}*X{i + 1}" if c != 1 else f"X{i + 1}" for i, c in enumerate(self.normal) if c]
        return " + ".join(terms) + " = 0"


@dataclass(frozen=True)
class PointSet:
    """A finite set of points of PG(F_q^k). Input vectors are normalized."""

    q: int
    k: int
    points: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        gf.check_modulus(self.q)
        if self.k < 1:
            raise DimensionMismatch("k must be positive")
        pts = set()
        for v in self.points:
            if len(v) != self.k:
                raise DimensionMismatch(f"point {tuple(v)} does not have length {self.k}")
            pts.add(normalize(v, self.q))
        object.__setattr__(self, "points", frozenset(pts))

    @classmethod
    def of(cls, q: int, vectors: Iterable[Sequence[int]], k: int | None = None) -> "PointSet":
        vectors = [tuple(v) for v in vectors]
        if k is None:
            if not vectors:
                raise EmptySet("cannot infer k from an empty collection")
            k = len(vectors[0])
        return cls(q, k, frozenset(vectors))

    def __len__(self):
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.sorted())

    def __contains__(self, p):
        return normalize(p, self.q) in self.points

    def sorted(self) -> list[Point]:
        return sorted(self.points)

    def without(self, p: Point) -> "PointSet":
        return PointSet(self.q, self.k, self.points - {normalize(p, self.q)})

    def union(self, other: Iterable[Sequence[int]]) -> "PointSet":
        return PointSet(self.q, self.k, self.points | {tuple(v) for v in other})


@dataclass(frozen=True)
class BlockingCertificate:
    verdict: bool
    missing_hyperplane: Hyperplane | None = None

    def __bool__(self):
        return self.verdict


def normalize(v: Sequence[int], q: int) -> Point:
    """Scale ``v`` so that its first nonzero coordinate is 1."""
    v = [int(x) % q for x in v]
    lead = next((x for x in v if x), 0)
    if lead == 0:
        raise ZeroVector("the zero vector is not a projective point")
    s = gf.inv(lead, q)
    return tuple(x * s % q for x in v)


def point_count(q: int, k: int) -> int:
    return (q**k - 1) // (q - 1)


def _check_ambient(q: int, k: int, cap: int) -> None:
    gf.check_modulus(q)
    if k < 2:
        raise DimensionMismatch("PG(F_q^k) needs k >= 2")
    n = point_count(q, k)
    if n > cap:
        raise CapExceeded(f"PG(F_{q}^{k}) has {n} points, above the cap of {cap}")


@lru_cache(maxsize=64)
def _all_points(q: int, k: int) -> tuple[Point, ...]:
    # itertools.product is lexicographic and normalized vectors are a
    # lexicographically closed selection, so the result is already sorted.
    out = []
    for lead in range(k):
        for tail in itertools.product(range(q), repeat=k - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    out.sort()
    return tuple(out)


@lru_cache(maxsize=64)
def _points_array(q: int, k: int) -> np.ndarray:
    arr = np.array(_all_points(q, k), dtype=np.int64)
    arr.setflags(write=False)
    return arr


def enumerate_points(q: int, k: int, cap: int = DEFAULT_CAP) -> PointSet:
    _check_ambient(q, k, cap)
    return PointSet(q, k, frozenset(_all_points(q, k)))


def all_points(q: int, k: int, cap: int = DEFAULT_CAP) -> tuple[Point, ...]:
    """All points of PG(F_q^k) in lexicographic order."""
    _check_ambient(q, k, cap)
    return _all_points(q, k)


def all_hyperplanes(q: int, k: int, cap: int = DEFAULT_CAP) -> tuple[Hyperplane, ...]:
    return tuple(Hyperplane(p) for p in all_points(q, k, cap))


def dual(x):
    """Point -> hyperplane with that normal, hyperplane -> its normal point."""
    if isinstance(x, Hyperplane):
        return x.normal
    return Hyperplane(tuple(x))


def incident(p: Point, h: Hyperplane, q: int) -> bool:
    if len(p) != len(h.normal):
        raise DimensionMismatch("point and hyperplane live in different spaces")
    return gf.dot(p, h.normal, q) == 0


def span_projective_dimension(s: PointSet | Iterable[Sequence[int]], q: int | None = None) -> int:
    if isinstance(s, PointSet):
        q = s.q
        pts = s.sorted()
    else:
        pts = [tuple(p) for p in s]
    if not pts:
        raise EmptySet("the empty set spans nothing")
    return gf.mat_rank(pts, q) - 1


def _incidence_chunks(s: PointSet, cap: int) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(offset, inc)`` where ``inc[i, j]`` tells whether hyperplane
    ``offset + i`` contains the j-th point of ``s.sorted()``."""
    _check_ambient(s.q, s.k, cap)
    hyps = _points_array(s.q, s.k)
    pts = np.array(s.sorted(), dtype=np.int64).reshape(-1, s.k)
    for start in range(0, len(hyps), _CHUNK):
        block = hyps[start:start + _CHUNK]
        yield start, (block @ pts.T) % s.q == 0


def is_blocking(s: PointSet, cap: int = DEFAULT_CAP) -> BlockingCertificate:
    """Decide whether ``s`` meets every hyperplane of PG(F_q^k).

    On failure the certificate carries the lexicographically first hyperplane
    missing ``s``.
    """
    hyps = None
    for start, inc in _incidence_chunks(s, cap):
        hit = inc.any(axis=1)
        if not hit.all():
            hyps = hyps or _all_points(s.q, s.k)
            return BlockingCertificate(False, Hyperplane(hyps[start + int(np.argmin(hit))]))
    return BlockingCertificate(True)


def hyperplanes_cover(normals: Iterable[Sequence[int]], q: int, k: int, cap: int = DEFAULT_CAP) -> tuple[bool, Point | None]:
    """Decide whether the hyperplanes with the given normals cover every point.

    This is the covering side of the point/hyperplane duality and is written
    independently of :func:`is_blocking` (plain loops, point-major order).
    Returns the verdict and the first uncovered point, if any.
    """
    _check_ambient(q, k, cap)
    normals = [tuple(int(x) % q for x in n) for n in normals]
    for p in _all_points(q, k):
        if not any(sum(a * b for a, b in zip(n, p)) % q == 0 for n in normals):
            return False, p
    return True, None


def essential_points(s: PointSet, cap: int = DEFAULT_CAP) -> dict[Point, Hyperplane | None]:
    """Map every point of a blocking set to the first hyperplane meeting the
    set in that point only (``None`` when the point is not essential)."""
    cert = is_blocking(s, cap)
    if not cert.verdict:
        raise NotBlocking(f"set misses hyperplane {cert.missing_hyperplane}")
    pts = s.sorted()
    hyps = _all_points(s.q, s.k)
    witness: dict[Point, Hyperplane | None] = {p: None for p in pts}
    remaining = len(pts)
    for start, inc in _incidence_chunks(s, cap):
        tangent_rows = np.nonzero(inc.sum(axis=1) == 1)[0]
        for r in tangent_rows:
            j = int(np.argmax(inc[r]))
            if witness[pts[j]] is None:
                witness[pts[j]] = Hyperplane(hyps[start + int(r)])
                remaining -= 1
        if remaining == 0:
            break
    return witness


def is_minimal_blocking(s: PointSet, cap: int = DEFAULT_CAP) -> bool:
    if not is_blocking(s, cap).verdict:
        return False
    return all(h is not None for h in essential_points(s, cap).values())


def line_through(p1: Sequence[int], p2: Sequence[int], q: int) -> PointSet:
    a, b = normalize(p1, q), normalize(p2, q)
    if a == b:
        raise EqualPoints("a line needs two distinct points")
    if len(a) != len(b):
        raise DimensionMismatch("points of different lengths")
    pts = {a} | {normalize([y + lam * x for x, y in zip(a, b)], q) for lam in range(q)}
    return PointSet(q, len(a), frozenset(pts))


def all_lines(q: int, k: int, cap: int = DEFAULT_CAP) -> list[PointSet]:
    """Every line of PG(F_q^k), each listed once."""
    pts = all_points(q, k, cap)
    seen: set[frozenset] = set()
    lines = []
    for a, b in itertools.combinations(pts, 2):
        line = line_through(a, b, q)
        if line.points not in seen:
            seen.add(line.points)
            lines.append(line)
    return lines


def is_trivial_blocking(s: PointSet) -> bool:
    """True iff ``s`` contains all q+1 points of some line."""
    pts = s.sorted()
    for a, b in itertools.combinations(pts, 2):
        if line_through(a, b, s.q).points <= s.points:
            return True
    return False


def nucleus_check(t: PointSet, p: Sequence[int]) -> bool:
    """Is ``p`` a nucleus of ``t``: does every line through ``p`` in the plane
    spanned by ``t`` and ``p`` meet ``t`` exactly once?"""
    p = normalize(p, t.q)
    if p in t.points:
        raise PointInSet(f"{p} belongs to the set")
    if span_projective_dimension(t.sorted() + [p], t.q) != 2:
        raise NotCoplanar("the set and the point do not span a plane")
    plane = t.sorted() + [p]
    # Lines through p in the plane are p + x for x running over the other
    # points of the plane; group every plane point by the line it spans with p.
    basis_rows, _ = gf.row_reduce(plane, t.q)
    basis = [r for r in basis_rows if any(r)]
    plane_points = {
        normalize([sum(c * b[i] for c, b in zip(coef, basis)) for i in range(t.k)], t.q)
        for coef in itertools.product(range(t.q), repeat=3)
        if any(coef)
    }
    lines = {line_through(p, x, t.q).points for x in plane_points - {p}}
    return all(len(line & t.points) == 1 for line in lines)


def hyperplane_spectrum(s: PointSet, cap: int = DEFAULT_CAP) -> tuple[int, ...]:
    """Sorted multiset of intersection sizes of ``s`` with every hyperplane."""
    if not s.points:
        _check_ambient(s.q, s.k, cap)
        return (0,) * point_count(s.q, s.k)
    sizes = [inc.sum(axis=1) for _, inc in _incidence_chunks(s, cap)]
    return tuple(sorted(int(x) for x in np.concatenate(sizes)))

"""Constructions of the canonical minimal locally q-th power sets.

Each ``*_points`` function builds a point set of PG(F_q^k); each ``*_set``
function realizes it on caller-supplied primes and attaches a verification
record. The record is produced by running the checkers in :mod:`projgeom`
and :mod:`correspond` on the result; nothing in it is asserted by the
constructor itself.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import gf, projgeom
from .arith import FactoredInteger
from .correspond import decide_locally, realize_factored
from .errors import DuplicatePrimes, EqualPrimes, UnsupportedQ
from .projgeom import PointSet

HESSIAN_Q = 7


@dataclass(frozen=True)
class Verification:
    blocking: bool
    minimal: bool
    nontrivial: bool
    dimension: int
    size: int
    locally: bool | None = None
    set_minimal: bool | None = None
    set_dimension: int | None = None


@dataclass(frozen=True)
class ConstructionResult:
    family: str
    q: int
    primes: tuple[int, ...]
    points: PointSet
    elements: tuple[FactoredInteger, ...]
    verification: Verification

    @property
    def integers(self) -> list[int]:
        return [f.value for f in self.elements]


def _check_primes(primes: Sequence[int], count: int) -> tuple[int, ...]:
    primes = tuple(int(p) for p in primes)
    if len(primes) != count:
        raise ValueError(f"expected {count} primes, got {len(primes)}")
    if any(not gf._is_prime(p) for p in primes):
        raise ValueError(f"not all of {primes} are prime")
    if len(set(primes)) != count:
        raise (EqualPrimes if count == 2 else DuplicatePrimes)(f"primes {primes} are not distinct")
    return primes


def verify_points(s: PointSet) -> Verification:
    cert = projgeom.is_blocking(s)
    minimal = cert.verdict and all(h is not None for h in projgeom.essential_points(s).values())
    return Verification(
        blocking=cert.verdict,
        minimal=minimal,
        nontrivial=not projgeom.is_trivial_blocking(s),
        dimension=projgeom.span_projective_dimension(s),
        size=len(s),
    )


def _realize(family: str, s: PointSet, primes: tuple[int, ...], vectors=None) -> ConstructionResult:
    vectors = s.sorted() if vectors is None else vectors
    elems = tuple(realize_factored(vectors, primes))
    geo = verify_points(s)
    report = decide_locally(elems, s.q)
    verification = Verification(
        **{**geo.__dict__, "locally": report.locally, "set_minimal": report.minimal, "set_dimension": report.dimension}
    )
    return ConstructionResult(family, s.q, primes, s, elems, verification)


def line_points(q: int) -> PointSet:
    """The points (1,0), (0,1), (1,j) of PG(F_q^2), j = 1..q-1."""
    gf.check_modulus(q)
    return PointSet.of(q, [(1, 0), (0, 1)] + [(1, j) for j in range(1, q)])


def line_set(q: int, p1: int, p2: int) -> ConstructionResult:
    """{p1, p2, p1*p2, p1*p2^2, ..., p1*p2^(q-1)}."""
    primes = _check_primes((p1, p2), 2)
    s = line_points(q)
    vectors = [(1, 0), (0, 1)] + [(1, j) for j in range(1, q)]
    return _realize("line", s, primes, vectors)


def nonzero_squares(q: int) -> list[int]:
    return sorted({a * a % q for a in range(1, q)})


def projective_triangle_vectors(q: int) -> list[tuple[int, int, int]]:
    """Exponent vectors of the triangle: units plus (0,1,q-s), (q-s,0,1), (1,q-s,0)."""
    gf.check_modulus(q)
    out = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for s in nonzero_squares(q):
        e = (q - s) % q
        out += [(0, 1, e), (e, 0, 1), (1, e, 0)]
    return out


def projective_triangle_points(q: int) -> PointSet:
    return PointSet.of(q, projective_triangle_vectors(q))


def triangle_structure(s: PointSet, vertices: Sequence[Sequence[int]]) -> dict:
    """Check the three projective-triangle conditions for given vertices.

    Returns the side counts and whether vertices lie in ``s``, the sides carry
    (q-1)/2 + 2 points each, and every join of points on two sides passes
    through a point of the third side.
    """
    q = s.q
    v = [projgeom.normalize(x, q) for x in vertices]
    sides = {}
    for i, j in itertools.combinations(range(3), 2):
        sides[(i, j)] = projgeom.line_through(v[i], v[j], q).points & s.points
    expected = (q - 1) // 2 + 2
    closure = True
    for i, j, k in itertools.permutations(range(3)):
        a_side = sides[tuple(sorted((i, j)))]
        b_side = sides[tuple(sorted((j, k)))]
        c_side = sides[tuple(sorted((i, k)))]
        for a in a_side:
            for b in b_side:
                if a == b:
                    continue
                if not projgeom.line_through(a, b, q).points & c_side:
                    closure = False
    return {
        "non_collinear": gf.mat_rank(v, q) == 3,
        "vertices_in_set": all(x in s.points for x in v),
        "side_counts": [len(sides[key]) for key in sorted(sides)],
        "side_counts_ok": all(len(x) == expected for x in sides.values()),
        "closure": closure,
        "size_ok": len(s) == 3 * (q + 1) // 2,
    }


def projective_triangle_set(q: int, p1: int, p2: int, p3: int) -> ConstructionResult:
    """{p2*p3^(q-s), p1^(q-s)*p3, p1*p2^(q-s) : s a nonzero square} + {p1, p2, p3}."""
    primes = _check_primes((p1, p2, p3), 3)
    return _realize("triangle", projective_triangle_points(q), primes, projective_triangle_vectors(q))


def hessian_configuration(omega: int = 2) -> PointSet:
    """The nine points of the Hessian configuration of PG(F_7^3)."""
    q = HESSIAN_Q
    _check_cube_root(omega)
    pts = []
    for w in (1, omega, omega * omega % q):
        pts += [(1, -w, 0), (0, 1, -w), (-w, 0, 1)]
    return PointSet.of(q, pts)


def _check_cube_root(omega: int) -> None:
    q = HESSIAN_Q
    if omega % q == 1 or pow(omega, 3, q) != 1:
        raise ValueError(f"{omega} is not a primitive cube root of unity mod {q}")


def hessian_vectors(omega: int = 2) -> list[tuple[int, int, int]]:
    """Exponent vectors of the twelve-point set dual to the Hessian trisecants."""
    _check_cube_root(omega)
    w, w2 = omega % HESSIAN_Q, omega * omega % HESSIAN_Q
    return [
        (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1),
        (w2, w, 1), (w2, 1, w), (w, w, 1), (1, w, 1),
        (w, 1, 1), (w, 1, w), (1, w, w), (1, 1, w),
    ]


def trisecants(c: PointSet) -> list[PointSet]:
    """Lines of the ambient plane meeting ``c`` in exactly three points."""
    return [line for line in projgeom.all_lines(c.q, c.k) if len(line.points & c.points) == 3]


def hessian_points(omega: int = 2) -> tuple[PointSet, PointSet]:
    """(Hessian configuration C, the twelve-point set S)."""
    return hessian_configuration(omega), PointSet.of(HESSIAN_Q, hessian_vectors(omega))


def trisecant_duals(c: PointSet) -> PointSet:
    """Normals of the trisecant lines of ``c`` as a point set."""
    q = c.q
    out = []
    for line in trisecants(c):
        a, b = line.sorted()[:2]
        normal = gf.nullspace_basis([a, b], q)[0]
        out.append(normal)
    return PointSet.of(q, out, k=c.k)


def hessian_set(p1: int, p2: int, p3: int, omega: int = 2) -> ConstructionResult:
    primes = _check_primes((p1, p2, p3), 3)
    _, s = hessian_points(omega)
    return _realize("hessian", s, primes, hessian_vectors(omega))


def tallini_default_t(q: int) -> tuple[PointSet, tuple[int, ...]]:
    """A (q+1)-set in the plane X_4 = 0 with nucleus (0,1,0,0): one point on
    each line through the nucleus."""
    gf.check_modulus(q)
    pts = [(0, 0, 1, 0), (1, 0, 0, 0)] + [(1, 1, c, 0) for c in range(1, q)]
    return PointSet.of(q, pts), (0, 1, 0, 0)


def tallini_vectors(q: int) -> list[tuple[int, ...]]:
    t, _ = tallini_default_t(q)
    line_part = [(0, 0, 0, 1)] + [(0, 1, 0, c) for c in range(1, q)]
    return [tuple(p) for p in t.sorted()] + line_part


def tallini_points(q: int) -> PointSet:
    """(line X_1 = X_3 = 0 minus the plane X_4 = 0) together with the default T."""
    return PointSet.of(q, tallini_vectors(q))


def tallini_set(q: int, p1: int, p2: int, p3: int, p4: int) -> ConstructionResult:
    if q not in (3, 5):
        raise UnsupportedQ("the size-2q+1 minimum is established for q in {3, 5}")
    primes = _check_primes((p1, p2, p3, p4), 4)
    return _realize("tallini", tallini_points(q), primes, tallini_vectors(q))


def smallest_nonsquare(q: int) -> int:
    squares = set(nonzero_squares(q))
    return next(a for a in range(2, q) if a not in squares)


def elliptic_quadric_points(q: int) -> PointSet:
    """Zeros of x1^2 - alpha*x2^2 + x3*x4 in PG(F_q^4), alpha the least non-square."""
    gf.check_modulus(q)
    alpha = smallest_nonsquare(q)
    pts = [p for p in projgeom.all_points(q, 4) if (p[0] ** 2 - alpha * p[1] ** 2 + p[2] * p[3]) % q == 0]
    return PointSet.of(q, pts, k=4)


def no_three_collinear(s: PointSet) -> bool:
    return all(len(line.points & s.points) <= 2 for line in projgeom.all_lines(s.q, s.k))


def elliptic_quadric_set(q: int, p1: int, p2: int, p3: int, p4: int) -> ConstructionResult:
    primes = _check_primes((p1, p2, p3, p4), 4)
    return _realize("quadric", elliptic_quadric_points(q), primes)

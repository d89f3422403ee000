"""Exact linear algebra over the prime field F_q (q an odd prime).

Vectors are tuples of canonical residues in ``[0, q)`` and matrices are
tuples of such row tuples. Every function takes the modulus explicitly and
reduces its output eagerly, so results compare with plain ``==``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import DimensionMismatch, InvalidModulus, Singular, ZeroInverse

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=4096)
def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the fixed bases are exact below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_modulus(q: int) -> int:
    """Return ``q`` unchanged, raising InvalidModulus unless it is an odd prime."""
    if isinstance(q, bool) or not isinstance(q, int):
        raise InvalidModulus(f"q must be an integer, got {q!r}")
    if q == 2 or not _is_prime(q):
        raise InvalidModulus(f"q must be an odd prime, got {q}")
    return q


@dataclass(frozen=True)
class FieldElement:
    value: int
    q: int

    def __post_init__(self):
        check_modulus(self.q)
        object.__setattr__(self, "value", self.value % self.q)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.q != self.q:
                raise DimensionMismatch("field elements over different moduli")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FieldElement(self.value + v, self.q)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FieldElement(self.value - v, self.q)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FieldElement(v - self.value, self.q)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FieldElement(self.value * v, self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.q)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self * fe_inv(FieldElement(v, self.q))

    def __int__(self):
        return self.value

    def inverse(self) -> "FieldElement":
        return fe_inv(self)


def inv(a: int, q: int) -> int:
    """Multiplicative inverse of the residue ``a`` modulo ``q``."""
    a %= q
    if a == 0:
        raise ZeroInverse("0 has no inverse")
    return pow(a, q - 2, q)


def fe_inv(a: FieldElement) -> FieldElement:
    return FieldElement(inv(a.value, a.q), a.q)


def vector(values: Sequence[int], q: int) -> Vector:
    return tuple(int(v) % q for v in values)


def matrix(rows: Sequence[Sequence[int]], q: int) -> Matrix:
    rows = tuple(vector(r, q) for r in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise DimensionMismatch("matrix rows have different lengths")
    return rows


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def dot(u: Sequence[int], v: Sequence[int], q: int) -> int:
    if len(u) != len(v):
        raise DimensionMismatch(f"lengths {len(u)} and {len(v)} differ")
    return sum(a * b for a, b in zip(u, v)) % q


def matvec(m: Matrix, v: Sequence[int], q: int) -> Vector:
    return tuple(dot(row, v, q) for row in m)


def matmul(a: Matrix, b: Matrix, q: int) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch("inner dimensions differ")
    cols = transpose(b)
    return tuple(tuple(dot(row, col, q) for col in cols) for row in a)


def row_reduce(m: Sequence[Sequence[int]], q: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of ``m`` and the list of pivot columns.

    The pivot row for each column is the first row (top to bottom) with a
    nonzero entry, which keeps every derived certificate deterministic.
    """
    rows = [[x % q for x in r] for r in m]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        scale = inv(rows[r][c], q)
        rows[r] = [x * scale % q for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % q for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def mat_rank(m: Sequence[Sequence[int]], q: int) -> int:
    return len(row_reduce(m, q)[1])


def mat_inverse(m: Sequence[Sequence[int]], q: int) -> Matrix:
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionMismatch("matrix is not square")
    aug = [list(r) + list(e) for r, e in zip(m, identity(n))]
    red, pivots = row_reduce(aug, q)
    if pivots[:n] != list(range(n)):
        raise Singular("matrix is singular over F_q")
    return tuple(tuple(r[n:]) for r in red)


def nullspace_basis(m: Sequence[Sequence[int]], q: int, ncols: int | None = None) -> list[Vector]:
    """Basis of ``{x : m x = 0}``; one vector per free column, in column order.

    ``ncols`` is needed only when ``m`` has no rows.
    """
    if ncols is None:
        if not m:
            raise DimensionMismatch("ncols is required for an empty matrix")
        ncols = len(m[0])
    red, pivots = row_reduce(m, q)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        x = [0] * ncols
        x[free] = 1
        for row, pc in zip(red, pivots):
            x[pc] = -row[free] % q
        basis.append(tuple(x))
    return basis

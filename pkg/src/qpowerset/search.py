"""Exhaustive searches for small minimal blocking sets.

Two independent routes:

* :func:`exhaustive_minimal_blocking` walks every subset of a given size with
  numpy, one batch per smallest element. Every point is a bitmask of the
  hyperplanes through it, and a subset blocks iff the OR of its masks is
  full. Partial subsets are dropped once the hyperplanes still missing
  outnumber what the remaining points could possibly block.
* :func:`branch_minimal_blocking` is a depth-first search that always
  branches on the points of an unblocked hyperplane, excluding earlier
  branches' points so each set is produced once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gf, projgeom
from .errors import CapExceeded, UnsupportedK, UnsupportedQ
from .projgeom import PointSet

MAX_BITS = 63
DEFAULT_SUBSET_CAP = 50_000_000


@dataclass(frozen=True)
class SearchResult:
    q: int
    k: int
    size: int
    candidates: int
    examined: int
    blocking: int
    minimal: list[PointSet] = field(default_factory=list)

    def by_dimension(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for s in self.minimal:
            d = projgeom.span_projective_dimension(s)
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))


def point_masks(q: int, k: int) -> tuple[tuple, list[int]]:
    """Points of PG(F_q^k) and, per point, the bitmask of hyperplanes through it."""
    pts = projgeom.all_points(q, k)
    arr = np.array(pts, dtype=np.int64)
    inc = (arr @ arr.T) % q == 0
    masks = [sum(1 << int(h) for h in np.nonzero(inc[:, i])[0]) for i in range(len(pts))]
    return pts, masks


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


def exhaustive_minimal_blocking(q: int, k: int, size: int, cap: int = DEFAULT_SUBSET_CAP) -> SearchResult:
    """All minimal blocking sets of PG(F_q^k) with exactly ``size`` points."""
    pts, masks = point_masks(q, k)
    n = len(pts)
    if n > MAX_BITS:
        raise CapExceeded(f"{n} hyperplanes do not fit a 63-bit mask")
    candidates = math.comb(n, size)
    if candidates > cap:
        raise CapExceeded(f"C({n}, {size}) = {candidates} subsets exceed the cap {cap}")
    full = np.int64((1 << n) - 1)
    mask_arr = np.array(masks, dtype=np.int64)
    per_point = projgeom.point_count(q, k - 1)
    examined = blocking = 0
    found: list[PointSet] = []
    for first in range(n - size + 1):
        idx = np.full((1, 1), first, dtype=np.int64)
        cover = mask_arr[[first]]
        for level in range(1, size):
            last = idx[:, -1]
            new_idx, new_cover = [], []
            for t in range(first + level, n - (size - level) + 1):
                rows = np.nonzero(last < t)[0]
                if rows.size == 0:
                    continue
                new_idx.append(np.column_stack([idx[rows], np.full(rows.size, t)]))
                new_cover.append(cover[rows] | mask_arr[t])
            idx = np.concatenate(new_idx)
            cover = np.concatenate(new_cover)
            missing = n - _popcount(cover)
            keep = missing <= (size - level - 1) * per_point
            idx, cover = idx[keep], cover[keep]
            if idx.size == 0:
                break
        if idx.size == 0 or idx.shape[1] != size:
            continue
        examined += len(idx)
        hit = cover == full
        idx = idx[hit]
        blocking += len(idx)
        if not len(idx):
            continue
        by_pos = mask_arr[idx]
        prefix = np.bitwise_or.accumulate(by_pos, axis=1)
        suffix = np.bitwise_or.accumulate(by_pos[:, ::-1], axis=1)[:, ::-1]
        zeros = np.zeros((len(idx), 1), dtype=np.int64)
        before = np.concatenate([zeros, prefix[:, :-1]], axis=1)
        after = np.concatenate([suffix[:, 1:], zeros], axis=1)
        minimal_rows = ((before | after) != full).all(axis=1)
        for row in idx[minimal_rows]:
            found.append(PointSet.of(q, [pts[i] for i in row], k=k))
    return SearchResult(q, k, size, candidates, examined, blocking, found)


def branch_minimal_blocking(q: int, k: int, max_size: int) -> list[PointSet]:
    """All minimal blocking sets of PG(F_q^k) with at most ``max_size`` points."""
    pts, masks = point_masks(q, k)
    n = len(pts)
    full = (1 << n) - 1
    on_hyp = [[i for i in range(n) if masks[i] >> h & 1] for h in range(n)]
    per_point = projgeom.point_count(q, k - 1)
    found: list[tuple[int, ...]] = []

    def minimal(chosen):
        for i in range(len(chosen)):
            rest = 0
            for j, p in enumerate(chosen):
                if j != i:
                    rest |= masks[p]
            if rest == full:
                return False
        return True

    def rec(chosen, covered, excluded):
        if covered == full:
            if minimal(chosen):
                found.append(tuple(sorted(chosen)))
            return
        room = max_size - len(chosen)
        if room == 0 or n - covered.bit_count() > room * per_point:
            return
        # branch on the unblocked hyperplane with the fewest available points
        best = None
        open_h = full & ~covered
        while open_h:
            low = open_h & -open_h
            h = low.bit_length() - 1
            open_h ^= low
            avail = [p for p in on_hyp[h] if not excluded >> p & 1]
            if best is None or len(avail) < len(best):
                best = avail
                if len(best) <= 1:
                    break
        for p in best:
            rec(chosen + [p], covered | masks[p], excluded)
            excluded |= 1 << p

    rec([], 0, 0)
    return [PointSet.of(q, [pts[i] for i in row], k=k) for row in sorted(set(found))]


def gapsearch(q: int, size: int, k: int = 3, method: str = "exhaustive", cap: int = DEFAULT_SUBSET_CAP) -> SearchResult:
    """Search for minimal blocking sets with q+1 < size < 3(q+1)/2."""
    gf.check_modulus(q)
    if q not in (3, 5):
        raise UnsupportedQ("gap search is supported for q in {3, 5}")
    if k != 3:
        raise UnsupportedK("gap search runs in the plane, k = 3")
    if not q + 1 < size < 3 * (q + 1) / 2:
        raise ValueError(f"size {size} is not strictly between {q + 1} and {3 * (q + 1) // 2}")
    if method == "exhaustive":
        return exhaustive_minimal_blocking(q, k, size, cap)
    if method == "branch":
        sets = [s for s in branch_minimal_blocking(q, k, size) if len(s) == size]
        n = projgeom.point_count(q, k)
        return SearchResult(q, k, size, math.comb(n, size), 0, 0, sets)
    raise ValueError(f"unknown method {method!r}")

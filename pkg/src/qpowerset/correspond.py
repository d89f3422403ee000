"""Integer sets <-> point sets, and the locally-q-th-power decision.

An integer set ``B`` is turned into an exponent matrix (one row per prime in
the support of the q-free parts, one column per element) and from there into
a point set of PG(F_q^k). ``B`` contains a q-th power modulo almost every
prime exactly when that point set meets every hyperplane.

Sets are accepted as any iterable of ints, :class:`FactoredInteger` values or
``{prime: exponent}`` maps. Everything after factorization works on exponent
vectors, so sets whose elements do not fit in 64 bits are fine in factored
form.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from . import gf, projgeom
from .arith import (
    Element,
    FactoredInteger,
    QFreeClass,
    as_factored,
    is_qth_power_residue,
    primes_up_to,
    rad_q,
)
from .equiv import PglElement
from .errors import (
    CapExceeded,
    DuplicatePrimes,
    EmptySet,
    LengthMismatch,
    PerfectPowerPresent,
    SinglePrimeSupport,
    UnitElement,
    UnsupportedK,
    WrongPrimeCount,
    ZeroExponent,
)
from .projgeom import Hyperplane, PointSet


@dataclass(frozen=True)
class ExponentMatrix:
    """Reduced exponents of the elements of ``B`` over the primes of its support.

    ``columns[j]`` is the exponent vector of ``rad_q(|b_j|)`` over ``primes``.
    """

    q: int
    primes: tuple[int, ...]
    columns: tuple[tuple[int, ...], ...]
    labels: tuple[FactoredInteger, ...]

    @property
    def k(self) -> int:
        return len(self.primes)

    @property
    def rows(self) -> gf.Matrix:
        return gf.transpose(self.columns) if self.columns else ()

    def point_set(self) -> PointSet:
        return PointSet.of(self.q, self.columns, k=self.k)


@dataclass(frozen=True)
class Certificate:
    kind: str
    data: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class LocalPowerReport:
    locally: bool
    trivial: bool
    certificate: Certificate
    q: int
    size: int
    classes: int | None = None
    primes: tuple[int, ...] = ()
    dimension: int | None = None
    minimal: bool | None = None


@dataclass(frozen=True)
class SizeBounds:
    q: int
    k: int
    lower_any: int
    lower_nontrivial: Fraction
    upper: float | int
    upper_strict: bool = False
    upper_approximate: bool = False


def elements(B: Iterable[Element]) -> list[FactoredInteger]:
    """Factor the elements of ``B``, dropping exact repeats (set semantics)."""
    out: list[FactoredInteger] = []
    seen = set()
    for b in B:
        f = as_factored(b)
        if f not in seen:
            seen.add(f)
            out.append(f)
    if not out:
        raise EmptySet("B is empty")
    return out


def exponent_matrix(B: Iterable[Element], q: int, primes: Sequence[int] | None = None) -> ExponentMatrix:
    """Exponent matrix of ``B``; ``primes`` may list a larger support to embed into."""
    gf.check_modulus(q)
    elems = elements(B)
    classes = [QFreeClass(q, f.factors) for f in elems]
    support = sorted({p for c in classes for p in c.primes})
    if primes is None:
        primes = support
    else:
        primes = list(primes)
        missing = set(support) - set(primes)
        if missing:
            raise ValueError(f"primes {sorted(missing)} of the support are not listed")
    cols = tuple(c.vector(primes) for c in classes)
    return ExponentMatrix(q, tuple(primes), cols, tuple(elems))


def _first_trivial(elems: Sequence[FactoredInteger], q: int) -> FactoredInteger | None:
    return next((f for f in elems if QFreeClass(q, f.factors).is_trivial), None)


def point_set_of(B: Iterable[Element], q: int) -> tuple[ExponentMatrix, PointSet]:
    m = exponent_matrix(B, q)
    for f in m.labels:
        if not f.factors:
            raise UnitElement(f"{f.value} is a unit")
    bad = _first_trivial(m.labels, q)
    if bad is not None:
        raise PerfectPowerPresent(f"{bad} is a perfect {q}-th power")
    if m.k < 2:
        raise SinglePrimeSupport("the q-free parts involve fewer than two primes")
    return m, m.point_set()


def _reduction_map(columns: Sequence[Sequence[int]], q: int, k: int) -> tuple[gf.Matrix, int]:
    """A matrix ``g`` sending the span of ``columns`` onto the first ``r``
    coordinates (``r`` = rank), plus ``r``. Identity when the span is everything."""
    rank = gf.mat_rank(columns, q)
    if rank == k:
        return gf.identity(k), rank
    basis: list[tuple[int, ...]] = []
    for v in itertools.chain(columns, gf.identity(k)):
        if gf.mat_rank(basis + [tuple(v)], q) > len(basis):
            basis.append(tuple(v))
        if len(basis) == k:
            break
    # basis vectors become the columns of a change-of-basis matrix
    return gf.mat_inverse(gf.transpose(tuple(basis)), q), rank


def _lift_hyperplane(normal: Sequence[int], g: gf.Matrix, q: int, k: int) -> Hyperplane:
    padded = tuple(normal) + (0,) * (k - len(normal))
    return Hyperplane(projgeom.normalize(gf.matvec(gf.transpose(g), padded, q), q))


def _decide_geometry(m: ExponentMatrix, cap: int) -> tuple[bool, Hyperplane | None, dict, int]:
    """Blocking verdict, missing hyperplane, essentiality map and dimension.

    Works in the full ambient space when it fits under ``cap``; otherwise
    moves the point set into the span of its points first (blocking is
    unaffected by that change of coordinates) and lifts certificates back.
    """
    q, k = m.q, m.k
    dim = gf.mat_rank(m.columns, q) - 1
    if projgeom.point_count(q, k) <= cap:
        s = m.point_set()
        cert = projgeom.is_blocking(s, cap)
        ess = projgeom.essential_points(s, cap) if cert.verdict else {}
        return cert.verdict, cert.missing_hyperplane, ess, dim
    g, r = _reduction_map(m.columns, q, k)
    if r == 1:
        # a single point never blocks: X_lead = 0 avoids it
        p = projgeom.normalize(m.columns[0], q)
        lead = next(i for i, x in enumerate(p) if x)
        return False, Hyperplane(tuple(int(i == lead) for i in range(k))), {}, dim
    reduced = [gf.matvec(g, v, q)[:r] for v in m.columns]
    s = PointSet.of(q, reduced, k=r)
    cert = projgeom.is_blocking(s, cap)
    if not cert.verdict:
        return False, _lift_hyperplane(cert.missing_hyperplane.normal, g, q, k), {}, dim
    ginv = gf.mat_inverse(g, q)
    ess = {}
    for p, h in projgeom.essential_points(s, cap).items():
        orig = projgeom.normalize(gf.matvec(ginv, tuple(p) + (0,) * (k - r), q), q)
        ess[orig] = None if h is None else _lift_hyperplane(h.normal, g, q, k)
    return True, None, ess, dim


def single_prime_witness(p: int, q: int) -> int:
    """Smallest prime P = 1 mod q, P != p, modulo which ``p`` is not a q-th power.

    Every nonzero power p^a with q not dividing a is then also a non-residue.
    """
    bound = 1000
    while True:
        for P in primes_up_to(bound):
            P = int(P)
            if P % q == 1 and P != p and not is_qth_power_residue(p, P, q):
                return P
        bound *= 10


def decide_locally(B: Iterable[Element], q: int, cap: int = projgeom.DEFAULT_CAP) -> LocalPowerReport:
    """Decide whether ``B`` contains a q-th power modulo almost every prime."""
    gf.check_modulus(q)
    elems = elements(B)
    trivial = _first_trivial(elems, q)
    if trivial is not None:
        return LocalPowerReport(
            locally=True,
            trivial=True,
            certificate=Certificate("trivial-element", {"element": str(trivial), "value": trivial.value}),
            q=q,
            size=len(elems),
        )
    m = exponent_matrix(elems, q)
    classes = len(set(m.columns))
    if m.k == 1:
        p = m.primes[0]
        P = single_prime_witness(p, q)
        return LocalPowerReport(
            locally=False,
            trivial=False,
            certificate=Certificate(
                "single-prime",
                {
                    "prime": p,
                    "witness_prime": P,
                    "explanation": "single-prime support, no residue class covering possible",
                },
            ),
            q=q,
            size=len(elems),
            classes=classes,
            primes=m.primes,
            dimension=0,
        )
    verdict, missing, ess, dim = _decide_geometry(m, cap)
    if not verdict:
        return LocalPowerReport(
            locally=False,
            trivial=False,
            certificate=Certificate("missing-hyperplane", {"normal": list(missing.normal)}),
            q=q,
            size=len(elems),
            classes=classes,
            primes=m.primes,
            dimension=dim,
        )
    counts: dict[tuple[int, ...], int] = {}
    for col in m.columns:
        p = projgeom.normalize(col, q)
        counts[p] = counts.get(p, 0) + 1
    per_element = {}
    for f, col in zip(m.labels, m.columns):
        p = projgeom.normalize(col, q)
        h = ess[p] if counts[p] == 1 else None
        per_element[str(f)] = None if h is None else list(h.normal)
    minimal = all(h is not None for h in per_element.values())
    return LocalPowerReport(
        locally=True,
        trivial=False,
        certificate=Certificate("essentiality", {"witnesses": per_element}),
        q=q,
        size=len(elems),
        classes=classes,
        primes=m.primes,
        dimension=dim,
        minimal=minimal,
    )


def verify_certificate(report: LocalPowerReport, B: Iterable[Element]) -> bool:
    """Replay the certificate of ``report`` against ``B`` from scratch."""
    q = report.q
    elems = elements(B)
    cert = report.certificate
    if cert.kind == "trivial-element":
        return any(str(f) == cert.data["element"] and rad_q(f, q).is_trivial for f in elems)
    if cert.kind == "single-prime":
        p, P = cert.data["prime"], cert.data["witness_prime"]
        if any(set(rad_q(f, q).primes) != {p} for f in elems):
            return False
        return P % q == 1 and not is_qth_power_residue(p, P, q)
    m = exponent_matrix(elems, q)
    if cert.kind == "missing-hyperplane":
        y = cert.data["normal"]
        return len(y) == m.k and any(y) and all(gf.dot(y, v, q) != 0 for v in m.columns)
    if cert.kind == "essentiality":
        witnesses = cert.data["witnesses"]
        if set(witnesses) != {str(f) for f in m.labels}:
            return False
        for f, col in zip(m.labels, m.columns):
            y = witnesses[str(f)]
            if y is None:
                continue
            on = {projgeom.normalize(c, q) for c in m.columns if gf.dot(y, c, q) == 0}
            if on != {projgeom.normalize(col, q)}:
                return False
        # blocking itself is replayed by the independent covering check
        return covering_check(elems, q)
    return False


def covering_check(B: Iterable[Element], q: int) -> bool:
    """Do the hyperplanes ``sum_i nu_ij x_i = 0`` (one per element) cover the
    whole space? The hyperplane-covering criterion, via projgeom's
    point-major loop rather than the blocking routine."""
    elems = elements(B)
    if _first_trivial(elems, q) is not None:
        raise PerfectPowerPresent("the covering criterion needs a set without perfect q-th powers")
    m = exponent_matrix(elems, q)
    if m.k < 2:
        # every hyperplane of F_q^1 is {0}
        return False
    return projgeom.hyperplanes_cover(m.columns, q, m.k)[0]


def _skalba_cap(q: int) -> int:
    return 8 if q <= 5 else 6


def skalba_check(B: Iterable[Element], q: int, cap: int | None = None, method: str = "scaled") -> bool:
    """Independent oracle: for every c in F_q^l there must be f in F_q^l with
    sum(f) != 0 and prod b_j^(c_j f_j) a perfect q-th power.

    The product condition is linear: ``M (c * f) = 0`` over F_q with ``M`` the
    exponent matrix. ``method="direct"`` exhausts all q^l vectors c and solves
    the system for each one. ``method="scaled"`` skips the vectors c with a
    zero entry (f = e_j then works) and fixes c_1 = 1 (the solution set only
    rescales), then tests all remaining c at once: the solutions f are
    ``g / c`` for g in the nullspace of ``M``, so a valid f exists iff some
    nullspace basis vector g has ``sum(g / c) != 0``.
    """
    gf.check_modulus(q)
    elems = elements(B)
    if _first_trivial(elems, q) is not None:
        raise PerfectPowerPresent("the oracle needs a set without perfect q-th powers")
    cap = _skalba_cap(q) if cap is None else cap
    ell = len(elems)
    if ell > cap:
        raise CapExceeded(f"|B| = {ell} exceeds the exhaustion cap {cap}")
    m = exponent_matrix(elems, q)
    rows = [list(r) for r in m.rows]
    if method == "direct":
        for c in itertools.product(range(q), repeat=ell):
            scaled = [[x * cj % q for x, cj in zip(r, c)] for r in rows]
            basis = gf.nullspace_basis(scaled, q, ncols=ell)
            if not any(sum(f) % q for f in basis):
                return False
        return True
    if method != "scaled":
        raise ValueError(f"unknown method {method!r}")
    null = gf.nullspace_basis(rows, q, ncols=ell)
    if not null:
        return False
    inverses = np.array([gf.inv(a, q) for a in range(1, q)], dtype=np.int64)
    tails = np.indices((q - 1,) * (ell - 1), dtype=np.int64).reshape(ell - 1, -1).T
    cinv = np.concatenate([np.ones((len(tails), 1), dtype=np.int64), inverses[tails]], axis=1)
    sums = (cinv @ np.array(null, dtype=np.int64).T) % q
    return bool(sums.any(axis=1).all())


def exponentiate(B: Sequence[Element], c: Sequence[int], q: int) -> list:
    """``[b_j ** c_j]``; ints stay ints, other inputs come back factored."""
    gf.check_modulus(q)
    if len(B) != len(c):
        raise LengthMismatch(f"{len(B)} elements but {len(c)} exponents")
    out = []
    for b, e in zip(B, c):
        if not 1 <= e <= q - 1:
            raise ZeroExponent(f"exponent {e} is not in [1, {q - 1}]")
        if isinstance(b, int):
            out.append(b**e)
        else:
            f = as_factored(b)
            out.append(FactoredInteger(f.sign**e, {p: x * e for p, x in f.factors.items()}))
    return out


def realize(vectors: Iterable[Sequence[int]], primes: Sequence[int]) -> list[int]:
    """Integers ``prod primes[i] ** v[i]``, one per vector."""
    return [math.prod(p**e for p, e in zip(primes, v)) for v in vectors]


def realize_factored(vectors: Iterable[Sequence[int]], primes: Sequence[int]) -> list[FactoredInteger]:
    return [FactoredInteger(1, {p: e for p, e in zip(primes, v) if e}) for v in vectors]


def reduce_primes(B: Iterable[Element], q: int, target_primes: Sequence[int]) -> tuple[list[int], PglElement]:
    """A geometrically q-equivalent set supported on exactly ``target_primes``.

    The PGL element maps the span of the point set onto the first ``r``
    coordinates; the i-th coordinate is then realized on ``target_primes[i]``.
    Raw exponent columns are mapped (not normalized points), so an input that
    already lives on its own span keeps its classes.
    """
    m, _ = point_set_of(B, q)
    targets = list(target_primes)
    if len(set(targets)) != len(targets):
        raise DuplicatePrimes("target primes must be distinct")
    if any(not gf._is_prime(p) for p in targets):
        raise ValueError("target primes must be prime")
    g, r = _reduction_map(m.columns, q, m.k)
    if len(targets) != r:
        raise WrongPrimeCount(f"the set is {r - 1}-dimensional: {r} primes needed, got {len(targets)}")
    images = [gf.matvec(g, v, q)[:r] for v in m.columns]
    out: list[int] = []
    seen: set[int] = set()
    for v in images:
        n = realize([v], targets)[0]
        while n in seen:
            # distinct elements sharing a class stay distinct
            n *= targets[0] ** q
        seen.add(n)
        out.append(n)
    return out, PglElement.of(g, q)


def dimension(B: Iterable[Element], q: int) -> int:
    m, _ = point_set_of(B, q)
    return gf.mat_rank(m.columns, q) - 1


def size_bounds(q: int, k: int) -> SizeBounds:
    """Lower bounds (any / non-trivial) and the upper bound for minimal sets."""
    gf.check_modulus(q)
    if k < 3:
        raise UnsupportedK("the upper bound is stated for k >= 3")
    lower_nt = Fraction(3 * (q + 1), 2)
    if k == 3:
        root = math.sqrt(q)
        s = root - math.floor(root)
        if q == 5:
            return SizeBounds(q, k, q + 1, lower_nt, q * root + 1, upper_approximate=True)
        return SizeBounds(q, k, q + 1, lower_nt, q * root + 1 - s * (1 - s) * q / 4, upper_approximate=True)
    if k == 4:
        return SizeBounds(q, k, q + 1, lower_nt, q * q + 1)
    if k % 2 == 0:
        return SizeBounds(q, k, q + 1, lower_nt, q ** (k // 2) + 1, upper_strict=True)
    return SizeBounds(q, k, q + 1, lower_nt, math.sqrt(q**k) + 1, upper_strict=True, upper_approximate=True)

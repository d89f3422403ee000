"""Known inconsistent worked examples, each run through the checkers.

Several published example sets disagree with their own factorizations or
with the construction they are attributed to. Every reading is decided
here and reported side by side; none of them is "fixed".
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from . import families, projgeom
from .arith import FactoredInteger, as_factored
from .correspond import decide_locally, realize_factored
from .projgeom import PointSet


@dataclass(frozen=True)
class Reading:
    name: str
    q: int
    elements: tuple


@dataclass(frozen=True)
class Anomaly:
    id: str
    description: str
    readings: tuple[Reading, ...] = ()
    extra: Callable[[], dict] | None = None

    def run(self) -> dict:
        out = {"id": self.id, "description": self.description, "readings": []}
        for r in self.readings:
            rep = decide_locally(r.elements, r.q)
            out["readings"].append(
                {
                    "name": r.name,
                    "q": r.q,
                    "set": [str(as_factored(x)) for x in r.elements],
                    "locally": rep.locally,
                    "minimal": rep.minimal,
                    "dimension": rep.dimension,
                }
            )
        if self.extra is not None:
            out.update(self.extra())
        return out

    def matches(self, B: Sequence, q: int) -> bool:
        given = {as_factored(x) for x in B}
        return any(r.q == q and given == {as_factored(x) for x in r.elements} for r in self.readings)


def _f(**kw) -> FactoredInteger:
    return FactoredInteger(1, {int(k[1:]): v for k, v in kw.items()})


P1, P2, P3, P4 = 2, 3, 5, 7


def _tallini_listed(vectors):
    return tuple(realize_factored(vectors, (P1, P2, P3, P4)))


# points of the listed 3-dimensional sets, coordinates over (p1, p2, p3, p4)
_B1_Q3 = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 1, 1, 0), (1, 2, 1, 0), (0, 1, 0, 1), (0, 1, 0, 2)]
_B2_Q5 = [
    (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 1, 1, 0), (1, 2, 4, 0), (1, 3, 4, 0),
    (1, 4, 1, 0), (0, 1, 0, 1), (0, 1, 0, 2), (0, 1, 0, 3), (0, 1, 0, 4),
]


def conic_nucleus_example(q: int) -> dict:
    """The conic {(1,t,t^2,0)} plus (0,0,1,0) with candidate nucleus (0,1,0,0),
    and the 2q+1 point set built from it."""
    conic = [(1, t, t * t % q, 0) for t in range(q)] + [(0, 0, 1, 0)]
    t_set = PointSet.of(q, conic, k=4)
    nucleus = (0, 1, 0, 0)
    s = PointSet.of(q, [(1, t, t * t % q, 0) for t in range(q)] + [(0, 1, 0, 0), (0, 0, 1, 0)] + [(0, 1, 0, t) for t in range(1, q)], k=4)
    cert = projgeom.is_blocking(s)
    ess = projgeom.essential_points(s) if cert.verdict else {}
    return {
        "q": q,
        "t_size": len(t_set),
        "nucleus_check": projgeom.nucleus_check(t_set, nucleus),
        "point_set_size": len(s),
        "point_set_blocking": cert.verdict,
        "point_set_minimal": bool(ess) and all(h is not None for h in ess.values()),
        "point_set_dimension": projgeom.span_projective_dimension(s),
        "default_t_nucleus_check": projgeom.nucleus_check(*families.tallini_default_t(q)),
    }


@lru_cache(maxsize=1)
def known_anomalies() -> tuple[Anomaly, ...]:
    return (
        Anomaly(
            "line-q5-literal-18114",
            "last element printed as 18114 but factored as 2^4*3^4*7 = 9072 (q = 5)",
            (
                Reading("factored", 5, (_f(p2=1, p3=1), _f(p7=1), _f(p2=1, p3=1, p7=1), _f(p2=2, p3=2, p7=1), _f(p2=3, p3=3, p7=1), _f(p2=4, p3=4, p7=1))),
                Reading("literal", 5, (6, 7, 42, 252, 1512, 18114)),
            ),
        ),
        Anomaly(
            "span-q5-literal-41",
            "last element printed as 41 but factored as 2*3*7 = 42 (q = 5)",
            (
                Reading("factored", 5, (2, 3, 4, 6, 21, 42)),
                Reading("literal", 5, (2, 3, 4, 6, 21, 41)),
            ),
        ),
        Anomaly(
            "tallini-listed-b1-q3",
            "listed 7-element set for q = 3, primes (2,3,5,7); p2 sits on the excluded nucleus point",
            (
                Reading("listed", 3, _tallini_listed(_B1_Q3)),
                Reading("verified construction", 3, tuple(families.tallini_set(3, P1, P2, P3, P4).elements)),
            ),
        ),
        Anomaly(
            "tallini-listed-b2-q5",
            "listed 11-element set for q = 5, primes (2,3,5,7)",
            (
                Reading("listed", 5, _tallini_listed(_B2_Q5)),
                Reading("verified construction", 5, tuple(families.tallini_set(5, P1, P2, P3, P4).elements)),
            ),
        ),
        Anomaly(
            "conic-nucleus-q3",
            "conic plus (0,0,1,0) claimed to have nucleus (0,1,0,0); plane written as X_3 = 0 although the conic lies in X_4 = 0",
            extra=lambda: conic_nucleus_example(3),
        ),
        Anomaly(
            "conic-nucleus-q5",
            "same conic/nucleus claim at q = 5",
            extra=lambda: conic_nucleus_example(5),
        ),
    )


def run_all() -> list[dict]:
    return [a.run() for a in known_anomalies()]


def matching(B: Sequence, q: int) -> list[dict]:
    """Anomaly reports whose readings include the set ``B`` at this ``q``."""
    return [a.run() for a in known_anomalies() if a.readings and a.matches(B, q)]

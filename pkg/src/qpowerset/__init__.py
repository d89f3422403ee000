"""Decide, construct and compare locally q-th power sets of integers via
blocking sets in finite projective spaces."""

__version__ = "0.1.0"

from .arith import FactoredInteger, factorize, rad_q, witness_prime
from .correspond import decide_locally, reduce_primes, size_bounds, verify_certificate
from .equiv import PglElement, points_equivalent, sets_equivalent
from .projgeom import PointSet, is_blocking

__all__ = [
    "FactoredInteger",
    "PglElement",
    "PointSet",
    "__version__",
    "decide_locally",
    "factorize",
    "is_blocking",
    "points_equivalent",
    "rad_q",
    "reduce_primes",
    "sets_equivalent",
    "size_bounds",
    "verify_certificate",
    "witness_prime",
]

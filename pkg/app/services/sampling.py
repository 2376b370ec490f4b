import itertools
import logging

import numpy as np

from app.models.errors import UnsupportedCaseError
from app.models.ordinal import ONE, Ordinal, OrdinalLike, coerce

logger = logging.getLogger(__name__)

# Largest coefficient a sampled CNF digit may take
SAMPLE_COEFFICIENT_CAP = 50

# Largest coefficient used by exhaustive shape enumeration
ENUMERATION_COEFFICIENT_CAP = 3

# Draws a sampler may reject before giving up on a bound
MAX_REJECTIONS = 1000


def enumerate_below(bound: OrdinalLike, cap: int = ENUMERATION_COEFFICIENT_CAP) -> list[Ordinal]:
    """
    Every ordinal below `bound` whose coefficients are at most `cap` and whose
    exponents are themselves produced by this enumeration, ascending.

    The shapes cover successors, limits of each CB rank and the multiples of
    each power, which is what exhaustive class checks need.
    """
    bound = coerce(bound)
    if bound.is_finite:
        return [Ordinal.of(n) for n in range(min(int(bound), cap + 1))]
    exponents = _exponents(bound, cap)
    found = set()
    for digits in itertools.product(range(cap + 1), repeat=len(exponents)):
        value = Ordinal([(e, c) for e, c in zip(exponents, digits) if c])
        if value < bound:
            found.add(value)
    return sorted(found)


def _exponents(bound: Ordinal, cap: int) -> list[Ordinal]:
    lead = bound.leading_exponent
    if lead.is_finite:
        return [Ordinal.of(n) for n in range(int(lead), -1, -1)]
    return sorted(enumerate_below(bound.leading_exponent + ONE, cap), reverse=True)


class OrdinalSampler:
    """
    Seeded random ordinals below a bound.

    Each CNF digit is 0 with probability 1/2 and otherwise uniform in
    1..SAMPLE_COEFFICIENT_CAP, clipped while the prefix still equals the
    bound's. Exponents range over the enumerated shapes below the bound's
    leading exponent.
    """

    def __init__(self, seed: int | list[int], cap: int = SAMPLE_COEFFICIENT_CAP) -> None:
        self.rng = np.random.default_rng(seed)
        self.cap = cap
        self._exponent_cache: dict[Ordinal, list[Ordinal]] = {}

    def sample_below(self, bound: OrdinalLike, inclusive: bool = False) -> Ordinal:
        """
        Raises:
            UnsupportedCaseError: nothing lies below the bound
        """
        bound = coerce(bound)
        if bound.is_zero and not inclusive:
            raise UnsupportedCaseError("there is no ordinal below 0")
        for _ in range(MAX_REJECTIONS):
            value = self._draw(bound)
            if value < bound or (inclusive and value == bound):
                return value
        raise UnsupportedCaseError(f"could not sample below {bound}")

    def sample(self, bound: OrdinalLike, size: int, inclusive: bool = False) -> list[Ordinal]:
        return [self.sample_below(bound, inclusive) for _ in range(size)]

    def _draw(self, bound: Ordinal) -> Ordinal:
        if bound.is_finite:
            return Ordinal.of(int(self.rng.integers(0, int(bound) + 1)))
        exponents = self._exponent_cache.get(bound)
        if exponents is None:
            exponents = _exponents(bound, ENUMERATION_COEFFICIENT_CAP)
            self._exponent_cache[bound] = exponents

        bound_digits = dict(bound.terms)
        pending = [e for e, _ in bound.terms]
        tight = True
        terms = []
        for exponent in exponents:
            if tight and pending and pending[0] > exponent:
                # the bound has a digit at an exponent the sampler skips
                tight = False
            if pending and pending[0] == exponent:
                pending.pop(0)
            limit = bound_digits.get(exponent, 0) if tight else self.cap
            coefficient = self._digit(limit)
            if tight and coefficient < limit:
                tight = False
            if coefficient:
                terms.append((exponent, coefficient))
        return Ordinal(terms)

    def _digit(self, limit: int) -> int:
        if limit == 0 or self.rng.random() < 0.5:
            return 0
        return int(self.rng.integers(1, limit + 1))

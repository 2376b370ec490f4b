import logging
import math
import threading
from collections import Counter
from collections.abc import Iterable
from typing import NamedTuple

from app.models.errors import OrdinalError, UnsupportedCaseError
from app.models.ordinal import ONE, ZERO, Ordinal, OrdinalLike, coerce, natural_sum_all, omega_power
from app.services.milner_rado import milner_rado
from app.services.topology import topology

logger = logging.getLogger(__name__)

# Nesting limit of the clause-5 recursion
MAX_RECURSION_DEPTH = 300

# Fresh recursion states one top-level call may create
DEFAULT_STATE_BUDGET = 200_000


class PigeonholeValue(NamedTuple):
    value: Ordinal
    cite: str


class _Budget:
    def __init__(self, limit: int) -> None:
        self.remaining = limit

    def spend(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise UnsupportedCaseError("closed pigeonhole recursion exceeded its state budget")


def _finite_pigeonhole(targets: list[Ordinal]) -> Ordinal:
    return Ordinal.of(sum(int(t) - 1 for t in targets) + 1)


def _is_omega_power_plus_one(value: Ordinal) -> bool:
    return (
        len(value.terms) == 2
        and value.terms[0][1] == 1
        and value.terms[1] == (ZERO, 1)
    )


class PigeonholeCalculator:
    """
    Closed pigeonhole numbers for finitely many countable targets, and the
    tabulated topological and classical values.
    """

    def __init__(self, state_budget: int = DEFAULT_STATE_BUDGET) -> None:
        self.state_budget = state_budget
        self._memo: dict[tuple[Ordinal, ...], Ordinal] = {}
        self._lock = threading.Lock()

    @staticmethod
    def _normalize(targets: Iterable[OrdinalLike]) -> tuple[Ordinal, ...] | None:
        """Sorted targets without 1s; None when some target is 0."""
        values = [coerce(t) for t in targets]
        if not values:
            raise OrdinalError("at least one target is required")
        if any(v.is_zero for v in values):
            return None
        kept = sorted((v for v in values if v != ONE), reverse=True)
        return tuple(kept) if kept else (ONE,)

    def closed(self, targets: Iterable[OrdinalLike]) -> Ordinal:
        """
        Least beta such that every coloring of beta with len(targets) colors
        has a closed copy of some target in its own color.

        Raises:
            UnsupportedCaseError: recursion depth or state budget exhausted
        """
        key = self._normalize(targets)
        if key is None:
            return ZERO
        if self.estimated_states(key) > self.state_budget:
            raise UnsupportedCaseError("closed pigeonhole recursion would exceed its state budget")
        return self._closed(key, 0, _Budget(self.state_budget))

    def estimated_states(self, targets: Iterable[Ordinal]) -> int:
        """Upper estimate of the recursion states: multisets of reduced targets."""
        estimate = 1
        for target, copies in Counter(targets).items():
            estimate *= math.comb(self._chain_length(target) + copies, copies)
        return estimate

    @classmethod
    def _chain_length(cls, target: Ordinal) -> int:
        steps = 0
        while not target.is_zero:
            if target.is_finite:
                return steps + int(target)
            if target.is_power_of_omega:
                return steps + 1
            _, target = cls._split(target)
            steps += 1
        return steps

    def _closed(self, key: tuple[Ordinal, ...], depth: int, budget: _Budget) -> Ordinal:
        if depth > MAX_RECURSION_DEPTH:
            raise UnsupportedCaseError("closed pigeonhole recursion is too deep")
        with self._lock:
            cached = self._memo.get(key)
        if cached is not None:
            return cached
        budget.spend()

        result = self._evaluate(key, depth, budget)
        with self._lock:
            self._memo[key] = result
        return result

    def _evaluate(self, key: tuple[Ordinal, ...], depth: int, budget: _Budget) -> Ordinal:
        if len(key) == 1:
            return key[0]
        if all(t.is_finite for t in key):
            return _finite_pigeonhole(list(key))

        if all(_is_omega_power_plus_one(t) for t in key):
            return omega_power(natural_sum_all(t.leading_exponent for t in key)) + ONE

        if all(t.is_power_of_omega for t in key):
            return omega_power(milner_rado.sum_all(t.leading_exponent for t in key))

        if any(t.is_power_of_omega for t in key):
            exponents = [
                t.leading_exponent if t.is_power_of_omega else t.leading_exponent + ONE
                for t in key
            ]
            return omega_power(milner_rado.sum_all(exponents))

        parts = [self._split(t) for t in key]
        base_key = self._normalize(part for part, _ in parts)
        base = self._closed(base_key, depth + 1, budget)

        best = ZERO
        seen: set[tuple[Ordinal, ...]] = set()
        for index, (_, rest) in enumerate(parts):
            child = self._normalize(key[:index] + (rest,) + key[index + 1 :])
            if child is None or child in seen:
                continue
            seen.add(child)
            if child >= key:
                raise UnsupportedCaseError("closed pigeonhole recursion failed to decrease")
            best = max(best, self._closed(child, depth + 1, budget))
        return base + best

    @staticmethod
    def _split(target: Ordinal) -> tuple[Ordinal, Ordinal]:
        """target = t + rest with t = 1 (finite) or t = w^b+1, rest < w^(b+1)."""
        if target.is_finite:
            return ONE, target.predecessor()
        head = omega_power(target.leading_exponent) + ONE
        return head, head.left_subtract(target)

    def topological_lookup(self, targets: Iterable[OrdinalLike]) -> PigeonholeValue | None:
        values = [coerce(t) for t in targets]
        key = self._normalize(values)
        if key is None:
            return PigeonholeValue(ZERO, "empty target")
        if all(t.is_finite for t in key):
            return PigeonholeValue(_finite_pigeonhole(list(key)), "Fact 3.3(1)")

        representatives = [topology.reinforcing_representative(t) for t in key]
        if all(r is not None for r in representatives):
            cite = "Thm 2.4 + Thm 2.5: P^top = P^cl for order-reinforcing targets"
            return PigeonholeValue(self.closed(representatives), cite)

        if len(key) == 2 and key[0] == key[1]:
            target = key[0]
            if len(target.terms) == 1 and target.leading_exponent == ONE:
                m = target.leading_coefficient
                if m == 2:
                    return PigeonholeValue(Ordinal.omega_power(2, 2), "Fact 3.3(6)")
                return PigeonholeValue(Ordinal.omega_power(2, 2 * m - 3) + ONE, "Fact 3.3(6)")
        return None

    def topological(self, targets: Iterable[OrdinalLike]) -> Ordinal | None:
        found = self.topological_lookup(targets)
        return found.value if found else None

    def classical_lookup(self, targets: Iterable[OrdinalLike]) -> PigeonholeValue | None:
        values = [coerce(t) for t in targets]
        key = self._normalize(values)
        if key is None:
            return PigeonholeValue(ZERO, "empty target")
        if all(t.is_finite for t in key):
            return PigeonholeValue(_finite_pigeonhole(list(key)), "Fact 3.3(1)")
        if len(set(key)) == 1 and key[0].is_power_of_omega:
            return PigeonholeValue(key[0], "§1 indecomposables")
        if len(set(key)) == 1 and key[0] == omega_power(ONE) + ONE:
            return PigeonholeValue(Ordinal.omega_power(ONE, len(key)) + ONE, "§4")
        return PigeonholeValue(milner_rado.sum_all(key), "Milner-Rado sum")

    def classical(self, targets: Iterable[OrdinalLike]) -> Ordinal | None:
        found = self.classical_lookup(targets)
        return found.value if found else None


pigeonhole = PigeonholeCalculator()

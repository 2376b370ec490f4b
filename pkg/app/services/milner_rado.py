import itertools
from collections.abc import Iterable, Iterator

from app.models.errors import OrdinalError
from app.models.ordinal import ONE, Ordinal, OrdinalLike, coerce, omega_power

# How many entries of a limit's fundamental sequence the oracle probes
FUNDAMENTAL_PREFIX = 16


class MilnerRadoService:
    """Milner-Rado sum and an independent brute-force check of it."""

    def sum(self, a: OrdinalLike, b: OrdinalLike) -> Ordinal:
        """
        Least ordinal that is not a natural sum of something below a and
        something below b.

        Successor operands contribute their predecessor. Against a limit of
        CB rank l, the other operand only keeps its terms of exponent >= l,
        since everything smaller is swallowed along the limit's cofinal
        sequence.
        """
        a, b = coerce(a), coerce(b)
        if a.is_zero or b.is_zero:
            raise OrdinalError("Milner-Rado sum is defined for nonzero operands")

        if a.is_successor and b.is_successor:
            return a.predecessor().natural_sum(b.predecessor()) + ONE
        if a.is_successor:
            return a.predecessor().truncate_below(b.cb_rank).natural_sum(b)
        if b.is_successor:
            return b.predecessor().truncate_below(a.cb_rank).natural_sum(a)

        mu, lam = a.cb_rank, b.cb_rank
        if mu < lam:
            return a.truncate_below(lam).natural_sum(b)
        if mu > lam:
            return b.truncate_below(mu).natural_sum(a)
        heads = a.tail_decompose().head.natural_sum(b.tail_decompose().head)
        return heads.natural_sum(omega_power(lam))

    def sum_all(self, values: Iterable[OrdinalLike]) -> Ordinal:
        iterator = iter(values)
        try:
            result = coerce(next(iterator))
        except StopIteration as exc:
            raise OrdinalError("Milner-Rado sum of an empty list") from exc
        for value in iterator:
            result = self.sum(result, value)
        return result

    def splits(self, value: Ordinal) -> Iterator[tuple[Ordinal, Ordinal]]:
        """Every pair (x, y) with x # y == value."""
        exponents = [exponent for exponent, _ in value.terms]
        ranges = [range(coefficient + 1) for _, coefficient in value.terms]
        for left_digits in itertools.product(*ranges):
            left = [(e, d) for e, d in zip(exponents, left_digits) if d]
            right = [
                (e, c - d)
                for (e, c), d in zip(value.terms, left_digits)
                if c - d
            ]
            yield Ordinal(left), Ordinal(right)

    def representable(self, value: Ordinal, a: Ordinal, b: Ordinal) -> bool:
        return any(x < a and y < b for x, y in self.splits(value))

    def oracle_check(self, a: OrdinalLike, b: OrdinalLike, claimed: OrdinalLike) -> bool:
        """
        Confirm `claimed` as a Milner-Rado sum without using the closed form.

        `claimed` itself must not split below (a, b), while the ordinals just
        below it (its predecessor, or a prefix of its fundamental sequence)
        must; the representable set is downward closed so this pins the least
        non-representable value.
        """
        a, b, claimed = coerce(a), coerce(b), coerce(claimed)
        if a.is_zero or b.is_zero or claimed.is_zero:
            return False
        if self.representable(claimed, a, b):
            return False
        if claimed.is_successor:
            return self.representable(claimed.predecessor(), a, b)
        return all(
            self.representable(claimed.fundamental(n), a, b)
            for n in range(FUNDAMENTAL_PREFIX)
        )


milner_rado = MilnerRadoService()

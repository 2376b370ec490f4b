"""
Ordinals below epsilon_0 in hereditary Cantor normal form.

An ordinal is stored as a tuple of (exponent, coefficient) pairs with strictly
decreasing exponents and positive coefficients; exponents are ordinals of the
same kind. The empty tuple is 0.
"""

from __future__ import annotations

from collections.abc import Iterable
from typing import Literal, NamedTuple, Union

from app.models.errors import NegativeResultError, OrdinalError

OrdinalLike = Union["Ordinal", int]
Term = tuple["Ordinal", int]


class TailDecomposition(NamedTuple):
    """b = head + w^tail_exponent with head a multiple of w^tail_exponent."""

    head: "Ordinal"
    tail_exponent: "Ordinal"


class Ordinal:
    """Immutable, hashable ordinal in Cantor normal form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Iterable[tuple[OrdinalLike, int]] = ()) -> None:
        normalized = tuple((coerce(exponent), int(coefficient)) for exponent, coefficient in terms)
        for index, (exponent, coefficient) in enumerate(normalized):
            if coefficient < 1:
                raise OrdinalError(f"coefficient must be positive, got {coefficient}")
            if index and not exponent < normalized[index - 1][0]:
                raise OrdinalError("exponents must be strictly decreasing")
        object.__setattr__(self, "_terms", normalized)
        object.__setattr__(self, "_hash", hash(normalized))

    @classmethod
    def _trusted(cls, terms: tuple[Term, ...]) -> "Ordinal":
        # Skips validation; callers guarantee canonical form.
        instance = object.__new__(cls)
        object.__setattr__(instance, "_terms", terms)
        object.__setattr__(instance, "_hash", hash(terms))
        return instance

    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise NegativeResultError(f"{n} is not an ordinal")
        return cls._trusted(((ZERO, n),)) if n else ZERO

    @classmethod
    def omega_power(cls, exponent: OrdinalLike, coefficient: int = 1) -> "Ordinal":
        """Single-term ordinal w^exponent * coefficient."""
        if coefficient == 0:
            return ZERO
        return cls._trusted(((coerce(exponent), coefficient),))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Ordinal is immutable")

    # --- structure -------------------------------------------------------

    @property
    def terms(self) -> tuple[Term, ...]:
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_finite(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._terms[0][0].is_zero)

    @property
    def is_successor(self) -> bool:
        return bool(self._terms) and self._terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self._terms) and not self._terms[-1][0].is_zero

    @property
    def is_power_of_omega(self) -> bool:
        return len(self._terms) == 1 and self._terms[0][1] == 1

    @property
    def leading_exponent(self) -> "Ordinal":
        return self._terms[0][0] if self._terms else ZERO

    @property
    def leading_coefficient(self) -> int:
        return self._terms[0][1] if self._terms else 0

    @property
    def cb_rank(self) -> "Ordinal":
        """Cantor-Bendixson rank: the last exponent, 0 for 0."""
        return self._terms[-1][0] if self._terms else ZERO

    @property
    def finite_part(self) -> int:
        return self._terms[-1][1] if self.is_successor else 0

    def __int__(self) -> int:
        if not self.is_finite:
            raise OrdinalError(f"{self} is not finite")
        return self._terms[0][1] if self._terms else 0

    def predecessor(self) -> "Ordinal":
        if not self.is_successor:
            raise NegativeResultError(f"{self} has no predecessor")
        *head, (_, coefficient) = self._terms
        if coefficient > 1:
            head.append((ZERO, coefficient - 1))
        return Ordinal._trusted(tuple(head))

    def tail_decompose(self) -> TailDecomposition:
        if self.is_zero:
            raise OrdinalError("0 has no tail decomposition")
        *head, (exponent, coefficient) = self._terms
        if coefficient > 1:
            head.append((exponent, coefficient - 1))
        return TailDecomposition(Ordinal._trusted(tuple(head)), exponent)

    def truncate_below(self, exponent: "Ordinal") -> "Ordinal":
        """Keep only the terms whose exponent is at least `exponent`."""
        return Ordinal._trusted(tuple(term for term in self._terms if term[0] >= exponent))

    def fundamental(self, n: int) -> "Ordinal":
        """
        The n-th entry of the canonical cofinal sequence of a limit ordinal.

        A tail w^(d+1) becomes w^d * (n+1); a tail w^l with l a limit becomes
        w^(l[n]).
        """
        if not self.is_limit:
            raise OrdinalError(f"{self} is not a limit ordinal")
        if n < 0:
            raise OrdinalError("sequence index must be a natural number")
        head, exponent = self.tail_decompose()
        if exponent.is_successor:
            last = (exponent.predecessor(), n + 1)
        else:
            last = (exponent.fundamental(n), 1)
        return Ordinal._trusted(head._terms + (last,))

    # --- order -----------------------------------------------------------

    def compare(self, other: OrdinalLike) -> int:
        """Sign of self - other: -1, 0 or 1."""
        other = coerce(other)
        for (e1, c1), (e2, c2) in zip(self._terms, other._terms):
            if e1 != e2:
                return e1.compare(e2)
            if c1 != c2:
                return -1 if c1 < c2 else 1
        return (len(self._terms) > len(other._terms)) - (len(self._terms) < len(other._terms))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Ordinal.of(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._hash == other._hash and self._terms == other._terms

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: OrdinalLike) -> bool:
        return self.compare(other) < 0

    def __le__(self, other: OrdinalLike) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: OrdinalLike) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: OrdinalLike) -> bool:
        return self.compare(other) >= 0

    # --- arithmetic ------------------------------------------------------

    def __add__(self, other: OrdinalLike) -> "Ordinal":
        other = coerce(other)
        if other.is_zero:
            return self
        lead, coefficient = other._terms[0]
        kept = tuple(term for term in self._terms if term[0] > lead)
        absorbed = next((c for e, c in self._terms if e == lead), 0)
        return Ordinal._trusted(kept + ((lead, coefficient + absorbed),) + other._terms[1:])

    def __radd__(self, other: int) -> "Ordinal":
        return coerce(other) + self

    def __mul__(self, other: OrdinalLike) -> "Ordinal":
        other = coerce(other)
        if self.is_zero or other.is_zero:
            return ZERO
        lead, coefficient = self._terms[0]
        result = ZERO
        for exponent, factor in other._terms:
            if exponent.is_zero:
                piece = Ordinal._trusted(((lead, coefficient * factor),) + self._terms[1:])
            else:
                piece = Ordinal._trusted(((lead + exponent, factor),))
            result = result + piece
        return result

    def __rmul__(self, other: int) -> "Ordinal":
        return coerce(other) * self

    def left_subtract(self, other: OrdinalLike) -> "Ordinal":
        """The unique c with self + c == other."""
        other = coerce(other)
        if self > other:
            raise NegativeResultError(f"{self} exceeds {other}")
        for index, ((e1, c1), (e2, c2)) in enumerate(zip(self._terms, other._terms)):
            if (e1, c1) == (e2, c2):
                continue
            if e1 == e2:
                return Ordinal._trusted(((e2, c2 - c1),) + other._terms[index + 1 :])
            return Ordinal._trusted(other._terms[index:])
        return Ordinal._trusted(other._terms[len(self._terms) :])

    def natural_sum(self, other: OrdinalLike) -> "Ordinal":
        """Hessenberg sum: coefficients added exponent by exponent."""
        digits: dict[Ordinal, int] = {}
        for exponent, coefficient in self._terms + coerce(other)._terms:
            digits[exponent] = digits.get(exponent, 0) + coefficient
        return Ordinal._trusted(tuple(sorted(digits.items(), key=lambda item: item[0], reverse=True)))

    # --- rendering -------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return "+".join(_format_term(exponent, coefficient) for exponent, coefficient in self._terms)

    def __repr__(self) -> str:
        return f"Ordinal('{self}')"


def _format_term(exponent: Ordinal, coefficient: int) -> str:
    if exponent.is_zero:
        return str(coefficient)
    if exponent == ONE:
        base = "w"
    elif exponent.is_finite or exponent == OMEGA:
        base = f"w^{exponent}"
    else:
        base = f"w^({exponent})"
    return base if coefficient == 1 else f"{base}*{coefficient}"


def coerce(value: OrdinalLike) -> Ordinal:
    if isinstance(value, Ordinal):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Ordinal.of(value)
    raise TypeError(f"cannot interpret {value!r} as an ordinal")


def omega_power(exponent: OrdinalLike) -> Ordinal:
    return Ordinal.omega_power(exponent)


def compare(a: OrdinalLike, b: OrdinalLike) -> Literal["less", "equal", "greater"]:
    sign = coerce(a).compare(b)
    return "less" if sign < 0 else "greater" if sign > 0 else "equal"


def natural_sum_all(values: Iterable[OrdinalLike]) -> Ordinal:
    result = ZERO
    for value in values:
        result = result.natural_sum(value)
    return result


ZERO = Ordinal._trusted(())
ONE = Ordinal._trusted(((ZERO, 1),))
OMEGA = Ordinal._trusted(((ONE, 1),))

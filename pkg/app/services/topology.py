from app.models.errors import OrdinalError
from app.models.ordinal import ONE, ZERO, Ordinal, OrdinalLike, coerce, omega_power
from app.models.schemas import HomeoInvariant


class TopologyService:
    """Order-topology facts about ordinals and the anti-tree order."""

    def homeo_invariant(self, a: OrdinalLike) -> HomeoInvariant:
        """
        Flum-Martinez invariant (leading exponent, leading coefficient, purity).

        Purity is 0 for a single term w^g*m with g > 0 and w^CB otherwise.
        """
        a = coerce(a)
        if a.is_zero:
            raise OrdinalError("the empty space has no homeomorphism invariant")
        lead = a.leading_exponent
        if len(a.terms) == 1 and not lead.is_zero:
            purity = ZERO
        else:
            purity = omega_power(a.cb_rank)
        return HomeoInvariant(
            leading_exponent=lead,
            leading_coefficient=a.leading_coefficient,
            purity=purity,
        )

    def homeomorphic(self, a: OrdinalLike, b: OrdinalLike) -> bool:
        return self.homeo_invariant(a) == self.homeo_invariant(b)

    def order_reinforcing(self, a: OrdinalLike) -> bool:
        """Finite, w^g, or w^g*m+1 with g > 0."""
        a = coerce(a)
        if a.is_finite:
            return True
        if a.is_power_of_omega:
            return True
        return len(a.terms) == 2 and a.terms[1] == (ZERO, 1)

    def reinforcing_representative(self, a: OrdinalLike) -> Ordinal | None:
        """An order-reinforcing ordinal homeomorphic to a, if there is one."""
        a = coerce(a)
        if self.order_reinforcing(a):
            return a
        if a.is_successor:
            return Ordinal.omega_power(a.leading_exponent, a.leading_coefficient) + ONE
        return None

    def derived_space_type(self, a: OrdinalLike, g: OrdinalLike) -> Ordinal:
        """
        Order type of the g-th derivative of the space [0, a).

        Its points are the nonzero multiples of w^g below a; with
        a = w^g*q + r (r < w^g) there are -1+q of them, plus one more when
        r > 0.
        """
        a, g = coerce(a), coerce(g)
        if g.is_zero:
            return a
        quotient, remainder = self._divide_by_power(a, g)
        count = quotient if remainder.is_zero else quotient + ONE
        return ONE.left_subtract(count) if count >= ONE else ZERO

    def _divide_by_power(self, a: Ordinal, g: Ordinal) -> tuple[Ordinal, Ordinal]:
        high = [(e, c) for e, c in a.terms if e >= g]
        low = Ordinal([(e, c) for e, c in a.terms if e < g])
        # w^g * q has terms w^(g+e') for each term w^e' of q
        quotient = Ordinal([(g.left_subtract(e), c) for e, c in high])
        return quotient, low

    def less_star(self, a: OrdinalLike, b: OrdinalLike) -> bool:
        a, b = coerce(a), coerce(b)
        if b.is_zero:
            return False
        head, exponent = b.tail_decompose()
        if head > a:
            return False
        rest = head.left_subtract(a)
        return not rest.is_zero and rest < omega_power(exponent)

    def covers_star(self, a: OrdinalLike, b: OrdinalLike) -> bool:
        a, b = coerce(a), coerce(b)
        return self.less_star(a, b) and b == a + omega_power(a.cb_rank + ONE)

    def anti_tree_parent(self, x: OrdinalLike) -> Ordinal:
        """The ordinal that x is an immediate child of in the anti-tree order."""
        x = coerce(x)
        if x.is_zero:
            raise OrdinalError("0 is not a node of the anti-tree")
        return x + omega_power(x.cb_rank + ONE)

    def tree_child(self, parent: OrdinalLike, n: int) -> Ordinal:
        parent = coerce(parent)
        if parent.is_zero:
            raise OrdinalError("0 is not a node of the anti-tree")
        head, exponent = parent.tail_decompose()
        if exponent.is_zero:
            raise OrdinalError(f"{parent} is a leaf")
        if exponent.is_limit:
            raise OrdinalError(f"{parent} has a limit tail exponent and no immediate children")
        return head + Ordinal.omega_power(exponent.predecessor(), n + 1)


topology = TopologyService()

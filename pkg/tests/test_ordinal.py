import pytest
from hypothesis import assume, given

from app.models.errors import NegativeResultError, OrdinalError
from app.models.ordinal import ONE, OMEGA, ZERO, Ordinal, compare
from tests.strategies import ordinals, positive_ordinals

W2 = Ordinal.omega_power(2)
W3 = Ordinal.omega_power(3)
W_W = Ordinal.omega_power(OMEGA)


def w(exponent, coefficient: int = 1) -> Ordinal:
    return Ordinal.omega_power(exponent, coefficient)


class TestCompare:
    def test_examples(self):
        assert compare(OMEGA + 1, w(1, 2)) == "less"
        assert compare(W_W, w(3, 5) + OMEGA) == "greater"
        assert compare(W2 + 1, W2 + 1) == "equal"

    def test_integers_coerce(self):
        assert Ordinal.of(3) == 3
        assert Ordinal.of(3) < OMEGA
        assert 7 < OMEGA

    @given(ordinals(), ordinals())
    def test_total_order(self, a, b):
        assert (a < b) + (a == b) + (a > b) == 1
        assert a.compare(b) == -b.compare(a)


class TestArithmetic:
    def test_addition_examples(self):
        assert (OMEGA + 1) + OMEGA == w(1, 2)
        assert (W2 + 1) + (W2 + OMEGA + 2) == w(2, 2) + OMEGA + 2
        assert 1 + OMEGA == OMEGA

    def test_multiplication_examples(self):
        assert Ordinal.of(2) * OMEGA == OMEGA
        assert (W2 + 1) * OMEGA == W3
        assert OMEGA * 2 == w(1, 2)
        assert (OMEGA + 1) * 2 == w(1, 2) + 1

    def test_left_subtract(self):
        assert (OMEGA + 1).left_subtract(w(1, 2)) == OMEGA
        assert Ordinal.of(3).left_subtract(OMEGA) == OMEGA
        with pytest.raises(NegativeResultError):
            w(1, 2).left_subtract(OMEGA + 1)

    def test_natural_sum(self):
        assert (W2 + OMEGA).natural_sum(w(1, 2) + 1) == W2 + w(1, 3) + 1
        assert OMEGA.natural_sum(1) == OMEGA + 1
        assert Ordinal.of(1).natural_sum(OMEGA) == OMEGA + 1

    @given(ordinals(), ordinals(), ordinals())
    def test_addition_is_associative(self, a, b, c):
        assert (a + b) + c == a + (b + c)

    @given(ordinals(max_terms=3), ordinals(max_terms=3), ordinals(max_terms=3))
    def test_multiplication_is_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @given(ordinals(max_terms=3), ordinals(max_terms=3), ordinals(max_terms=3))
    def test_left_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(ordinals(), positive_ordinals())
    def test_absorption_by_larger_power(self, a, e):
        big = Ordinal.omega_power(a.leading_exponent + e)
        assert a + big == big

    @given(ordinals(), ordinals())
    def test_left_subtract_inverts_addition(self, a, b):
        low, high = sorted((a, b))
        assert low + low.left_subtract(high) == high

    @given(ordinals(), ordinals(), ordinals())
    def test_natural_sum_laws(self, a, b, c):
        assert a.natural_sum(b) == b.natural_sum(a)
        assert a.natural_sum(b).natural_sum(c) == a.natural_sum(b.natural_sum(c))
        assert a.natural_sum(b) >= a + b

    @given(ordinals(), ordinals(), ordinals())
    def test_natural_sum_is_strictly_monotone(self, a, b, c):
        assume(a < b)
        assert a.natural_sum(c) < b.natural_sum(c)


class TestStructure:
    def test_cb_rank(self):
        assert W_W.cb_rank == OMEGA
        assert (W2 + 3).cb_rank == ZERO
        assert (W3 + OMEGA).cb_rank == ONE

    def test_tail_decompose(self):
        head, exponent = (W2 + w(1, 4)).tail_decompose()
        assert head == W2 + w(1, 3)
        assert exponent == ONE
        assert tuple(Ordinal.of(1).tail_decompose()) == (ZERO, ZERO)
        with pytest.raises(OrdinalError):
            ZERO.tail_decompose()

    def test_fundamental_sequence(self):
        assert OMEGA.fundamental(2) == 3
        assert W2.fundamental(1) == w(1, 2)
        assert W_W.fundamental(3) == w(4)
        with pytest.raises(OrdinalError):
            (OMEGA + 1).fundamental(0)

    def test_predecessor(self):
        assert (OMEGA + 2).predecessor() == OMEGA + 1
        with pytest.raises(NegativeResultError):
            OMEGA.predecessor()
        with pytest.raises(NegativeResultError):
            Ordinal.of(-1)

    def test_invalid_terms_rejected(self):
        with pytest.raises(OrdinalError):
            Ordinal([(1, 1), (2, 1)])
        with pytest.raises(OrdinalError):
            Ordinal([(1, 0)])

    def test_immutable(self):
        with pytest.raises(AttributeError):
            OMEGA.foo = 1

    @given(positive_ordinals())
    def test_tail_decompose_recomposes(self, a):
        head, exponent = a.tail_decompose()
        assert head + Ordinal.omega_power(exponent) == a

    @given(positive_ordinals())
    def test_fundamental_sequence_is_increasing_and_below(self, a):
        assume(a.is_limit)
        entries = [a.fundamental(n) for n in range(5)]
        assert entries == sorted(set(entries))
        assert all(entry < a for entry in entries)

import itertools

import pytest

from app.models.errors import NoRuleError, UnknownOracleError, UnsupportedCaseError
from app.models.ordinal import ONE, OMEGA, Ordinal
from app.models.schemas import BoundQuery, EngineSettings
from app.services.finite_oracles import FiniteOracleService
from app.services.ramsey_engine import RELATIONS, RamseyEngine, catalog

W2 = Ordinal.omega_power(2)
W3 = Ordinal.omega_power(3)
W_W = Ordinal.omega_power(OMEGA)


def w(exponent, coefficient: int = 1) -> Ordinal:
    return Ordinal.omega_power(exponent, coefficient)


def query(relation: str, alpha: Ordinal | int, k: int) -> BoundQuery:
    return BoundQuery(relation=relation, alpha=Ordinal.of(alpha) if isinstance(alpha, int) else alpha, k=k)


@pytest.fixture(scope="module")
def engine() -> RamseyEngine:
    return RamseyEngine()


class TestQuery:
    def test_alpha_and_k_validated(self):
        with pytest.raises(ValueError):
            query("closed", 1, 3)
        with pytest.raises(ValueError):
            query("closed", OMEGA, 1)


class TestPigeonholeLowerBound:
    def test_closed(self, engine):
        assert engine.lower_bound_pigeonhole(query("closed", OMEGA + 1, 4)).value == W3 + 1
        assert engine.lower_bound_pigeonhole(query("closed", OMEGA + 2, 4)).value == W3 + W2 + OMEGA + 2

    def test_classical(self, engine):
        bound = engine.lower_bound_pigeonhole(query("classical", W_W, 3))
        assert bound.value == W_W
        assert bound.kind == "lower"

    def test_topological_without_registry_row(self, engine):
        with pytest.raises(NoRuleError):
            engine.lower_bound_pigeonhole(query("topological", W2 + OMEGA, 3))


class TestExactRegistry:
    def test_rows(self, engine):
        assert engine.exact_registry(query("closed", OMEGA + 1, 3)).value == W2 + 1
        assert engine.exact_registry(query("closed", OMEGA + 2, 3)).value == w(2, 2) + OMEGA + 2
        assert engine.exact_registry(query("classical", w(1, 2), 3)).value == w(1, 4)
        assert engine.exact_registry(query("classical", w(2, 2), 3)).value == w(2, 10)
        assert engine.exact_registry(query("classical", W2, 5)).value == W2
        assert engine.exact_registry(query("topological", OMEGA, 4)).value == OMEGA

    def test_two_colors(self, engine):
        assert engine.exact_registry(query("closed", OMEGA + 5, 2)).value == OMEGA + 5
        assert engine.exact_registry(query("classical", OMEGA * 2 + 3, 2)).value == OMEGA * 2 + 3
        assert engine.exact_registry(query("topological", OMEGA + 5, 2)) is None

    def test_finite_targets(self, engine):
        assert engine.exact_registry(query("classical", 3, 3)).value == 6

    def test_no_row(self, engine):
        assert engine.exact_registry(query("closed", OMEGA + 3, 3)) is None


class TestStepUps:
    def test_omega_m_n_reproduces_exact_row(self, engine):
        bound = engine.step_up_omega_m_n(query("closed", OMEGA + 2, 3))
        assert bound.value == w(2, 2) + OMEGA + 2

    def test_omega_plus_three(self, engine):
        bound = engine.step_up_omega_m_n(query("closed", OMEGA + 3, 3))
        assert bound.value == w(2, 4) + w(1, 2) + 3

    def test_omega_plus_two_four(self, engine):
        bound = engine.step_up_omega_m_n(query("closed", OMEGA + 2, 4))
        assert bound.value == w(4, 3) + W3 + W2 + OMEGA + 2

    def test_step_up_a(self, engine):
        bound = engine.step_up_a(query("closed", OMEGA + 3, 3))
        assert bound.value >= w(2, 4) + w(1, 2) + 3
        assert engine.replay(bound)

    def test_step_up_b(self, engine):
        bound = engine.step_up_b(query("closed", OMEGA + 2, 4))
        assert bound.value == w(9) + w(2, 2) + OMEGA + 2

    def test_sibling_rule(self, engine):
        bound = engine.step_up_omega_m_n_sibling(query("closed", OMEGA + 3, 3))
        assert bound.value >= w(2, 4) + w(1, 2) + 3

    def test_not_applicable(self, engine):
        assert engine.step_up_a(query("closed", OMEGA + 2, 2)) is None
        assert engine.step_up_a(query("closed", w(1, 2) + 1, 3)) is None
        assert engine.step_up_omega_m_n(query("topological", OMEGA + 2, 3)) is None


class TestOmegaMPlusOne:
    def test_beta_chain(self, engine):
        bound = engine.bound_omega_m_plus_1(2, 2)
        assert bound.value == w(8, 7) + 1
        betas = [step.value for step in bound.derivation if step.rule == "thm-6.1-beta"]
        assert betas == [w(4, 3) + 1, w(6, 5) + 1, w(8, 7) + 1]
        oracle_steps = [step for step in bound.derivation if step.rule == "digraph-ramsey"]
        assert oracle_steps[0].value == 4

    def test_m_one_is_exact(self, engine):
        bound = engine.bound_omega_m_plus_1(1, 3)
        assert bound.kind == "exact"
        assert bound.value == W3 + 1

    def test_unknown_digraph_number(self):
        engine = RamseyEngine(oracles=FiniteOracleService(max_extensions=100))
        with pytest.raises(UnknownOracleError):
            engine.bound_omega_m_plus_1(3, 2)

    def test_larson_mitchell_opt_in(self):
        engine = RamseyEngine(
            EngineSettings(allow_lm_bound=True),
            oracles=FiniteOracleService(max_extensions=100),
        )
        bound = engine.bound_omega_m_plus_1(3, 2)
        assert any(step.rule == "larson-mitchell" and step.value == 9 for step in bound.derivation)
        assert engine.replay(bound)


class TestRegistryBounds:
    def test_thm_8_1(self, engine):
        values = [b.value for b in engine.registry_bounds(query("closed", W2, 5))]
        assert w(OMEGA) in values

    def test_cor_8_2(self, engine):
        values = [b.value for b in engine.registry_bounds(query("closed", W2 + 1, 4))]
        assert values == [w(OMEGA * 2) + 1]

    def test_omega_dot_two(self, engine):
        bounds = engine.registry_bounds(query("topological", w(1, 2), 3))
        assert {(b.kind, b.value) for b in bounds} == {("lower", w(2, 3)), ("upper", w(3, 100))}
        closed = engine.registry_bounds(query("closed", w(1, 2), 3))
        assert {b.value for b in closed} == {w(4, 2), w(3, 2)}
        assert [b.draft for b in closed if b.value == w(3, 2)] == [True]


class TestErdosMilnerChains:
    def test_classical(self, engine):
        assert engine.wtem_classical_chain(ONE, 3).value == W3
        assert engine.wtem_classical_chain(Ordinal.of(0), 4).value == OMEGA
        assert engine.wtem_classical_chain(OMEGA, 3).value == w(OMEGA * 2)

    def test_topological(self, engine):
        assert engine.wtem_topological_chain(ONE, 3).value == w(W2)
        assert engine.wtem_topological_chain(OMEGA, 3).value == w(w(OMEGA * 2))
        assert engine.wtem_topological_chain(ONE, 2).value == W_W

    def test_successor_targets(self, engine):
        assert engine.wtem_successor_bounds(query("closed", W_W + 1, 3)).value == w(w(3)) + 1
        assert engine.wtem_successor_bounds(query("closed", W2 + 1, 3)).value == w(OMEGA * 2) + 1
        assert engine.wtem_successor_bounds(query("closed", w(w(OMEGA)) + 1, 3)).value == w(w(OMEGA * 2)) + 1
        assert engine.wtem_successor_bounds(query("classical", W_W + 1, 3)) is None


class TestBestBounds:
    @pytest.mark.parametrize("k", range(2, 6))
    def test_omega_plus_one_is_exact(self, engine, k):
        interval = engine.best_bounds(query("closed", OMEGA + 1, k))
        assert interval.exact
        assert interval.lower.value == w(k - 1) + 1
        assert engine.lower_bound_pigeonhole(query("closed", OMEGA + 1, k)).value == w(k - 1) + 1

    def test_exact_values(self, engine):
        assert engine.best_bounds(query("closed", OMEGA + 2, 3)).lower.value == w(2, 2) + OMEGA + 2
        interval = engine.best_bounds(query("classical", w(1, 2), 3))
        assert interval.exact
        assert interval.upper.value == w(1, 4)

    def test_step_up_values(self, engine):
        assert engine.best_bounds(query("closed", OMEGA + 2, 4)).upper.value == w(4, 3) + W3 + W2 + OMEGA + 2
        assert engine.best_bounds(query("closed", OMEGA + 3, 3)).upper.value == w(2, 4) + w(1, 2) + 3

    def test_omega_times_two_plus_one(self, engine):
        interval = engine.best_bounds(query("closed", w(1, 2) + 1, 3))
        assert interval.lower.value == engine.pigeonhole.closed([w(1, 2) + 1] * 2)
        assert interval.upper.value == w(8, 7) + 1

    def test_erdos_milner_values(self, engine):
        assert engine.best_bounds(query("topological", W_W, 3)).upper.value == w(W2)
        assert engine.best_bounds(query("closed", W_W + 1, 3)).upper.value == w(w(3)) + 1
        assert engine.best_bounds(query("closed", W2 + 1, 3)).upper.value == W_W + 1

    @pytest.mark.parametrize("k", range(1, 4))
    def test_cor_8_2_values(self, engine, k):
        interval = engine.best_bounds(query("closed", W2 + 1, k + 2))
        assert interval.upper.value == w(OMEGA * k) + 1

    def test_topological_omega_squared(self, engine):
        interval = engine.best_bounds(query("topological", W2, 4))
        assert interval.lower.value == w(4)
        assert interval.upper.value == W_W

    def test_registry_interval_with_draft(self, engine):
        interval = engine.best_bounds(query("topological", w(1, 2), 3))
        assert interval.lower.value == w(2, 3)
        assert interval.upper.value == w(3, 2)
        assert interval.upper.draft

    def test_registry_interval_without_draft(self):
        engine = RamseyEngine(EngineSettings(exclude_draft=True))
        interval = engine.best_bounds(query("topological", w(1, 2), 3))
        assert interval.lower.value == w(2, 3)
        assert interval.upper.value == w(3, 100)
        assert not interval.exact

    def test_upper_bounds_monotone_in_k(self, engine):
        for alpha in (OMEGA + 1, OMEGA + 2, W2 + 1):
            uppers = [engine.best_bounds(query("closed", alpha, k)).upper for k in range(2, 6)]
            values = [u.value for u in uppers if u is not None]
            assert values == sorted(values)


class TestConsistencySweep:
    def test_catalog_shapes(self):
        shapes = catalog()
        assert shapes == sorted(set(shapes))
        assert OMEGA + 4 in shapes
        assert w(w(2)) + 1 in shapes

    @pytest.mark.parametrize("relation", RELATIONS)
    def test_lower_never_exceeds_upper(self, engine, relation):
        skipped = []
        for alpha in catalog():
            for k in range(2, 6):
                q = query(relation, alpha, k)
                try:
                    interval = engine.best_bounds(q)
                except (NoRuleError, UnsupportedCaseError, UnknownOracleError):
                    skipped.append(q)
                    continue
                bounds = engine.candidates(q)
                lowers = [b.value for b in bounds if b.is_lower]
                uppers = [b.value for b in bounds if b.is_upper]
                if uppers:
                    assert max(lowers) <= min(uppers), q
                assert engine.replay(interval.lower), q
                if interval.upper is not None:
                    assert engine.replay(interval.upper), q
        assert skipped == []

    @pytest.mark.parametrize("relation", RELATIONS)
    @pytest.mark.parametrize("k", range(2, 6))
    def test_bounds_monotone_in_alpha(self, engine, relation, k):
        intervals = [engine.best_bounds(query(relation, alpha, k)) for alpha in catalog()]
        for smaller, larger in itertools.combinations(intervals, 2):
            if larger.upper is None:
                continue
            assert smaller.lower.value <= larger.upper.value, (smaller.query, larger.query)
            if smaller.upper is not None:
                assert smaller.upper.value <= larger.upper.value, (smaller.query, larger.query)

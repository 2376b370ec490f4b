"""
Best known bounds for classical, topological and closed ordinal Ramsey numbers.

A query (relation, alpha, k) asks for the least beta with
beta -> (alpha, k)^2, k being the size of the blue clique. Source statements
written for k+1 or k+2 are shifted inside each rule.

Rules are evaluated in three layers:
  direct bounds    rules stated for the query's own relation; rules that
                   recurse only ask for strictly smaller (k, alpha)
  rule bounds      direct bounds plus the relation transfers at the same
                   (alpha, k)
  candidates       rule bounds plus monotone transfers along k and along the
                   alpha catalog
"""

import logging
import threading
from collections.abc import Callable, Iterable, Sequence

from app.models.errors import NoRuleError, OrdinalError, UnknownOracleError, UnsupportedCaseError
from app.models.ordinal import ONE, OMEGA, ZERO, Ordinal
from app.models.schemas import (
    Bound,
    BoundInterval,
    BoundKind,
    BoundQuery,
    DerivationStep,
    EngineSettings,
    Relation,
)
from app.services.finite_oracles import FiniteOracleService
from app.services.pigeonhole import PigeonholeCalculator
from app.services.topology import topology

logger = logging.getLogger(__name__)

# Largest clique size monotone upper transfers look at
CATALOG_MAX_K = 5

# Upper parameter of the shape families in the query catalog
CATALOG_MAX_PARAMETER = 4

RELATIONS: tuple[Relation, ...] = ("classical", "topological", "closed")

Replayer = Callable[[tuple[Ordinal, ...]], Ordinal]


def _w(exponent: Ordinal | int, coefficient: int = 1) -> Ordinal:
    return Ordinal.omega_power(exponent, coefficient)


def _nat(n: int) -> Ordinal:
    return Ordinal.of(n)


def _omega_times_plus(alpha: Ordinal) -> tuple[int, int] | None:
    """(m, s) when alpha = w*m + s."""
    terms = alpha.terms
    if not terms or terms[0][0] != ONE or len(terms) > 2:
        return None
    if len(terms) == 2 and not terms[1][0].is_zero:
        return None
    return terms[0][1], alpha.finite_part


def _power_of_power_exponent(alpha: Ordinal) -> Ordinal | None:
    """a >= 1 when alpha = w^(w^a)."""
    if not alpha.is_power_of_omega:
        return None
    exponent = alpha.leading_exponent
    if not exponent.is_power_of_omega or exponent.leading_exponent.is_zero:
        return None
    return exponent.leading_exponent


def _segment_embeds(relation: Relation, smaller: Ordinal) -> bool:
    """Whether every copy of a larger target contains a copy of `smaller`."""
    return relation != "closed" or smaller.is_successor


def catalog(max_parameter: int = CATALOG_MAX_PARAMETER) -> list[Ordinal]:
    """Targets of the supported shape families, ascending."""
    shapes: set[Ordinal] = set()
    shapes.update(_nat(n) for n in range(2, max_parameter + 1))
    shapes.update(OMEGA + _nat(n) for n in range(0, max_parameter + 1))
    for m in range(2, max_parameter):
        shapes.update(_w(1, m) + _nat(n) for n in range(0, 3))
    shapes.update({_w(2), _w(2) + ONE})
    for n in range(2, 4):
        shapes.update(_w(n, m) + ONE for m in range(1, 3))
    for a in range(1, 3):
        shapes.update({_w(_w(a)), _w(_w(a)) + ONE})
    return sorted(shapes)


class RamseyEngine:
    """Applies every known bound rule to a BoundQuery and keeps the best."""

    def __init__(
        self,
        settings: EngineSettings | None = None,
        oracles: FiniteOracleService | None = None,
    ) -> None:
        self.settings = settings or EngineSettings()
        self.oracles = oracles or FiniteOracleService(
            max_vertices=self.settings.oracle_max_vertices,
            max_classes=self.settings.oracle_max_classes,
            jobs=self.settings.jobs,
        )
        self.pigeonhole = PigeonholeCalculator(state_budget=self.settings.pcl_state_budget)
        self._direct_cache: dict[BoundQuery, tuple[Bound, ...]] = {}
        self._rule_cache: dict[BoundQuery, tuple[Bound, ...]] = {}
        self._lock = threading.Lock()
        self._replayers = self._build_replayers()

    # --- derivations -----------------------------------------------------

    def _derive(
        self,
        kind: BoundKind,
        rule: str,
        cite: str,
        inputs: Sequence[Ordinal],
        value: Ordinal,
        uses: Iterable[Bound] = (),
        draft: bool = False,
    ) -> Bound:
        steps: list[DerivationStep] = []
        uses = list(uses)
        for used in uses:
            for step in used.derivation:
                if step not in steps:
                    steps.append(step)
        steps.append(DerivationStep(rule=rule, cite=cite, inputs=tuple(inputs), value=value))
        return Bound(
            value=value,
            kind=kind,
            derivation=tuple(steps),
            draft=draft or any(used.draft for used in uses),
        )

    def _literal(self, kind: BoundKind, value: Ordinal, cite: str, draft: bool = False) -> Bound:
        return self._derive(kind, "registry", cite, (value,), value, draft=draft)

    def _transfer(self, bound: Bound, kind: BoundKind, cite: str) -> Bound:
        step = DerivationStep(rule="transfer", cite=cite, inputs=(bound.value,), value=bound.value)
        return Bound(value=bound.value, kind=kind, derivation=bound.derivation + (step,), draft=bound.draft)

    def _oracle_step(self, quantity: str, m: int, k: int, value: int, cite: str) -> Bound:
        return self._derive("exact", quantity, cite, (_nat(m), _nat(k)), _nat(value))

    def _pcl(self, targets: Iterable[Ordinal]) -> Ordinal:
        return self.pigeonhole.closed(list(targets))

    def _build_replayers(self) -> dict[str, Replayer]:
        pcl = self._pcl
        return {
            "registry": lambda i: i[0],
            "transfer": lambda i: i[0],
            "ramsey": lambda i: _nat(self.oracles.finite_ramsey(int(i[0]), int(i[1])).value),
            "digraph-ramsey": lambda i: _nat(self.oracles.digraph_ramsey(int(i[0]), int(i[1])).value),
            "larson-mitchell": lambda i: _nat(self.oracles.larson_mitchell_bound(int(i[0]))),
            "ordinal-sum": lambda i: i[0] + i[1],
            "omega-times": lambda i: OMEGA * i[0],
            "thm-4.1": lambda i: _w(i[0]) + ONE,
            "prop-3.1-closed": lambda i: pcl([i[0]] * int(i[1])),
            "prop-3.1-topological": lambda i: self._required(self.pigeonhole.topological([i[0]] * int(i[1]))),
            "prop-3.1-classical": lambda i: self._required(self.pigeonhole.classical([i[0]] * int(i[1]))),
            "prop-5.1(1)": lambda i: pcl([i[0], i[1]]) + ONE,
            "prop-5.1(2)": lambda i: pcl([i[0]] * int(i[1])) + i[2],
            "prop-5.4": lambda i: i[0] + pcl([i[1]] * int(i[2])),
            "prop-5.5": lambda i: i[0] + pcl([i[1]] * int(i[2]) + [i[3]]),
            "thm-6.1-beta": lambda i: pcl([i[0], i[0], i[1]]),
            "prop-6.6-beta": lambda i: pcl([i[0], i[1]]),
            "thm-7.2-upper": lambda i: _w(3) * i[0],
            "thm-8.1": lambda i: _w(OMEGA),
            "cor-8.2": lambda i: _w(OMEGA * i[0]) + ONE,
            "thm-9.1": lambda i: _w(ONE + i[0] * i[1]),
            "cor-9.5(1)": lambda i: _w(_w(i[0] * i[1])),
            "cor-9.5(2)-infinite": lambda i: _w(_w(i[0] * i[1])) + ONE,
            "cor-9.5(2)-finite": lambda i: _w(_w(_nat((int(i[0]) + 1) * int(i[1]) - 1))) + ONE,
            "cor-9.5(3)": lambda i: _w(_w(i[0]) * i[1]) * i[2] + ONE,
        }

    @staticmethod
    def _required(value: Ordinal | None) -> Ordinal:
        if value is None:
            raise NoRuleError("pigeonhole value is not available")
        return value

    def replay(self, bound: Bound) -> bool:
        """Re-evaluate every derivation step from its recorded inputs."""
        for step in bound.derivation:
            replayer = self._replayers.get(step.rule)
            if replayer is None or replayer(step.inputs) != step.value:
                logger.warning("derivation step %s (%s) does not replay", step.rule, step.cite)
                return False
        return bound.derivation[-1].value == bound.value

    # --- rules -----------------------------------------------------------

    def lower_bound_pigeonhole(self, q: BoundQuery) -> Bound:
        """
        R(alpha, k) >= P(alpha)_(k-1), with the pigeonhole number matching
        the query's relation.

        Raises:
            NoRuleError: the pigeonhole number is not known
        """
        colors = q.k - 1
        targets = [q.alpha] * colors
        if q.relation == "closed":
            found = (self.pigeonhole.closed(targets), "P^cl via Thm 3.2")
        elif q.relation == "topological":
            found = self.pigeonhole.topological_lookup(targets)
        else:
            found = self.pigeonhole.classical_lookup(targets)
        if found is None:
            raise NoRuleError(f"no {q.relation} pigeonhole value for ({q.alpha})_{colors}")
        value, source = found
        return self._derive(
            "lower",
            f"prop-3.1-{q.relation}",
            f"Prop 3.1 with {source}",
            (q.alpha, _nat(colors)),
            value,
        )

    def exact_registry(self, q: BoundQuery) -> Bound | None:
        alpha, k = q.alpha, q.k

        if alpha == OMEGA:
            return self._literal("exact", OMEGA, "§1 Ramsey's theorem, R(ω,ω)=ω")

        if alpha.is_finite:
            try:
                oracle = self.oracles.finite_ramsey(int(alpha), k)
            except UnknownOracleError:
                return None
            return self._oracle_step("ramsey", int(alpha), k, oracle.value, "finite Ramsey number")

        if k == 2:
            if q.relation == "classical":
                return self._literal("exact", alpha, "§2 R(α,2)=P(α)_1")
            if q.relation == "closed":
                return self._literal("exact", alpha, "§5 R^cl(α,2)=α")
            if topology.order_reinforcing(alpha):
                return self._literal("exact", alpha, "§5 R^cl(α,2)=α with Thm 2.4")

        if q.relation != "classical" and alpha == OMEGA + ONE:
            return self._derive("exact", "thm-4.1", "Thm 4.1", (_nat(k - 1),), _w(k - 1) + ONE)

        if q.relation == "closed" and alpha == OMEGA + _nat(2) and k == 3:
            return self._literal("exact", _w(2, 2) + OMEGA + _nat(2), "Lemmas 5.2/5.3")

        if q.relation == "classical":
            shape = _omega_times_plus(alpha)
            if shape is not None and shape[1] == 0:
                m = shape[0]
                try:
                    oracle = self.oracles.digraph_ramsey(m, k)
                except UnknownOracleError:
                    return None
                count = self._oracle_step("digraph-ramsey", m, k, oracle.value, "Lemma 6.3 digraph number")
                return self._derive(
                    "exact", "omega-times", "Thm 6.4", (_nat(oracle.value),), OMEGA * _nat(oracle.value), uses=[count]
                )
            if alpha == _w(2):
                return self._literal("exact", _w(2), "Specker, ω²→(ω²,k)²")
            if alpha == _w(2, 2) and k == 3:
                return self._literal("exact", _w(2, 10), "Thm 7.9")
        return None

    def _rule_upper(self, q: BoundQuery) -> Bound | None:
        uppers = [b for b in self.rule_bounds(q) if b.is_upper and self._admitted(b)]
        return min(uppers, key=lambda b: b.value, default=None)

    def _admitted(self, bound: Bound) -> bool:
        return not (self.settings.exclude_draft and bound.draft)

    def _closed_query(self, alpha: Ordinal, k: int) -> BoundQuery:
        return BoundQuery(relation="closed", alpha=alpha, k=k)

    def _step_up_inputs(self, q: BoundQuery) -> tuple[Bound, Bound] | None:
        alpha = q.alpha
        if q.relation != "closed" or q.k < 3 or alpha.is_finite or not alpha.is_successor:
            return None
        previous = alpha.predecessor()
        if not previous.is_successor:
            return None
        same_k = self._rule_upper(self._closed_query(previous, q.k))
        smaller_k = self._rule_upper(self._closed_query(alpha, q.k - 1))
        if same_k is None or smaller_k is None:
            return None
        return same_k, smaller_k

    def step_up_a(self, q: BoundQuery) -> Bound | None:
        """R^cl(a+1, k) <= P^cl(R^cl(a, k), R^cl(a+1, k-1)) + 1 for a successor."""
        inputs = self._step_up_inputs(q)
        if inputs is None:
            return None
        same_k, smaller_k = inputs
        try:
            value = self._pcl([same_k.value, smaller_k.value]) + ONE
        except UnsupportedCaseError as exc:
            logger.debug("Prop 5.1(1) skipped for %s: %s", q, exc)
            return None
        return self._derive(
            "upper", "prop-5.1(1)", "Prop 5.1(1)", (same_k.value, smaller_k.value), value, uses=inputs
        )

    def step_up_b(self, q: BoundQuery) -> Bound | None:
        """R^cl(a+1, k) <= P^cl(R^cl(a, k))_(k-1) + R^cl(a+1, k-1) for a successor."""
        inputs = self._step_up_inputs(q)
        if inputs is None:
            return None
        same_k, smaller_k = inputs
        colors = q.k - 1
        try:
            value = self._pcl([same_k.value] * colors) + smaller_k.value
        except UnsupportedCaseError as exc:
            logger.debug("Prop 5.1(2) skipped for %s: %s", q, exc)
            return None
        return self._derive(
            "upper",
            "prop-5.1(2)",
            "Prop 5.1(2)",
            (same_k.value, _nat(colors), smaller_k.value),
            value,
            uses=inputs,
        )

    def _omega_m_n_shape(self, q: BoundQuery) -> tuple[int, int] | None:
        """(m, n) when alpha = w*m + n + 1 with m, n >= 1."""
        if q.relation != "closed" or q.k < 3:
            return None
        shape = _omega_times_plus(q.alpha)
        if shape is None or shape[1] < 2:
            return None
        return shape[0], shape[1] - 1

    def step_up_omega_m_n(self, q: BoundQuery) -> Bound | None:
        """
        R^cl(w*m+n+1, k) <= R^cl(w*m+1, k)
                            + P^cl((R^cl(w*m+n+1, k-1))_2m, R(n, k)).
        """
        shape = self._omega_m_n_shape(q)
        if shape is None:
            return None
        m, n = shape
        base = self._rule_upper(self._closed_query(_w(1, m) + ONE, q.k))
        smaller_k = self._rule_upper(self._closed_query(q.alpha, q.k - 1))
        if base is None or smaller_k is None:
            return None
        try:
            ramsey = self.oracles.finite_ramsey(n, q.k)
            copies = 2 * m
            value = base.value + self._pcl([smaller_k.value] * copies + [_nat(ramsey.value)])
        except (UnknownOracleError, UnsupportedCaseError) as exc:
            logger.debug("Prop 5.5 skipped for %s: %s", q, exc)
            return None
        count = self._oracle_step("ramsey", n, q.k, ramsey.value, "finite Ramsey number")
        return self._derive(
            "upper",
            "prop-5.5",
            "Prop 5.5",
            (base.value, smaller_k.value, _nat(copies), _nat(ramsey.value)),
            value,
            uses=[base, smaller_k, count],
        )

    def step_up_omega_m_n_sibling(self, q: BoundQuery) -> Bound | None:
        """R^cl(w*m+n+1, k) <= R^cl(w*m+n, k) + P^cl(R^cl(w*m+n+1, k-1))_(2m+n-1)."""
        shape = self._omega_m_n_shape(q)
        if shape is None:
            return None
        m, n = shape
        base = self._rule_upper(self._closed_query(q.alpha.predecessor(), q.k))
        smaller_k = self._rule_upper(self._closed_query(q.alpha, q.k - 1))
        if base is None or smaller_k is None:
            return None
        copies = 2 * m + n - 1
        try:
            value = base.value + self._pcl([smaller_k.value] * copies)
        except UnsupportedCaseError as exc:
            logger.debug("Prop 5.4 skipped for %s: %s", q, exc)
            return None
        return self._derive(
            "upper",
            "prop-5.4",
            "Prop 5.4",
            (base.value, smaller_k.value, _nat(copies)),
            value,
            uses=[base, smaller_k],
        )

    def _iteration_count(self, m: int, clique: int) -> Bound:
        try:
            oracle = self.oracles.digraph_ramsey(m, clique)
            return self._oracle_step("digraph-ramsey", m, clique, oracle.value, "Lemma 6.3 digraph number")
        except UnknownOracleError:
            if not (self.settings.allow_lm_bound and clique == 3 and m >= 2):
                raise
        n = self.oracles.larson_mitchell_bound(m)
        return self._derive("upper", "larson-mitchell", "Thm 7.8 (Larson-Mitchell)", (_nat(m),), _nat(n))

    def bound_omega_m_plus_1(self, m: int, k: int) -> Bound | None:
        """
        Upper bound for R^cl(w*m+1, k+1); note k+1 is the clique size.

        beta_0 = 0,
        beta_i = P^cl(R^cl(w*m+1, k), R^cl(w*m+1, k), w^k+1+beta_(i-1)),
        bound  = w^k+1+beta_(N-1) with N = R(K*_m, L_(k+1)).

        Raises:
            UnknownOracleError: N is unknown and the Larson-Mitchell opt-in
                does not apply
        """
        if m < 1 or k < 1:
            raise OrdinalError("need m >= 1 and k >= 1")
        alpha = _w(1, m) + ONE
        if m == 1:
            return self._derive("exact", "thm-4.1", "Thm 4.1", (_nat(k),), _w(k) + ONE)
        count = self._iteration_count(m, k + 1)
        smaller_k = self._rule_upper(self._closed_query(alpha, k))
        if smaller_k is None:
            return None

        base = _w(k) + ONE
        steps = [count, smaller_k]
        beta = ZERO
        try:
            for _ in range(1, int(count.value)):
                previous = base + beta
                beta = self._pcl([smaller_k.value, smaller_k.value, previous])
                steps.append(
                    self._derive("upper", "thm-6.1-beta", "Thm 6.1 recursion", (smaller_k.value, previous), beta)
                )
        except UnsupportedCaseError as exc:
            logger.debug("Thm 6.1 skipped for m=%d k=%d: %s", m, k, exc)
            return None
        return self._derive("upper", "ordinal-sum", "Thm 6.1 recursion", (base, beta), base + beta, uses=steps)

    def registry_bounds(self, q: BoundQuery) -> list[Bound]:
        alpha, k, relation = q.alpha, q.k, q.relation
        bounds: list[Bound] = []
        topological_or_closed = relation in ("topological", "closed")

        if relation == "closed" and alpha == _w(1, 2) and k == 3:
            bounds.append(self._prop_6_6())
            bounds.append(self._literal("upper", _w(3, 2), "Remark 7.13 (unpublished draft)", draft=True))

        if relation == "topological" and alpha == _w(1, 2) and k == 3:
            bounds.append(self._literal("lower", _w(2, 3), "Thm 7.2 (Lemma 7.4 witness)"))
            count = self._derive(
                "upper", "larson-mitchell", "Thm 7.8 (Larson-Mitchell)", (_nat(10),), _nat(self.oracles.larson_mitchell_bound(10))
            )
            bounds.append(
                self._derive("upper", "thm-7.2-upper", "Thm 7.2", (count.value,), _w(3) * count.value, uses=[count])
            )

        if topological_or_closed and alpha == _w(2):
            bounds.append(self._derive("upper", "thm-8.1", "Thm 8.1", (), _w(OMEGA)))

        if topological_or_closed and alpha == _w(2) + ONE and k >= 3:
            chain = _nat(k - 2)
            bounds.append(self._derive("upper", "cor-8.2", "Cor 8.2", (chain,), _w(OMEGA * chain) + ONE))

        return [b for b in bounds if self._admitted(b)]

    def _prop_6_6(self) -> Bound:
        target = _w(1, 2)
        base = _w(2) + ONE
        steps = []
        beta = self._pcl([target, OMEGA])
        steps.append(self._derive("upper", "prop-6.6-beta", "Prop 6.6", (target, OMEGA), beta))
        for _ in range(2):
            previous = base + beta
            beta = self._pcl([target, previous])
            steps.append(self._derive("upper", "prop-6.6-beta", "Prop 6.6", (target, previous), beta))
        return self._derive("upper", "ordinal-sum", "Prop 6.6", (base, beta), base + beta, uses=steps)

    def wtem_classical_chain(self, a: Ordinal, k: int) -> Bound:
        """R(w^(1+a), k) <= w^(1+a*(k-1)) from iterating the weak Erdos-Milner theorem."""
        chain = _nat(k - 1)
        return self._derive("upper", "thm-9.1", "Thm 9.1", (a, chain), _w(ONE + a * chain))

    def wtem_topological_chain(self, a: Ordinal, k: int) -> Bound:
        """R^top(w^(w^a), k) = R^cl(w^(w^a), k) <= w^(w^(a*(k-1)))."""
        if a.is_zero:
            raise OrdinalError("need a >= 1")
        chain = _nat(k - 1)
        return self._derive("upper", "cor-9.5(1)", "Cor 9.5(1)", (a, chain), _w(_w(a * chain)))

    def wtem_successor_bounds(self, q: BoundQuery) -> Bound | None:
        if q.relation == "classical":
            return None
        alpha = q.alpha
        if len(alpha.terms) != 2 or alpha.terms[1] != (ZERO, 1):
            return None
        lead, coefficient = alpha.terms[0]

        a = _power_of_power_exponent(_w(lead)) if coefficient == 1 else None
        if a is not None and not lead.is_finite:
            chain = _nat(q.k - 1)
            if a.is_finite:
                return self._derive(
                    "upper",
                    "cor-9.5(2)-finite",
                    "Cor 9.5(2)",
                    (a, chain),
                    _w(_w(_nat((int(a) + 1) * (q.k - 1) - 1))) + ONE,
                )
            return self._derive("upper", "cor-9.5(2)-infinite", "Cor 9.5(2)", (a, chain), _w(_w(a * chain)) + ONE)

        if lead.is_finite and q.k >= 3:
            chain = _nat(q.k - 2)
            try:
                ramsey = self.oracles.finite_ramsey(coefficient, q.k)
            except UnknownOracleError:
                return None
            count = self._oracle_step("ramsey", coefficient, q.k, ramsey.value, "finite Ramsey number")
            value = _w(_w(chain) * lead) * _nat(ramsey.value) + ONE
            return self._derive(
                "upper", "cor-9.5(3)", "Cor 9.5(3)", (chain, lead, _nat(ramsey.value)), value, uses=[count]
            )
        return None

    # --- aggregation -----------------------------------------------------

    def direct_bounds(self, q: BoundQuery) -> tuple[Bound, ...]:
        with self._lock:
            cached = self._direct_cache.get(q)
        if cached is not None:
            return cached

        bounds: list[Bound] = []
        exact = self.exact_registry(q)
        if exact is not None:
            bounds.append(exact)
        try:
            bounds.append(self.lower_bound_pigeonhole(q))
        except (NoRuleError, UnsupportedCaseError) as exc:
            logger.debug("Prop 3.1 skipped for %s: %s", q, exc)

        if q.relation == "closed":
            for rule in (self.step_up_a, self.step_up_b, self.step_up_omega_m_n, self.step_up_omega_m_n_sibling):
                found = rule(q)
                if found is not None:
                    bounds.append(found)
            shape = _omega_times_plus(q.alpha)
            if shape is not None and shape[1] == 1 and q.k >= 3:
                try:
                    found = self.bound_omega_m_plus_1(shape[0], q.k - 1)
                except UnknownOracleError as exc:
                    logger.debug("Thm 6.1 skipped for %s: %s", q, exc)
                    found = None
                if found is not None:
                    bounds.append(found)

        bounds.extend(self.registry_bounds(q))

        if q.relation == "classical":
            if q.alpha.is_power_of_omega and not q.alpha.is_finite:
                bounds.append(self.wtem_classical_chain(ONE.left_subtract(q.alpha.leading_exponent), q.k))
        else:
            a = _power_of_power_exponent(q.alpha)
            if a is not None:
                bounds.append(self.wtem_topological_chain(a, q.k))
            found = self.wtem_successor_bounds(q)
            if found is not None:
                bounds.append(found)

        result = tuple(b for b in bounds if self._admitted(b))
        with self._lock:
            self._direct_cache[q] = result
        return result

    def rule_bounds(self, q: BoundQuery) -> tuple[Bound, ...]:
        """Direct bounds plus transfers between relations at the same (alpha, k)."""
        with self._lock:
            cached = self._rule_cache.get(q)
        if cached is not None:
            return cached

        bounds = list(self.direct_bounds(q))
        reinforcing = topology.order_reinforcing(q.alpha)

        if q.relation == "topological":
            for b in self.direct_bounds(q.with_relation("closed")):
                if reinforcing:
                    bounds.append(self._transfer(b, b.kind, "§2: R^top = R^cl for order-reinforcing α"))
                elif b.is_upper:
                    bounds.append(self._transfer(b, "upper", "§2: R^top ≤ R^cl"))
            representative = topology.reinforcing_representative(q.alpha)
            if representative is not None and representative != q.alpha:
                for relation in ("closed", "topological"):
                    twin = BoundQuery(relation=relation, alpha=representative, k=q.k)
                    for b in self.direct_bounds(twin):
                        bounds.append(self._transfer(b, b.kind, "Thm 2.5: R^top depends only on the homeomorphism type"))

        elif q.relation == "closed":
            for b in self.direct_bounds(q.with_relation("topological")):
                if reinforcing:
                    bounds.append(self._transfer(b, b.kind, "§2: R^top = R^cl for order-reinforcing α"))
                elif b.is_lower:
                    bounds.append(self._transfer(b, "lower", "§2: R^top ≤ R^cl"))
            for b in self.direct_bounds(q.with_relation("classical")):
                if b.is_lower:
                    bounds.append(self._transfer(b, "lower", "R ≤ R^cl: a closed copy has order type α"))

        else:
            for b in self.direct_bounds(q.with_relation("closed")):
                if b.is_upper:
                    bounds.append(self._transfer(b, "upper", "R ≤ R^cl: a closed copy has order type α"))

        result = tuple(bounds)
        with self._lock:
            self._rule_cache[q] = result
        return result

    def candidates(self, q: BoundQuery) -> list[Bound]:
        """
        Every bound known for q, including monotone transfers.

        Along alpha only catalog entries at the same k are consulted. For
        closed copies an initial segment of type a is closed only when a is
        a successor, so closed transfers need the smaller target to be one.
        """
        bounds = list(self.rule_bounds(q))
        top_k = max(q.k, CATALOG_MAX_K)

        def same_alpha(k: int) -> BoundQuery:
            return BoundQuery(relation=q.relation, alpha=q.alpha, k=k)

        for k in range(2, q.k):
            bounds.extend(
                self._transfer(b, "lower", "monotone in k") for b in self.rule_bounds(same_alpha(k)) if b.is_lower
            )
        for k in range(q.k + 1, top_k + 1):
            bounds.extend(
                self._transfer(b, "upper", "monotone in k") for b in self.rule_bounds(same_alpha(k)) if b.is_upper
            )

        for alpha in catalog():
            other = BoundQuery(relation=q.relation, alpha=alpha, k=q.k)
            if alpha < q.alpha and _segment_embeds(q.relation, alpha):
                bounds.extend(
                    self._transfer(b, "lower", "monotone in α") for b in self.rule_bounds(other) if b.is_lower
                )
            elif alpha > q.alpha and _segment_embeds(q.relation, q.alpha):
                bounds.extend(
                    self._transfer(b, "upper", "monotone in α") for b in self.rule_bounds(other) if b.is_upper
                )
        return [b for b in bounds if self._admitted(b)]

    def best_bounds(self, q: BoundQuery) -> BoundInterval:
        """
        Largest lower and smallest upper bound over all candidates.

        Raises:
            NoRuleError: no lower bound is known
        """
        bounds = self.candidates(q)
        lowers = [b for b in bounds if b.is_lower]
        uppers = [b for b in bounds if b.is_upper]
        if not lowers:
            raise NoRuleError(f"no bound rule applies to {q.relation} R({q.alpha}, {q.k})")

        lower = max(lowers, key=lambda b: (b.value, b.kind == "exact", -len(b.derivation)))
        upper = min(uppers, key=lambda b: (b.value, b.kind != "exact", len(b.derivation)), default=None)

        if upper is not None and lower.value > upper.value:
            raise OrdinalError(f"inconsistent bounds for {q}: {lower.value} > {upper.value}")
        if upper is None or lower.value != upper.value:
            return BoundInterval(query=q, lower=lower, upper=upper, exact=False)

        exact = next((b for b in bounds if b.kind == "exact" and b.value == lower.value), None)
        if exact is None:
            exact = lower.model_copy(update={"kind": "exact"})
        return BoundInterval(query=q, lower=exact, upper=exact, exact=True)


ramsey_engine = RamseyEngine()

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, PlainSerializer, field_validator

from app.models.ordinal import Ordinal

OrdinalField = Annotated[Ordinal, PlainSerializer(str, return_type=str)]

Relation = Literal["classical", "topological", "closed"]
BoundKind = Literal["lower", "upper", "exact"]
Provenance = Literal["registry", "verified-by-search"]


class _Frozen(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class HomeoInvariant(_Frozen):
    """Homeomorphism type of an ordinal space."""

    leading_exponent: OrdinalField
    leading_coefficient: int
    purity: OrdinalField


class Digraph(_Frozen):
    """Finite loopless digraph; both directions of a pair may be present."""

    vertex_count: int
    edges: frozenset[tuple[int, int]] = frozenset()

    @field_validator("edges")
    @classmethod
    def _no_loops(cls, edges: frozenset[tuple[int, int]]) -> frozenset[tuple[int, int]]:
        if any(u == v for u, v in edges):
            raise ValueError("loops are not allowed")
        return edges


class ColoredGraph(_Frozen):
    """2-coloring of the pairs of a finite vertex set; listed pairs are red."""

    vertex_count: int
    red_edges: frozenset[tuple[int, int]] = frozenset()


class RamseyWitness(_Frozen):
    """Vertices forming the structure a search looked for."""

    kind: Literal["independentSet", "transitiveTournament", "redClique", "blueClique"]
    vertices: tuple[int, ...]


class OracleResult(_Frozen):
    """Finite Ramsey number with its provenance and certificates."""

    quantity: Literal["ramsey", "digraph-ramsey"]
    m: int
    k: int
    value: int
    provenance: Provenance
    # colored graph or digraph on value-1 vertices avoiding both structures
    lower_witness: Digraph | ColoredGraph | None = None
    exhausted_vertices: int | None = None


class BoundQuery(_Frozen):
    """Ramsey-number question: least beta with beta -> (alpha, k)^2."""

    relation: Relation
    alpha: OrdinalField
    k: int

    @field_validator("alpha")
    @classmethod
    def _alpha_at_least_two(cls, alpha: Ordinal) -> Ordinal:
        if alpha < Ordinal.of(2):
            raise ValueError("alpha must be at least 2")
        return alpha

    @field_validator("k")
    @classmethod
    def _k_at_least_two(cls, k: int) -> int:
        if k < 2:
            raise ValueError("k must be at least 2")
        return k

    def with_relation(self, relation: Relation) -> "BoundQuery":
        return BoundQuery(relation=relation, alpha=self.alpha, k=self.k)


class DerivationStep(_Frozen):
    """One rule application; inputs are the sub-values it consumed."""

    rule: str
    cite: str
    inputs: tuple[OrdinalField, ...] = ()
    value: OrdinalField


class Bound(_Frozen):
    """A lower, upper or exact Ramsey bound with its derivation."""

    value: OrdinalField
    kind: BoundKind
    derivation: tuple[DerivationStep, ...]
    draft: bool = False

    @field_validator("derivation")
    @classmethod
    def _nonempty(cls, derivation: tuple[DerivationStep, ...]) -> tuple[DerivationStep, ...]:
        if not derivation:
            raise ValueError("a bound needs at least one derivation step")
        return derivation

    @property
    def is_lower(self) -> bool:
        return self.kind in ("lower", "exact")

    @property
    def is_upper(self) -> bool:
        return self.kind in ("upper", "exact")


class BoundInterval(_Frozen):
    """Best known answer to a BoundQuery."""

    query: BoundQuery
    lower: Bound
    upper: Bound | None = None
    exact: bool = False


class EngineSettings(_Frozen):
    """Options of the Ramsey bound engine."""

    allow_lm_bound: bool = False
    exclude_draft: bool = False
    oracle_max_vertices: int = 6
    oracle_max_classes: int = 20000
    jobs: int = 1
    pcl_state_budget: int = 200_000


class ClassSpec(_Frozen):
    """Witness color class: points x with lower <= x < upper and CB(x) = cb_rank."""

    name: str
    lower: OrdinalField
    upper: OrdinalField
    cb_rank: OrdinalField

    def contains(self, x: Ordinal) -> bool:
        return self.lower <= x < self.upper and x.cb_rank == self.cb_rank


class WitnessColoring(_Frozen):
    """Pair coloring: blue iff the points lie in distinct adjacent classes."""

    name: str
    description: str
    space_bound: OrdinalField
    closed: bool
    classes: tuple[ClassSpec, ...]
    adjacency: frozenset[frozenset[str]]

    def in_space(self, x: Ordinal) -> bool:
        return x <= self.space_bound if self.closed else x < self.space_bound


class WitnessReport(BaseModel):
    """Outcome of a sampled check of a witness coloring."""

    witness: str
    trials: int
    sample_size: int
    seed: int
    violations: list[str]
    verdict: Literal["pass", "fail"]


class FiniteTree(_Frozen):
    """Perfect tree of the given height where every inner node has `branching` children."""

    height: int
    branching: int


class EmbeddedSubtree(_Frozen):
    """Full subtree found inside a FiniteTree, given by node addresses."""

    color: int
    quorum: int
    nodes: tuple[tuple[int, ...], ...]

    @property
    def leaves(self) -> tuple[tuple[int, ...], ...]:
        depth = max(len(node) for node in self.nodes)
        return tuple(node for node in self.nodes if len(node) == depth)


class DerivationEntry(BaseModel):
    rule: str
    cite: str
    value: str


class BoundSummary(BaseModel):
    value: str
    kind: BoundKind
    draft: bool = False
    derivation: list[DerivationEntry]


class BoundsReport(BaseModel):
    """Stable JSON shape of a `ramsey bounds` answer."""

    relation: Relation
    alpha: str
    k: int
    lower: BoundSummary
    upper: BoundSummary | None = None
    exact: bool


class OrdinalResult(BaseModel):
    """Answer of an `ord` or `pigeonhole` command."""

    operation: str
    inputs: list[str]
    result: str
    cite: str | None = None


class WitnessListing(BaseModel):
    name: str
    description: str
    classes: int
    edges: int

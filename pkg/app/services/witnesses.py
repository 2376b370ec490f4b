"""
Explicit lower-bound colorings and the checks that can be run on them.

A witness colors a pair blue exactly when its points lie in distinct,
adjacent classes of a finite class graph. Blue triangles would need a
triangle in that graph, so triangle-freeness is checked exactly on the
graph, and the class partition is checked on enumerated shapes and on
seeded samples.
"""

import itertools
import logging
from collections.abc import Callable, Iterable, Mapping
from typing import Literal

import networkx as nx
import numpy as np

from app.models.errors import OrdinalError, UnsupportedCaseError
from app.models.ordinal import ONE, OMEGA, ZERO, Ordinal, OrdinalLike, coerce
from app.models.schemas import ClassSpec, EmbeddedSubtree, FiniteTree, WitnessColoring, WitnessReport
from app.services.sampling import OrdinalSampler, enumerate_below

logger = logging.getLogger(__name__)

PairColor = Literal["red", "blue"]
PointColoring = Callable[[Ordinal], int]
PairColoring = Callable[[Ordinal, Ordinal], PairColor]
Node = tuple[int, ...]

_W2 = Ordinal.omega_power(2)
_W2_2 = Ordinal.omega_power(2, 2)


def _edges(*pairs: tuple[str, str]) -> frozenset[frozenset[str]]:
    return frozenset(frozenset(pair) for pair in pairs)


def _block(index: int, start: Ordinal, end: Ordinal, top: Ordinal | None) -> list[ClassSpec]:
    classes = [
        ClassSpec(name=f"bottom{index}", lower=start, upper=end, cb_rank=ZERO),
        ClassSpec(name=f"middle{index}", lower=start, upper=end, cb_rank=ONE),
    ]
    if top is not None:
        classes.append(ClassSpec(name=f"top{index}", lower=top, upper=top + ONE, cb_rank=Ordinal.of(2)))
    return classes


def mermelstein_witness() -> WitnessColoring:
    """Closed coloring of w^2*2+w+1 with no red closed w+2 and no blue triangle."""
    classes = (
        *_block(1, ZERO, _W2, _W2),
        *_block(2, _W2 + ONE, _W2_2, _W2_2),
        ClassSpec(name="bottom3", lower=_W2_2 + ONE, upper=_W2_2 + OMEGA, cb_rank=ZERO),
        ClassSpec(name="middle3", lower=_W2_2 + OMEGA, upper=_W2_2 + OMEGA + ONE, cb_rank=ONE),
    )
    adjacency = _edges(
        ("top1", "middle1"),
        ("middle1", "bottom1"),
        ("top1", "top2"),
        ("top1", "bottom2"),
        ("bottom1", "middle2"),
        ("top2", "middle2"),
        ("middle2", "bottom2"),
        ("bottom1", "middle3"),
        ("top2", "middle3"),
        ("bottom2", "bottom3"),
        ("bottom1", "bottom3"),
    )
    return WitnessColoring(
        name="mermelstein",
        description="w^2*2+w+1 does not arrow (w+2, 3) for closed copies (Lemma 5.3)",
        space_bound=_W2_2 + OMEGA,
        closed=True,
        classes=classes,
        adjacency=adjacency,
    )


def omega_dot_2_top_witness() -> WitnessColoring:
    """Coloring of w^2*2+1 with no red topological w*2 and no blue triangle."""
    classes = (*_block(1, ZERO, _W2, _W2), *_block(2, _W2 + ONE, _W2_2, _W2_2))
    adjacency = _edges(
        ("top1", "bottom1"),
        ("top2", "bottom2"),
        ("middle1", "bottom1"),
        ("middle2", "bottom2"),
        ("top1", "bottom2"),
        ("top2", "bottom1"),
        ("middle1", "middle2"),
    )
    return WitnessColoring(
        name="omega-dot-2-top",
        description="w^2*2+1 does not arrow (w*2, 3) for topological copies (Lemma 7.4)",
        space_bound=_W2_2,
        closed=True,
        classes=classes,
        adjacency=adjacency,
    )


WITNESSES: dict[str, Callable[[], WitnessColoring]] = {
    "mermelstein": mermelstein_witness,
    "omega-dot-2-top": omega_dot_2_top_witness,
}


def cb_rank_coloring(k: int) -> PointColoring:
    """Colors each point of w^k by its CB rank; every class is discrete."""
    if k < 1:
        raise OrdinalError("k must be at least 1")
    space = Ordinal.omega_power(k)

    def color(x: Ordinal) -> int:
        x = coerce(x)
        if x >= space:
            raise OrdinalError(f"{x} is not a point of {space}")
        return int(x.cb_rank)

    return color


def partite_from_point_coloring(c: PointColoring) -> PairColoring:
    """Red for pairs inside one point class, blue across classes."""

    def color(x: Ordinal, y: Ordinal) -> PairColor:
        if x == y:
            raise OrdinalError("a pair needs two distinct points")
        return "red" if c(x) == c(y) else "blue"

    return color


class WitnessService:
    """Checks for witness colorings and the finite full-subtree search."""

    def get(self, name: str) -> WitnessColoring:
        try:
            return WITNESSES[name]()
        except KeyError:
            raise UnsupportedCaseError(f"unknown witness '{name}'; known: {', '.join(WITNESSES)}") from None

    def names(self) -> list[str]:
        return list(WITNESSES)

    def classify(self, w: WitnessColoring, x: OrdinalLike) -> list[str]:
        """Names of the classes containing x; exactly one for points of the space."""
        x = coerce(x)
        return [spec.name for spec in w.classes if spec.contains(x)]

    def class_of(self, w: WitnessColoring, x: OrdinalLike) -> str:
        x = coerce(x)
        if not w.in_space(x):
            raise OrdinalError(f"{x} is not a point of the {w.name} space")
        found = self.classify(w, x)
        if len(found) != 1:
            raise OrdinalError(f"{x} lies in {len(found)} classes of {w.name}")
        return found[0]

    def pair_color(self, w: WitnessColoring, x: OrdinalLike, y: OrdinalLike) -> PairColor:
        x, y = coerce(x), coerce(y)
        if x == y:
            raise OrdinalError("a pair needs two distinct points")
        a, b = self.class_of(w, x), self.class_of(w, y)
        return "blue" if a != b and frozenset((a, b)) in w.adjacency else "red"

    def class_graph(self, w: WitnessColoring) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(spec.name for spec in w.classes)
        graph.add_edges_from(tuple(edge) for edge in w.adjacency if len(edge) == 2)
        return graph

    def verify_graph_triangle_free(self, w: WitnessColoring) -> bool:
        if any(len(edge) != 2 for edge in w.adjacency):
            return False
        return sum(nx.triangles(self.class_graph(w)).values()) == 0

    def verify_partition_symbolic(self, w: WitnessColoring) -> list[str]:
        """Partition violations over every enumerated shape of the space."""
        points = enumerate_below(w.space_bound)
        if w.closed:
            points.append(w.space_bound)
        return [
            f"{x} lies in {count} classes"
            for x in points
            if (count := len(self.classify(w, x))) != 1
        ]

    def sampled_homogeneity_report(
        self,
        w: WitnessColoring,
        sample_size: int,
        trials: int,
        seed: int,
    ) -> WitnessReport:
        """
        Draws `trials` seeded samples of `sample_size` points and records
        partition violations, blue triangles and within-class blue pairs.
        Trial i draws from default_rng([seed, i]).
        """
        names = [spec.name for spec in w.classes]
        index = {name: i for i, name in enumerate(names)}
        class_adjacency = np.zeros((len(names), len(names)), dtype=np.int64)
        for edge in w.adjacency:
            members = sorted(edge)
            a, b = index[members[0]], index[members[-1]]
            class_adjacency[a, b] = class_adjacency[b, a] = 1

        violations: list[str] = []
        if np.trace(class_adjacency):
            violations.append("class graph has a loop")
        for trial in range(trials):
            sampler = OrdinalSampler([seed, trial])
            points = sorted(set(sampler.sample(w.space_bound, sample_size, inclusive=w.closed)))
            labels = []
            for x in points:
                found = self.classify(w, x)
                if len(found) != 1:
                    violations.append(f"trial {trial}: {x} lies in {len(found)} classes")
                    continue
                labels.append(index[found[0]])
            if not labels:
                continue
            labels_array = np.array(labels)
            blue = class_adjacency[np.ix_(labels_array, labels_array)]
            np.fill_diagonal(blue, 0)
            same_class_blue = blue[labels_array[:, None] == labels_array[None, :]]
            if same_class_blue.any():
                violations.append(f"trial {trial}: blue pair inside one class")
            triangles = int(np.trace(blue @ blue @ blue)) // 6
            if triangles:
                violations.append(f"trial {trial}: {triangles} blue triangles")

        logger.info("%s: %d trials, %d violations", w.name, trials, len(violations))
        return WitnessReport(
            witness=w.name,
            trials=trials,
            sample_size=sample_size,
            seed=seed,
            violations=violations,
            verdict="fail" if violations else "pass",
        )

    def tree_leaves(self, t: FiniteTree) -> list[Node]:
        return list(itertools.product(range(t.branching), repeat=t.height))

    def finite_full_subtree(
        self,
        t: FiniteTree,
        leaf_coloring: Mapping[Node, int] | Callable[[Node], int],
        quorum: int,
    ) -> EmbeddedSubtree | None:
        """
        A subtree of full height with `quorum` children at every inner node
        and monochromatic leaves, or None when there is none.

        A node supports a color when at least `quorum` of its children do;
        leaves support their own color. With branching >= 2*quorum-1 some
        color is always supported at the root.
        """
        if quorum < 1:
            raise OrdinalError("quorum must be at least 1")
        color_of = leaf_coloring.__getitem__ if isinstance(leaf_coloring, Mapping) else leaf_coloring
        supported: dict[Node, frozenset[int]] = {}

        def support(node: Node) -> frozenset[int]:
            if len(node) == t.height:
                colors = frozenset({color_of(node)})
            else:
                counts: dict[int, int] = {}
                for child in range(t.branching):
                    for color in support(node + (child,)):
                        counts[color] = counts.get(color, 0) + 1
                colors = frozenset(c for c, n in counts.items() if n >= quorum)
            supported[node] = colors
            return colors

        root_colors = support(())
        if not root_colors:
            return None
        color = min(root_colors)

        nodes: list[Node] = []

        def collect(node: Node) -> None:
            nodes.append(node)
            if len(node) == t.height:
                return
            kept = [node + (c,) for c in range(t.branching) if color in supported[node + (c,)]]
            for child in kept[:quorum]:
                collect(child)

        collect(())
        return EmbeddedSubtree(color=color, quorum=quorum, nodes=tuple(nodes))


def full_subtrees_exist(t: FiniteTree, quorum: int, colors: Iterable[int] = (0, 1)) -> bool:
    """Brute force: every leaf coloring admits a full subtree."""
    service = WitnessService()
    leaves = service.tree_leaves(t)
    for assignment in itertools.product(tuple(colors), repeat=len(leaves)):
        coloring = dict(zip(leaves, assignment))
        if service.finite_full_subtree(t, coloring, quorum) is None:
            return False
    return True


witnesses = WitnessService()

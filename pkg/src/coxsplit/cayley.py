"""Breadth-first balls in Cayley graphs and in coset graphs ``H\\G``.

Cosets are right cosets ``Hg``; edges join ``Hg`` and ``Hgs`` for each
generator ``s`` (right multiplication).  A subgroup is given only through a
membership predicate, optionally with an exact coset invariant that lets the
BFS hash cosets instead of probing neighbouring layers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from .coxeter import (
    IDENTITY,
    CoxeterSystem,
    Element,
    ResourceLimitError,
    conjugate_reflection,
    inverse,
    is_in_centralizer,
    multiply,
    right_multiply,
)

OUTSIDE = -1
DEFAULT_VERTEX_BUDGET = 500_000


class VertexBudgetExceeded(ResourceLimitError):
    pass


@dataclass(frozen=True)
class MembershipOracle:
    """Membership test for a subgroup ``H``.

    ``coset_key``, when given, must satisfy ``key(g) == key(g')`` iff
    ``Hg == Hg'``.  ``finite`` is a hint (``None`` when unknown).
    """

    predicate: Callable[[Element], bool]
    descriptor: str
    coset_key: Optional[Callable[[Element], object]] = field(default=None, compare=False)
    finite: Optional[bool] = None

    def __call__(self, g: Element) -> bool:
        return self.predicate(g)


def trivial_oracle(system: CoxeterSystem) -> MembershipOracle:
    return MembershipOracle(lambda g: g.length == 0, "trivial subgroup", lambda g: g.nf, finite=True)


def whole_group_oracle(system: CoxeterSystem) -> MembershipOracle:
    return MembershipOracle(lambda g: True, "whole group", lambda g: (), finite=None)


def finite_subgroup_oracle(
    system: CoxeterSystem, generators: Sequence[Element], descriptor: str = "", limit: int = 10_000
) -> MembershipOracle:
    """Subgroup generated by ``generators``, which must be finite (closure is enumerated)."""
    members = {IDENTITY.nf: IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for h in frontier:
            for g in generators:
                x = multiply(system, h, g)
                if x.nf not in members:
                    members[x.nf] = x
                    nxt.append(x)
                    if len(members) > limit:
                        raise ResourceLimitError(f"subgroup closure exceeds {limit} elements")
        frontier = nxt
    elements = list(members.values())

    def key(g):
        return min((multiply(system, h, g) for h in elements), key=lambda x: x.shortlex_key()).nf

    name = descriptor or "subgroup generated by " + ", ".join(system.format_word(g.nf) for g in generators)
    return MembershipOracle(lambda g: g.nf in members, name, key, finite=True)


def centralizer_oracle(system: CoxeterSystem, i: int) -> MembershipOracle:
    """Centralizer of the reflection ``s_i`` (the stabilizer of its wall).

    ``Hg = Hg'`` iff ``g^-1 s_i g == g'^-1 s_i g'``, which gives an exact key.
    """
    if not 1 <= i <= system.rank:
        raise ValueError(f"generator index {i} out of range")
    return MembershipOracle(
        lambda g: is_in_centralizer(system, g, i),
        f"centralizer of s{i}",
        lambda g: conjugate_reflection(system, inverse(system, g), i).nf,
    )


class _Graph:
    """Shared accessors for :class:`Ball` and :class:`CosetBall`."""

    radius: int
    dist: List[int]
    adjacency: List[Tuple[int, ...]]

    def __len__(self):
        return len(self.dist)

    def sphere(self, r: Optional[int] = None) -> List[int]:
        r = self.radius if r is None else r
        return [v for v, d in enumerate(self.dist) if d == r]

    @property
    def saturated(self) -> bool:
        """No edge leaves the ball, i.e. the whole (finite) graph is enumerated."""
        return all(w != OUTSIDE for row in self.adjacency for w in row)

    def neighbours(self, v: int):
        for w in self.adjacency[v]:
            if w != OUTSIDE:
                yield w

    def layer_sizes(self) -> List[int]:
        sizes = [0] * (self.radius + 1)
        for d in self.dist:
            sizes[d] += 1
        return sizes


@dataclass
class Ball(_Graph):
    """The elements of length <= radius with their Cayley-graph edges.

    ``adjacency[v][s-1]`` is the index of ``v*s`` or ``OUTSIDE``.
    """

    system: CoxeterSystem
    radius: int
    vertices: List[Element]
    dist: List[int]
    adjacency: List[Tuple[int, ...]]
    index: Dict[Tuple[int, ...], int] = field(repr=False)

    def vertex(self, g: Element) -> Optional[int]:
        return self.index.get(g.nf)


@dataclass
class CosetBall(_Graph):
    """Cosets ``Hg`` at coset-graph distance <= radius from ``H``.

    ``representatives[v]`` is the first element found in that coset.
    """

    system: CoxeterSystem
    oracle: MembershipOracle
    radius: int
    representatives: List[Element]
    dist: List[int]
    adjacency: List[Tuple[int, ...]]
    loops: int = 0

    @property
    def vertices(self):
        return self.representatives


def build_ball(
    system: CoxeterSystem,
    radius: int,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    truncate: bool = False,
) -> Ball:
    """Ball of the given radius around the identity.

    With ``truncate=True`` a vertex-budget overflow returns the largest
    complete ball instead of raising.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    vertices = [IDENTITY]
    dist = [0]
    index = {(): 0}
    layer = [IDENTITY]
    reached = 0
    while reached < radius and layer:
        nxt = []
        for g in layer:
            for s in system.generators:
                h = right_multiply(system, g, s)
                if h.length > g.length and h.nf not in index:
                    index[h.nf] = -1
                    nxt.append(h)
        if len(vertices) + len(nxt) > vertex_budget:
            if not truncate:
                raise VertexBudgetExceeded(
                    f"ball of radius {radius} exceeds {vertex_budget} vertices"
                )
            for h in nxt:
                del index[h.nf]
            break
        for h in nxt:
            index[h.nf] = len(vertices)
            vertices.append(h)
            dist.append(reached + 1)
        layer = nxt
        reached += 1
    if not layer:
        # group exhausted before the requested radius
        reached = radius
    return _finish_ball(system, reached, vertices, dist, index)


def _finish_ball(system, radius, vertices, dist, index) -> Ball:
    adjacency = []
    for g in vertices:
        row = []
        for s in system.generators:
            w = index.get(right_multiply(system, g, s).nf, OUTSIDE)
            row.append(w)
        adjacency.append(tuple(row))
    return Ball(system, radius, vertices, dist, adjacency, index)


def build_coset_ball(
    system: CoxeterSystem,
    oracle: MembershipOracle,
    radius: int,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    truncate: bool = False,
    use_key: bool = True,
) -> CosetBall:
    """BFS over right cosets ``Hg`` starting from ``H``.

    Without a usable coset key, a candidate ``g'`` is compared against the
    representatives of the current and adjacent layers only; a coset's
    distance differs by at most one from that of any neighbour.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    keyed = use_key and oracle.coset_key is not None
    reps = [IDENTITY]
    dist = [0]
    by_key = {oracle.coset_key(IDENTITY): 0} if keyed else {}
    layers: List[List[int]] = [[0]]
    adj: List[List[int]] = [[OUTSIDE] * system.rank]
    inverses = {0: IDENTITY}

    def find(g: Element, d: int) -> Optional[int]:
        if keyed:
            return by_key.get(oracle.coset_key(g))
        for layer_index in (d - 1, d, d + 1):
            if 0 <= layer_index < len(layers):
                for v in layers[layer_index]:
                    if oracle(multiply(system, g, inverses[v])):
                        return v
        return None

    def add(g: Element, d: int) -> int:
        v = len(reps)
        reps.append(g)
        dist.append(d)
        adj.append([OUTSIDE] * system.rank)
        inverses[v] = inverse(system, g)
        if keyed:
            by_key[oracle.coset_key(g)] = v
        return v

    for d in range(radius + 1):
        layer = layers[d]
        if d == radius:
            # edges out of the last layer: resolve only against known cosets
            for v in layer:
                for s in system.generators:
                    if adj[v][s - 1] == OUTSIDE:
                        w = find(right_multiply(system, reps[v], s), d)
                        if w is not None:
                            adj[v][s - 1] = w
                            adj[w][s - 1] = v
            break
        layers.append([])
        overflow = False
        for v in layer:
            for s in system.generators:
                if adj[v][s - 1] != OUTSIDE:
                    continue
                g = right_multiply(system, reps[v], s)
                w = find(g, d)
                if w is None:
                    w = add(g, d + 1)
                    layers[d + 1].append(w)
                    if len(reps) > vertex_budget:
                        overflow = True
                        break
                adj[v][s - 1] = w
                adj[w][s - 1] = v
            if overflow:
                break
        if overflow:
            if not truncate:
                raise VertexBudgetExceeded(
                    f"coset ball of radius {radius} exceeds {vertex_budget} vertices"
                )
            return _truncate_coset_ball(system, oracle, d, reps, dist, adj)
        if not layers[d + 1]:
            # finite coset space, fully enumerated
            break
    loops = sum(1 for v, row in enumerate(adj) for w in row if w == v)
    return CosetBall(system, oracle, radius, reps, dist, [tuple(row) for row in adj], loops)


def _truncate_coset_ball(system, oracle, d, reps, dist, adj) -> CosetBall:
    keep = [v for v, dv in enumerate(dist) if dv <= d]
    # BFS assigns indices in layer order, so the kept vertices form a prefix
    n = len(keep)
    rows = []
    for v in range(n):
        rows.append(tuple(w if w != OUTSIDE and w < n else OUTSIDE for w in adj[v]))
    loops = sum(1 for v, row in enumerate(rows) for w in row if w == v)
    return CosetBall(system, oracle, d, reps[:n], dist[:n], rows, loops)


def project_to_cosets(ball: Ball, coset_ball: CosetBall) -> List[Optional[int]]:
    """Image of each ball vertex in the coset ball (``None`` if out of range)."""
    oracle = coset_ball.oracle
    system = ball.system
    inverses = [inverse(system, g) for g in coset_ball.representatives]
    out = []
    for g in ball.vertices:
        image = None
        for v, hinv in enumerate(inverses):
            if oracle(multiply(system, g, hinv)):
                image = v
                break
        out.append(image)
    return out


def dump_graph(graph, out: TextIO):
    """Write the vertex table then the edge list (``v generator w``).

    OUTSIDE edges are written with ``w = -1``; each undirected edge appears
    once per direction, so the generator involution is visible in the dump.
    """
    system = graph.system
    out.write("# vertices: v_index length normal_form\n")
    for v, g in enumerate(graph.vertices):
        out.write(f"{v} {graph.dist[v]} {' '.join(map(str, g.nf)) or 'e'}\n")
    out.write("# edges: v_index generator w_index\n")
    for v, row in enumerate(graph.adjacency):
        for s, w in zip(system.generators, row):
            out.write(f"{v} {s} {w}\n")


def restrict(graph, radius: int) -> Sequence[int]:
    """Vertex indices within the given distance."""
    return [v for v, d in enumerate(graph.dist) if d <= radius]

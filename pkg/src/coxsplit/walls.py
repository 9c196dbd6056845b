"""Walls, halfspaces and the four-corner crossing test.

The halfspace of a reflection ``t`` on the identity side is
``A+ = {w : l(tw) > l(w)}``; its complement ``A-`` is the other side.  An
edge ``{w, ws}`` lies on the wall of ``t`` iff ``w s w^-1 = t``, which is
the same as its endpoints lying on opposite sides.

Only nonempty corners have finite certificates, so a crossing verdict of
"nested" is always qualified by the radius unless ``g`` stabilizes the wall.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Set, Tuple

from .cayley import (
    DEFAULT_VERTEX_BUDGET,
    OUTSIDE,
    Ball,
    MembershipOracle,
    build_ball,
)
from .coxeter import (
    CoxeterSystem,
    Element,
    conjugate_reflection,
    generator,
    inverse,
    is_in_centralizer,
    multiply,
    product_length,
)

PLUS, MINUS = 1, -1

CROSSES = "CROSSES"
NESTED = "NESTED"
NESTED_AT_RADIUS = "NESTED-AT-THIS-RADIUS"

CORNERS = ("A&gA", "A&gA*", "A*&gA", "A*&gA*")

Edge = Tuple[int, int, int]  # (v, s, w) with dist(v) < dist(w)


@dataclass(frozen=True)
class Halfspace:
    t: Element
    side: int = PLUS

    def contains(self, system: CoxeterSystem, w: Element) -> bool:
        return halfspace_membership(system, self, w) == self.side


def halfspace_membership(system: CoxeterSystem, h: Halfspace, w: Element) -> int:
    """``PLUS`` if ``w`` is on the identity side of the wall of ``h.t``, else ``MINUS``."""
    return PLUS if product_length(system, h.t, w) > w.length else MINUS


def wall_side_oracle(system: CoxeterSystem, i: int) -> MembershipOracle:
    """Index-2 subgroup of the wall stabilizer of ``s_i`` that preserves each side.

    ``Hg = Hg'`` iff the conjugated reflections agree and ``g, g'`` lie on
    the same side of the wall, which gives an exact coset key.
    """
    h = Halfspace(generator(system, i))

    def side(g):
        return halfspace_membership(system, h, g)

    return MembershipOracle(
        lambda g: side(g) == PLUS and is_in_centralizer(system, g, i),
        f"side-preserving stabilizer of the wall of s{i}",
        lambda g: (conjugate_reflection(system, inverse(system, g), i).nf, side(g)),
    )


def _signs(system: CoxeterSystem, ball: Ball, t: Element) -> List[int]:
    h = Halfspace(t)
    return [halfspace_membership(system, h, g) for g in ball.vertices]


def _ball_edges(ball: Ball):
    for v, row in enumerate(ball.adjacency):
        for s, w in enumerate(row, start=1):
            if w != OUTSIDE and ball.dist[v] < ball.dist[w]:
                yield v, s, w


def wall_edges(system: CoxeterSystem, ball: Ball, t: Element) -> Set[Edge]:
    """Ball edges ``{w, ws}`` with ``w s w^-1 = t``."""
    out = set()
    for v, s, w in _ball_edges(ball):
        g = ball.vertices[v]
        if conjugate_reflection(system, g, s) == t:
            out.add((v, s, w))
    return out


def sign_flip_edges(system: CoxeterSystem, ball: Ball, t: Element) -> Set[Edge]:
    """Ball edges whose endpoints lie on opposite sides of the wall of ``t``."""
    signs = _signs(system, ball, t)
    return {(v, s, w) for v, s, w in _ball_edges(ball) if signs[v] != signs[w]}


@dataclass
class WallCertificate:
    generator: int
    radius: int
    wall_edge_count: int
    deep_plus: Optional[Element]
    deep_minus: Optional[Element]
    check_deep: bool
    check_boundary: bool
    check_stabilizer: bool
    stabilizer_elements: int
    stabilizer_checks: int
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.check_deep and self.check_boundary and self.check_stabilizer

    def to_json(self):
        return {
            "generator": self.generator,
            "radius": self.radius,
            "wall_edges": self.wall_edge_count,
            "deep_plus": None if self.deep_plus is None else list(self.deep_plus.nf),
            "deep_minus": None if self.deep_minus is None else list(self.deep_minus.nf),
            "check_deep_halfspaces": self.check_deep,
            "check_boundary": self.check_boundary,
            "check_stabilizer": self.check_stabilizer,
            "stabilizer_elements": self.stabilizer_elements,
            "stabilizer_edge_checks": self.stabilizer_checks,
            "passed": self.passed,
            "failures": list(self.failures),
        }


def _distance_to(ball: Ball, sources: Sequence[int]) -> List[Optional[int]]:
    dist: List[Optional[int]] = [None] * len(ball)
    queue = deque()
    for v in sources:
        if dist[v] is None:
            dist[v] = 0
            queue.append(v)
    while queue:
        u = queue.popleft()
        for w in ball.neighbours(u):
            if dist[w] is None:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def wall_certificate(
    system: CoxeterSystem,
    i: int,
    radius: int,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    ball: Optional[Ball] = None,
) -> WallCertificate:
    """Finite evidence that the halfspace of ``s_i`` is almost invariant.

    Three checks within the ball of the given radius: both halfspaces reach
    distance ``radius - 1`` from the wall; ``A+`` and ``A+ s`` differ exactly
    at wall edges labelled ``s``; the wall stabilizer near the identity maps
    wall edges to wall edges.
    """
    if radius < 2:
        raise ValueError("wall certificate needs radius >= 2")
    if ball is None or ball.radius != radius:
        ball = build_ball(system, radius, vertex_budget)
    t = generator(system, i)
    signs = _signs(system, ball, t)
    edges = wall_edges(system, ball, t)
    failures = []

    endpoints = sorted({v for v, _, w in edges} | {w for v, _, w in edges})
    depth = _distance_to(ball, endpoints)
    deep = {PLUS: None, MINUS: None}
    for v, d in enumerate(depth):
        if d is not None and d >= radius - 1 and deep[signs[v]] is None:
            deep[signs[v]] = ball.vertices[v]
    check_deep = deep[PLUS] is not None and deep[MINUS] is not None
    if not check_deep:
        failures.append(f"no vertex at depth >= {radius - 1} on both sides of the wall")

    check_boundary = True
    inner = [v for v, d in enumerate(ball.dist) if d <= radius - 1]
    for s in system.generators:
        flips = {v for v in inner if signs[v] != signs[ball.adjacency[v][s - 1]]}
        on_wall = set()
        for v, es, w in edges:
            if es == s:
                on_wall.update(x for x in (v, w) if ball.dist[x] <= radius - 1)
        if flips != on_wall:
            check_boundary = False
            failures.append(f"A+ and A+*s{s} differ away from the wall")

    stabilizer = [g for g in ball.vertices if g.length <= radius // 2 and is_in_centralizer(system, g, i)]
    check_stabilizer = True
    checks = 0
    for h in stabilizer:
        for v, s, w in edges:
            a = ball.vertex(multiply(system, h, ball.vertices[v]))
            b = ball.vertex(multiply(system, h, ball.vertices[w]))
            if a is None or b is None:
                continue
            checks += 1
            if ball.adjacency[a][s - 1] != b or conjugate_reflection(system, ball.vertices[a], s) != t:
                check_stabilizer = False
                failures.append(f"{h} does not preserve wall edge ({v},{s},{w})")
    return WallCertificate(
        i, radius, len(edges), deep[PLUS], deep[MINUS],
        check_deep, check_boundary, check_stabilizer, len(stabilizer), checks, failures,
    )


@dataclass
class CornerResult:
    g: Element
    flags: Tuple[bool, bool, bool, bool]
    witnesses: Tuple[Optional[Element], ...]
    verdict: str

    def to_json(self):
        return {
            "g": list(self.g.nf),
            "corners": {
                name: (None if w is None else list(w.nf))
                for name, w in zip(CORNERS, self.witnesses)
            },
            "verdict": self.verdict,
        }


@dataclass
class CrossingReport:
    t: Element
    radius: int
    results: List[CornerResult]

    def crossing(self) -> List[CornerResult]:
        return [c for c in self.results if c.verdict == CROSSES]

    def result_for(self, g: Element) -> Optional[CornerResult]:
        for c in self.results:
            if c.g == g:
                return c
        return None

    def to_json(self, include_all: bool = False):
        shown = self.results if include_all else self.crossing()
        return {
            "reflection": list(self.t.nf),
            "radius": self.radius,
            "tested": len(self.results),
            "crossing_count": len(self.crossing()),
            "exactly_nested": sum(1 for c in self.results if c.verdict == NESTED),
            "results": [c.to_json() for c in shown],
        }


def corner_test(
    system: CoxeterSystem,
    t: Element,
    g: Element,
    witnesses: Sequence[Element],
    signs: Optional[Sequence[int]] = None,
) -> CornerResult:
    """Four-corner test for ``A`` against ``gA``; ``v in gA`` iff ``g^-1 v in A``."""
    if signs is None:
        h = Halfspace(t)
        signs = [halfspace_membership(system, h, v) for v in witnesses]
    ginv = inverse(system, g)
    found: List[Optional[Element]] = [None, None, None, None]
    missing = 4
    for v, in_a in zip(witnesses, signs):
        x_len = product_length(system, ginv, v)
        in_ga = product_length(system, t, ginv, v) > x_len
        corner = (0 if in_ga else 1) if in_a == PLUS else (2 if in_ga else 3)
        if found[corner] is None:
            found[corner] = v
            missing -= 1
            if not missing:
                break
    flags = tuple(w is not None for w in found)
    if all(flags):
        verdict = CROSSES
    elif multiply(system, g, t, ginv) == t:
        # g stabilizes the wall, so gA is exactly A or A*
        verdict = NESTED
    else:
        verdict = NESTED_AT_RADIUS
    return CornerResult(g, flags, tuple(found), verdict)


def crossing_obstruction(
    system: CoxeterSystem,
    i: int,
    radius: int,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    elements: Optional[Sequence[Element]] = None,
) -> CrossingReport:
    """Corner flags for every ``g`` in the ball (or the given ``elements``)."""
    if radius < 2:
        raise ValueError("crossing test needs radius >= 2")
    ball = build_ball(system, radius, vertex_budget)
    t = generator(system, i)
    signs = _signs(system, ball, t)
    tested = ball.vertices if elements is None else list(elements)
    results = [corner_test(system, t, g, ball.vertices, signs) for g in tested]
    return CrossingReport(t, radius, results)

"""Ends and relative ends estimated from finite balls.

For each scheduled pair ``(r, R)`` we count the connected components of the
annulus ``r < d <= R`` that reach the sphere of radius ``R``.  Stable counts
of 1 or 2 at two consecutive schedule points give ONE/TWO; counts of three
or more give MANY, since by Hopf a finitely generated group has 0, 1, 2 or
infinitely many ends.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from .cayley import (
    DEFAULT_VERTEX_BUDGET,
    MembershipOracle,
    build_ball,
    build_coset_ball,
)
from .coxeter import CoxeterSystem

log = logging.getLogger(__name__)


class Verdict(str, Enum):
    ZERO = "ZERO"
    ONE = "ONE"
    TWO = "TWO"
    MANY = "MANY"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class EndsEstimate:
    schedule: List[Tuple[int, int, int]]
    verdict: Verdict
    saturated: bool
    warnings: List[str] = field(default_factory=list)

    def to_json(self):
        return {
            "schedule": [{"r": r, "R": R, "components": c} for r, R, c in self.schedule],
            "verdict": self.verdict.value,
            "saturated": self.saturated,
            "warnings": list(self.warnings),
        }


def doubling_schedule(max_r: int, min_r: int = 2) -> List[Tuple[int, int]]:
    return [(r, 2 * r) for r in range(min_r, max_r + 1)]


def count_end_components(graph, r: int, R: int) -> int:
    """Components of the annulus ``r < d <= R`` containing a vertex at distance R."""
    dist = graph.dist
    seen = set()
    count = 0
    for v, d in enumerate(dist):
        if d != R or v in seen:
            continue
        count += 1
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in graph.neighbours(u):
                if w not in seen and r < dist[w] <= R:
                    seen.add(w)
                    stack.append(w)
    return count


def verdict_from_counts(counts: Sequence[int], saturated: bool) -> Verdict:
    if saturated:
        return Verdict.ZERO
    if len(counts) < 2:
        return Verdict.INCONCLUSIVE
    a, b = counts[-2], counts[-1]
    if a >= 3 and b >= 3:
        return Verdict.MANY
    if a == b == 1:
        return Verdict.ONE
    if a == b == 2:
        return Verdict.TWO
    return Verdict.INCONCLUSIVE


def estimate_ends(graph, schedule: Sequence[Tuple[int, int]]) -> EndsEstimate:
    """Ends estimate on a :class:`Ball` or :class:`CosetBall`.

    Schedule points whose ``R`` exceeds the graph radius are dropped (the
    graph may have been truncated by its vertex budget).
    """
    warnings = []
    saturated = graph.saturated
    rows = []
    for r, R in schedule:
        if R < 2 * r:
            raise ValueError(f"schedule point ({r}, {R}) needs R >= 2r")
        if R > graph.radius:
            warnings.append(f"schedule point r={r}, R={R} skipped: graph radius {graph.radius}")
            continue
        rows.append((r, R, count_end_components(graph, r, R)))
    counts = [c for _, _, c in rows]
    verdict = verdict_from_counts(counts, saturated)
    if not saturated:
        for r, R, c in rows:
            if R < graph.radius:
                later = count_end_components(graph, r, graph.radius)
                if later < c:
                    msg = f"component count at r={r} fell from {c} (R={R}) to {later} (R={graph.radius})"
                    log.warning(msg)
                    warnings.append(msg)
    return EndsEstimate(rows, verdict, saturated, warnings)


def _max_radius(schedule):
    return max((R for _, R in schedule), default=0)


def ends_of_system(
    system: CoxeterSystem,
    max_r: int = 5,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    schedule: Optional[Sequence[Tuple[int, int]]] = None,
) -> EndsEstimate:
    schedule = list(schedule or doubling_schedule(max_r))
    ball = build_ball(system, _max_radius(schedule), vertex_budget, truncate=True)
    return estimate_ends(ball, schedule)


def estimate_relative_ends(
    system: CoxeterSystem,
    oracle: MembershipOracle,
    schedule: Optional[Sequence[Tuple[int, int]]] = None,
    max_r: int = 5,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    use_key: bool = True,
) -> EndsEstimate:
    """Ends of the coset graph ``H\\X``."""
    schedule = list(schedule or doubling_schedule(max_r))
    coset_ball = build_coset_ball(
        system, oracle, _max_radius(schedule), vertex_budget, truncate=True, use_key=use_key
    )
    estimate = estimate_ends(coset_ball, schedule)
    if oracle.finite and oracle.descriptor != "trivial subgroup":
        estimate.warnings.insert(
            0,
            "finite subgroup: coset-graph ends may differ from the ends of the group "
            "when the subgroup inverts edges",
        )
    return estimate

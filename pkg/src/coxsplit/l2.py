"""Exact first l2-Betti number bounds and Euler characteristics.

All values are :class:`fractions.Fraction`; nothing here touches floats
except :func:`decimal_string`, which is for display only.

The lower bound for a Coxeter group is ``n/2 - 1 - sum(1/m_ij)`` over the
pairs with finite label.  It reproduces the closed form quoted for the
``W_n`` family (see :func:`family_display_bound`), and reports label it as a
family-validated formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional, Tuple

from .coxeter import INF, CoxeterSystem

Q = Fraction

BOUND_CAVEAT = "lower bound per family-validated formula"


@dataclass(frozen=True)
class TriangleParams:
    p: int
    q: int
    r: int

    def __post_init__(self):
        if min(self.p, self.q, self.r) < 2:
            raise ValueError("triangle parameters must be >= 2")

    @property
    def reciprocal_sum(self) -> Fraction:
        return Q(1, self.p) + Q(1, self.q) + Q(1, self.r)

    @property
    def hyperbolic(self) -> bool:
        return self.reciprocal_sum < 1

    @property
    def euclidean(self) -> bool:
        return self.reciprocal_sum == 1

    @property
    def spherical(self) -> bool:
        return self.reciprocal_sum > 1

    def __str__(self):
        return f"({self.p},{self.q},{self.r})"


def _as_triangle(t) -> TriangleParams:
    return t if isinstance(t, TriangleParams) else TriangleParams(*t)


def coxeter_betti_lower_bound(system: CoxeterSystem) -> Fraction:
    """``n/2 - 1 - sum 1/m`` over finite labels; infinite labels contribute 0."""
    total = Q(system.rank, 2) - 1
    for i, j in system.pairs():
        m = system.m(i, j)
        if m != INF:
            total -= Q(1, int(m))
    return total


def triangle_euler_char(t) -> Fraction:
    """Orbifold Euler characteristic ``(1/p + 1/q + 1/r - 1) / 2``."""
    t = _as_triangle(t)
    return (t.reciprocal_sum - 1) / 2


def triangle_betti(t) -> Fraction:
    """First l2-Betti number ``-chi``; zero for Euclidean triangles, spherical refused."""
    t = _as_triangle(t)
    if t.spherical:
        raise ValueError(f"spherical triangle {t}: 1/p+1/q+1/r > 1")
    return -triangle_euler_char(t)


def surface_betti(genus: int) -> Fraction:
    if genus < 1:
        raise ValueError("genus must be >= 1")
    return Q(2 * genus - 2)


def betti_scale_finite_index(beta, index: int) -> Fraction:
    """Value for a subgroup of the given index (multiplicativity)."""
    if index < 1:
        raise ValueError("index must be >= 1")
    return Q(beta) * index


def centralizer_betti_family(t) -> Fraction:
    """``T(p,q,r) x Z/2`` contains ``T(p,q,r)`` with index 2, so the value halves."""
    return triangle_betti(t) / 2


def index_threshold(beta_h, beta_g) -> Fraction:
    """Indices strictly above ``beta_h / beta_g`` qualify."""
    beta_g = Q(beta_g)
    if beta_g <= 0:
        raise ValueError("beta of the ambient group must be positive")
    return Q(beta_h) / beta_g


def family_system(n: int, t, large_label: Optional[int] = None) -> CoxeterSystem:
    """The rank-n system built around ``T(p,q,r)``.

    ``s1`` commutes with ``s2, s3, s4`` and generates infinite order with
    ``s5..sn``; ``(s2,s3), (s2,s4), (s3,s4)`` carry ``p, q, r``; every other
    pair gets ``n**2`` unless ``large_label`` is given.
    """
    if n < 5:
        raise ValueError("family needs n >= 5")
    t = _as_triangle(t)
    labels = {(1, 2): 2, (1, 3): 2, (1, 4): 2, (2, 3): t.p, (2, 4): t.q, (3, 4): t.r}
    for j in range(5, n + 1):
        labels[(1, j)] = INF
    return CoxeterSystem.from_labels(n, labels, default=large_label or n * n)


def example_one_system(large_label: int = 51) -> CoxeterSystem:
    """Eight generators: ``s1`` commutes with ``s4, s5, s6``, free with ``s2, s3, s7, s8``.

    ``s4, s5, s6`` pairwise generate order 3; the remaining 18 pairs only
    need labels above 50, so they default to ``large_label``.
    """
    if large_label <= 50:
        raise ValueError("remaining labels must exceed 50")
    labels = {(1, 4): 2, (1, 5): 2, (1, 6): 2, (4, 5): 3, (4, 6): 3, (5, 6): 3}
    for j in (2, 3, 7, 8):
        labels[(1, j)] = INF
    return CoxeterSystem.from_labels(8, labels, default=large_label)


def recognize_family(system: CoxeterSystem) -> Optional[Tuple[int, TriangleParams]]:
    """Return ``(n, T)`` if ``system`` is exactly ``family_system(n, T)`` with hyperbolic ``T``."""
    n = system.rank
    if n < 5:
        return None
    labels = (system.m(2, 3), system.m(2, 4), system.m(3, 4))
    if any(m == INF for m in labels):
        return None
    t = TriangleParams(*(int(m) for m in labels))
    if not t.hyperbolic:
        return None
    return (n, t) if family_system(n, t) == system else None


def family_display_bound(n: int, t) -> Fraction:
    """Closed-form bound for the family, term by term as displayed."""
    t = _as_triangle(t)
    n = Q(n)
    rest = n * (n - 1) / 2 - (n - 1 + 3)
    return n / 2 - 1 - (Q(3, 2) + t.reciprocal_sum + rest / (n * n))


def display_inequality_sides(n: int, t) -> Tuple[Fraction, Fraction]:
    """Both sides of ``(n-6+3/n+4/n^2)/2 - (1/p+1/q+1/r) > -chi/2``."""
    t = _as_triangle(t)
    n = Q(n)
    lhs = (n - 6 + 3 / n + 4 / (n * n)) / 2 - t.reciprocal_sum
    rhs = -triangle_euler_char(t) / 2
    return lhs, rhs


def sufficient_criterion(n: int, t) -> bool:
    """``n - 6 > 3 chi + 2``."""
    return n - 6 > 3 * triangle_euler_char(t) + 2


@dataclass(frozen=True)
class BoundReport:
    n: int
    triangle: TriangleParams
    lower_bound_W: Fraction
    centralizer_value: Fraction
    inequality_holds: bool
    sufficient_criterion_holds: bool
    minimal_n: Optional[int]
    minimal_n_sufficient: Optional[int]
    index_threshold: Optional[Fraction]
    caveat: str = BOUND_CAVEAT


def _first_n(t, test, start: int = 5) -> int:
    # sufficient criterion holds for n > 3 chi + 8, so the scan terminates
    limit = int(3 * triangle_euler_char(t) + 8) + 2
    for n in range(start, max(limit, start) + 1):
        if test(n):
            return n
    raise AssertionError("criterion failed past its guaranteed bound")


def minimal_family_n(t, sufficient: bool = False) -> int:
    t = _as_triangle(t)
    if sufficient:
        return _first_n(t, lambda n: sufficient_criterion(n, t))
    return _first_n(t, lambda n: _inequality(n, t))


def _inequality(n: int, t) -> bool:
    return coxeter_betti_lower_bound(family_system(n, t)) > centralizer_betti_family(t)


def splitting_criterion(n: int, t, with_minimal: bool = True) -> BoundReport:
    t = _as_triangle(t)
    if not t.hyperbolic:
        raise ValueError(f"triangle {t} is not hyperbolic")
    lower = coxeter_betti_lower_bound(family_system(n, t))
    central = centralizer_betti_family(t)
    holds = lower > central
    lhs, rhs = display_inequality_sides(n, t)
    if holds != (lhs > rhs) or lower != family_display_bound(n, t):
        raise AssertionError(f"general bound disagrees with the family display at n={n}, {t}")
    threshold = index_threshold(central, lower) if lower > 0 else None
    return BoundReport(
        n, t, lower, central, holds, sufficient_criterion(n, t),
        minimal_family_n(t) if with_minimal else None,
        minimal_family_n(t, sufficient=True) if with_minimal else None,
        threshold,
    )


def decimal_string(q: Fraction, places: int = 6) -> str:
    with localcontext() as ctx:
        ctx.prec = 50 + len(str(abs(q.numerator)))
        value = Decimal(q.numerator) / Decimal(q.denominator)
        return str(value.quantize(Decimal(1).scaleb(-places)))


def rational_json(q: Fraction) -> dict:
    q = Q(q)
    return {"num": str(q.numerator), "den": str(q.denominator), "decimal": decimal_string(q)}


def bound_report_json(report: BoundReport) -> dict:
    return {
        "n": report.n,
        "triangle": [report.triangle.p, report.triangle.q, report.triangle.r],
        "lower_bound": rational_json(report.lower_bound_W),
        "centralizer_value": rational_json(report.centralizer_value),
        "inequality_holds": report.inequality_holds,
        "sufficient_criterion_holds": report.sufficient_criterion_holds,
        "minimal_n": report.minimal_n,
        "minimal_n_sufficient": report.minimal_n_sufficient,
        "index_threshold": None if report.index_threshold is None else rational_json(report.index_threshold),
        "caveat": report.caveat,
    }

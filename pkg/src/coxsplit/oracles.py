"""Permutation models of small finite Coxeter groups.

These are built by hand, independently of the word-problem code, and serve
as multiplication-table oracles.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .coxeter import CoxeterSystem, dihedral, elements_by_length, multiply, type_a

Perm = Tuple[int, ...]


def compose(p: Perm, q: Perm) -> Perm:
    """Apply ``p`` then ``q``."""
    return tuple(q[x] for x in p)


def dihedral_perms(m: int) -> List[Perm]:
    """Reflections of a regular m-gon acting on its vertices ``Z/m`` (faithful for m >= 3)."""
    return [tuple((-k) % m for k in range(m)), tuple((1 - k) % m for k in range(m))]


def symmetric_perms(n: int) -> List[Perm]:
    """Adjacent transpositions generating ``S_{n+1}``."""
    out = []
    for i in range(n):
        p = list(range(n + 1))
        p[i], p[i + 1] = p[i + 1], p[i]
        out.append(tuple(p))
    return out


def elementary_abelian_perms(k: int) -> List[Perm]:
    out = []
    for i in range(k):
        p = list(range(2 * k))
        p[2 * i], p[2 * i + 1] = p[2 * i + 1], p[2 * i]
        out.append(tuple(p))
    return out


def perm_of_word(perms: Sequence[Perm], word) -> Perm:
    p = tuple(range(len(perms[0])))
    for s in word:
        p = compose(p, perms[s - 1])
    return p


def perm_closure(perms: Sequence[Perm]) -> set:
    ident = tuple(range(len(perms[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in perms:
                q = compose(p, g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def finite_calibration() -> List[Tuple[str, CoxeterSystem, List[Perm], int]]:
    """``(name, system, generator permutations, known order)``."""
    return [
        ("A2", type_a(2), symmetric_perms(2), 6),
        ("B2", dihedral(4), dihedral_perms(4), 8),
        ("H2", dihedral(5), dihedral_perms(5), 10),
        ("A3", type_a(3), symmetric_perms(3), 24),
        ("A1xA1xA1", CoxeterSystem.from_labels(3, {}, default=2), elementary_abelian_perms(3), 8),
    ]


def check_against_table(system: CoxeterSystem, perms: Sequence[Perm], order: int, max_radius: int = 64) -> Dict:
    """Compare BFS closure and every product with the permutation model."""
    elements = elements_by_length(system, max_radius)
    image = {g.nf: perm_of_word(perms, g.nf) for g in elements}
    model_order = len(perm_closure(perms))
    injective = len(set(image.values())) == len(elements)
    mismatches = 0
    for a in elements:
        for b in elements:
            ab = multiply(system, a, b)
            if image.get(ab.nf) != compose(image[a.nf], image[b.nf]):
                mismatches += 1
    return {
        "closure_order": len(elements),
        "model_order": model_order,
        "expected_order": order,
        "injective": injective,
        "products_checked": len(elements) ** 2,
        "mismatches": mismatches,
        "ok": len(elements) == order == model_order and injective and mismatches == 0,
    }

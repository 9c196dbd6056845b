from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxsplit.cayley import build_ball, centralizer_oracle
from coxsplit.coxeter import (
    IDENTITY,
    INF,
    Element,
    conjugate_reflection,
    dihedral,
    free_product,
    inverse,
    multiply,
    racg_cycle,
    reduce,
    triangle_system,
    type_a,
)
from coxsplit.walls import (
    CROSSES,
    MINUS,
    NESTED,
    NESTED_AT_RADIUS,
    PLUS,
    Halfspace,
    corner_test,
    crossing_obstruction,
    halfspace_membership,
    sign_flip_edges,
    wall_certificate,
    wall_edges,
)

COS = {2: Fraction(0), 3: Fraction(1, 2), INF: Fraction(1)}


class TitsRep:
    """Geometric representation with rational form; valid for labels 2, 3 and inf."""

    def __init__(self, system):
        n = system.rank
        self.n = n
        self.B = [[Fraction(1) if i == j else -COS[system.m(i + 1, j + 1)] for j in range(n)] for i in range(n)]

    def reflect(self, i, x):
        c = 2 * sum(self.B[i][j] * x[j] for j in range(self.n))
        y = list(x)
        y[i] -= c
        return y

    def act(self, word, x):
        for i in reversed(word):
            x = self.reflect(i - 1, x)
        return x

    def root(self, i):
        return [Fraction(int(j == i - 1)) for j in range(self.n)]

    @staticmethod
    def positive(x):
        return all(c >= 0 for c in x)

    def plus_side(self, i, word):
        """``w`` is on the identity side of wall(s_i) iff w^-1 alpha_i > 0."""
        inv = tuple(reversed(word))
        return self.positive(self.act(inv, self.root(i)))

    def in_translate(self, i, g, v):
        """``v in gA`` iff ``g^-1 v`` in A."""
        return self.plus_side(i, tuple(reversed(g)) + tuple(v))


RATIONAL_SYSTEMS = [type_a(2), dihedral(INF), free_product(3), triangle_system(3, 3, 3),
                    racg_cycle(4), racg_cycle(5)]


def test_halfspace_examples(d_inf):
    h = Halfspace(Element((1,)))
    assert halfspace_membership(d_inf, h, IDENTITY) == PLUS
    assert halfspace_membership(d_inf, h, Element((1,))) == MINUS
    assert halfspace_membership(d_inf, h, Element((2,))) == PLUS
    assert halfspace_membership(d_inf, h, Element((1, 2))) == MINUS
    assert h.contains(d_inf, IDENTITY)
    assert Halfspace(Element((1,)), MINUS).contains(d_inf, Element((1, 2)))


@pytest.mark.parametrize("sys_", RATIONAL_SYSTEMS)
def test_halfspaces_match_geometric_representation(sys_):
    rep = TitsRep(sys_)
    ball = build_ball(sys_, 5)
    for i in sys_.generators:
        h = Halfspace(Element((i,)))
        for g in ball.vertices:
            assert (halfspace_membership(sys_, h, g) == PLUS) == rep.plus_side(i, g.nf)


@pytest.mark.parametrize("sys_", RATIONAL_SYSTEMS + [triangle_system(2, 3, 7)])
def test_left_t_swap(sys_):
    ball = build_ball(sys_, 4)
    for i in sys_.generators:
        for g in ball.vertices[:40]:
            t = conjugate_reflection(sys_, g, i)
            h = Halfspace(t)
            assert halfspace_membership(sys_, h, IDENTITY) == PLUS
            assert halfspace_membership(sys_, h, t) == MINUS
            for w in ball.vertices:
                assert halfspace_membership(sys_, h, multiply(sys_, t, w)) == -halfspace_membership(sys_, h, w)


def test_d_infinity_single_wall_edge(d_inf):
    ball = build_ball(d_inf, 4)
    edges = wall_edges(d_inf, ball, Element((1,)))
    assert edges == {(0, 1, ball.vertex(Element((1,))))}


def test_radius_zero_has_no_wall_edges(affine):
    assert wall_edges(affine, build_ball(affine, 0), Element((1,))) == set()


def test_a2_wall_matches_sign_flips(a2):
    ball = build_ball(a2, 10)
    edges = wall_edges(a2, ball, Element((1,)))
    # a reflection in S3 fixes one of three lines through the hexagon: two edges
    assert len(edges) == 2
    assert edges == sign_flip_edges(a2, ball, Element((1,)))


@pytest.mark.parametrize("sys_", RATIONAL_SYSTEMS + [triangle_system(2, 3, 7), dihedral(5)])
def test_sign_flip_census(sys_):
    ball = build_ball(sys_, 5)
    for i in sys_.generators:
        for g in ball.vertices[:12]:
            t = conjugate_reflection(sys_, g, i)
            assert wall_edges(sys_, ball, t) == sign_flip_edges(sys_, ball, t)


@pytest.mark.parametrize("sys_, i, R", [(triangle_system(3, 3, 3), 1, 8), (dihedral(INF), 1, 6),
                                        (racg_cycle(4), 1, 6), (racg_cycle(5), 3, 6)])
def test_certificate_passes(sys_, i, R):
    cert = wall_certificate(sys_, i, R)
    assert cert.passed, cert.failures
    assert cert.check_deep and cert.check_boundary and cert.check_stabilizer


def test_d_infinity_certificate_single_edge(d_inf):
    cert = wall_certificate(d_inf, 1, 6)
    assert cert.passed and cert.wall_edge_count == 1


@pytest.mark.parametrize("R", [3, 4, 6])
def test_finite_group_has_no_deep_halfspace(a2, R):
    cert = wall_certificate(a2, 1, R)
    assert not cert.check_deep
    assert not cert.passed
    assert cert.check_boundary


def test_certificate_radius_guard(affine):
    with pytest.raises(ValueError):
        wall_certificate(affine, 1, 1)


def test_certificate_json(affine):
    data = wall_certificate(affine, 1, 4).to_json()
    assert data["passed"] is True
    assert data["check_deep_halfspaces"] and data["check_boundary"] and data["check_stabilizer"]
    assert data["failures"] == []


def test_identity_is_exactly_nested(racg4):
    rep = crossing_obstruction(racg4, 1, 4)
    res = rep.result_for(IDENTITY)
    assert res.verdict == NESTED
    assert res.flags == (True, False, False, True)


def test_racg4_commuting_generator_is_exactly_nested(racg4):
    # s2 commutes with s1, so s2 fixes the wall of s1 and keeps its sides
    res = crossing_obstruction(racg4, 1, 6).result_for(Element((2,)))
    assert res.verdict == NESTED
    assert res.flags == (True, False, False, True)


def test_racg4_parallel_translate(racg4):
    g = Element((3,))
    for R in range(4, 9):
        res = crossing_obstruction(racg4, 1, R, elements=[g]).results[0]
        assert res.verdict == NESTED_AT_RADIUS


def test_racg4_walls_of_s1_never_cross(racg4):
    # every conjugate of s1 lies in the first D-infinity factor
    assert crossing_obstruction(racg4, 1, 6).crossing() == []


def test_affine_transverse_translate_crosses(affine):
    res = crossing_obstruction(affine, 1, 4, elements=[Element((2,))]).results[0]
    assert res.verdict == CROSSES
    assert all(w is not None for w in res.witnesses)


def test_affine_parallel_translate_stays_nested(affine):
    # [2,1,3] moves the wall of s1 to a parallel line
    g = reduce(affine, (2, 1, 3))
    for R in range(4, 9):
        res = crossing_obstruction(affine, 1, R, elements=[g]).results[0]
        assert res.verdict == NESTED_AT_RADIUS


@pytest.mark.parametrize("sys_", [triangle_system(3, 3, 3), racg_cycle(4), racg_cycle(5), free_product(3)])
def test_corners_match_geometric_oracle(sys_):
    rep = TitsRep(sys_)
    R = 4
    ball = build_ball(sys_, R)
    report = crossing_obstruction(sys_, 1, R)
    for res in report.results:
        flags = [False] * 4
        for v in ball.vertices:
            in_a = rep.plus_side(1, v.nf)
            in_ga = rep.in_translate(1, res.g.nf, v.nf)
            flags[(0 if in_ga else 1) if in_a else (2 if in_ga else 3)] = True
        assert tuple(flags) == res.flags
        for corner, w in enumerate(res.witnesses):
            if w is not None:
                in_a = rep.plus_side(1, w.nf)
                in_ga = rep.in_translate(1, res.g.nf, w.nf)
                assert corner == ((0 if in_ga else 1) if in_a else (2 if in_ga else 3))


@pytest.mark.parametrize("sys_, i, radii", [(triangle_system(3, 3, 3), 1, range(4, 8)),
                                            (racg_cycle(4), 2, range(4, 8)),
                                            (racg_cycle(5), 1, range(3, 6))])
def test_witness_persistence(sys_, i, radii):
    prev = None
    for R in radii:
        now = {c.g: c.flags for c in crossing_obstruction(sys_, i, R).results}
        if prev is not None:
            for g, flags in prev.items():
                assert all(b or not a for a, b in zip(flags, now[g]))
        prev = now


def test_nested_verdict_exactly_on_wall_stabilizer(affine):
    oracle = centralizer_oracle(affine, 1)
    for res in crossing_obstruction(affine, 1, 4).results:
        if res.verdict == NESTED:
            assert oracle(res.g)
        elif oracle(res.g):
            assert res.verdict == NESTED


def test_crossing_radius_guard(affine):
    with pytest.raises(ValueError):
        crossing_obstruction(affine, 1, 1)


def test_crossing_json(affine):
    data = crossing_obstruction(affine, 1, 3).to_json()
    assert data["crossing_count"] == len(data["results"]) > 0
    assert set(data["results"][0]["corners"]) == {"A&gA", "A&gA*", "A*&gA", "A*&gA*"}
    full = crossing_obstruction(affine, 1, 3).to_json(include_all=True)
    assert len(full["results"]) == full["tested"]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RATIONAL_SYSTEMS[1:]), st.data())
def test_corner_test_random_elements(sys_, data):
    rep = TitsRep(sys_)
    i = data.draw(st.integers(1, sys_.rank))
    g = reduce(sys_, data.draw(st.lists(st.integers(1, sys_.rank), max_size=6)))
    ball = build_ball(sys_, 3)
    res = corner_test(sys_, Element((i,)), g, ball.vertices)
    for corner, w in enumerate(res.witnesses):
        if w is not None:
            in_a = rep.plus_side(i, w.nf)
            in_ga = rep.in_translate(i, g.nf, w.nf)
            assert corner == ((0 if in_ga else 1) if in_a else (2 if in_ga else 3))
    ginv = inverse(sys_, g)
    stabilizes = multiply(sys_, g, Element((i,)), ginv) == Element((i,))
    assert (res.verdict == NESTED) == (stabilizes and res.verdict != CROSSES)

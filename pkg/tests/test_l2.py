from fractions import Fraction as F
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxsplit.coxeter import INF, CoxeterSystem, triangle_system
from coxsplit.l2 import (
    TriangleParams,
    betti_scale_finite_index,
    bound_report_json,
    centralizer_betti_family,
    coxeter_betti_lower_bound,
    decimal_string,
    display_inequality_sides,
    example_one_system,
    family_display_bound,
    family_system,
    index_threshold,
    minimal_family_n,
    rational_json,
    recognize_family,
    splitting_criterion,
    sufficient_criterion,
    surface_betti,
    triangle_betti,
    triangle_euler_char,
)


def naive_bound(rank, labels):
    """Recompute n/2 - 1 - sum 1/m straight from a dict of all pairs."""
    total = F(rank, 2) - 1
    for m in labels.values():
        if m != INF:
            total -= F(1, m)
    return total


def family_labels(n, p, q, r):
    labels = {}
    for i, j in combinations(range(1, n + 1), 2):
        if i == 1 and j in (2, 3, 4):
            labels[i, j] = 2
        elif i == 1:
            labels[i, j] = INF
        elif (i, j) == (2, 3):
            labels[i, j] = p
        elif (i, j) == (2, 4):
            labels[i, j] = q
        elif (i, j) == (3, 4):
            labels[i, j] = r
        else:
            labels[i, j] = n * n
    return labels


def test_triangle_2_3_7():
    assert triangle_euler_char((2, 3, 7)) == F(-1, 84)
    assert triangle_betti((2, 3, 7)) == F(1, 84)


def test_euclidean_triangle_has_zero_betti():
    assert triangle_betti((3, 3, 3)) == 0
    assert TriangleParams(2, 4, 4).euclidean


def test_spherical_triangle_refused():
    with pytest.raises(ValueError):
        triangle_betti((2, 3, 5))
    assert TriangleParams(2, 2, 9).spherical


def test_triangle_params_validation():
    with pytest.raises(ValueError):
        TriangleParams(1, 3, 7)


def test_klein_quartic():
    assert betti_scale_finite_index(F(1, 84), 336) == 4 == surface_betti(3)
    assert betti_scale_finite_index(triangle_betti((2, 3, 7)), 336) == surface_betti(3)


def test_surface_and_index_guards():
    with pytest.raises(ValueError):
        surface_betti(0)
    with pytest.raises(ValueError):
        betti_scale_finite_index(F(1), 0)
    assert surface_betti(1) == 0


def test_bound_examples():
    assert coxeter_betti_lower_bound(triangle_system(3, 3, 3)) == F(1, 2) - 1
    w8 = family_system(8, (2, 3, 7))
    assert coxeter_betti_lower_bound(w8) == F(163, 672)
    assert coxeter_betti_lower_bound(w8) == naive_bound(8, family_labels(8, 2, 3, 7))
    # an all-infinity system only keeps n/2 - 1
    assert coxeter_betti_lower_bound(CoxeterSystem.from_labels(4, {}, default=INF)) == 1


def test_family_system_labels():
    w8 = family_system(8, (2, 3, 7))
    for (i, j), m in family_labels(8, 2, 3, 7).items():
        assert w8.m(i, j) == m


def test_example_one():
    sys_ = example_one_system(51)
    assert coxeter_betti_lower_bound(sys_) == F(5, 34) > 0
    with pytest.raises(ValueError):
        example_one_system(50)


def test_centralizer_value_and_threshold():
    assert centralizer_betti_family((2, 3, 7)) == F(1, 168)
    assert index_threshold(F(1, 168), F(163, 672)) == F(4, 163) < 1
    with pytest.raises(ValueError):
        index_threshold(F(1), F(0))
    with pytest.raises(ValueError):
        index_threshold(F(1), F(-1, 2))


def test_minimal_n():
    t = TriangleParams(2, 3, 7)
    assert 3 * triangle_euler_char(t) + 2 == F(55, 28)
    assert not sufficient_criterion(7, t)
    assert sufficient_criterion(8, t)
    assert minimal_family_n(t) == 8
    assert minimal_family_n(t, sufficient=True) == 8
    report = splitting_criterion(7, t)
    assert not report.inequality_holds and not report.sufficient_criterion_holds


def test_splitting_criterion_n8():
    report = splitting_criterion(8, (2, 3, 7))
    assert report.lower_bound_W == F(163, 672)
    assert report.centralizer_value == F(1, 168)
    assert report.inequality_holds and report.sufficient_criterion_holds
    assert report.index_threshold == F(4, 163)
    data = bound_report_json(report)
    assert data["lower_bound"] == {"num": "163", "den": "672", "decimal": "0.242560"}
    assert data["minimal_n"] == 8


def test_splitting_criterion_refuses_non_hyperbolic():
    with pytest.raises(ValueError):
        splitting_criterion(8, (3, 3, 3))


@pytest.mark.parametrize("n", range(5, 13))
def test_validation_gate(n):
    for p, q, r in product(range(2, 11), repeat=3):
        t = TriangleParams(p, q, r)
        if not t.hyperbolic:
            continue
        general = coxeter_betti_lower_bound(family_system(n, t))
        assert general == family_display_bound(n, t) == naive_bound(n, family_labels(n, p, q, r))
        lhs, rhs = display_inequality_sides(n, t)
        assert (general > centralizer_betti_family(t)) == (lhs > rhs)


@settings(max_examples=80, deadline=None)
@given(st.integers(5, 12), st.integers(2, 12), st.integers(2, 12), st.integers(2, 12))
def test_sufficient_criterion_implies_inequality(n, p, q, r):
    t = TriangleParams(p, q, r)
    if not t.hyperbolic:
        return
    if sufficient_criterion(n, t):
        assert splitting_criterion(n, t, with_minimal=False).inequality_holds


@st.composite
def labelled(draw):
    rank = draw(st.integers(2, 6))
    labels = {p: draw(st.one_of(st.integers(2, 30), st.just(INF)))
              for p in combinations(range(1, rank + 1), 2)}
    return rank, labels


@settings(max_examples=100, deadline=None)
@given(labelled(), st.data())
def test_bound_monotone_in_labels(case, data):
    rank, labels = case
    pair = data.draw(st.sampled_from(sorted(labels)))
    before = coxeter_betti_lower_bound(CoxeterSystem.from_labels(rank, labels))
    assert before == naive_bound(rank, labels)
    raised = dict(labels)
    old = labels[pair]
    raised[pair] = INF if old == INF else old + data.draw(st.integers(1, 10))
    after = coxeter_betti_lower_bound(CoxeterSystem.from_labels(rank, raised))
    assert after >= before
    if old != INF:
        assert after > before


def test_recognize_family():
    assert recognize_family(family_system(8, (2, 3, 7))) == (8, TriangleParams(2, 3, 7))
    assert recognize_family(example_one_system()) is None
    assert recognize_family(family_system(8, (2, 3, 7), large_label=65)) is None
    assert recognize_family(triangle_system(2, 3, 7)) is None


def test_rational_json():
    assert rational_json(F(-1, 84)) == {"num": "-1", "den": "84", "decimal": "-0.011905"}
    assert decimal_string(F(4, 163)) == "0.024540"

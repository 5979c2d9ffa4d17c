from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from hcell.algebra import GroupData, cyclic_group, product_group, symmetric_group
from hcell.cohomology import (
    AbelianInvariants,
    abelian_invariants,
    abelian_multiplier_formula,
    bar_differential,
    bar_h3,
    bar_h3_integral,
    check_smith,
    classify,
    invariant_factors,
    schur_report,
    smith_normal_form,
    subgroups,
)
from hcell.errors import GroupTooLarge, NotAbelian, SizeBound


def group_from(elements, mul) -> GroupData:
    """Multiplication table of a finite set closed under ``mul``; the first element is the identity."""
    idx = {x: i for i, x in enumerate(elements)}
    table = tuple(tuple(idx[mul(a, b)] for b in elements) for a in elements)
    return GroupData(tuple(str(i) for i in range(len(elements))), table, 0)


def dihedral8() -> GroupData:
    """Symmetries of a square as permutations of its corners."""
    r, s = (1, 2, 3, 0), (0, 3, 2, 1)

    def comp(p, q):  # p after q
        return tuple(p[q[i]] for i in range(4))

    elems = [(0, 1, 2, 3)]
    frontier = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            for g in (r, s):
                y = comp(g, x)
                if y not in elems:
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    return group_from(elems, comp)


def quaternion8() -> GroupData:
    def qmul(a, b):
        (sa, x), (sb, y) = a, b
        # units 1, i, j, k as 0..3
        tab = {
            (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
            (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
            (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
            (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
        }
        s, z = tab[(x, y)]
        return (sa * sb * s, z)

    elems = [(1, 0)] + [(s, u) for s in (1, -1) for u in range(4) if (s, u) != (1, 0)]
    return group_from(elems, qmul)


# subgroups


@pytest.mark.parametrize("G,count,classes", [
    (cyclic_group(1), 1, 1),
    (cyclic_group(2), 2, 2),
    (cyclic_group(6), 4, 4),
    (product_group(2, 2), 5, 5),
    (symmetric_group(3), 6, 4),
    (dihedral8(), 10, 8),
    (quaternion8(), 6, 6),
])
def test_subgroup_counts(G, count, classes):
    subs = subgroups(G)
    assert len(subs.all) == count
    assert len(subs.classes) == classes
    for H in subs.all:
        assert all(G.mul(a, b) in H for a in H for b in H)


def test_subgroup_bound():
    with pytest.raises(GroupTooLarge):
        subgroups(cyclic_group(17))


# abelian invariants


@pytest.mark.parametrize("orders,divisors", [
    ([2, 3], (6,)),
    ([2, 2], (2, 2)),
    ([4, 6], (2, 12)),
    ([1], ()),
])
def test_invariant_factors(orders, divisors):
    assert invariant_factors(orders).divisors == divisors


def test_abelian_invariants_of_products():
    assert abelian_invariants(product_group(2, 4)).divisors == (2, 4)
    assert abelian_invariants(product_group(2, 3)).divisors == (6,)
    with pytest.raises(NotAbelian):
        abelian_invariants(symmetric_group(3))


def test_invariants_reject_bad_chains():
    with pytest.raises(ValueError):
        AbelianInvariants((2, 3))
    assert str(AbelianInvariants()) == "0"
    assert str(AbelianInvariants((2, 2))) == "Z/2 + Z/2"


def test_abelian_formula():
    assert abelian_multiplier_formula(orders=[2, 2]).divisors == (2,)
    assert abelian_multiplier_formula(orders=[2, 2, 2]).divisors == (2, 2, 2)
    assert abelian_multiplier_formula(orders=[4, 6]).divisors == (2,)
    assert abelian_multiplier_formula(orders=[5]).divisors == ()


# Smith normal form


def int_matrices(max_side=5, bound=9):
    return st.integers(1, max_side).flatmap(
        lambda m: st.integers(1, max_side).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def sympy_divisors(rows) -> list[int]:
    D = sympy_snf(Matrix(rows), domain=ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0)


@given(int_matrices())
def test_smith_form_matches_sympy(rows):
    S = smith_normal_form(rows)
    assert check_smith(rows, S).ok
    assert sorted(S.diagonal) == sympy_divisors(rows)


def test_smith_form_of_known_matrix():
    S = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert S.diagonal == [2, 6, 12]


def test_smith_form_with_empty_shape():
    S = smith_normal_form([], n=3)
    assert S.diagonal == [] and check_smith([], S).ok


# bar complex


@pytest.mark.parametrize("normalized", [True, False])
@pytest.mark.parametrize("G", [cyclic_group(3), product_group(2, 2), symmetric_group(3)])
def test_differential_squares_to_zero(G, normalized):
    for n in (1, 2):
        d1 = bar_differential(G, n, normalized)
        d2 = bar_differential(G, n + 1, normalized)
        assert not (d2 @ d1).any()


ABELIAN = [cyclic_group(n) for n in range(1, 9)] + [product_group(2, 2), product_group(2, 4), product_group(2, 2, 2)]


@pytest.mark.parametrize("K", ABELIAN, ids=lambda K: f"order{K.order}")
def test_h3_of_abelian_groups_matches_closed_form(K):
    res = bar_h3(K)
    assert res.report.ok, res.report.messages()
    assert res.invariants == abelian_multiplier_formula(K)


@pytest.mark.parametrize("K,expected", [
    (symmetric_group(3), ()),
    (dihedral8(), (2,)),
    (quaternion8(), ()),
    (product_group(2, 2), (2,)),
])
def test_h3_known_multipliers(K, expected):
    assert bar_h3_integral(K).divisors == expected


@pytest.mark.parametrize("K", [cyclic_group(4), product_group(2, 2), symmetric_group(3)])
def test_normalized_and_full_complexes_agree(K):
    assert bar_h3_integral(K, normalized=True) == bar_h3_integral(K, normalized=False)


def test_bar_bound():
    with pytest.raises(SizeBound):
        bar_h3(cyclic_group(9))


def test_schur_report():
    rep = schur_report(product_group(2, 2))
    assert rep.ok and rep.data["H^3(K,Z)"] == "Z/2"
    rep = schur_report(symmetric_group(3))
    assert rep.ok and any(c.status == "skipped" for c in rep.checks)


# classification


@pytest.mark.parametrize("G,total,by_class", [
    (cyclic_group(1), 2, 1),
    (cyclic_group(2), 3, 2),
    (product_group(2, 2), 7, 6),
    (symmetric_group(3), 7, 4),
])
def test_classification_counts(G, total, by_class):
    res = classify(G)
    assert res.total == total
    assert res.j0_by_subgroup == total - 1
    assert res.j0_by_conjugacy_class == by_class
    assert [e.apex for e in res.entries].count("J1") == 1


def test_classification_entries_cover_multiplier():
    res = classify(product_group(2, 2))
    full = [e for e in res.entries if e.apex == "J0" and len(e.subgroup) == 4]
    assert sorted(e.omega for e in full) == [(0,), (1,)]
    assert all(e.multiplier == "Z/2" for e in full)


def test_classification_note_in_positive_characteristic():
    assert classify(product_group(2, 2), char=2).notes
    assert not classify(product_group(2, 2), char=17).notes


def test_classification_is_deterministic():
    G = symmetric_group(3)
    assert classify(G).to_dict() == classify(G).to_dict()
    assert np.array_equal(bar_differential(G, 2), bar_differential(G, 2))
    assert len(list(itertools.chain(*subgroups(G).classes))) == 6

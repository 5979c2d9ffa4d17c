from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hcell.bimodule import direct_sum, projective_bimodule, regular_bimodule
from hcell.errors import CharTooSmall
from hcell.skewcat import (
    SkewHom,
    asymmetry_iso,
    check_1_full_embedding,
    check_end_mod_rad,
    check_idempotents,
    check_theta_functorial,
    generator_bimodules,
    group_idempotents,
    skew_add,
    skew_category_suite,
    skew_compose,
    skew_hom_basis,
    skew_identity,
    stabilizer,
    stabilizer_structure,
    theta_map,
    verify_unitors,
)


@pytest.fixture(params=["sw", "t3"])
def hopf(request):
    return request.getfixturevalue(request.param)


@pytest.fixture(scope="module")
def sw_homs(sw):
    alg, hd = sw
    gens = generator_bimodules(alg, hd.hit)
    return gens, {(i, j): skew_hom_basis(X, Y, hd.hit) for (i, X), (j, Y) in itertools.product(enumerate(gens), repeat=2)}


def combination(F, basis, coeffs, M, N, act):
    out = SkewHom(M, N, act, {})
    for c, b in zip(coeffs, basis):
        out = skew_add(out, b, F.scalar(c))
    return out


@given(st.data())
def test_composition_is_associative_on_combinations(sw, sw_homs, data):
    alg, hd = sw
    F = alg.field
    gens, bases = sw_homs
    i, j, k, l = (data.draw(st.integers(0, len(gens) - 1)) for _ in range(4))
    homs = []
    for s, t in ((i, j), (j, k), (k, l)):
        B = bases[(s, t)]
        coeffs = data.draw(st.lists(st.integers(0, 16), min_size=len(B), max_size=len(B)))
        homs.append(combination(F, B, coeffs, gens[s], gens[t], hd.hit))
    c, b, a = homs
    assert skew_compose(skew_compose(a, b), c).equals(skew_compose(a, skew_compose(b, c)))
    assert skew_compose(a, skew_identity(gens[k], hd.hit)).equals(a)
    assert not a.defects()
    assert check_theta_functorial(a, b)


def test_theta_of_identity_is_identity(hopf):
    alg, hd = hopf
    F = alg.field
    for M in generator_bimodules(alg, hd.hit):
        t = theta_map(skew_identity(M, hd.hit))
        assert F.equal(t, F.eye(t.shape[0]))


def test_stabilizers(hopf):
    alg, hd = hopf
    G = hd.weights.group
    assert stabilizer(regular_bimodule(alg), hd.hit) == list(range(G.order))
    # the action moves vertices freely, so no nontrivial g fixes A e_v (x) e_w A
    for v, w in itertools.product(alg.vertices, repeat=2):
        assert stabilizer(projective_bimodule(alg, v, w), hd.hit) == [G.identity]


def test_idempotents_and_unitors(hopf):
    alg, hd = hopf
    act = hd.hit
    G = act.group
    Q1 = direct_sum([projective_bimodule(alg, h, h) for h in alg.vertices], "Q1").module
    for M, cand in [(regular_bimodule(alg), {g: act.matrix(g) for g in range(G.order)}), (Q1, None)]:
        GM, alpha = stabilizer_structure(M, act, cand)
        assert sorted(GM) == list(range(G.order))
        idems = group_idempotents(M, act, GM, alpha)
        assert len(idems) == G.order
        assert check_idempotents(idems).ok
        for l in range(len(idems)):
            rep = verify_unitors(M, act, GM, alpha, l)
            assert rep.ok, rep.messages()


def test_asymmetry(sw):
    alg, hd = sw
    gens = generator_bimodules(alg, hd.hit)
    for M, N in itertools.product(gens, repeat=2):
        assert asymmetry_iso(M, N, hd.hit).ok


def test_end_mod_rad_of_regular_sweedler(sw):
    alg, hd = sw
    act = hd.hit
    G = act.group
    M = regular_bimodule(alg)
    GM, alpha = stabilizer_structure(M, act, {g: act.matrix(g) for g in range(G.order)})
    rep = check_end_mod_rad(M, act, GM, alpha)
    assert rep.ok, rep.messages()
    assert rep.data["dim End/Rad"] == 2


def test_end_mod_rad_refuses_small_characteristic(t3):
    alg, hd = t3
    act = hd.hit
    G = act.group
    M = regular_bimodule(alg)
    GM, alpha = stabilizer_structure(M, act, {g: act.matrix(g) for g in range(G.order)})
    with pytest.raises(CharTooSmall):
        check_end_mod_rad(M, act, GM, alpha)


def test_one_full_embedding(hopf):
    _, hd = hopf
    rep = check_1_full_embedding(hd)
    assert rep.ok, rep.messages()


def test_suite_on_sweedler(sw):
    _, hd = sw
    rep = skew_category_suite(hd)
    assert rep.ok, rep.messages()
    assert rep.data["composable triples"] == 648

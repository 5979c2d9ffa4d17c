from __future__ import annotations

import itertools

import numpy as np
import pytest

from hcell.bimodule import (
    Bimodule,
    EquivariantStructure,
    are_isomorphic,
    associator,
    decompose,
    direct_sum,
    equivariant_defects,
    equivariant_structure,
    find_isomorphism,
    hom_space,
    is_indecomposable,
    is_intertwiner,
    is_projective,
    left_unitor,
    presentation,
    projective_bimodule,
    projective_module,
    regular_bimodule,
    regular_module,
    right_unitor,
    simple_module,
    tensor_over_A,
    tensor_over_k,
    twist,
)
from hcell.field import nullspace, rank


@pytest.fixture(params=["sw", "t3"])
def hopf(request):
    return request.getfixturevalue(request.param)


def center_dim(alg) -> int:
    """dim Z(A) straight from the multiplication table: x with b x = x b for all generators b."""
    F = alg.field
    eqs = [F.reduce(alg.left_matrix(i) - alg.right_matrix(i)) for i in alg.generators]
    return nullspace(F, np.concatenate(eqs, axis=0)).shape[1]


def test_modules_are_well_formed(hopf):
    alg, _ = hopf
    assert regular_bimodule(alg).problems() == []
    assert regular_module(alg).problems() == []
    for v, w in itertools.product(alg.vertices, repeat=2):
        assert projective_bimodule(alg, v, w).problems() == []
    for v in alg.vertices:
        assert projective_module(alg, v).problems() == []
        assert simple_module(alg, v).problems() == []


def test_center_is_bimodule_endomorphisms(hopf):
    alg, _ = hopf
    A = regular_bimodule(alg)
    assert hom_space(A, A).shape[0] == center_dim(alg)


def test_sweedler_center_is_one_dimensional(sw):
    alg, _ = sw
    assert center_dim(alg) == 1


def test_hom_from_projective_is_corner(hopf):
    alg, _ = hopf
    M = regular_module(alg)
    for v in alg.vertices:
        H = hom_space(projective_module(alg, v), M)
        # Hom(A e_v, M) = e_v M, and e_v A has one basis path per path ending at v
        assert H.shape[0] == sum(1 for p in alg.paths if p.target == v)
        assert all(is_intertwiner(projective_module(alg, v), M, f) for f in H)


def test_hom_between_simples(hopf):
    alg, _ = hopf
    for v, w in itertools.product(alg.vertices, repeat=2):
        H = hom_space(simple_module(alg, v), simple_module(alg, w))
        assert H.shape[0] == (v == w)


def test_tensor_dimension_formula(hopf):
    alg, _ = hopf
    n = {v: sum(1 for p in alg.paths if p.source == v) for v in alg.vertices}
    m = {v: sum(1 for p in alg.paths if p.target == v) for v in alg.vertices}
    for v, w, x, y in itertools.product(alg.vertices, repeat=4):
        T = tensor_over_A(projective_bimodule(alg, v, w), projective_bimodule(alg, x, y))
        assert T.dim == n[v] * alg.corner_dim(x, w) * m[y]
        assert T.identity_matrix_check()
        assert T.module.problems() == []


def test_unitors(hopf):
    alg, _ = hopf
    F = alg.field
    A = regular_bimodule(alg)
    for M in [projective_bimodule(alg, v, w) for v, w in itertools.product(alg.vertices, repeat=2)] + [A]:
        L = left_unitor(tensor_over_A(A, M))
        R = right_unitor(tensor_over_A(M, A))
        for U, T in ((L, tensor_over_A(A, M)), (R, tensor_over_A(M, A))):
            assert U.shape == (M.dim, M.dim) and rank(F, U) == M.dim
            assert is_intertwiner(T.module, M, U)


def test_associator_is_invertible_bimodule_map(sw):
    alg, _ = sw
    F = alg.field
    mods = [projective_bimodule(alg, v, w) for v, w in itertools.product(alg.vertices, repeat=2)]
    for K, M, N in itertools.product(mods[:2], mods[1:3], mods[2:]):
        KM = tensor_over_A(K, M)
        KM_N = tensor_over_A(KM.module, N)
        MN = tensor_over_A(M, N)
        K_MN = tensor_over_A(K, MN.module)
        a = associator(KM, KM_N, MN, K_MN)
        assert a.shape == (K_MN.dim, KM_N.dim) and rank(F, a) == K_MN.dim
        assert is_intertwiner(KM_N.module, K_MN.module, a)


def test_decompose_regular_module(hopf):
    alg, _ = hopf
    parts = decompose(regular_module(alg))
    assert sorted(m for _, m in parts) == [1] * len(alg.vertices)
    assert sum(P.dim for P, _ in parts) == alg.dim


def test_decompose_non_projective_sum(sw):
    alg, _ = sw
    S = simple_module(alg, "1")
    P = projective_module(alg, "w")
    M = direct_sum([S, S, P]).module
    assert not is_projective(M)
    parts = decompose(M)
    assert sorted((Q.dim, m) for Q, m in parts) == [(1, 2), (2, 1)]
    assert all(is_indecomposable(Q) for Q, _ in parts)


def test_find_isomorphism_detects_non_isomorphic(hopf):
    alg, _ = hopf
    vs = list(alg.vertices)
    assert not are_isomorphic(simple_module(alg, vs[0]), simple_module(alg, vs[1]))
    B = find_isomorphism(regular_module(alg), direct_sum([projective_module(alg, v) for v in vs]).module)
    assert B is not None and rank(alg.field, B) == alg.dim


def test_presentation_of_projective_bimodule(hopf):
    alg, _ = hopf
    for v, w in itertools.product(alg.vertices, repeat=2):
        pres = presentation(projective_bimodule(alg, v, w))
        assert pres.is_projective and pres.top_counts() == {(v, w): 1}


def test_twist_is_projective_at_moved_vertices(hopf):
    alg, hd = hopf
    G = hd.weights.group
    act = hd.hit
    for g in range(G.order):
        for v, w in itertools.product(alg.vertices, repeat=2):
            T = twist(projective_bimodule(alg, v, w), act, g)
            assert isinstance(T, Bimodule) and T.problems() == []
            ((u, x),) = presentation(T).top_counts()
            assert are_isomorphic(T, projective_bimodule(alg, u, x))


def test_regular_bimodule_is_equivariant(hopf):
    alg, hd = hopf
    A = regular_bimodule(alg)
    res = equivariant_structure(A, hd.hit)
    assert isinstance(res, EquivariantStructure)
    assert equivariant_defects(A, hd.hit, res.maps) == []


def test_equivariant_defects_catch_a_bad_family(sw):
    alg, hd = sw
    A = regular_bimodule(alg)
    G = hd.weights.group
    F = alg.field
    maps = {g: F.eye(A.dim) for g in range(G.order)}
    assert equivariant_defects(A, hd.hit, maps)


def test_tensor_of_free_bimodules(sw):
    alg, _ = sw
    A = regular_bimodule(alg)
    AA = tensor_over_k(A, A)
    T = tensor_over_A(AA, AA).module
    assert T.dim == 64
    assert are_isomorphic(T, direct_sum([AA] * 4).module)
    assert not are_isomorphic(T, direct_sum([AA] * 3 + [A] * 4).module)
    # each A e_v (x) e_w A appears once in A (x) A, so four times here
    assert sorted(m for _, m in decompose(T)) == [4, 4, 4, 4]

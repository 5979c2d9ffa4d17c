from __future__ import annotations

import pytest

from hcell.algebra import cyclic_group, product_group, symmetric_group
from hcell.bimodule import are_isomorphic, is_projective, regular_bimodule, regular_module, simple_module
from hcell.examples import function_algebra, sweedler, taft
from hcell.field import Field
from hcell.hopf import (
    check_adjunction,
    check_basis_maps,
    check_hopf_axioms,
    default_test_modules,
    equivariant_gamma,
    gamma_functor,
    module_tensor,
    trivial_module,
    verify_gamma_monoidal,
)


@pytest.fixture(params=["sw", "t3"])
def hopf(request):
    return request.getfixturevalue(request.param)


def antipode_order(hd, limit=32):
    F = hd.field
    P = hd.antipode
    for k in range(1, limit + 1):
        if F.equal(P, F.eye(hd.dim)):
            return k
        P = F.matmul(P, hd.antipode)
    return None


@pytest.mark.parametrize("n,p", [(2, 17), (3, 7), (4, 13), (5, 11)])
def test_taft_axioms(n, p):
    _, hd = taft(n, Field(p))
    assert hd.report.ok, hd.report.messages()
    assert check_hopf_axioms(hd).ok


@pytest.mark.parametrize("n,p", [(2, 17), (3, 7), (4, 13)])
def test_taft_antipode_has_order_2n(n, p):
    _, hd = taft(n, Field(p))
    assert antipode_order(hd) == 2 * n


@pytest.mark.parametrize("G", [cyclic_group(2), cyclic_group(3), product_group(2, 2), symmetric_group(3)])
def test_function_algebra_axioms(G):
    _, hd = function_algebra(G, Field(7))
    assert hd.report.ok
    assert check_basis_maps(hd).ok


def test_counit_on_vertices(hopf):
    alg, hd = hopf
    one = hd.weights.group.label(hd.weights.group.identity)
    for v in alg.vertices:
        assert hd.counit[alg.idempotent_index[v]] == (v == one)
    for i in alg.arrow_index.values():
        assert hd.counit[i] == 0


def test_wrong_antipode_sign_is_caught():
    _, hd = sweedler(Field(17), antipode_sign=1)
    failed = {c.name for c in hd.report.failures}
    assert any(name.startswith("antipode axiom") for name in failed)
    assert all(c.witness is not None for c in hd.report.failures if c.name.startswith("antipode axiom"))
    assert not check_basis_maps(hd).ok


def test_basis_maps(hopf):
    _, hd = hopf
    rep = check_basis_maps(hd)
    assert rep.ok
    assert rep.data["dimension"] == hd.dim**2


def test_module_tensor_with_trivial(hopf):
    alg, hd = hopf
    L1 = trivial_module(hd)
    assert L1.problems() == []
    for M in [regular_module(alg)] + [simple_module(alg, v) for v in alg.vertices]:
        T = module_tensor(hd, L1, M)
        assert T.problems() == []
        assert are_isomorphic(T, M)


def test_gamma_of_trivial_is_regular(hopf):
    _, hd = hopf
    G1 = gamma_functor(hd, trivial_module(hd))
    assert G1.problems() == []
    assert are_isomorphic(G1, regular_bimodule(hd.algebra))


def test_gamma_of_regular_is_free(hopf):
    alg, hd = hopf
    GA = gamma_functor(hd, regular_module(alg))
    assert GA.problems() == [] and GA.dim == alg.dim**2
    assert is_projective(GA)


def test_gamma_monoidal(hopf):
    _, hd = hopf
    rep = verify_gamma_monoidal(hd, default_test_modules(hd))
    assert rep.ok, rep.messages()


def test_adjunction(hopf):
    _, hd = hopf
    rep = check_adjunction(hd)
    assert rep.ok, rep.messages()


def test_equivariant_gamma(hopf):
    alg, hd = hopf
    for M in (trivial_module(hd), regular_module(alg), simple_module(alg, alg.vertices[-1])):
        structure, rep = equivariant_gamma(hd, M)
        assert rep.ok, rep.messages()
        assert set(structure.maps) == set(range(hd.weights.group.order))

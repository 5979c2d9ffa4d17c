from __future__ import annotations

import pytest

from hcell.algebra import AlgebraAction, AlgebraPresentation, Arrow, Quiver, build_algebra, cyclic_group, nakayama_permutation
from hcell.cells import (
    BULLET,
    STAR,
    CellData,
    cell_structure,
    check_adjunctions,
    check_cell_module,
    check_cell_structure,
    check_h0_simplicity,
    check_symbolic_against_oracle,
    check_vec_g,
    classes,
    identity_class,
    oracle_product,
    proj,
    right_adjoint,
    tensor_symbolic,
)
from hcell.errors import HcellError, NotSelfInjective
from hcell.field import Field


def data_for(bundled, name, tilde=False):
    s = bundled(name)
    return CellData(s.algebra, s.action, tilde)


@pytest.mark.parametrize("name,order", [("trivial", 1), ("z2", 2), ("sweedler", 2), ("taft3", 3)])
def test_plain_cells(bundled, name, order):
    data = data_for(bundled, name)
    cs = cell_structure(data)
    rep = check_cell_structure(cs, data)
    assert rep.ok, rep.messages()
    assert len(cs.two_sided_cells) == 2
    assert sorted(len(h) for h in cs.h_cells) == [1, order]


@pytest.mark.parametrize("name,order", [("trivial", 1), ("z3", 3), ("sweedler", 2), ("taft3", 3)])
def test_tilde_cells(bundled, name, order):
    data = data_for(bundled, name, tilde=True)
    cs = cell_structure(data)
    rep = check_cell_structure(cs, data)
    assert rep.ok, rep.messages()
    assert sorted(len(h) for h in cs.h_cells) == [1] + [order] * 4


def test_trivial_group_has_singleton_h0(bundled):
    data = data_for(bundled, "trivial")
    cs = cell_structure(data)
    h0 = [h for h in cs.h_cells if identity_class() not in h]
    assert h0 == [[proj("1")]]


def test_sweedler_square_of_proj_one(bundled):
    # frozen from the bimodule oracle
    data = data_for(bundled, "sweedler")
    assert tensor_symbolic(proj("1"), proj("1"), data) == {proj("1"): 1, proj("w"): 1}
    assert oracle_product(proj("1"), proj("1"), data) == {proj("1"): 1, proj("w"): 1}


def test_identity_is_unit(bundled):
    data = data_for(bundled, "taft3", tilde=True)
    one = identity_class()
    for x in classes(data):
        if x.left == BULLET:
            assert tensor_symbolic(one, x, data) == {x: 1}
        if x.right == BULLET:
            assert tensor_symbolic(x, one, data) == {x: 1}


def test_not_composable(bundled):
    data = data_for(bundled, "z2", tilde=True)
    with pytest.raises(HcellError):
        tensor_symbolic(proj("0", BULLET, STAR), proj("0", BULLET, BULLET), data)


@pytest.mark.parametrize("name", ["sweedler", "taft3", "z2"])
@pytest.mark.parametrize("tilde", [False, True])
def test_symbolic_products_match_bimodules(bundled, name, tilde):
    rep = check_symbolic_against_oracle(data_for(bundled, name, tilde))
    assert rep.ok, rep.messages()


@pytest.mark.parametrize("name", ["sweedler", "taft3"])
def test_cell_modules(bundled, name):
    data = data_for(bundled, name, tilde=True)
    for cell in cell_structure(data).left_cells:
        rep = check_cell_module(cell, data)
        assert rep.ok, rep.messages()


def expected_adjoint(x, nu1, G):
    """Right adjoints written out on the group table."""
    gi = G.inv(G.index(x.g))
    shifted = G.label(G.mul(G.index(nu1), gi))
    plain = G.label(gi)
    table = {
        (BULLET, BULLET): proj(shifted, BULLET, BULLET),
        (STAR, BULLET): proj(shifted, BULLET, STAR),
        (BULLET, STAR): proj(plain, STAR, BULLET),
        (STAR, STAR): proj(plain, STAR, STAR),
    }
    return table[(x.left, x.right)]


def test_taft3_adjoint_table(bundled):
    data = data_for(bundled, "taft3", tilde=True)
    assert nakayama_permutation(data.alg)["0"] == "2"
    assert right_adjoint(proj("0"), data) == proj("2")
    assert right_adjoint(proj("1", STAR, BULLET), data) == proj("1", BULLET, STAR)
    assert right_adjoint(proj("1", BULLET, STAR), data) == proj("2", STAR, BULLET)
    assert right_adjoint(proj("1", STAR, STAR), data) == proj("2", STAR, STAR)
    for x in classes(data):
        if x.kind == "proj":
            assert right_adjoint(x, data) == expected_adjoint(x, "2", data.group)


@pytest.mark.parametrize("name", ["sweedler", "taft3"])
def test_adjunctions_on_modules(bundled, name):
    rep = check_adjunctions(data_for(bundled, name, tilde=True))
    assert rep.ok, rep.messages()


def test_sweedler_adjoints_swap(bundled):
    data = data_for(bundled, "sweedler")
    assert right_adjoint(proj("1"), data) == proj("w")
    assert right_adjoint(proj("w"), data) == proj("1")


def test_adjoints_need_self_injective():
    alg = build_algebra(AlgebraPresentation(Quiver(("1", "2"), (Arrow("b", "1", "2"),)), (), 2), Field(5))
    G = cyclic_group(1)
    data = CellData(alg, AlgebraAction(G, {0: alg.field.eye(alg.dim)}))
    with pytest.raises(NotSelfInjective):
        right_adjoint(proj("1"), data)


@pytest.mark.parametrize("name", ["z2", "z3", "sweedler"])
def test_vec_g(bundled, name):
    rep = check_vec_g(data_for(bundled, name, tilde=True))
    assert rep.ok, rep.messages()


@pytest.mark.parametrize("name", ["sweedler", "z2"])
def test_h0_simplicity(bundled, name):
    rep = check_h0_simplicity(data_for(bundled, name))
    assert rep.ok, rep.messages()
    assert rep.data["tested"] > 0


@pytest.mark.parametrize("name", ["sweedler", "taft3"])
def test_double_adjoint_shift(bundled, name):
    data = data_for(bundled, name, tilde=True)
    G = data.group
    n1 = G.index(nakayama_permutation(data.alg)[G.label(G.identity)])
    for x in classes(data):
        twice = right_adjoint(right_adjoint(x, data), data)
        if x.kind != "proj":
            assert twice == x
            continue
        g = G.index(x.g)
        shift = {
            (BULLET, BULLET): G.mul(n1, G.mul(g, G.inv(n1))),
            (STAR, BULLET): G.mul(g, G.inv(n1)),
            (BULLET, STAR): G.mul(n1, g),
            (STAR, STAR): g,
        }[(x.left, x.right)]
        assert twice == proj(G.label(shift), x.left, x.right)

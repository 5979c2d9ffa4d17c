from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hcell.algebra import (
    AlgebraAction,
    AlgebraPresentation,
    Arrow,
    GroupData,
    Quiver,
    build_algebra,
    check_action,
    cyclic_group,
    is_self_injective,
    nakayama_permutation,
    nakayama_shift_defect,
    product_group,
    subgroup_data,
    symmetric_group,
    word_vector,
)
from hcell.errors import InconsistentBound, NonAdmissibleIdeal, NotSelfInjective, SemanticError
from hcell.examples import function_algebra, taft
from hcell.field import Field


def linear_quiver(n: int) -> Quiver:
    vs = tuple(str(i) for i in range(1, n + 1))
    return Quiver(vs, tuple(Arrow(f"b{i}", vs[i - 1], vs[i]) for i in range(1, n)))


def test_sweedler_basis(sw):
    alg, _ = sw
    assert alg.dim == 4
    assert sorted(alg.vertices) == ["1", "w"]
    assert alg.check_associative() is None


@pytest.mark.parametrize("n,p", [(2, 17), (3, 7), (4, 13)])
def test_taft_dimension_is_n_squared(n, p):
    alg, _ = taft(n, Field(p))
    assert alg.dim == n * n
    assert alg.check_associative() is None


def test_radical_square_zero_linear_quiver():
    # A_3 with all paths of length 2 killed: 3 idempotents and 2 arrows
    Q = linear_quiver(3)
    alg = build_algebra(AlgebraPresentation(Q, ({("b2", "b1"): 1},), 2), Field(5))
    assert alg.dim == 5
    assert alg.corner_dim("2", "1") == 1  # the arrow b1 from 1 to 2


def test_product_order(sw):
    """A word lists arrows right to left: b*a means a first."""
    alg, _ = sw
    F = alg.field
    a = word_vector(alg, ["a1_1"])  # 1 -> w
    assert F.equal(alg.product(alg.e("w"), a), a)
    assert F.equal(alg.product(a, alg.e("1")), a)
    assert F.is_zero(alg.product(alg.e("1"), a))


@given(st.data())
def test_unit_and_associativity_on_random_elements(t3, data):
    alg, _ = t3
    F = alg.field
    vec = st.lists(st.integers(0, 6), min_size=alg.dim, max_size=alg.dim).map(F.array)
    x, y, z = data.draw(vec), data.draw(vec), data.draw(vec)
    one = alg.one()
    assert F.equal(alg.product(one, x), x) and F.equal(alg.product(x, one), x)
    assert F.equal(alg.product(alg.product(x, y), z), alg.product(x, alg.product(y, z)))


def test_non_admissible_relation():
    Q = linear_quiver(2)
    with pytest.raises(NonAdmissibleIdeal):
        build_algebra(AlgebraPresentation(Q, ({("b1",): 1},), 2), Field(5))


def test_bound_not_reached():
    # a loop with no relation never becomes nilpotent
    Q = Quiver(("1",), (Arrow("x", "1", "1"),))
    with pytest.raises(InconsistentBound):
        build_algebra(AlgebraPresentation(Q, (), 3), Field(5))


def longest_path_nakayama(alg):
    """Oracle for Nakayama algebras: the longest basis path out of u spans soc(A e_u)."""
    out = {}
    for u in alg.vertices:
        top = max((p for p in alg.paths if p.source == u), key=len)
        assert sum(1 for p in alg.paths if p.source == u and len(p) == len(top)) == 1
        out[top.target] = u
    return out


def test_nakayama_sweedler(sw):
    alg, _ = sw
    nu = nakayama_permutation(alg)
    assert nu == {"1": "w", "w": "1"}
    assert nu == longest_path_nakayama(alg)


def test_nakayama_taft3_is_not_an_involution(t3):
    alg, hd = t3
    nu = nakayama_permutation(alg)
    assert nu == longest_path_nakayama(alg)
    assert nu[nu["0"]] != "0"
    assert nakayama_shift_defect(nu, hd.weights.group) is None


def test_not_self_injective():
    alg = build_algebra(AlgebraPresentation(linear_quiver(2), (), 2), Field(5))
    ok, cert = is_self_injective(alg)
    assert not ok and cert["vertex"]
    with pytest.raises(NotSelfInjective):
        nakayama_permutation(alg)


def test_hit_action_is_a_regular_action(sw, t3):
    for alg, hd in (sw, t3):
        rep = check_action(alg, hd.weights.group, hd.hit, require_regular=True)
        assert rep.ok, rep.messages()


def test_check_action_reports_non_automorphism(sw):
    alg, hd = sw
    G = hd.weights.group
    F = alg.field
    bad = {g: hd.hit.matrix(g).copy() for g in range(G.order)}
    w = G.index("w")
    bad[w][:, alg.arrow_index["a1_1"]] = F.scale(2, bad[w][:, alg.arrow_index["a1_1"]])
    rep = check_action(alg, G, AlgebraAction(G, bad))
    assert not rep.ok
    assert {c.name for c in rep.failures} <= {"automorphism", "composition"}


def test_function_algebra_is_semisimple():
    alg, _ = function_algebra(product_group(2, 2), Field(17))
    assert alg.dim == 4 and not alg.arrow_index


# groups


def test_group_validation_names_the_triple():
    # a 3-element "table" with identity and inverses that is not associative
    table = ((0, 1, 2), (1, 0, 1), (2, 2, 0))
    with pytest.raises(SemanticError, match="not associative"):
        GroupData(("e", "a", "b"), table, 0)


def test_group_without_inverse():
    with pytest.raises(SemanticError, match="no inverse"):
        GroupData(("a", "b"), ((0, 1), (1, 1)), 0)


@pytest.mark.parametrize("G,order,abelian,exponent", [
    (cyclic_group(6), 6, True, 6),
    (product_group(2, 2), 4, True, 2),
    (product_group(2, 4), 8, True, 4),
    (symmetric_group(3), 6, False, 6),
])
def test_group_invariants(G, order, abelian, exponent):
    assert G.order == order
    assert G.is_abelian() == abelian
    assert G.exponent == exponent
    for a, b in itertools.product(range(order), repeat=2):
        assert G.mul(G.mul(a, b), G.inv(b)) == a


def test_subgroup_data_puts_identity_first():
    G = symmetric_group(3)
    rot = [g for g in range(6) if G.element_order(g) == 3]
    H = subgroup_data(G, rot + [G.identity])
    assert H.order == 3 and H.identity == 0 and H.elements[0] == G.label(G.identity)


def test_action_matrices_compose(t3):
    alg, hd = t3
    G = hd.weights.group
    F = alg.field
    for g, h in itertools.product(range(G.order), repeat=2):
        assert F.equal(F.matmul(hd.hit.matrix(g), hd.hit.matrix(h)), hd.hit.matrix(G.mul(g, h)))
    assert np.array_equal(hd.hit.matrix(G.identity), F.eye(alg.dim))

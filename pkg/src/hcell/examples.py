"""Built-in Hopf algebras on covering quivers of cyclic and arbitrary groups."""

from __future__ import annotations

from .algebra import Algebra, AlgebraPresentation, GroupData, build_algebra, cyclic_group, product_group, symmetric_group
from .field import Field, choose_prime
from .hopf import HopfData, WeightData, arrow_name, covering_quiver, hopf_structure


def all_paths_of_length(wd: WeightData, n: int) -> tuple[dict, ...]:
    """Monomial relations killing every path of length n in the covering quiver."""
    quiver = covering_quiver(wd.group, wd.weights)
    words = [(a.name,) for a in quiver.arrows]
    by_name = {a.name: a for a in quiver.arrows}
    for _ in range(n - 1):
        nxt = []
        for w in words:
            for a in quiver.arrows:
                # product order: a * w means w first
                if by_name[w[0]].target == a.source:
                    nxt.append((a.name,) + w)
        words = nxt
    return tuple({w: 1} for w in words)


def cyclic_weight_data(n: int, q, field: Field, labels=None, antipode_sign: int = -1) -> WeightData:
    """Z/n with the single weight -1; h.a_g = a_{g+h} and a_g.h = q^h a_{g+h}."""
    G = cyclic_group(n, labels)
    F = field
    q = F.scalar(q)
    left: dict = {}
    right: dict = {}
    for h in range(n):
        left[h] = {}
        right[h] = {}
        for g in range(n):
            name = arrow_name(1, G.label(g))
            tgt = arrow_name(1, G.label((g + h) % n))
            left[h][name] = {tgt: 1}
            right[h][name] = {tgt: pow(int(q), h, F.char) if F.char else q**h}
    return WeightData(G, (G.index(G.label(n - 1)),), left, right, antipode_sign)


def group_weight_data(G: GroupData) -> WeightData:
    """No arrows: the algebra of functions on G."""
    return WeightData(G, (), {}, {})


def taft(n: int, field: Field, q=None, labels=None, antipode_sign: int = -1) -> tuple[Algebra, HopfData]:
    """The Taft algebra of dimension n^2 (Sweedler's algebra for n = 2)."""
    if q is None:
        q = field.root_of_unity(n) if n > 2 else field.scalar(-1)
    wd = cyclic_weight_data(n, q, field, labels, antipode_sign)
    pres = AlgebraPresentation(covering_quiver(wd.group, wd.weights), all_paths_of_length(wd, n), n)
    name = "sweedler" if n == 2 else f"taft{n}"
    alg = build_algebra(pres, field, name)
    hd, _ = hopf_structure(alg, wd)
    return alg, hd


def sweedler(field: Field, antipode_sign: int = -1) -> tuple[Algebra, HopfData]:
    return taft(2, field, labels=["1", "w"], antipode_sign=antipode_sign)


def function_algebra(G: GroupData, field: Field) -> tuple[Algebra, HopfData]:
    wd = group_weight_data(G)
    pres = AlgebraPresentation(covering_quiver(G, ()), (), 2)
    alg = build_algebra(pres, field, "functions")
    hd, _ = hopf_structure(alg, wd)
    return alg, hd


def trivial_hopf(field: Field) -> tuple[Algebra, HopfData]:
    return function_algebra(cyclic_group(1, ["1"]), field)


def bundled_spec(name: str) -> dict:
    """The JSON document of a bundled fixture, rebuilt from the constructors above."""
    from .specfile import spec_dict

    if name == "s3":
        return spec_dict("s3", symmetric_group(3))
    if name == "taft3":
        alg, hd = taft(3, Field(7))
        return spec_dict(name, hd.weights.group, alg, hd=hd)
    if name in ("sweedler", "sweedler_bad_antipode"):
        alg, hd = sweedler(Field(choose_prime(2, 4)), -1 if name == "sweedler" else 1)
        return spec_dict(name, hd.weights.group, alg, hd=hd)
    groups = {"trivial": cyclic_group(1, ["1"]), "z2": cyclic_group(2), "z3": cyclic_group(3), "klein4": product_group(2, 2)}
    if name not in groups:
        raise KeyError(name)
    G = groups[name]
    alg, hd = function_algebra(G, Field(choose_prime(G.exponent, G.order)))
    return spec_dict(name, G, alg, hd=hd)


__all__ = [
    "bundled_spec",
    "all_paths_of_length",
    "cyclic_weight_data",
    "function_algebra",
    "group_weight_data",
    "sweedler",
    "taft",
    "trivial_hopf",
]

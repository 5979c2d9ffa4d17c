"""The skew category of bimodules over an algebra with a group action.

A morphism M -> N is a family of bimodule maps phi_g: M -> N^g.  Twisting
does not change a matrix, so composition is

    (psi o phi)_s = sum_g psi_{s g^-1} @ phi_g.

Twists follow (M^g)^h = M^{gh}.  Every realization M^g (x)_A N is a
quotient of M (x)_k N by the same relation space as (M (x)_A N^{g^-1})^g,
so canonical isomorphisms between such spaces are computed as
``target.project(source.lift)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraAction, GroupData, subgroup_data
from .bimodule import (
    Bimodule,
    EquivariantStructure,
    NotEquivariant,
    TensorProduct,
    _abelian_generators,
    _eval_poly,
    _min_poly_coeffs,
    _split_idempotent_poly,
    direct_sum,
    equivariant_structure,
    find_isomorphism,
    hom_space,
    intertwiner_defect,
    is_indecomposable,
    isomorphism_witness,
    left_inverse,
    presentation,
    projective_bimodule,
    regular_bimodule,
    regular_module,
    submodule,
    tensor_over_A,
    twist,
    zero_bimodule,
)
from .errors import CharTooSmall, HcellError, NonSplitField
from .field import Field, Quotient, column_basis, invertibility_witness, nullspace, rank, solve
from .hopf import gamma_functor, trivial_module
from .report import ValidationReport


@dataclass
class SkewHom:
    """Components g -> matrix of a bimodule map source -> target^g; absent means zero."""

    source: Bimodule
    target: Bimodule
    act: AlgebraAction
    components: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def field(self) -> Field:
        return self.source.field

    def component(self, g: int) -> np.ndarray:
        c = self.components.get(g)
        return c if c is not None else self.field.zeros((self.target.dim, self.source.dim))

    def equals(self, other: "SkewHom") -> bool:
        return self.difference(other) is None

    def difference(self, other: "SkewHom") -> list | None:
        """[g, row, col] of the first entry where the two maps differ, or None."""
        F = self.field
        G = self.act.group
        for g in range(G.order):
            w = F.mismatch(self.component(g), other.component(g))
            if w is not None:
                return [G.label(g), w]
        return None

    def defects(self) -> list[str]:
        G = self.act.group
        out = []
        for g, c in sorted(self.components.items()):
            w = intertwiner_defect(self.source, twist(self.target, self.act, g), c)
            if w is not None:
                out.append(f"component {G.label(g)} is not a bimodule map into the twist ({w})")
        return out


def _clean(F: Field, comps: dict[int, np.ndarray]) -> dict[int, np.ndarray]:
    return {g: c for g, c in comps.items() if not F.is_zero(c)}


def skew_identity(M: Bimodule, act: AlgebraAction) -> SkewHom:
    return SkewHom(M, M, act, {act.group.identity: M.field.eye(M.dim)})


def skew_zero(M: Bimodule, N: Bimodule, act: AlgebraAction) -> SkewHom:
    return SkewHom(M, N, act, {})


def skew_compose(psi: SkewHom, phi: SkewHom) -> SkewHom:
    """psi o phi with (psi o phi)_s = sum_g psi_{s g^-1} phi_g."""
    if phi.target.dim != psi.source.dim:
        raise HcellError("skew_compose: codomain of phi differs from the domain of psi")
    F = phi.field
    G = phi.act.group
    out: dict[int, np.ndarray] = {}
    for g, a in phi.components.items():
        for h, b in psi.components.items():
            s = G.mul(h, g)
            term = F.matmul(b, a)
            out[s] = F.reduce(out[s] + term) if s in out else term
    return SkewHom(phi.source, psi.target, phi.act, _clean(F, out))


def skew_add(a: SkewHom, b: SkewHom, c=1) -> SkewHom:
    """a + c b."""
    F = a.field
    out = {g: m.copy() for g, m in a.components.items()}
    for g, m in b.components.items():
        term = F.scale(c, m)
        out[g] = F.reduce(out[g] + term) if g in out else term
    return SkewHom(a.source, a.target, a.act, _clean(F, out))


def skew_scale(c, a: SkewHom) -> SkewHom:
    F = a.field
    return SkewHom(a.source, a.target, a.act, _clean(F, {g: F.scale(c, m) for g, m in a.components.items()}))


@dataclass
class SkewObject:
    carrier: Bimodule
    idem: SkewHom
    name: str = ""

    def is_idempotent(self) -> bool:
        return skew_compose(self.idem, self.idem).equals(self.idem)


def plain_object(M: Bimodule, act: AlgebraAction) -> SkewObject:
    return SkewObject(M, skew_identity(M, act), M.name)


def skew_hom_basis(M: Bimodule, N: Bimodule, act: AlgebraAction) -> list[SkewHom]:
    """Homogeneous basis of Hom(M, N) in the skew category."""
    out = []
    for g in range(act.group.order):
        for B in hom_space(M, twist(N, act, g)):
            out.append(SkewHom(M, N, act, {g: B}))
    return out


# subgroups and structure maps


def restrict_action(act: AlgebraAction, elems: list[int]) -> tuple[AlgebraAction, list[int]]:
    """The action of the subgroup on ``elems``; returns it with the index map to G."""
    G = act.group
    ordered = sorted(elems, key=lambda g: (g != G.identity, g))
    H = subgroup_data(G, ordered)
    return AlgebraAction(H, {i: act.matrix(g) for i, g in enumerate(ordered)}), ordered


def stabilizer(M: Bimodule, act: AlgebraAction, seed: int = 0) -> list[int]:
    """G_M = {g : M is isomorphic to M^g}, verified to be a subgroup."""
    G = act.group
    out = [g for g in range(G.order) if find_isomorphism(M, twist(M, act, g), seed=seed) is not None]
    sset = set(out)
    for a in out:
        for b in out:
            if G.mul(a, b) not in sset:
                raise HcellError("stabilizer is not closed under multiplication")
    return out


def stabilizer_structure(
    M: Bimodule, act: AlgebraAction, candidate: dict[int, np.ndarray] | None = None, seed: int = 0
) -> tuple[list[int], dict[int, np.ndarray]]:
    """G_M and coherent isomorphisms alpha_g: M -> M^g for g in G_M.

    ``candidate`` is indexed by elements of G; it is checked first and a
    search runs only when it fails.
    """
    GM = stabilizer(M, act, seed)
    sub, ordered = restrict_action(act, GM)
    cand = None
    if candidate is not None:
        cand = {i: candidate[g] for i, g in enumerate(ordered) if g in candidate}
    res = equivariant_structure(M, sub, cand, seed)
    if isinstance(res, NotEquivariant):
        raise HcellError(f"no coherent stabilizer structure: {res.reason}")
    return ordered, {g: res.maps[i] for i, g in enumerate(ordered)}


# group algebra idempotents


@dataclass
class GroupIdempotent:
    label: str
    scalars: dict[int, object]  # lambda_l(g) for g in G_M
    hom: SkewHom
    trivial: bool = False


def _cyclic_decomposition(G: GroupData, elems: list[int]) -> list[int] | None:
    sub = subgroup_data(G, elems)
    gens = _abelian_generators(sub)
    if gens is None:
        return None
    ordered = sorted(elems, key=lambda g: (g != G.identity, g))
    return [ordered[i] for i in gens]


def _character_scalars(F: Field, G: GroupData, elems: list[int]) -> list[tuple[str, dict[int, object]]]:
    """lambda(g) = chi(g^-1) for every character chi of the abelian group on ``elems``."""
    gens = _cyclic_decomposition(G, elems)
    assert gens is not None
    orders = [G.element_order(t) for t in gens]
    # every element as a word in the generators
    expo: dict[int, tuple[int, ...]] = {}
    for idx in np.ndindex(*orders) if orders else [()]:
        g = G.identity
        for t, k in zip(gens, idx):
            for _ in range(k):
                g = G.mul(g, t)
        expo[g] = tuple(idx)
    roots = [F.root_of_unity(n) for n in orders]
    out = []
    for chi in np.ndindex(*orders) if orders else [()]:
        lam = {}
        for g in elems:
            val = F.scalar(1)
            for r, n, c, e in zip(roots, orders, chi, expo[G.inv(g)]):
                val = F.scalar(val * (r ** (c * e % n) if F.char == 0 else pow(int(r), c * e % n, F.char)))
            lam[g] = val
        out.append(("chi" + "".join(str(c) for c in chi), lam))
    return out


def _group_algebra_idempotents(F: Field, G: GroupData, elems: list[int], seed: int = 0) -> list[tuple[str, dict[int, object]]]:
    """Primitive idempotents of k[H] through the regular representation (any H)."""
    n = len(elems)
    pos = {g: i for i, g in enumerate(elems)}
    if F.char and n % F.char == 0:
        raise CharTooSmall("characteristic divides the group order")

    def regular(vec):
        M = F.zeros((n, n))
        for a, c in enumerate(vec):
            if c == 0:
                continue
            for b in range(n):
                M[pos[G.mul(elems[a], elems[b])], b] = F.reduce(M[pos[G.mul(elems[a], elems[b])], b] + c)
        return M

    inv_n = F.inv(F.scalar(n))
    triv = np.array([F.scalar(inv_n)] * n, dtype=F.dtype)
    rng = np.random.default_rng(seed)
    todo = [F.reduce(F.eye(n)[:, pos[G.identity]] - triv)]
    done = [triv]
    while todo:
        e = todo.pop()
        Le = regular(e)
        if F.is_zero(Le):
            continue
        # corner e k[H] e as a space of vectors
        corner = column_basis(F, np.stack([F.matmul(Le, F.matmul(regular(F.eye(n)[:, b]), e)) for b in range(n)], axis=1))
        if corner.shape[1] == 1:
            done.append(e)
            continue
        for _ in range(60):
            coef = rng.integers(0, F.char if F.char else 7, size=corner.shape[1])
            x = F.reduce(corner @ np.array([F.scalar(int(c)) for c in coef], dtype=F.dtype))
            Lx = regular(x)
            coeffs = _min_poly_coeffs(F, Lx)
            epoly, _ = _split_idempotent_poly(F, coeffs)
            if epoly is None:
                continue
            # f(x) lies in the unital corner once the constant term uses e
            f = _eval_poly(F, epoly, Lx)
            part = F.matmul(F.matmul(Le, f), e)
            if F.is_zero(part) or F.equal(part, e):
                continue
            todo.extend([part, F.reduce(e - part)])
            break
        else:
            raise NonSplitField("group algebra does not split over the chosen field")
    out = []
    for k, e in enumerate(done):
        lam = {g: F.scalar(n * e[pos[g]]) for g in elems}
        out.append(("triv" if k == 0 else f"e{k}", lam))
    return out


def group_idempotents(
    M: Bimodule, act: AlgebraAction, GM: list[int], alpha: dict[int, np.ndarray], seed: int = 0
) -> list[GroupIdempotent]:
    """Primitive idempotents (1/|G_M|) sum lambda(g) alpha_g of End(M); the trivial one first."""
    F = M.field
    G = act.group
    n = len(GM)
    if F.char and n % F.char == 0:
        raise CharTooSmall(f"characteristic {F.char} divides |G_M| = {n}")
    if _cyclic_decomposition(G, GM) is not None:
        scal = _character_scalars(F, G, GM)
    else:
        scal = _group_algebra_idempotents(F, G, GM, seed)
    out = []
    inv_n = F.inv(F.scalar(n))
    for k, (label, lam) in enumerate(scal):
        comps = {g: F.scale(F.scalar(lam[g] * inv_n), alpha[g]) for g in GM}
        out.append(GroupIdempotent(label, lam, SkewHom(M, M, act, _clean(F, comps)), k == 0))
    return out


def check_idempotents(idems: list[GroupIdempotent]) -> ValidationReport:
    rep = ValidationReport("group idempotents")
    if not idems:
        rep.fail("nonempty family")
        return rep
    M = idems[0].hom.source
    act = idems[0].hom.act
    total = skew_zero(M, M, act)
    for i, a in enumerate(idems):
        total = skew_add(total, a.hom)
        for j, b in enumerate(idems):
            prod = skew_compose(a.hom, b.hom)
            want = a.hom if i == j else skew_zero(M, M, act)
            rep.require(f"e_{a.label} e_{b.label}", prod.difference(want))
    rep.require("idempotents sum to the identity", total.difference(skew_identity(M, act)))
    return rep


# tensor product of the skew category


@dataclass
class SkewTensor:
    """M (x)^G N = sum_g M^g (x)_A N with the realizations of each summand."""

    M: Bimodule
    N: Bimodule
    act: AlgebraAction
    parts: list[TensorProduct]
    module: Bimodule
    offsets: list[int]


def skew_tensor_carrier(M: Bimodule, N: Bimodule, act: AlgebraAction) -> SkewTensor:
    G = act.group
    parts = [tensor_over_A(twist(M, act, g), N) for g in range(G.order)]
    mods = [T.module for T in parts]
    if sum(m.dim for m in mods) == 0:
        module = zero_bimodule(M.alg)
    else:
        module = direct_sum(mods, f"{M.name}(x)G{N.name}").module
    offs = list(np.cumsum([0] + [m.dim for m in mods]))
    return SkewTensor(M, N, act, parts, module, offs)


def skew_tensor_maps(phi: SkewHom, psi: SkewHom, src: SkewTensor, tgt: SkewTensor) -> SkewHom:
    """phi (x)^G psi, with block k -> gh^-1 of degree h equal to (phi_{g k^-1})^k (x) psi_h."""
    F = phi.field
    G = phi.act.group
    comps: dict[int, np.ndarray] = {}
    for h, ph in psi.components.items():
        mat = F.zeros((tgt.module.dim, src.module.dim))
        for k in range(G.order):
            Tk = src.parts[k]
            if Tk.dim == 0:
                continue
            for g in range(G.order):
                a = phi.components.get(G.mul(g, G.inv(k)))
                if a is None:
                    continue
                gp = G.mul(g, G.inv(h))
                Tt = tgt.parts[gp]
                if Tt.dim == 0:
                    continue
                # lift, apply a (x) ph, project
                X = F.reduce(np.einsum("ma,qab->qmb", a, Tk.lift))
                X = F.reduce(np.einsum("qmb,nb->qmn", X, ph))
                block = Tt.project(X).T
                r0, c0 = tgt.offsets[gp], src.offsets[k]
                mat[r0 : r0 + Tt.dim, c0 : c0 + Tk.dim] = F.reduce(mat[r0 : r0 + Tt.dim, c0 : c0 + Tk.dim] + block)
        comps[h] = mat
    return SkewHom(src.module, tgt.module, phi.act, _clean(F, comps))


def tensor_G(X: SkewObject, Y: SkewObject, act: AlgebraAction) -> tuple[SkewObject, SkewTensor]:
    T = skew_tensor_carrier(X.carrier, Y.carrier, act)
    e = skew_tensor_maps(X.idem, Y.idem, T, T)
    return SkewObject(T.module, e, f"{X.name}(x)G{Y.name}"), T


# the functor Theta


def theta_module(M: Bimodule, act: AlgebraAction) -> Bimodule:
    G = act.group
    if M.dim == 0:
        return zero_bimodule(M.alg)
    return direct_sum([twist(M, act, g) for g in range(G.order)], f"Theta({M.name})").module


def theta_map(f: SkewHom) -> np.ndarray:
    """Block (h, g) equals f_{h g^-1}."""
    F = f.field
    G = f.act.group
    m, n = f.target.dim, f.source.dim
    out = F.zeros((G.order * m, G.order * n))
    for h in range(G.order):
        for g in range(G.order):
            c = f.components.get(G.mul(h, G.inv(g)))
            if c is not None:
                out[h * m : (h + 1) * m, g * n : (g + 1) * n] = c
    return out


def relabeling(M: Bimodule, act: AlgebraAction) -> dict[int, np.ndarray]:
    """Structure maps on Theta(M): alpha_k sends block g to block g k^-1."""
    F = M.field
    G = act.group
    n = M.dim
    out = {}
    for k in range(G.order):
        P = F.zeros((G.order * n, G.order * n))
        for g in range(G.order):
            t = G.mul(g, G.inv(k))
            P[t * n : (t + 1) * n, g * n : (g + 1) * n] = F.eye(n)
        out[k] = P
    return out


@dataclass
class ThetaImage:
    module: Bimodule
    basis: np.ndarray  # columns span the image of Theta(e) in Theta(M)
    structure: dict[int, np.ndarray]


def theta(X: SkewObject, act: AlgebraAction) -> ThetaImage:
    """Theta(e) Theta(M) with the relabeling structure restricted to it."""
    F = X.carrier.field
    TM = theta_module(X.carrier, act)
    E = theta_map(X.idem)
    U = column_basis(F, E) if E.size else F.zeros((TM.dim, 0))
    if U.shape[1] == 0:
        return ThetaImage(zero_bimodule(X.carrier.alg), U, {g: F.zeros((0, 0)) for g in range(act.group.order)})
    sub = submodule(TM, U, f"Theta({X.name})")
    L = left_inverse(F, U)
    rel = relabeling(X.carrier, act)
    maps = {k: F.matmul(L, F.matmul(P, U)) for k, P in rel.items()}
    return ThetaImage(sub, U, maps)


def theta_monoidal(M: Bimodule, N: Bimodule, act: AlgebraAction) -> tuple[np.ndarray, TensorProduct, Bimodule]:
    """J_{M,N}: Theta(M) (x)_A Theta(N) -> Theta(M (x)^G N).

    The summand M^k (x)_A N^h goes to the block (h, k h^-1) of the target.
    """
    F = M.field
    G = act.group
    TM, TN = theta_module(M, act), theta_module(N, act)
    src = tensor_over_A(TM, TN)
    ST = skew_tensor_carrier(M, N, act)
    tgt = theta_module(ST.module, act)
    J = F.zeros((tgt.dim, src.dim))
    m, n = M.dim, N.dim
    w = ST.module.dim
    for k in range(G.order):
        for h in range(G.order):
            g = G.mul(k, G.inv(h))
            Tg = ST.parts[g]
            if Tg.dim == 0:
                continue
            X = src.lift[:, k * m : (k + 1) * m, h * n : (h + 1) * n]
            block = Tg.project(X).T
            r0 = h * w + ST.offsets[g]
            J[r0 : r0 + Tg.dim, :] = F.reduce(J[r0 : r0 + Tg.dim, :] + block)
    return J, src, tgt


def alpha_bar(M: Bimodule, maps: dict[int, np.ndarray], G: GroupData) -> np.ndarray:
    """m -> (alpha_g(m))_g, the embedding of an equivariant M into Theta(M)."""
    return np.concatenate([maps[g] for g in range(G.order)], axis=0)


# checks


def check_composition(homs: list[tuple[SkewHom, SkewHom, SkewHom]]) -> ValidationReport:
    """Associativity of composition on the given composable triples, and unitality."""
    rep = ValidationReport("skew composition")
    for i, (a, b, c) in enumerate(homs):
        lhs = skew_compose(skew_compose(a, b), c)
        rhs = skew_compose(a, skew_compose(b, c))
        if not lhs.equals(rhs):
            rep.fail("associativity", i)
    for i, (a, _, _) in enumerate(homs):
        ida = skew_identity(a.source, a.act)
        idb = skew_identity(a.target, a.act)
        if not (skew_compose(a, ida).equals(a) and skew_compose(idb, a).equals(a)):
            rep.fail("unitality", i)
    rep.record("associativity and unitality", rep.ok, {"failed triples": len(rep.failures)})
    rep.data["triples"] = len(homs)
    return rep


def verify_unitors(
    M: Bimodule, act: AlgebraAction, GM: list[int], alpha: dict[int, np.ndarray], l: int = 0, seed: int = 0
) -> ValidationReport:
    """(M, eps_l) (x)^G (A, pi_1) is isomorphic to (M, eps_l) through the explicit maps phi and psi.

    phi: M -> sum_s M^s (x)_A A has degree-t component sending m to
    lambda(s)/(|G_M||G|) alpha_s(m) (x) 1 in the block s t^-1; psi has
    degree-h component on the block g equal to lambda(h g^-1)/|G_M|
    alpha_{h g^-1} after m (x) a -> m . g(a).
    """
    F = M.field
    G = act.group
    A = M.alg
    rep = ValidationReport(f"unitors for ({M.name}, eps_{l})")
    Areg = regular_bimodule(A)
    idems = group_idempotents(M, act, GM, alpha, seed)
    eps = idems[l]
    lam = eps.scalars
    Aalpha = {g: act.matrix(g) for g in range(G.order)}
    pi1 = group_idempotents(Areg, act, list(range(G.order)), Aalpha, seed)[0]
    T = skew_tensor_carrier(M, Areg, act)
    e_tensor = skew_tensor_maps(eps.hom, pi1.hom, T, T)
    rep.require("eps (x)G pi_1 idempotent", skew_compose(e_tensor, e_tensor).difference(e_tensor))
    nM, nG = len(GM), G.order
    c_phi = F.inv(F.scalar(nM * nG))
    c_psi = F.inv(F.scalar(nM))
    one = A.one()
    phi_c = {}
    for t in range(G.order):
        mat = F.zeros((T.module.dim, M.dim))
        for s in GM:
            blk = G.mul(s, G.inv(t))
            Tb = T.parts[blk]
            X = np.einsum("ij,k->jik", alpha[s], one)  # (m, dM, dA): alpha_s(e_m) (x) 1
            col = Tb.project(F.reduce(X)).T
            r0 = T.offsets[blk]
            mat[r0 : r0 + Tb.dim, :] = F.reduce(mat[r0 : r0 + Tb.dim, :] + F.scale(F.scalar(lam[s] * c_phi), col))
        phi_c[t] = mat
    phi = SkewHom(M, T.module, act, _clean(F, phi_c))
    psi_c = {}
    for h in range(G.order):
        mat = F.zeros((M.dim, T.module.dim))
        for g in range(G.order):
            x = G.mul(h, G.inv(g))
            if x not in alpha:
                continue
            Tg = T.parts[g]
            if Tg.dim == 0:
                continue
            # m (x) a -> m . g(a) on lifted tensors
            ga = act.matrix(g)
            RM = F.reduce(np.einsum("ta,tij->aij", ga, M.right))  # right action of g(b_a)
            rho = F.reduce(np.einsum("aij,qja->iq", RM, Tg.lift))
            blk = F.scale(F.scalar(lam[x] * c_psi), F.matmul(alpha[x], rho))
            mat[:, T.offsets[g] : T.offsets[g] + Tg.dim] = blk
        psi_c[h] = mat
    psi = SkewHom(T.module, M, act, _clean(F, psi_c))
    rep.record("phi components are bimodule maps", not phi.defects(), phi.defects()[:2] or None)
    rep.record("psi components are bimodule maps", not psi.defects(), psi.defects()[:2] or None)
    rep.require("psi o phi = eps_l", skew_compose(psi, phi).difference(eps.hom))
    rep.require("phi o psi = eps_l (x)G pi_1", skew_compose(phi, psi).difference(e_tensor))
    rep.require("phi o eps_l = (eps_l (x)G pi_1) o phi", skew_compose(phi, eps.hom).difference(skew_compose(e_tensor, phi)))
    # the left unitor through Theta
    left_T = skew_tensor_carrier(Areg, M, act)
    left_e = skew_tensor_maps(pi1.hom, eps.hom, left_T, left_T)
    lhs = theta(SkewObject(left_T.module, left_e), act).module
    rhs = theta(SkewObject(M, eps.hom), act).module
    rep.require("Theta((A,pi_1) (x)G (M,eps_l)) isomorphic to Theta(M,eps_l)", isomorphism_witness(lhs, rhs, seed))
    return rep


def asymmetry_iso(M: Bimodule, N: Bimodule, act: AlgebraAction) -> ValidationReport:
    """sum_g M (x)_A N^{g^-1} and sum_g M^g (x)_A N are isomorphic via one component per summand."""
    F = M.field
    G = act.group
    rep = ValidationReport("asymmetry isomorphism")
    left = [tensor_over_A(M, twist(N, act, G.inv(g))) for g in range(G.order)]
    right = skew_tensor_carrier(M, N, act)
    if sum(T.dim for T in left) == 0:
        rep.record("both sides zero", right.module.dim == 0, {"dim": right.module.dim})
        return rep
    Lmod = direct_sum([T.module for T in left]).module
    loffs = list(np.cumsum([0] + [T.dim for T in left]))
    fwd, back = {}, {}
    for g in range(G.order):
        d = G.inv(g)
        f = F.zeros((right.module.dim, Lmod.dim))
        b = F.zeros((Lmod.dim, right.module.dim))
        Tl, Tr = left[g], right.parts[g]
        f[right.offsets[g] : right.offsets[g] + Tr.dim, loffs[g] : loffs[g] + Tl.dim] = Tr.project(Tl.lift).T
        b[loffs[g] : loffs[g] + Tl.dim, right.offsets[g] : right.offsets[g] + Tr.dim] = Tl.project(Tr.lift).T
        fwd[d] = f
        back[g] = b
    phi = SkewHom(Lmod, right.module, act, _clean(F, fwd))
    psi = SkewHom(right.module, Lmod, act, _clean(F, back))
    rep.record("forward components are bimodule maps", not phi.defects(), phi.defects()[:2])
    rep.record("inverse components are bimodule maps", not psi.defects(), psi.defects()[:2])
    rep.require("inverse o forward = id", skew_compose(psi, phi).difference(skew_identity(Lmod, act)))
    rep.require("forward o inverse = id", skew_compose(phi, psi).difference(skew_identity(right.module, act)))
    return rep


def _end_basis(M: Bimodule, act: AlgebraAction) -> list[SkewHom]:
    return skew_hom_basis(M, M, act)


def check_end_mod_rad(
    M: Bimodule, act: AlgebraAction, GM: list[int], alpha: dict[int, np.ndarray]
) -> ValidationReport:
    """End(M)/Rad has dimension |G_M| and the classes of alpha_g multiply like G_M.

    Only meaningful for indecomposable M; otherwise the checks are skipped.
    """
    F = M.field
    G = act.group
    rep = ValidationReport(f"End/Rad of {M.name}")
    if not is_indecomposable(M):
        rep.skip("dim End/Rad = |G_M|", "M is decomposable")
        return rep
    basis = _end_basis(M, act)
    k = len(basis)
    n = G.order * M.dim
    if F.char and F.char <= n:
        raise CharTooSmall(f"trace radical needs p > {n}, but p = {F.char}")
    mats = np.stack([theta_map(b) for b in basis]) if k else F.zeros((0, n, n))
    flat = mats.reshape(k, n * n)
    flatT = np.transpose(mats, (0, 2, 1)).reshape(k, n * n)
    gram = F.matmul(flat, flatT.T)
    rad = nullspace(F, gram)  # coordinates of radical elements
    Q = Quotient(F, rad.T, k)
    rep.data["dim End"] = k
    rep.data["dim End/Rad"] = Q.dim
    rep.data["|G_M|"] = len(GM)
    rep.record("dim End/Rad = |G_M|", Q.dim == len(GM), {"dim End/Rad": Q.dim, "|G_M|": len(GM)})

    def coords(h: SkewHom) -> np.ndarray:
        return solve_coords(F, flat, theta_map(h).reshape(-1))

    gh = {g: SkewHom(M, M, act, {g: alpha[g]}) for g in GM}
    cls = {g: F.matmul(Q.proj, coords(h)) for g, h in gh.items()}
    span = np.stack([cls[g] for g in GM], axis=1)
    r = rank(F, span)
    rep.record("classes of alpha_g are a basis of End/Rad", r == len(GM) == Q.dim, {"rank": r, "|G_M|": len(GM)})
    bad = None
    for a in GM:
        for b in GM:
            prod = F.matmul(Q.proj, coords(skew_compose(gh[a], gh[b])))
            if bad is None and not F.equal(prod, cls[G.mul(a, b)]):
                bad = [G.label(a), G.label(b)]
    rep.require("multiplication of k[G_M]", bad)
    return rep


def solve_coords(F: Field, flat: np.ndarray, vec: np.ndarray) -> np.ndarray:
    sol = solve(F, flat.T, vec)
    if sol is None:
        raise HcellError("element is not in the span of the basis")
    return sol


def check_theta(X: SkewObject, act: AlgebraAction, seed: int = 0) -> tuple[ThetaImage, ValidationReport]:
    """Theta(X) with its relabeling structure, which must be equivariant."""
    rep = ValidationReport(f"Theta({X.name})")
    img = theta(X, act)
    res = equivariant_structure(img.module, act, img.structure, seed)
    rep.record("relabeling structure is equivariant", isinstance(res, EquivariantStructure), getattr(res, "reason", None))
    return img, rep


def check_theta_functorial(psi: SkewHom, phi: SkewHom) -> bool:
    F = phi.field
    return F.equal(theta_map(skew_compose(psi, phi)), F.matmul(theta_map(psi), theta_map(phi)))


def check_1_full_embedding(hd, seed: int = 0) -> ValidationReport:
    """Indecomposables in the images of Gamma and Theta agree up to isomorphism.

    Gamma(L1) and Theta(A, pi_1) must both be A.  The summands of Gamma(A)
    collected along G-orbits of their tops, sum_h A e_{gh} (x) e_h A, must be
    exactly the Theta-images of A e_g (x) e_1 A.
    """
    alg = hd.algebra
    act = hd.hit
    G = act.group
    rep = ValidationReport("1-full embedding")
    Areg = regular_bimodule(alg)
    GL1 = gamma_functor(hd, trivial_module(hd))
    rep.require("Gamma(L1) isomorphic to A", isomorphism_witness(GL1, Areg, seed))
    one = G.label(G.identity)
    pi1 = group_idempotents(Areg, act, list(range(G.order)), {g: act.matrix(g) for g in range(G.order)}, seed)[0]
    TA = theta(SkewObject(Areg, pi1.hom, "A"), act).module
    rep.require("Theta(A, pi_1) isomorphic to A", isomorphism_witness(TA, Areg, seed))
    GA = gamma_functor(hd, regular_module(alg))
    pres = presentation(GA)
    rep.record("Gamma(A) projective", pres.is_projective, {"dim kernel": pres.kernel.shape[1]})
    tops = pres.top_counts()
    # group the tops of Gamma(A) into orbits (g h, h)
    orbits: dict[str, dict] = {}
    for (v, w), c in tops.items():
        g = G.label(G.mul(G.index(v), G.inv(G.index(w))))
        orbits.setdefault(g, {})[(v, w)] = c
    theta_tops = {}
    for g in G.elements:
        P = projective_bimodule(alg, g, one)
        T = theta(plain_object(P, act), act).module
        theta_tops[g] = presentation(T).top_counts()
    gamma_sets = sorted(sorted(o.items()) for o in orbits.values())
    theta_sets = sorted(sorted(t.items()) for t in theta_tops.values())
    extra = [o for o in gamma_sets if o not in theta_sets] + [t for t in theta_sets if t not in gamma_sets]
    rep.record("Gamma(A) orbits match Theta(A e_g (x) e_1 A)", gamma_sets == theta_sets, extra[:2])
    rep.data["orbits"] = len(orbits)
    return rep



# the full suite on generator objects


def generator_bimodules(alg, act: AlgebraAction) -> list[Bimodule]:
    """A and the projective bimodules A e_g (x) e_1 A."""
    G = act.group
    one = G.label(G.identity)
    return [regular_bimodule(alg)] + [projective_bimodule(alg, g, one) for g in G.elements]


def skew_category_suite(hd, seed: int = 0) -> ValidationReport:
    """Composition, idempotents, unitors, Theta and J on the generator objects."""
    alg, act = hd.algebra, hd.hit
    F = alg.field
    G = act.group
    rep = ValidationReport("skew category")
    gens = generator_bimodules(alg, act)
    bases = {(i, j): skew_hom_basis(X, Y, act) for i, X in enumerate(gens) for j, Y in enumerate(gens)}
    triples = []
    n = len(gens)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        for c in bases[(i, j)]:
            for b in bases[(j, k)]:
                for a in bases[(k, l)]:
                    triples.append((a, b, c))
    rep.merge(check_composition(triples))
    Areg = gens[0]
    Q1 = direct_sum([projective_bimodule(alg, h, h) for h in alg.vertices], "Q1").module
    for M, cand in [(Areg, {g: act.matrix(g) for g in range(G.order)}), (Q1, None)]:
        GM, alpha = stabilizer_structure(M, act, cand, seed)
        idems = group_idempotents(M, act, GM, alpha, seed)
        rep.merge(check_idempotents(idems), f"idempotents of {M.name}")
        for l in range(len(idems)):
            rep.merge(verify_unitors(M, act, GM, alpha, l, seed))
    pi1 = group_idempotents(Areg, act, list(range(G.order)), {g: act.matrix(g) for g in range(G.order)}, seed)[0]
    objs = [SkewObject(Areg, pi1.hom, "(A, pi_1)")] + [plain_object(P, act) for P in gens[1:]]
    for X in objs:
        _, r = check_theta(X, act, seed)
        rep.merge(r)
    TA = theta(objs[0], act).module
    rep.require("Theta(A, pi_1) isomorphic to A", isomorphism_witness(TA, Areg, seed))
    for M in gens:
        for N in gens:
            J, src, tgt = theta_monoidal(M, N, act)
            w = invertibility_witness(F, J) or intertwiner_defect(src.module, tgt, J)
            rep.require(f"J_({M.name}, {N.name}) invertible bimodule map", w)
    rep.merge(check_1_full_embedding(hd, seed))
    rep.data["generator objects"] = [X.name for X in gens]
    rep.data["composable triples"] = len(triples)
    return rep

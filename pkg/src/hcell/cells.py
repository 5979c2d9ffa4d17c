"""Cells of the bicategory of projective bimodules over an algebra with a regular group action.

Indecomposable 1-morphisms are handled symbolically.  ``Proj(i, j, g)``
stands for A_i e_g (x) e_1 A_j with A_1 = A and A_0 the semisimple part
(the vertices of the quiver with no arrows); in the plain configuration
only i = j = 1 occurs.  Products come from

    Proj(i,j,a) (x)^G Proj(j,k,b) = sum_h dim(e_h A_j e_b) Proj(i,k,a h),

and every symbolic statement is cross-checked against explicit bimodules
through Theta.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Algebra, AlgebraAction, GroupData, Path, Quiver, is_self_injective, nakayama_permutation, nakayama_shift_defect
from .bimodule import (
    Bimodule,
    LeftModule,
    hom_space,
    _source_cols,
    _target_cols,
    intertwiner_defect,
    left_inverse,
    presentation,
    projective_bimodule,
    projective_module,
    regular_bimodule,
    regular_module,
    simple_module,
    tensor_over_A,
)
from .errors import HcellError, NotSelfInjective
from .field import row_basis
from .report import ValidationReport
from .skewcat import SkewObject, group_idempotents, plain_object, skew_compose, skew_hom_basis, theta, theta_map, theta_module

BULLET, STAR = "1", "0"


@dataclass(frozen=True, order=True)
class SymClass:
    """Identity of the object of A, or Proj(left, right, g)."""

    kind: str  # "id" or "proj"
    left: str = BULLET
    right: str = BULLET
    g: str = ""

    def __str__(self) -> str:
        if self.kind == "id":
            return "1"
        return f"S{self.left}{self.right}[{self.g}]"


def identity_class() -> SymClass:
    return SymClass("id")


def proj(g: str, left: str = BULLET, right: str = BULLET) -> SymClass:
    return SymClass("proj", left, right, g)


FormalMorph = dict  # SymClass -> multiplicity


@dataclass
class CellData:
    """The algebra, its action, and the hat algebra with its action when needed."""

    alg: Algebra
    act: AlgebraAction
    tilde: bool = False
    hat: Algebra | None = None
    hat_act: AlgebraAction | None = None

    @property
    def group(self) -> GroupData:
        return self.act.group


def classes(data: CellData) -> list[SymClass]:
    G = data.group
    out = [identity_class()]
    pairs = [(BULLET, BULLET)]
    if data.tilde:
        pairs += [(STAR, BULLET), (BULLET, STAR), (STAR, STAR)]
    for lft, rgt in pairs:
        out += [proj(g, lft, rgt) for g in G.elements]
    return out


def _corner(data: CellData, side: str, h: str, b: str) -> int:
    if side == STAR:
        return 1 if h == b else 0
    return data.alg.corner_dim(h, b)


def composable(a: SymClass, b: SymClass) -> bool:
    return a.right == b.left


def tensor_symbolic(a: SymClass, b: SymClass, data: CellData) -> FormalMorph:
    """a (x)^G b for composable classes (a applied first on the left factor)."""
    if not composable(a, b):
        raise HcellError(f"{a} and {b} are not composable")
    if a.kind == "id":
        return {b: 1}
    if b.kind == "id":
        return {a: 1}
    G = data.group
    out: FormalMorph = {}
    for h in range(G.order):
        m = _corner(data, a.right, G.label(h), b.g)
        if m:
            c = proj(G.label(G.mul(G.index(a.g), h)), a.left, b.right)
            out[c] = out.get(c, 0) + m
    return out


def _scc(nodes: list, edges: dict) -> list[list]:
    """Strongly connected components of a reflexive relation given as reachability."""
    reach = {n: set(edges.get(n, ())) | {n} for n in nodes}
    changed = True
    while changed:
        changed = False
        for n in nodes:
            new = set(reach[n])
            for m in list(reach[n]):
                new |= reach[m]
            if new != reach[n]:
                reach[n] = new
                changed = True
    comps, seen = [], set()
    for n in nodes:
        if n in seen:
            continue
        comp = [m for m in nodes if m in reach[n] and n in reach[m]]
        seen.update(comp)
        comps.append(comp)
    return comps, reach


@dataclass
class CellStructure:
    classes: list[SymClass]
    left_edges: dict
    right_edges: dict
    two_sided_edges: dict
    left_cells: list[list[SymClass]]
    right_cells: list[list[SymClass]]
    two_sided_cells: list[list[SymClass]]
    h_cells: list[list[SymClass]] = field(default_factory=list)
    reach_j: dict = field(default_factory=dict)

    def cell_of(self, cells: list[list[SymClass]], x: SymClass) -> int:
        for i, c in enumerate(cells):
            if x in c:
                return i
        raise KeyError(str(x))

    def to_dict(self) -> dict:
        def fmt(cells):
            return [[str(x) for x in c] for c in cells]

        return {
            "left_cells": fmt(self.left_cells),
            "right_cells": fmt(self.right_cells),
            "two_sided_cells": fmt(self.two_sided_cells),
            "h_cells": fmt(self.h_cells),
        }


def cell_structure(data: CellData) -> CellStructure:
    """Left, right and two-sided preorders from symbolic products and their cells.

    y is reachable from x in the left order when y is a summand of z (x)^G x
    for some class z; right and two-sided orders are analogous.
    """
    cls = classes(data)
    left: dict = {x: set() for x in cls}
    right: dict = {x: set() for x in cls}
    for x in cls:
        for z in cls:
            if composable(z, x):
                left[x] |= set(tensor_symbolic(z, x, data))
            if composable(x, z):
                right[x] |= set(tensor_symbolic(x, z, data))
    both = {x: left[x] | right[x] for x in cls}
    lc, _ = _scc(cls, left)
    rc, _ = _scc(cls, right)
    jc, reach = _scc(cls, both)
    hc = []
    for L in lc:
        for R in rc:
            inter = [x for x in cls if x in L and x in R]
            if inter:
                hc.append(inter)
    return CellStructure(cls, left, right, both, lc, rc, jc, hc, reach)


def check_cell_structure(cs: CellStructure, data: CellData) -> ValidationReport:
    rep = ValidationReport("cells (tilde)" if data.tilde else "cells")
    G = data.group
    one = identity_class()
    rep.record("two two-sided cells", len(cs.two_sided_cells) == 2, len(cs.two_sided_cells))
    j1 = cs.cell_of(cs.two_sided_cells, one)
    rep.record("J_1 = {1}", cs.two_sided_cells[j1] == [one], [str(x) for x in cs.two_sided_cells[j1]])
    j0 = [x for x in cs.classes if x != one]
    bad = [str(x) for x in j0 if not (x in cs.reach_j[one] and one not in cs.reach_j[x])]
    rep.require("J_1 strictly below J_0", bad[:3] or None)
    for kind, cells in (("left", cs.left_cells), ("right", cs.right_cells), ("two-sided", cs.two_sided_cells), ("H", cs.h_cells)):
        listed = sorted(x for c in cells for x in c)
        rep.record(f"{kind} cells partition the classes", listed == sorted(cs.classes), {"cells": kind, "listed": len(listed), "classes": len(cs.classes)})
    sizes = [len(c) for c in cs.h_cells]
    if not data.tilde:
        h0 = [c for c in cs.h_cells if one not in c]
        rep.record("two H-cells", len(cs.h_cells) == 2, sizes)
        rep.record("|H_0| = |G|", len(h0) == 1 and len(h0[0]) == G.order, sizes)
    else:
        rep.record("four H-cells in J_0", len([c for c in cs.h_cells if one not in c]) == 4, sizes)
        for c in cs.h_cells:
            if one in c:
                continue
            sides = {(x.left, x.right) for x in c}
            rep.record(f"H-cell {sorted(sides)} is one S_ij", len(sides) == 1 and len(c) == G.order, [str(x) for x in c])
        lefts = sorted(sorted({x.right for x in c}) for c in cs.left_cells if one not in c)
        rights = sorted(sorted({x.left for x in c}) for c in cs.right_cells if one not in c)
        rep.record("left cells split by the right factor", lefts == [[STAR], [BULLET]], lefts)
        rep.record("right cells split by the left factor", rights == [[STAR], [BULLET]], rights)
    rep.data.update(cs.to_dict())
    return rep


# explicit bimodules


def build_hat_algebra(alg: Algebra, act: AlgebraAction) -> tuple[Algebra, AlgebraAction]:
    """A x A_0 with A_0 the span of the vertex idempotents; bar vertices carry a prime."""
    F = alg.field
    d, n = alg.dim, len(alg.vertices)
    bars = [v + "'" for v in alg.vertices]
    quiver = Quiver(tuple(alg.vertices) + tuple(bars), alg.quiver.arrows)
    paths = list(alg.paths) + [Path(b, b, ()) for b in bars]
    D = d + n
    mult = F.zeros((D, D, D))
    mult[:d, :d, :d] = alg.mult
    for k in range(n):
        mult[d + k, d + k, d + k] = 1
    hat = Algebra(F, quiver, paths, mult, f"{alg.name}^")
    G = act.group
    mats = {}
    for g in range(G.order):
        M = F.zeros((D, D))
        M[:d, :d] = act.matrix(g)
        for k, v in enumerate(alg.vertices):
            img = act.vertex_image(alg, g, v)
            M[d + alg.vertices.index(img), d + k] = 1
        mats[g] = M
    return hat, AlgebraAction(G, mats)


def hat_vertex(v: str, side: str) -> str:
    return v if side == BULLET else v + "'"


def class_bimodule(x: SymClass, hat: Algebra, one: str) -> Bimodule:
    """The representative A_i e_g (x) e_1 A_j over the hat algebra."""
    return projective_bimodule(hat, hat_vertex(x.g, x.left), hat_vertex(one, x.right))


def theta_class(x: SymClass, data: CellData) -> Bimodule:
    """Theta of a Proj class: sum_h A_i e_{gh} (x) e_h A_j over the hat algebra."""
    hat, hact = _hat(data)
    one = data.group.label(data.group.identity)
    P = class_bimodule(x, hat, one)
    return theta_module(P, hact)


def _hat(data: CellData) -> tuple[Algebra, AlgebraAction]:
    if data.hat is None:
        data.hat, data.hat_act = build_hat_algebra(data.alg, data.act)
    return data.hat, data.hat_act  # type: ignore[return-value]


def oracle_product(a: SymClass, b: SymClass, data: CellData) -> FormalMorph:
    """Multiplicities of a (x)^G b read from Theta(a) (x) Theta(b).

    Theta of Proj(i, j, g) contains A_i e_g (x) e_1 A_j exactly once and no
    other Theta-image of a class contains it, so counting that summand in the
    projective bimodule Theta(a) (x) Theta(b) gives the multiplicity of g.
    """
    G = data.group
    one = G.label(G.identity)
    T = tensor_over_A(theta_class(a, data), theta_class(b, data))
    if T.dim == 0:
        return {}
    pres = presentation(T.module)
    if not pres.is_projective:
        raise HcellError("tensor of projective bimodules is not projective")
    counts = pres.top_counts()
    out: FormalMorph = {}
    for g in G.elements:
        m = counts.get((hat_vertex(g, a.left), hat_vertex(one, b.right)), 0)
        if m:
            out[proj(g, a.left, b.right)] = m
    # every summand must belong to one of these orbits with equal multiplicity
    total = sum(counts.values())
    if total != G.order * sum(out.values()):
        raise HcellError("Theta product is not a sum of Theta-images of classes")
    return out


def check_symbolic_against_oracle(data: CellData) -> ValidationReport:
    rep = ValidationReport("symbolic products vs bimodule oracle")
    cls = [x for x in classes(data) if x.kind == "proj"]
    n = 0
    for a in cls:
        for b in cls:
            if not composable(a, b):
                continue
            sym = tensor_symbolic(a, b, data)
            orc = oracle_product(a, b, data)
            n += 1
            rep.record(f"{a} * {b}", sym == orc, {str(k): v for k, v in sorted(orc.items())})
    rep.data["pairs"] = n
    return rep


def cell_module(cell: list[SymClass], data: CellData) -> dict[SymClass, np.ndarray]:
    """Integer matrices N_x[c', c] = multiplicity of c' in x (x)^G c on the classes of a left cell."""
    idx = {c: i for i, c in enumerate(cell)}
    out = {}
    for x in classes(data):
        if not all(composable(x, c) for c in cell):
            continue
        N = np.zeros((len(cell), len(cell)), dtype=np.int64)
        for c in cell:
            for cp, m in tensor_symbolic(x, c, data).items():
                if cp in idx:
                    N[idx[cp], idx[c]] += m
        out[x] = N
    return out


def check_cell_module(cell: list[SymClass], data: CellData) -> ValidationReport:
    rep = ValidationReport("cell module")
    mats = cell_module(cell, data)
    one = identity_class()
    if one in mats:
        rep.record("identity acts as the identity", np.array_equal(mats[one], np.eye(len(cell), dtype=np.int64)), mats[one].tolist())
    for x, Nx in mats.items():
        for y, Ny in mats.items():
            if not composable(x, y):
                continue
            prod = tensor_symbolic(x, y, data)
            want = sum((m * mats[z] for z, m in prod.items() if z in mats), np.zeros_like(Nx))
            rep.record(f"N({x}) N({y}) = N({x}*{y})", np.array_equal(Nx @ Ny, want), {"product": (Nx @ Ny).tolist(), "expected": want.tolist()})
    negative = [str(x) for x, N in mats.items() if (N < 0).any()]
    rep.require("entries are non-negative", negative or None)
    rep.data["matrices"] = {str(x): N.tolist() for x, N in mats.items()}
    return rep


# adjunctions


def nu_one(data: CellData) -> str:
    nu = nakayama_permutation(data.alg)
    return nu[data.group.label(data.group.identity)]


def right_adjoint(x: SymClass, data: CellData) -> SymClass:
    """Right adjoints of indecomposable 1-morphisms from the Nakayama permutation."""
    ok, _ = is_self_injective(data.alg)
    if not ok:
        raise NotSelfInjective("right adjoints need a self-injective algebra")
    if x.kind == "id":
        return x
    G = data.group
    n1 = G.index(nu_one(data))
    gi = G.inv(G.index(x.g))
    shifted = G.label(G.mul(n1, gi))
    plain = G.label(gi)
    if (x.left, x.right) == (BULLET, BULLET):
        return proj(shifted, BULLET, BULLET)
    if (x.left, x.right) == (STAR, BULLET):
        return proj(shifted, BULLET, STAR)
    if (x.left, x.right) == (BULLET, STAR):
        return proj(plain, STAR, BULLET)
    return proj(plain, STAR, STAR)


def sample_modules(data: CellData) -> list[LeftModule]:
    """Simples and indecomposable projectives of the hat algebra, and its regular module."""
    hat, _ = _hat(data)
    mods = [simple_module(hat, v) for v in hat.vertices]
    mods += [projective_module(hat, v) for v in hat.vertices]
    mods.append(regular_module(hat))
    return mods


def check_adjunctions(data: CellData, min_pairs: int = 20) -> ValidationReport:
    """Symbolic adjoints, nu(g) = nu(1) g, and dim Hom(X M, N) = dim Hom(M, X* N)."""
    rep = ValidationReport("adjunctions")
    G = data.group
    nu = nakayama_permutation(data.alg)
    defect = nakayama_shift_defect(nu, G)
    rep.record("nu(g) = nu(1) g", defect is None, defect)
    rep.data["nu"] = dict(sorted(nu.items()))
    mods = sample_modules(data)
    pairs = [(M, N) for M in mods for N in mods]
    rep.record("enough sampled pairs", len(pairs) >= min_pairs, len(pairs))
    cls = [x for x in classes(CellData(data.alg, data.act, True)) if x.kind == "proj"]
    for x in cls:
        y = right_adjoint(x, data)
        TX, TY = theta_class(x, data), theta_class(y, data)
        bad = None
        for M, N in pairs:
            XM = tensor_over_A(TX, M).module
            YN = tensor_over_A(TY, N).module
            a = hom_space(XM, N).shape[0] if XM.dim and N.dim else 0
            b = hom_space(M, YN).shape[0] if M.dim and YN.dim else 0
            if a != b:
                bad = [M.name, N.name, a, b]
                break
        rep.record(f"({x}, {y}) adjoint on sampled modules", bad is None, bad)
    for x in cls:
        yy = right_adjoint(right_adjoint(x, data), data)
        rep.data.setdefault("double adjoint", {})[str(x)] = str(yy)
    return rep


# H_0-simplicity


def _outer_bimodule(alg: Algebra, X: Bimodule) -> Bimodule:
    """A (x)_k X (x)_k A with the outer actions; this is (A (x) A) (x)_A X (x)_A (A (x) A)."""
    F = alg.field
    d, n = alg.dim, X.dim
    Id, In = F.eye(d), F.eye(n)
    left = np.stack([F.kron(F.kron(alg.left_matrix(i), In), Id) for i in range(d)])
    right = np.stack([F.kron(F.kron(Id, In), alg.right_matrix(i)) for i in range(d)])
    return Bimodule(alg, left, right, f"A(x){X.name}(x)A")


def _generator_objects(data: CellData) -> list[tuple[str, Bimodule, np.ndarray]]:
    """Theta-images of (A, pi_1) and of every Proj class with the inclusion into Theta(M)."""
    alg, act = data.alg, data.act
    G = act.group
    A = regular_bimodule(alg)
    pi1 = group_idempotents(A, act, list(range(G.order)), {g: act.matrix(g) for g in range(G.order)})[0]
    objs = [("1", SkewObject(A, pi1.hom, "A"))]
    one = G.label(G.identity)
    for g in G.elements:
        objs.append((str(proj(g)), plain_object(projective_bimodule(alg, g, one), act)))
    return objs


def check_h0_simplicity(data: CellData, limit: int | None = None) -> ValidationReport:
    """Sandwich every basis 2-morphism f by identities on A (x) A and split off an identity.

    For f: X -> Y with f(x) having coordinate c != 0 at y_i, the maps
    a e_v (x) e_w b -> a e_v (x) x (x) e_w b and a (x) y (x) b -> (y_i / c) a e_v (x) e_w b
    are bimodule maps whose composite with id (x) f (x) id is the identity of
    A e_v (x) e_w A.  The matrices are built and the composite is checked.
    """
    alg, act = data.alg, data.act
    F = alg.field
    rep = ValidationReport("H_0-simplicity")
    objs = _generator_objects(data)
    images = {}
    for name, X in objs:
        img = theta(X, act)
        images[name] = (X, img)
    tested = 0
    v = w = alg.vertices[0]
    Pvw = projective_bimodule(alg, v, w)
    rows = _source_cols(alg, v)  # basis of A e_v
    cols = _target_cols(alg, w)  # basis of e_w A
    d = alg.dim
    for sname, (X, ix) in images.items():
        for tname, (Y, iy) in images.items():
            basis = skew_hom_basis(X.carrier, Y.carrier, act)
            mats = []
            for f in basis:
                f2 = skew_compose(Y.idem, skew_compose(f, X.idem))
                T = F.matmul(left_inverse(F, iy.basis), F.matmul(theta_map(f2), ix.basis))
                if not F.is_zero(T):
                    mats.append(T.reshape(-1))
            if not mats:
                continue
            B = row_basis(F, np.stack(mats))
            for r in range(B.shape[0]):
                f = B[r].reshape(iy.module.dim, ix.module.dim)
                if limit is not None and tested >= limit:
                    break
                tested += 1
                Xo, Yo = _outer_bimodule(alg, ix.module), _outer_bimodule(alg, iy.module)
                sand = F.kron(F.kron(F.eye(d), f), F.eye(d))
                i, j = map(int, np.argwhere(f != 0)[0])
                c = F.inv(f[i, j])
                nX, nY = ix.module.dim, iy.module.dim
                inc = F.zeros((Xo.dim, Pvw.dim))
                pro = F.zeros((Pvw.dim, Yo.dim))
                for r_, a in enumerate(rows):
                    for s_, b in enumerate(cols):
                        inc[(a * nX + j) * d + b, r_ * len(cols) + s_] = 1
                        pro[r_ * len(cols) + s_, (a * nY + i) * d + b] = c
                comp = F.matmul(pro, F.matmul(sand, inc))
                w = (
                    intertwiner_defect(Pvw, Xo, inc)
                    or intertwiner_defect(Yo, Pvw, pro)
                    or F.mismatch(comp, F.eye(Pvw.dim))
                )
                rep.require(f"{sname} -> {tname} basis map {r}", w)
    rep.data["tested"] = tested
    rep.record("some 2-morphism tested", tested > 0, {"tested": tested})
    return rep


# Vec_G


def check_vec_g(data: CellData) -> ValidationReport:
    """Products of S00 classes follow the group table and their endomorphisms are scalars."""
    hat, hact = _hat(data)
    G = data.group
    rep = ValidationReport("Vec_G")
    table = []
    bad = None
    for a in G.elements:
        row = []
        for b in G.elements:
            prod = oracle_product(proj(a, STAR, STAR), proj(b, STAR, STAR), data)
            want = {proj(G.label(G.mul(G.index(a), G.index(b))), STAR, STAR): 1}
            row.append(",".join(f"{m}*{x.g}" if m != 1 else x.g for x, m in sorted(prod.items())))
            if bad is None and prod != want:
                bad = [a, b, row[-1]]
        table.append(row)
    rep.require("fusion table equals the group table", bad)
    one = G.label(G.identity)
    for g in G.elements:
        P = class_bimodule(proj(g, STAR, STAR), hat, one)
        dim = len(skew_hom_basis(P, P, hact))
        rep.record(f"End(S00[{g}]) one-dimensional", dim == 1, dim)
    rep.data["fusion"] = {"rows": list(G.elements), "table": table}
    return rep


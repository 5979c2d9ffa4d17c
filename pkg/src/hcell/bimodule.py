"""Left modules and bimodules over a basic algebra.

Actions are stored as stacks of matrices indexed by the algebra basis:
``left[x]`` is the matrix of m -> x*m and ``right[x]`` the matrix of
m -> m*x.  The right action is therefore anti-multiplicative,
right[x*y] = right[y] @ right[x]; equivalently it is a left action of the
opposite algebra.

Hom spaces, isomorphism tests and Krull-Schmidt decompositions work from a
projective presentation built on homogeneous top generators, so the size of
the linear systems is governed by the number of generators rather than by
dim M * dim N.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence, Union

import numpy as np

from .algebra import Algebra, AlgebraAction
from .errors import CharTooSmall, HcellError
from .field import Field, Quotient, column_basis, inverse, nullspace, rank, rref, solve


@dataclass(eq=False)
class LeftModule:
    alg: Algebra
    action: np.ndarray
    name: str = ""

    def __repr__(self) -> str:
        return f"LeftModule({self.name or '?'}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def field(self) -> Field:
        return self.alg.field

    def act(self, x: np.ndarray) -> np.ndarray:
        return self.field.reduce(np.tensordot(x, self.action, axes=(0, 0)))

    def problems(self) -> list[str]:
        F, A = self.field, self.alg
        out = []
        if not F.equal(self.act(A.one()), F.eye(self.dim)):
            out.append("1 does not act as the identity")
        for i in range(A.dim):
            for j in range(A.dim):
                prod = self.act(A.mult[i, j])
                if not F.equal(F.matmul(self.action[i], self.action[j]), prod):
                    out.append(f"action not multiplicative at ({A.label(i)},{A.label(j)})")
                    return out
        return out


@dataclass(eq=False)
class Bimodule:
    alg: Algebra
    left: np.ndarray
    right: np.ndarray
    name: str = ""

    def __repr__(self) -> str:
        return f"Bimodule({self.name or '?'}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.left.shape[1]

    @property
    def field(self) -> Field:
        return self.alg.field

    def left_of(self, x: np.ndarray) -> np.ndarray:
        return self.field.reduce(np.tensordot(x, self.left, axes=(0, 0)))

    def right_of(self, x: np.ndarray) -> np.ndarray:
        return self.field.reduce(np.tensordot(x, self.right, axes=(0, 0)))

    def problems(self) -> list[str]:
        F, A = self.field, self.alg
        n = self.dim
        out = []
        if not F.equal(self.left_of(A.one()), F.eye(n)):
            out.append("1 does not act as the identity on the left")
        if not F.equal(self.right_of(A.one()), F.eye(n)):
            out.append("1 does not act as the identity on the right")
        for i in range(A.dim):
            for j in range(A.dim):
                if not F.equal(F.matmul(self.left[i], self.left[j]), self.left_of(A.mult[i, j])):
                    out.append(f"left action not multiplicative at ({A.label(i)},{A.label(j)})")
                    return out
                if not F.equal(F.matmul(self.right[j], self.right[i]), self.right_of(A.mult[i, j])):
                    out.append(f"right action not multiplicative at ({A.label(i)},{A.label(j)})")
                    return out
        for i in A.generators:
            for j in A.generators:
                if not F.equal(F.matmul(self.left[i], self.right[j]), F.matmul(self.right[j], self.left[i])):
                    out.append(f"left and right actions do not commute at ({A.label(i)},{A.label(j)})")
                    return out
        return out


Module = Union[LeftModule, Bimodule]


def intertwiner_defect(M: Module, N: Module, T: np.ndarray) -> dict | None:
    """The first generator whose action T fails to commute with, or None for a module map."""
    F = M.field
    if T.shape != (N.dim, M.dim):
        return {"shape": list(T.shape), "expected": [N.dim, M.dim]}
    for x in M.alg.generators:
        if isinstance(M, Bimodule):
            pairs = [("left", M.left[x], N.left[x]), ("right", M.right[x], N.right[x])]
        else:
            pairs = [("left", M.action[x], N.action[x])]
        for side, a, b in pairs:
            if not F.equal(F.matmul(T, a), F.matmul(b, T)):
                return {"side": side, "generator": M.alg.label(x)}
    return None


def is_intertwiner(M: Module, N: Module, T: np.ndarray) -> bool:
    return intertwiner_defect(M, N, T) is None


# constructors


def regular_bimodule(alg: Algebra) -> Bimodule:
    left = np.stack([alg.left_matrix(i) for i in range(alg.dim)])
    right = np.stack([alg.right_matrix(i) for i in range(alg.dim)])
    return Bimodule(alg, left, right, "A")


def regular_module(alg: Algebra) -> LeftModule:
    return LeftModule(alg, np.stack([alg.left_matrix(i) for i in range(alg.dim)]), "A")


def zero_bimodule(alg: Algebra) -> Bimodule:
    F = alg.field
    return Bimodule(alg, F.zeros((alg.dim, 0, 0)), F.zeros((alg.dim, 0, 0)), "0")


def zero_module(alg: Algebra) -> LeftModule:
    return LeftModule(alg, alg.field.zeros((alg.dim, 0, 0)), "0")


def _source_cols(alg: Algebra, v: str) -> list[int]:
    return [i for i, p in enumerate(alg.paths) if p.source == v]


def _target_cols(alg: Algebra, v: str) -> list[int]:
    return [i for i, p in enumerate(alg.paths) if p.target == v]


def projective_module(alg: Algebra, v: str) -> LeftModule:
    """The left ideal A e_v, spanned by the basis paths starting at v."""
    cols = _source_cols(alg, v)
    act = np.stack([alg.left_matrix(i)[np.ix_(cols, cols)] for i in range(alg.dim)])
    return LeftModule(alg, act, f"Ae_{v}")


def simple_module(alg: Algebra, v: str) -> LeftModule:
    F = alg.field
    act = F.zeros((alg.dim, 1, 1))
    act[alg.idempotent_index[v], 0, 0] = 1
    return LeftModule(alg, act, f"S_{v}")


def projective_bimodule(alg: Algebra, v: str, w: str) -> Bimodule:
    """A e_v (x)_k e_w A with basis pairs (path from v, path to w)."""
    F = alg.field
    lc, rc = _source_cols(alg, v), _target_cols(alg, w)
    left = np.stack([F.kron(alg.left_matrix(i)[np.ix_(lc, lc)], F.eye(len(rc))) for i in range(alg.dim)])
    right = np.stack([F.kron(F.eye(len(lc)), alg.right_matrix(i)[np.ix_(rc, rc)]) for i in range(alg.dim)])
    return Bimodule(alg, left, right, f"Ae_{v}(x)e_{w}A")


def tensor_over_k(M: Bimodule, N: Bimodule) -> Bimodule:
    """M (x)_k N with the outer actions: left on M, right on N."""
    F = M.field
    left = np.stack([F.kron(M.left[i], F.eye(N.dim)) for i in range(M.alg.dim)])
    right = np.stack([F.kron(F.eye(M.dim), N.right[i]) for i in range(M.alg.dim)])
    return Bimodule(M.alg, left, right, f"{M.name}(x)k{N.name}")


@dataclass
class DirectSum:
    module: Module
    inclusions: list[np.ndarray]
    projections: list[np.ndarray]


def direct_sum(mods: Sequence[Module], name: str = "") -> DirectSum:
    if not mods:
        raise ValueError("direct_sum of an empty family; use zero_bimodule")
    F = mods[0].field
    alg = mods[0].alg
    n = sum(M.dim for M in mods)
    offs = np.cumsum([0] + [M.dim for M in mods])
    inc, pro = [], []
    for k, M in enumerate(mods):
        i = F.zeros((n, M.dim))
        i[offs[k] : offs[k + 1], :] = F.eye(M.dim)
        inc.append(i)
        pro.append(i.T.copy())

    def stack(attr):
        out = F.zeros((alg.dim, n, n))
        for k, M in enumerate(mods):
            out[:, offs[k] : offs[k + 1], offs[k] : offs[k + 1]] = getattr(M, attr)
        return out

    if isinstance(mods[0], Bimodule):
        mod = Bimodule(alg, stack("left"), stack("right"), name or "+".join(M.name for M in mods))
    else:
        mod = LeftModule(alg, stack("action"), name or "+".join(M.name for M in mods))
    return DirectSum(mod, inc, pro)


def twist(M: Bimodule, act: AlgebraAction, g: int) -> Bimodule:
    """M^g: both actions precomposed with the automorphism g."""
    F = M.field
    A = act.matrix(g)
    left = F.reduce(np.tensordot(A, M.left, axes=(0, 0)))
    right = F.reduce(np.tensordot(A, M.right, axes=(0, 0)))
    return Bimodule(M.alg, left, right, f"{M.name}^{act.group.label(g)}")


def left_inverse(F: Field, B: np.ndarray) -> np.ndarray:
    """Some L with L @ B = I, for B with independent columns."""
    if B.shape[1] == 0:
        return F.zeros((0, B.shape[0]))
    _, piv = rref(F, B.T)
    L = F.zeros((B.shape[1], B.shape[0]))
    L[:, piv] = inverse(F, B[piv, :])
    return L


def submodule(M: Module, U: np.ndarray, name: str = "") -> Module:
    """The action restricted to the invariant subspace spanned by the columns of U."""
    F = M.field
    L = left_inverse(F, U)

    def restrict(stack):
        t = F.reduce(np.einsum("ij,xjk->xik", L, stack))
        return F.reduce(np.einsum("xik,kl->xil", t, U))

    if isinstance(M, Bimodule):
        return Bimodule(M.alg, restrict(M.left), restrict(M.right), name or M.name)
    return LeftModule(M.alg, restrict(M.action), name or M.name)


# presentations


class _Ops:
    """Uniform access to a module over A (left module) or A (x) A^op (bimodule)."""

    def __init__(self, M: Module):
        self.M = M
        A = M.alg
        self.alg = A
        F = M.field
        if isinstance(M, Bimodule):
            self.labels = [(v, w) for v in A.vertices for w in A.vertices]
            self.rad_gens = [M.left[a] for a in A.arrow_indices] + [M.right[a] for a in A.arrow_indices]
        else:
            self.labels = list(A.vertices)
            self.rad_gens = [M.action[a] for a in A.arrow_indices]
        self.field = F

    def idem(self, u) -> np.ndarray:
        M, A, F = self.M, self.alg, self.field
        if isinstance(M, Bimodule):
            v, w = u
            return F.matmul(M.left[A.idempotent_index[v]], M.right[A.idempotent_index[w]])
        return M.action[A.idempotent_index[u]]

    def proj_dim(self, u) -> int:
        A = self.alg
        if isinstance(self.M, Bimodule):
            return len(_source_cols(A, u[0])) * len(_target_cols(A, u[1]))
        return len(_source_cols(A, u))

    def spread(self, u, vecs: np.ndarray) -> np.ndarray:
        """Images of the standard basis of the projective at u applied to ``vecs``.

        Returns shape (dim P_u, dim M, k) for a (dim M, k) matrix of vectors.
        """
        M, A, F = self.M, self.alg, self.field
        if isinstance(M, Bimodule):
            v, w = u
            lc, rc = _source_cols(A, v), _target_cols(A, w)
            Lm = F.reduce(np.einsum("aij,jk->aik", M.left[lc], vecs))
            out = F.reduce(np.einsum("bij,ajk->abik", M.right[rc], Lm))
            return out.reshape(len(lc) * len(rc), M.dim, vecs.shape[1])
        lc = _source_cols(A, u)
        return F.reduce(np.einsum("aij,jk->aik", M.action[lc], vecs))


@dataclass
class Presentation:
    """P0 -> M -> 0 with P0 a sum of indecomposable projectives at ``labels``."""

    labels: list
    generators: np.ndarray  # dim M x r, column i generates the summand at labels[i]
    offsets: list[int]
    pi: np.ndarray  # dim M x dim P0
    kernel: np.ndarray  # dim P0 x dim ker

    @property
    def is_projective(self) -> bool:
        return self.kernel.shape[1] == 0

    def top_counts(self) -> dict:
        out: dict = {}
        for u in self.labels:
            out[u] = out.get(u, 0) + 1
        return out


def top_generators(M: Module) -> list[tuple[object, np.ndarray]]:
    """Homogeneous vectors whose classes form a basis of M / rad M."""
    ops = _Ops(M)
    F = M.field
    n = M.dim
    if n == 0:
        return []
    rad = column_basis(F, np.concatenate(ops.rad_gens, axis=1)) if ops.rad_gens else F.zeros((n, 0))
    out = []
    for u in ops.labels:
        P = ops.idem(u)
        if F.is_zero(P):
            continue
        sub = F.matmul(P, rad)
        Q = Quotient(F, sub.T, n)
        img = F.matmul(Q.proj, P)
        if img.shape[0] == 0:
            continue
        _, piv = rref(F, img)
        for j in piv:
            out.append((u, P[:, j].copy()))
    return out


def presentation(M: Module) -> Presentation:
    ops = _Ops(M)
    F = M.field
    tops = top_generators(M)
    labels = [u for u, _ in tops]
    gens = np.stack([v for _, v in tops], axis=1) if tops else F.zeros((M.dim, 0))
    blocks, offsets = [], [0]
    for u, v in tops:
        sp = ops.spread(u, v.reshape(-1, 1))[:, :, 0]  # (dim P_u, dim M)
        blocks.append(sp.T)
        offsets.append(offsets[-1] + sp.shape[0])
    pi = np.concatenate(blocks, axis=1) if blocks else F.zeros((M.dim, 0))
    if rank(F, pi) != M.dim:
        raise HcellError("top generators do not generate the module")
    kernel = nullspace(F, pi) if pi.shape[1] else F.zeros((0, 0))
    return Presentation(labels, gens, offsets, pi, kernel)


def hom_space(M: Module, N: Module, pres: Presentation | None = None) -> np.ndarray:
    """Basis of Hom(M, N) as an array of shape (k, dim N, dim M)."""
    F = M.field
    if M.dim == 0 or N.dim == 0:
        return F.zeros((0, N.dim, M.dim))
    pres = pres or presentation(M)
    opsN = _Ops(N)
    Zs, widths = [], []
    for u in pres.labels:
        basis = column_basis(F, opsN.idem(u))
        Zs.append(opsN.spread(u, basis))  # (dim P_u, dim N, t)
        widths.append(basis.shape[1])
    if sum(widths) == 0:
        return F.zeros((0, N.dim, M.dim))
    K = pres.kernel
    if K.shape[1]:
        cols = []
        for i, Z in enumerate(Zs):
            Ki = K[pres.offsets[i] : pres.offsets[i + 1], :]
            c = F.reduce(np.tensordot(Ki.T, Z, axes=(1, 0)))  # (nk, dim N, t)
            cols.append(c.reshape(-1, Z.shape[2]))
        sols = nullspace(F, np.concatenate(cols, axis=1))
    else:
        sols = F.eye(sum(widths))
    _, piv = rref(F, pres.pi)
    inv_sec = inverse(F, pres.pi[:, piv])
    out = []
    for s in range(sols.shape[1]):
        blocks, off = [], 0
        for Z, t in zip(Zs, widths):
            coef = sols[off : off + t, s]
            off += t
            blocks.append(F.reduce(np.tensordot(Z, coef, axes=(2, 0))).T)
        psi = np.concatenate(blocks, axis=1)
        out.append(F.matmul(psi[:, piv], inv_sec))
    return np.stack(out) if out else F.zeros((0, N.dim, M.dim))


def is_projective(M: Module) -> bool:
    return presentation(M).is_projective


# isomorphism


def _random_combination(F: Field, basis: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    hi = F.char if F.char else 7
    coef = rng.integers(0 if F.char else -hi, hi, size=basis.shape[0])
    coef = [F.scalar(int(c)) for c in coef]
    out = F.zeros(basis.shape[1:])
    for c, B in zip(coef, basis):
        out = F.reduce(out + c * B)
    return out


def find_isomorphism(M: Module, N: Module, seed: int = 0, trials: int = 24) -> np.ndarray | None:
    """An invertible module map M -> N, or None when M and N are not isomorphic."""
    F = M.field
    if M.dim != N.dim:
        return None
    if M.dim == 0:
        return F.zeros((0, 0))
    pm, pn = presentation(M), presentation(N)
    if pm.top_counts() != pn.top_counts():
        return None
    H = hom_space(M, N, pm)
    n = M.dim
    for B in H:
        if rank(F, B) == n:
            return B
    if H.shape[0] > 1:
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            B = _random_combination(F, H, rng)
            if rank(F, B) == n:
                return B
    if H.shape[0] == 0:
        return None
    # definitive answer from the Krull-Schmidt decompositions
    dm, dn = decompose(M, seed=seed), decompose(N, seed=seed)
    if not _same_multiset(dm, dn, seed):
        return None
    raise HcellError("modules are isomorphic but no isomorphism was found by sampling")


def are_isomorphic(M: Module, N: Module, seed: int = 0) -> bool:
    return find_isomorphism(M, N, seed=seed) is not None


def isomorphism_witness(M: Module, N: Module, seed: int = 0) -> dict | None:
    """None when M and N are isomorphic, otherwise their dimensions and tops."""
    if find_isomorphism(M, N, seed=seed) is not None:
        return None
    tops = [sorted(presentation(X).top_counts().items()) if X.dim else [] for X in (M, N)]
    return {"dims": [M.dim, N.dim], "tops": tops}


def _indecomposables_isomorphic(M: Module, N: Module) -> bool:
    """Exact test for indecomposables: some g f with f: M->N, g: N->M is invertible."""
    F = M.field
    if M.dim != N.dim:
        return False
    H1 = hom_space(M, N)
    H2 = hom_space(N, M)
    for f in H1:
        for g in H2:
            if rank(F, F.matmul(g, f)) == M.dim:
                return True
    return False


def _same_multiset(a: list, b: list, seed: int) -> bool:
    if sum(m for _, m in a) != sum(m for _, m in b):
        return False
    used = [False] * len(b)
    for S, m in a:
        hit = False
        for j, (T, k) in enumerate(b):
            if not used[j] and k == m and _indecomposables_isomorphic(S, T):
                used[j] = hit = True
                break
        if not hit:
            return False
    return True


# tensor products over A


class TensorProduct:
    """A realization of M (x)_A N by a projection from M (x)_k N.

    ``project`` takes tensors given as arrays (..., dim M, dim N) and returns
    coordinates in the realization; ``lift`` holds one representative tensor
    per basis vector of the realization.
    """

    def __init__(self, M: Bimodule, N: Module, project: Callable[[np.ndarray], np.ndarray], lift: np.ndarray, name: str = ""):
        self.M, self.N = M, N
        self._project = project
        self.lift = lift
        self.name = name or f"{M.name}(x){N.name}"

    @property
    def dim(self) -> int:
        return self.lift.shape[0]

    @property
    def field(self) -> Field:
        return self.M.field

    def project(self, X: np.ndarray) -> np.ndarray:
        return self._project(X)

    def project_pair(self, m: np.ndarray, n: np.ndarray) -> np.ndarray:
        return self.project(np.outer(m, n))

    def _transport(self, left_mats: np.ndarray | None, right_mats: np.ndarray | None) -> np.ndarray:
        F = self.field
        S = self.lift
        if left_mats is not None:
            X = F.reduce(np.einsum("ij,qjk->qik", left_mats, S))
        else:
            X = F.reduce(np.einsum("qij,kj->qik", S, right_mats))
        return self.project(X).T

    @cached_property
    def module(self) -> Module:
        F, A = self.field, self.M.alg
        lefts = np.stack([self._transport(self.M.left[i], None) for i in range(A.dim)]) if self.dim else F.zeros((A.dim, 0, 0))
        if isinstance(self.N, Bimodule):
            rights = (
                np.stack([self._transport(None, self.N.right[i]) for i in range(A.dim)])
                if self.dim
                else F.zeros((A.dim, 0, 0))
            )
            return Bimodule(A, lefts, rights, self.name)
        return LeftModule(A, lefts, self.name)

    def matrix_of(self, f: np.ndarray, g: np.ndarray, target: "TensorProduct") -> np.ndarray:
        """Matrix of f (x)_A g from this tensor product to ``target``."""
        F = self.field
        X = F.reduce(np.einsum("ij,qjk->qik", f, self.lift))
        X = F.reduce(np.einsum("qik,lk->qil", X, g))
        return target.project(X).T

    def identity_matrix_check(self) -> bool:
        F = self.field
        return F.equal(self.project(self.lift), F.eye(self.dim))


def tensor_over_A(M: Bimodule, N: Module, name: str = "") -> TensorProduct:
    """The coequalizer of m*a (x) n and m (x) a*n.

    The relations are imposed vertex by vertex: M (x)_A N is a quotient of
    the direct sum over vertices v of M e_v (x)_k e_v N by the arrow
    relations, which is the same coequalizer computed on a smaller space.
    """
    F = M.field
    A = M.alg
    NL = N.left if isinstance(N, Bimodule) else N.action
    blocks = []
    for v in A.vertices:
        Pm = M.right[A.idempotent_index[v]]
        Pn = NL[A.idempotent_index[v]]
        B = column_basis(F, Pm)
        C = column_basis(F, Pn)
        Bl = F.matmul(left_inverse(F, B), Pm)
        Cl = F.matmul(left_inverse(F, C), Pn)
        blocks.append((v, B, C, Bl, Cl))
    offs = [0]
    for _, B, C, _, _ in blocks:
        offs.append(offs[-1] + B.shape[1] * C.shape[1])
    vdim = offs[-1]
    index = {v: k for k, (v, *_rest) in enumerate(blocks)}
    rels = []
    for a in A.quiver.arrows:
        ai = A.arrow_index[a.name]
        s, t = index[a.source], index[a.target]
        _, Bs, Cs, Bls, Cls = blocks[s]
        _, Bt, Ct, Blt, Clt = blocks[t]
        kt, ls = Bt.shape[1], Cs.shape[1]
        if kt == 0 or ls == 0:
            continue
        X = F.matmul(Bls, F.matmul(M.right[ai], Bt))  # k_s x k_t
        Y = F.matmul(Clt, F.matmul(NL[ai], Cs))  # l_t x l_s
        R = F.zeros((vdim, kt * ls))
        R[offs[s] : offs[s + 1], :] = F.kron(X, F.eye(ls))
        R[offs[t] : offs[t + 1], :] = F.reduce(R[offs[t] : offs[t + 1], :] - F.kron(F.eye(kt), Y))
        rels.append(R)
    relmat = np.concatenate(rels, axis=1).T if rels else F.zeros((0, vdim))
    Q = Quotient(F, relmat, vdim)

    def project(X: np.ndarray) -> np.ndarray:
        lead = X.shape[:-2]
        parts = []
        for _, B, C, Bl, Cl in blocks:
            Y = F.reduce(np.einsum("ij,...jk->...ik", Bl, X))
            Y = F.reduce(np.einsum("...ik,lk->...il", Y, Cl))
            parts.append(Y.reshape(lead + (-1,)))
        V = np.concatenate(parts, axis=-1) if parts else F.zeros(lead + (0,))
        return F.reduce(np.einsum("qv,...v->...q", Q.proj, V))

    lifts = []
    for k in range(Q.dim):
        vec = Q.lift[:, k]
        T = F.zeros((M.dim, N.dim))
        for b, (_, B, C, _, _) in enumerate(blocks):
            part = vec[offs[b] : offs[b + 1]].reshape(B.shape[1], C.shape[1])
            if part.size and np.any(part != 0):
                T = F.reduce(T + F.matmul(F.matmul(B, part), C.T))
        lifts.append(T)
    lift = np.stack(lifts) if lifts else F.zeros((0, M.dim, N.dim))
    return TensorProduct(M, N, project, lift, name)


def left_unitor(T: TensorProduct) -> np.ndarray:
    """A (x)_A M -> M, a (x) m -> a m, for T realizing A (x)_A M."""
    F = T.field
    NL = T.N.left if isinstance(T.N, Bimodule) else T.N.action
    return F.reduce(np.einsum("aij,qaj->iq", NL, T.lift))


def right_unitor(T: TensorProduct) -> np.ndarray:
    """M (x)_A A -> M, m (x) a -> m a, for T realizing M (x)_A A."""
    F = T.field
    return F.reduce(np.einsum("aij,qja->iq", T.M.right, T.lift))


def associator(KM: TensorProduct, KM_N: TensorProduct, MN: TensorProduct, K_MN: TensorProduct) -> np.ndarray:
    """(K (x) M) (x) N -> K (x) (M (x) N), (k (x) m) (x) n -> k (x) (m (x) n)."""
    F = KM.field
    # KM_N.lift: (q, dim KM, dim N); KM.lift: (r, dim K, dim M)
    full = F.reduce(np.einsum("qrn,rkm->qkmn", KM_N.lift, KM.lift))
    inner = MN.project(full)  # (q, dim K, dim M(x)N)
    return K_MN.project(inner).T


# Krull-Schmidt


def _to_poly(F: Field, coeffs: Sequence):
    """sympy Poly from coefficients listed lowest degree first."""
    from sympy import GF, QQ, Poly, Rational, symbols

    dom = GF(F.char) if F.char else QQ
    vals = [int(c) if F.char else Rational(str(c)) for c in reversed(list(coeffs))]
    return Poly(vals, symbols("x"), domain=dom)


def _from_poly(F: Field, poly) -> list:
    from fractions import Fraction

    out = []
    for c in reversed(poly.all_coeffs()):
        out.append(F.scalar(int(c)) if F.char else Fraction(str(c)))
    return out


def _min_poly_coeffs(F: Field, Z: np.ndarray) -> list:
    """Monic minimal polynomial of the square matrix Z, lowest degree first."""
    n = Z.shape[0]
    powers = [F.eye(n).reshape(-1)]
    cur = F.eye(n)
    while True:
        cur = F.matmul(cur, Z)
        mat = np.stack(powers, axis=1)
        sol = solve(F, mat, cur.reshape(-1))
        if sol is not None:
            return [F.scalar(-c) for c in sol] + [F.scalar(1)]
        powers.append(cur.reshape(-1))


def _eval_poly(F: Field, coeffs: Sequence, Z: np.ndarray) -> np.ndarray:
    n = Z.shape[0]
    out = F.zeros((n, n))
    for c in reversed(list(coeffs)):
        out = F.reduce(F.matmul(out, Z) + F.scalar(c) * F.eye(n))
    return out


def _split_idempotent_poly(F: Field, coeffs: list):
    """For a min poly with two coprime factors, a polynomial e with e(z) idempotent."""
    p = _to_poly(F, coeffs)
    _, factors = p.factor_list()
    if len(factors) < 2:
        return None, factors
    f1 = factors[0][0] ** factors[0][1]
    rest = p.exquo(f1)
    _, t, _ = f1.gcdex(rest)
    return _from_poly(F, (t * rest).rem(p)), factors


@dataclass
class _EndInfo:
    basis: np.ndarray  # (k, n, n)
    coord_cols: list[int]
    coord_inv: np.ndarray
    rad: np.ndarray  # columns: coordinates of a radical basis

    def coords(self, F: Field, X: np.ndarray) -> np.ndarray:
        return F.matmul(X.reshape(-1)[self.coord_cols], self.coord_inv)


def _end_info(M: Module, E: np.ndarray) -> _EndInfo:
    F = M.field
    n = M.dim
    k = E.shape[0]
    flat = E.reshape(k, n * n)
    _, cols = rref(F, flat)
    cinv = inverse(F, flat[:, cols])
    if F.char and F.char <= n:
        raise CharTooSmall(f"trace radical needs p > dim M = {n}, but p = {F.char}")
    # tr(XY) = sum_ij X_ij Y_ji
    flatT = np.transpose(E, (0, 2, 1)).reshape(k, n * n)
    gram = F.matmul(flat, flatT.T)
    rad = nullspace(F, gram)
    return _EndInfo(E, cols, cinv, rad)


def _lift_idempotent(F: Field, e: np.ndarray, limit: int = 64) -> np.ndarray:
    for _ in range(limit):
        e2 = F.matmul(e, e)
        if F.equal(e2, e):
            return e
        e = F.reduce(3 * e2 - 2 * F.matmul(e2, e))
    raise HcellError("idempotent lifting did not converge")


def _split_once(M: Module, rng: np.random.Generator, trials: int = 40):
    """A nontrivial idempotent of End(M), None if M is indecomposable."""
    F = M.field
    n = M.dim
    E = hom_space(M, M)
    k = E.shape[0]
    if k <= 1:
        return None
    info = _end_info(M, E)
    Qr = Quotient(F, info.rad.T, k)
    s = Qr.dim
    if s == 1:
        return None
    for _ in range(trials):
        z = _random_combination(F, E, rng)
        # left multiplication by z on End / Rad
        prods = np.stack([F.matmul(z, B) for B in E])
        coords = np.stack([info.coords(F, P) for P in prods], axis=1)  # k x k
        Lz = F.matmul(F.matmul(Qr.proj, coords), Qr.lift)
        coeffs = _min_poly_coeffs(F, Lz)
        epoly, factors = _split_idempotent_poly(F, coeffs)
        if epoly is None:
            deg = factors[0][0].degree() if factors else 1
            if deg == s and _commutative_mod_rad(F, E, info, Qr):
                return None
            continue
        # the idempotent of End/Rad is e(zbar); lift the matrix e(z) and purify
        e0 = _eval_poly(F, epoly, z)
        e = _lift_idempotent(F, e0)
        r = rank(F, e)
        if 0 < r < n:
            return e
    raise HcellError(f"could not split End(M) of dimension {k} (End/Rad has dimension {s})")


def _commutative_mod_rad(F: Field, E: np.ndarray, info: _EndInfo, Qr: Quotient) -> bool:
    for i in range(E.shape[0]):
        for j in range(i + 1, E.shape[0]):
            c = F.reduce(F.matmul(E[i], E[j]) - F.matmul(E[j], E[i]))
            if not F.is_zero(F.matmul(Qr.proj, info.coords(F, c))):
                return False
    return True


def _indecomposable_parts(M: Module, rng: np.random.Generator) -> list[Module]:
    e = _split_once(M, rng)
    if e is None:
        return [M]
    F = M.field
    one_minus = F.reduce(F.eye(M.dim) - e)
    U1, U2 = column_basis(F, e), column_basis(F, one_minus)
    return _indecomposable_parts(submodule(M, U1), rng) + _indecomposable_parts(submodule(M, U2), rng)


def _projective_summand(M: Module, u) -> Module:
    A = M.alg
    if isinstance(M, Bimodule):
        return projective_bimodule(A, u[0], u[1])
    return projective_module(A, u)


def decompose(M: Module, seed: int = 0) -> list[tuple[Module, int]]:
    """Indecomposable summands up to isomorphism with multiplicities.

    Projective modules are read off their tops.  Otherwise idempotents of
    End(M) / Rad End(M) are lifted to End(M) and the module is split
    recursively; the radical is the kernel of the trace form of M.
    """
    if M.dim == 0:
        return []
    pres = presentation(M)
    if pres.is_projective:
        counts = pres.top_counts()
        order = _Ops(M).labels
        return [(_projective_summand(M, u), counts[u]) for u in order if u in counts]
    rng = np.random.default_rng(seed)
    parts = _indecomposable_parts(M, rng)
    groups: list[tuple[Module, int]] = []
    for P in parts:
        for idx, (S, m) in enumerate(groups):
            if _indecomposables_isomorphic(S, P):
                groups[idx] = (S, m + 1)
                break
        else:
            groups.append((P, 1))
    return groups


def is_indecomposable(M: Module, seed: int = 0) -> bool:
    d = decompose(M, seed)
    return len(d) == 1 and d[0][1] == 1


# equivariant structures


@dataclass
class EquivariantStructure:
    """Invertible maps alpha_g: M -> M^g with alpha_{hg} = alpha_h alpha_g."""

    module: Bimodule
    maps: dict[int, np.ndarray]


@dataclass
class NotEquivariant:
    reason: str
    witness: object = None
    indeterminate: bool = False


def equivariant_defects(M: Bimodule, act: AlgebraAction, maps: dict[int, np.ndarray]) -> list[str]:
    """Violations of the equivariance square for a candidate family of maps."""
    F = M.field
    G = act.group
    out = []
    for g in range(G.order):
        a = maps.get(g)
        if a is None or a.shape != (M.dim, M.dim):
            out.append(f"missing map for {G.label(g)}")
            continue
        if rank(F, a) != M.dim:
            out.append(f"alpha_{G.label(g)} is not invertible")
        if not is_intertwiner(M, twist(M, act, g), a):
            out.append(f"alpha_{G.label(g)} is not a bimodule map M -> M^{G.label(g)}")
    if out:
        return out
    for g in range(G.order):
        for h in range(G.order):
            # (alpha_h)^g has the matrix of alpha_h
            if not F.equal(F.matmul(maps[h], maps[g]), maps[G.mul(h, g)]):
                out.append(f"square fails at (h,g)=({G.label(h)},{G.label(g)})")
    return out


def _nth_root(F: Field, c, n: int):
    if F.char == 0:
        from sympy import Rational, integer_nthroot

        c = Rational(c)
        num, ok1 = integer_nthroot(abs(int(c.p)), n)
        den, ok2 = integer_nthroot(int(c.q), n)
        if not (ok1 and ok2) or (c < 0 and n % 2 == 0):
            return None
        from fractions import Fraction

        return Fraction(num * (1 if c > 0 else -1), den)
    from sympy.ntheory.residue_ntheory import nthroot_mod

    if c % F.char == 0:
        return None
    r = nthroot_mod(int(c), n, F.char)
    return None if r is None else int(r)


def _unit_root(F: Field, u: np.ndarray, n: int):
    """A polynomial-in-u matrix r with r^n = u^-1, or None."""
    p = _to_poly(F, _min_poly_coeffs(F, u))
    _, factors = p.factor_list()
    size = u.shape[0]
    if any(f.degree() != 1 for f, _ in factors):
        return None
    # generalized eigenspace projectors via CRT
    out = F.zeros((size, size))
    for f, mult in factors:
        lam = F.neg(_from_poly(F, f)[0])
        fk = f**mult
        rest = p.exquo(fk)
        _, t, _ = fk.gcdex(rest)
        proj = _eval_poly(F, _from_poly(F, (t * rest).rem(p)), u)
        mu = _nth_root(F, F.inv(lam), n)
        if mu is None:
            return None
        # on the block, u = lam (1 + N); (1 + N)^(-1/n) by the binomial series
        Nmat = F.reduce(F.matmul(proj, F.scale(F.inv(lam), u)) - proj)
        term = proj.copy()
        series = proj.copy()
        from fractions import Fraction

        expo = Fraction(-1, n)
        coef = Fraction(1)
        for j in range(1, mult + 1):
            coef = coef * (expo - (j - 1)) / j
            term = F.matmul(term, Nmat)
            if F.is_zero(term):
                break
            series = F.reduce(series + F.scalar(coef) * term)
        out = F.reduce(out + F.scale(mu, series))
    return out


def _abelian_generators(G) -> list[int] | None:
    """Independent cyclic generators of an abelian group, largest order first."""
    if not G.is_abelian():
        return None
    gens: list[int] = []
    span = {G.identity}
    for g in sorted(range(G.order), key=lambda a: -G.element_order(a)):
        if g in span:
            continue
        # keep g only if <span, g> has order |span| * ord(g) (direct factor)
        cyc = {G.identity}
        x = g
        while x != G.identity:
            cyc.add(x)
            x = G.mul(x, g)
        if any(c in span for c in cyc if c != G.identity):
            continue
        gens.append(g)
        span = {G.mul(a, c) for a in span for c in cyc}
        if len(span) == G.order:
            break
    return gens if len(span) == G.order else None


def equivariant_structure(
    M: Bimodule, act: AlgebraAction, candidate: dict[int, np.ndarray] | None = None, seed: int = 0
) -> EquivariantStructure | NotEquivariant:
    """A certified equivariant structure on M, or the reason none was found."""
    F = M.field
    G = act.group
    if M.dim == 0:
        return EquivariantStructure(M, {g: F.zeros((0, 0)) for g in range(G.order)})
    if candidate is not None:
        bad = equivariant_defects(M, act, candidate)
        if not bad:
            return EquivariantStructure(M, dict(candidate))
    isos = {}
    for g in range(G.order):
        b = find_isomorphism(M, twist(M, act, g), seed=seed)
        if b is None:
            return NotEquivariant(f"M is not isomorphic to M^{G.label(g)}", G.label(g))
        isos[g] = b
    gens = _abelian_generators(G)
    if gens is None:
        return NotEquivariant("nonabelian group: structure search not attempted", None, True)
    rng = np.random.default_rng(seed)
    chosen: list[tuple[int, np.ndarray]] = []
    for t in gens:
        n = G.element_order(t)
        H = hom_space(M, twist(M, act, t))
        if chosen:
            # restrict to maps commuting with the generators already fixed
            eqs = []
            for _, a in chosen:
                eqs.append(np.stack([F.reduce(F.matmul(B, a) - F.matmul(a, B)).reshape(-1) for B in H], axis=1))
            sol = nullspace(F, np.concatenate(eqs, axis=0))
            H = np.stack([F.reduce(np.tensordot(sol[:, j], H, axes=(0, 0))) for j in range(sol.shape[1])]) if sol.shape[1] else F.zeros((0,) + H.shape[1:])
        found = None
        for trial in range(24):
            if H.shape[0] == 0:
                break
            beta = H[0] if trial == 0 else _random_combination(F, H, rng)
            if rank(F, beta) != M.dim:
                continue
            u = F.eye(M.dim)
            for _ in range(n):
                u = F.matmul(u, beta)
            r = _unit_root(F, u, n)
            if r is None:
                continue
            alpha = F.matmul(beta, r)
            found = alpha
            break
        if found is None:
            return NotEquivariant(f"no iso M -> M^{G.label(t)} of order {n} found", G.label(t), True)
        chosen.append((t, found))
    maps = {G.identity: F.eye(M.dim)}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for t, a in chosen:
                h = G.mul(t, g)
                if h not in maps:
                    maps[h] = F.matmul(a, maps[g])
                    nxt.append(h)
        frontier = nxt
    bad = equivariant_defects(M, act, maps)
    if bad:
        return NotEquivariant("; ".join(bad[:3]), None, True)
    return EquivariantStructure(M, maps)

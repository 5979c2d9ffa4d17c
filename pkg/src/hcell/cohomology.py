"""Subgroups, integral cohomology of finite groups and the count of apex-J_0 birepresentations.

H^3(K, Z) is read off the normalized bar complex with trivial integer
coefficients.  For a finite group every positive-degree cohomology group is
finite, so H^3 = ker d3 / im d2 is the torsion of coker d2: the elementary
divisors of d2 that exceed 1.  The integer Smith normal form is computed here
with Python integers and certified by multiplying out the transforms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

import numpy as np
from sympy import factorint, prevprime

from .algebra import GroupData, subgroup_data
from .errors import GroupTooLarge, NotAbelian, SizeBound
from .field import MAX_PRIME, Field, rank
from .report import ValidationReport

SUBGROUP_BOUND = 16
BAR_BOUND = 8


# subgroups


@dataclass
class Subgroups:
    """All subgroups of G (as sorted index tuples) and their conjugacy classes."""

    group: GroupData
    all: list[tuple[int, ...]]
    classes: list[list[tuple[int, ...]]]

    @property
    def representatives(self) -> list[tuple[int, ...]]:
        return [c[0] for c in self.classes]

    def labels(self, H: tuple[int, ...]) -> tuple[str, ...]:
        return tuple(self.group.label(h) for h in H)


def _closure(G: GroupData, gens) -> frozenset[int]:
    out = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def subgroups(G: GroupData, bound: int = SUBGROUP_BOUND) -> Subgroups:
    """Every subgroup, found by adjoining one element at a time to known subgroups."""
    if G.order > bound:
        raise GroupTooLarge(f"|G| = {G.order} exceeds the subgroup bound {bound}")
    trivial = frozenset({G.identity})
    seen = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            for g in range(G.order):
                if g in H:
                    continue
                K = _closure(G, sorted(H) + [g])
                if K not in seen:
                    seen.add(K)
                    nxt.append(K)
        frontier = nxt
    found = sorted((tuple(sorted(H)) for H in seen), key=lambda H: (len(H), H))
    classes: list[list[tuple[int, ...]]] = []
    placed: set[tuple[int, ...]] = set()
    for H in found:
        if H in placed:
            continue
        orbit = {tuple(sorted(G.conj(g, h) for h in H)) for g in range(G.order)}
        cls = sorted(orbit, key=lambda X: (len(X), X))
        placed.update(cls)
        classes.append(cls)
    return Subgroups(G, found, classes)


# abelian groups


@dataclass(frozen=True)
class AbelianInvariants:
    """The group Z/d_1 + ... + Z/d_r with d_1 | d_2 | ... and every d_i > 1."""

    divisors: tuple[int, ...] = ()

    def __post_init__(self):
        if any(d <= 1 for d in self.divisors):
            raise ValueError(f"elementary divisors must exceed 1: {self.divisors}")
        if any(b % a for a, b in zip(self.divisors, self.divisors[1:])):
            raise ValueError(f"not a divisibility chain: {self.divisors}")

    @property
    def order(self) -> int:
        out = 1
        for d in self.divisors:
            out *= d
        return out

    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*[range(d) for d in self.divisors]))

    def __str__(self) -> str:
        return " + ".join(f"Z/{d}" for d in self.divisors) if self.divisors else "0"


def invariant_factors(orders) -> AbelianInvariants:
    """Normal form of a direct sum of cyclic groups Z/n for n in ``orders``."""
    powers: dict[int, list[int]] = {}
    for n in orders:
        for p, e in factorint(int(n)).items():
            powers.setdefault(p, []).append(p**e)
    width = max((len(v) for v in powers.values()), default=0)
    out = [1] * width
    for p, v in powers.items():
        v.sort(reverse=True)
        for i, q in enumerate(v):
            out[width - 1 - i] *= q
    return AbelianInvariants(tuple(d for d in out if d > 1))


def abelian_invariants(K: GroupData) -> AbelianInvariants:
    """Invariant factors of an abelian group from the sizes of its p^k-torsion subgroups."""
    if not K.is_abelian():
        raise NotAbelian("group is not abelian")

    def power(g: int, m: int) -> int:
        x = K.identity
        for _ in range(m):
            x = K.mul(x, g)
        return x

    cyclic: list[int] = []
    for p, e in factorint(K.order).items():
        # log_p of |{x : x^(p^k) = 1}| for k = 0..e
        logs = [0]
        for k in range(1, e + 1):
            size = sum(1 for g in range(K.order) if power(g, p**k) == K.identity)
            logs.append(factorint(size).get(p, 0))
        at_least = [logs[k] - logs[k - 1] for k in range(1, e + 1)]  # factors of order >= p^k
        for k in range(e):
            exact = at_least[k] - (at_least[k + 1] if k + 1 < e else 0)
            cyclic += [p ** (k + 1)] * exact
    return invariant_factors(cyclic)


def abelian_multiplier_formula(K: GroupData | None = None, orders=None) -> AbelianInvariants:
    """Sum over i < j of Z/gcd(n_i, n_j) for K = Z/n_1 + ... + Z/n_r."""
    if orders is None:
        if K is None:
            raise ValueError("give a group or its cyclic orders")
        orders = abelian_invariants(K).divisors
    orders = list(orders)
    return invariant_factors(gcd(a, b) for a, b in itertools.combinations(orders, 2))


# Smith normal form


@dataclass
class SmithForm:
    """U @ A @ V = D with U, V unimodular; inverses are kept for certification."""

    diagonal: list[int]
    U: list[list[int]]
    V: list[list[int]]
    U_inv: list[list[int]]
    V_inv: list[list[int]]
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def D(self) -> list[list[int]]:
        m, n = self.shape
        out = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.diagonal):
            out[i][i] = d
        return out


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A, n: int | None = None) -> SmithForm:
    """Smith normal form over Z with a smallest-absolute-value pivot.

    Row operations are mirrored on U and, inverted, as column operations on
    U_inv; column operations likewise on V and V_inv.
    """
    D = [[int(x) for x in row] for row in A]
    m = len(D)
    if n is None:
        n = len(D[0]) if m else 0
    U, Ui, V, Vi = _identity(m), _identity(m), _identity(n), _identity(n)

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_add(i, t, q):  # row_i += q row_t
        Di, Dt = D[i], D[t]
        for c in range(n):
            if Dt[c]:
                Di[c] += q * Dt[c]
        Ui_, Ut = U[i], U[t]
        for c in range(m):
            if Ut[c]:
                Ui_[c] += q * Ut[c]
        for r in Ui:  # col_t -= q col_i
            if r[i]:
                r[t] -= q * r[i]

    def col_add(j, t, q):  # col_j += q col_t
        for r in D:
            if r[t]:
                r[j] += q * r[t]
        for r in V:
            if r[t]:
                r[j] += q * r[t]
        Vj, Vt = Vi[j], Vi[t]  # row_t -= q row_j
        for c in range(n):
            if Vj[c]:
                Vt[c] -= q * Vj[c]

    def negate_row(t):
        D[t] = [-x for x in D[t]]
        U[t] = [-x for x in U[t]]
        for r in Ui:
            r[t] = -r[t]

    diag: list[int] = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        row_swap(t, i)
        col_swap(t, j)
        while True:
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    row_add(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                if D[t][j]:
                    col_add(j, t, -(D[t][j] // p))
            rest = [(abs(D[i][t]), i, None) for i in range(t + 1, m) if D[i][t]]
            rest += [(abs(D[t][j]), None, j) for j in range(t + 1, n) if D[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda r: r[0])
                if i is not None:
                    row_swap(t, i)
                else:
                    col_swap(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(D[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if D[t][t] < 0:
            negate_row(t)
        diag.append(D[t][t])
        t += 1
    return SmithForm(diag, U, V, Ui, Vi, (m, n))


def _int_array(rows, m: int, n: int) -> np.ndarray:
    out = np.zeros((m, n), dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out


def _matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer product; int64 when the entry bound rules out overflow."""
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=object)
    ma = max(abs(int(x)) for x in a.flat)
    mb = max(abs(int(x)) for x in b.flat)
    if ma * mb * a.shape[1] < 2**62:
        return (a.astype(np.int64) @ b.astype(np.int64)).astype(object)
    return a.dot(b)


def _first_difference(a: np.ndarray, b: np.ndarray) -> list[int] | None:
    bad = np.argwhere(a != b)
    return None if bad.size == 0 else [int(t) for t in bad[0]]


def check_smith(A, S: SmithForm) -> ValidationReport:
    """U A V = D, U U^-1 = I, V V^-1 = I, D diagonal with a divisibility chain."""
    rep = ValidationReport("Smith normal form")
    m, n = S.shape
    A, D = _int_array(A, m, n), _int_array(S.D(), m, n)
    U, Ui = _int_array(S.U, m, m), _int_array(S.U_inv, m, m)
    V, Vi = _int_array(S.V, n, n), _int_array(S.V_inv, n, n)
    rep.require("U A V = D", _first_difference(_matmul(_matmul(U, A), V), D))
    rep.require("U invertible over Z", _first_difference(_matmul(U, Ui), np.eye(m, dtype=np.int64)))
    rep.require("V invertible over Z", _first_difference(_matmul(V, Vi), np.eye(n, dtype=np.int64)))
    chain = all(d > 0 for d in S.diagonal) and all(b % a == 0 for a, b in zip(S.diagonal, S.diagonal[1:]))
    rep.record("divisibility chain", chain, S.diagonal if not chain else None)
    return rep


# bar complex


def _bar_cells(K: GroupData, n: int, normalized: bool) -> list[tuple[int, ...]]:
    elems = [g for g in range(K.order) if not (normalized and g == K.identity)]
    return list(itertools.product(elems, repeat=n))


def bar_differential(K: GroupData, n: int, normalized: bool = True) -> np.ndarray:
    """d: C^n -> C^(n+1) for cochains K^n -> Z with trivial action.

    (df)(g_1..g_{n+1}) = f(g_2..) + sum_i (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^(n+1) f(g_1..g_n)
    """
    src = _bar_cells(K, n, normalized)
    tgt = _bar_cells(K, n + 1, normalized)
    col = {c: i for i, c in enumerate(src)}
    d = np.zeros((len(tgt), len(src)), dtype=np.int64)
    for r, g in enumerate(tgt):
        faces = [(1, g[1:])]
        for i in range(n):
            faces.append(((-1) ** (i + 1), g[:i] + (K.mul(g[i], g[i + 1]),) + g[i + 2 :]))
        faces.append(((-1) ** (n + 1), g[:n]))
        for s, f in faces:
            if f in col:  # normalized cochains vanish on tuples containing 1
                d[r, col[f]] += s
    return d


@dataclass
class BarH3:
    invariants: AbelianInvariants
    report: ValidationReport
    sizes: dict = field(default_factory=dict)


def bar_h3(K: GroupData, normalized: bool = True, bound: int = BAR_BOUND) -> BarH3:
    """H^3(K, Z) with the certificates that justify it."""
    if K.order > bound:
        raise SizeBound(f"|K| = {K.order} exceeds the bar complex bound {bound}")
    rep = ValidationReport(f"H^3 of a group of order {K.order}")
    d2 = bar_differential(K, 2, normalized)
    d3 = bar_differential(K, 3, normalized)
    rep.require("d3 d2 = 0", _first_difference(d3 @ d2, np.zeros((d3.shape[0], d2.shape[1]), dtype=np.int64)))
    S = smith_normal_form(d2.tolist(), n=d2.shape[1])
    rep.merge(check_smith(d2.tolist(), S), "SNF of d2")
    n3 = d2.shape[0]
    # rank_Q d3 <= n3 - rank d2 since d3 d2 = 0; rank mod p is a lower bound, so equality certifies
    r3 = rank(Field(prevprime(MAX_PRIME)), d3) if d3.size else 0
    rep.record("H^3 is finite (rank d3 = dim C^3 - rank d2)", r3 == n3 - S.rank, {"rank d3": r3, "rank d2": S.rank})
    inv = AbelianInvariants(tuple(d for d in S.diagonal if d > 1))
    sizes = {"C^2": d2.shape[1], "C^3": n3, "C^4": d3.shape[0]}
    return BarH3(inv, rep, sizes)


def bar_h3_integral(K: GroupData, normalized: bool = True, bound: int = BAR_BOUND) -> AbelianInvariants:
    """H^3(K, Z), which is the Schur multiplier H^2(K, k*) over suitable k."""
    res = bar_h3(K, normalized, bound)
    if not res.report.ok:
        raise ArithmeticError(f"bar complex certificate failed: {res.report.messages()}")
    return res.invariants


def schur_report(K: GroupData, normalized: bool = True, bound: int = BAR_BOUND) -> ValidationReport:
    """Certified H^3(K, Z), compared with the closed form when K is abelian."""
    res = bar_h3(K, normalized, bound)
    rep = res.report
    rep.data["H^3(K,Z)"] = str(res.invariants)
    rep.data["divisors"] = list(res.invariants.divisors)
    rep.data.update(res.sizes)
    if K.is_abelian():
        inv = abelian_invariants(K)
        expect = abelian_multiplier_formula(orders=inv.divisors)
        rep.data["K"] = str(inv)
        rep.record("matches the abelian closed form", expect == res.invariants, {"formula": str(expect)})
    else:
        rep.skip("matches the abelian closed form", "K is not abelian")
    return rep


# classification


@dataclass(frozen=True)
class ClassificationEntry:
    apex: str  # "J1" or "J0"
    subgroup: tuple[str, ...]
    omega: tuple[int, ...] = ()
    multiplier: str = "0"

    def to_dict(self) -> dict:
        return {"apex": self.apex, "subgroup": list(self.subgroup), "omega": list(self.omega), "multiplier": self.multiplier}


@dataclass
class Classification:
    entries: list[ClassificationEntry]
    j0_by_subgroup: int
    j0_by_conjugacy_class: int
    notes: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "J0 (subgroups)": self.j0_by_subgroup,
            "J0 (conjugacy classes of subgroups)": self.j0_by_conjugacy_class,
            "entries": [e.to_dict() for e in self.entries],
            "notes": list(self.notes),
        }


def classify(G: GroupData, char: int = 0, normalized: bool = True) -> Classification:
    """One J1 entry and one J0 entry per subgroup K and class in H^2(K, k*).

    Counts are for an algebraically closed field of characteristic 0.  The
    conjugacy count sums |H^2(K)| over one subgroup per conjugacy class and
    does not divide out the normalizer action on H^2.
    """
    subs = subgroups(G)
    cache: dict[tuple[int, ...], AbelianInvariants] = {}
    for H in subs.all:
        cache[H] = bar_h3_integral(subgroup_data(G, list(H)), normalized)
    entries = [ClassificationEntry("J1", (G.label(G.identity),))]
    for H in subs.all:
        inv = cache[H]
        for omega in inv.elements():
            entries.append(ClassificationEntry("J0", subs.labels(H), tuple(omega), str(inv)))
    by_class = sum(cache[H].order for H in subs.representatives)
    notes = []
    if char:
        hit = [subs.labels(H) for H in subs.all if cache[H].order % char == 0]
        if hit:
            notes.append(f"in characteristic {char} the {char}-part of H^2 vanishes for subgroups {hit}")
    return Classification(entries, len(entries) - 1, by_class, notes)


__all__ = [
    "AbelianInvariants",
    "BarH3",
    "Classification",
    "ClassificationEntry",
    "SmithForm",
    "Subgroups",
    "abelian_invariants",
    "abelian_multiplier_formula",
    "bar_differential",
    "bar_h3",
    "bar_h3_integral",
    "check_smith",
    "classify",
    "invariant_factors",
    "schur_report",
    "smith_normal_form",
    "subgroups",
]

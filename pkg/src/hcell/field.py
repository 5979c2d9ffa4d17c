"""Exact scalar fields and dense linear algebra over them.

Two fields are supported: prime fields F_p, stored as ``int64`` numpy arrays
reduced mod p, and the rationals, stored as object arrays of ``Fraction``.
Every routine here is exact; nothing is ever rounded.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime, nextprime

from .errors import NonSplitField

# Dot products of length n over F_p need n * p**2 < 2**63.
MAX_PRIME = 1 << 24


class Field:
    """F_p for a prime ``char``, or Q when ``char == 0``."""

    def __init__(self, char: int):
        if char < 0 or (char and not isprime(char)):
            raise ValueError(f"field characteristic must be 0 or a prime, got {char}")
        if char > MAX_PRIME:
            raise ValueError(f"prime {char} exceeds the supported bound {MAX_PRIME}")
        self.char = char

    def __repr__(self) -> str:
        return f"Field({self.char})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self) -> int:
        return hash(("Field", self.char))

    @property
    def name(self) -> str:
        return f"F_{self.char}" if self.char else "Q"

    # scalars

    def scalar(self, value) -> int | Fraction:
        """Convert an int, Fraction or string such as ``"-3/4"`` to a field element."""
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, (bool, np.bool_)):
            value = int(value)
        if isinstance(value, (np.integer,)):
            value = int(value)
        if self.char == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            num = value.numerator % self.char
            den = value.denominator % self.char
            if den == 0:
                raise ZeroDivisionError(f"{value} has no image in {self.name}")
            return num * pow(den, -1, self.char) % self.char
        return int(value) % self.char

    def inv(self, x) -> int | Fraction:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.char == 0:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.char)

    def neg(self, x):
        return self.scalar(-x)

    def format(self, x) -> str:
        """Render a scalar exactly: residues as integers, rationals as ``p/q``."""
        x = self.scalar(x)
        return str(x)

    def root_of_unity(self, n: int) -> int:
        """A primitive n-th root of unity in F_p (requires n | p - 1)."""
        if self.char == 0:
            if n in (1, 2):
                return 1 if n == 1 else -1
            raise NonSplitField(f"Q has no primitive {n}-th root of unity")
        if (self.char - 1) % n:
            raise NonSplitField(f"{self.name} has no primitive {n}-th root of unity")
        for cand in range(1, self.char):
            if pow(cand, n, self.char) != 1:
                continue
            if all(pow(cand, n // q, self.char) != 1 for q in _prime_factors(n)):
                return cand
        raise NonSplitField(f"no primitive {n}-th root of unity in {self.name}")

    # arrays

    @property
    def dtype(self):
        return np.int64 if self.char else object

    def array(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        if self.char:
            flat = [self.scalar(v) for v in arr.ravel()]
            return np.array(flat, dtype=np.int64).reshape(arr.shape)
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = Fraction(v) if not isinstance(v, str) else Fraction(v.strip())
        return out

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.char:
            return np.mod(arr, self.char)
        return arr

    def zeros(self, shape) -> np.ndarray:
        if self.char:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = 1 if self.char else Fraction(1)
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.char:
            return np.mod(a @ b, self.char)
        return a @ b

    def mul_chain(self, *mats: np.ndarray) -> np.ndarray:
        out = mats[0]
        for m in mats[1:]:
            out = self.matmul(out, m)
        return out

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(np.kron(a, b))

    def scale(self, c, arr: np.ndarray) -> np.ndarray:
        return self.reduce(self.scalar(c) * arr)

    def is_zero(self, arr: np.ndarray) -> bool:
        return not np.any(arr != 0)

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and not np.any(self.reduce(a - b) != 0)

    def mismatch(self, a: np.ndarray, b: np.ndarray):
        """First index where a and b differ (None when equal); a shape difference is reported instead."""
        if a.shape != b.shape:
            return {"shapes": [list(a.shape), list(b.shape)]}
        bad = np.argwhere(self.reduce(a - b) != 0)
        return None if bad.size == 0 else [int(t) for t in bad[0]]

    def to_python(self, arr: np.ndarray):
        """Nested lists of ints (F_p) or strings (Q); JSON-safe and exact."""
        if self.char:
            return np.asarray(arr, dtype=np.int64).tolist()
        return np.vectorize(str, otypes=[object])(arr).tolist()


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def choose_prime(exponent: int, max_dim: int) -> int:
    """Smallest prime p with p = 1 mod ``exponent`` and p > 4 * ``max_dim``."""
    p = nextprime(4 * max_dim)
    while (p - 1) % exponent:
        p = nextprime(p)
    return int(p)


# Gaussian elimination


def rref(F: Field, mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    R = np.array(mat, dtype=F.dtype, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a matrix")
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r, c:] = F.reduce(R[r, c:] * F.inv(R[r, c]))
        col = R[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col != 0)
        if rows.size:
            R[np.ix_(rows, np.arange(c, n))] = F.reduce(
                R[np.ix_(rows, np.arange(c, n))] - np.outer(col[rows], R[r, c:])
            )
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(F: Field, mat: np.ndarray) -> int:
    if mat.size == 0:
        return 0
    return len(rref(F, mat)[1])


def rank_witness(F: Field, mat: np.ndarray, needed: int) -> dict | None:
    """None when mat has rank ``needed``, otherwise the rank actually found."""
    r = rank(F, mat)
    return None if r == needed else {"rank": r, "needed": needed}


def invertibility_witness(F: Field, mat: np.ndarray) -> dict | None:
    """None for an invertible square matrix, otherwise its shape and rank."""
    if mat.shape[0] != mat.shape[1]:
        return {"shape": list(mat.shape)}
    return rank_witness(F, mat, mat.shape[0])


def nullspace(F: Field, mat: np.ndarray) -> np.ndarray:
    """Basis of {x : mat @ x = 0} as the columns of the returned matrix."""
    m, n = mat.shape
    if m == 0:
        return F.eye(n)
    R, piv = rref(F, mat)
    free = [j for j in range(n) if j not in set(piv)]
    out = F.zeros((n, len(free)))
    for k, j in enumerate(free):
        out[j, k] = 1
        for i, p in enumerate(piv):
            out[p, k] = F.reduce(-R[i, j])
    return out


def row_basis(F: Field, rows: np.ndarray) -> np.ndarray:
    """Echelon basis of the row space."""
    if rows.shape[0] == 0:
        return rows
    return rref(F, rows)[0]


def column_basis(F: Field, cols: np.ndarray) -> np.ndarray:
    """Independent columns spanning the column space, in echelon form."""
    if cols.shape[1] == 0:
        return cols
    return row_basis(F, cols.T).T


def solve(F: Field, mat: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    """One solution X of mat @ X = rhs, or None when inconsistent."""
    vec = rhs.ndim == 1
    B = rhs.reshape(-1, 1) if vec else rhs
    m, n = mat.shape
    aug = np.concatenate([mat, B], axis=1) if m else F.zeros((0, n + B.shape[1]))
    R, piv = rref(F, aug)
    if any(p >= n for p in piv):
        return None
    X = F.zeros((n, B.shape[1]))
    for i, p in enumerate(piv):
        X[p] = R[i, n:]
    return X[:, 0] if vec else X


def inverse(F: Field, mat: np.ndarray) -> np.ndarray:
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(F, np.concatenate([mat, F.eye(n)], axis=1))
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def is_invertible(F: Field, mat: np.ndarray) -> bool:
    return mat.shape[0] == mat.shape[1] and rank(F, mat) == mat.shape[0]


class Quotient:
    """The quotient V / U of a coordinate space by the row span of ``relations``.

    ``proj`` maps V onto the quotient coordinates, ``lift`` is the section
    sending quotient coordinates back to the standard basis vectors of V that
    survive.  The quotient basis depends only on the subspace U, so two
    computations of the same subspace give identical coordinates.
    """

    def __init__(self, F: Field, relations: np.ndarray, ambient: int):
        self.field = F
        self.ambient = ambient
        if relations.shape[0]:
            R, piv = rref(F, relations)
        else:
            R, piv = F.zeros((0, ambient)), []
        self.pivots = piv
        pivset = set(piv)
        self.kept = [j for j in range(ambient) if j not in pivset]
        q = len(self.kept)
        proj = F.zeros((q, ambient))
        for k, j in enumerate(self.kept):
            proj[k, j] = 1
        for i, p in enumerate(piv):
            proj[:, p] = F.reduce(-R[i, self.kept])
        self.proj = proj
        lift = F.zeros((ambient, q))
        for k, j in enumerate(self.kept):
            lift[j, k] = 1
        self.lift = lift

    @property
    def dim(self) -> int:
        return len(self.kept)


def block_diag(F: Field, blocks: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = F.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def stack_columns(F: Field, cols: Iterable[np.ndarray], length: int) -> np.ndarray:
    cols = list(cols)
    if not cols:
        return F.zeros((length, 0))
    return np.stack(cols, axis=1)

"""Exact linear algebra over the scalar backends.

``ExactMatrix`` is a sparse COO matrix whose values are exact field elements
(duplicates summed, zeros dropped).  Differential matrices are very sparse,
so products and matrix-vector applications stay in this form.

Row reduction
-------------
* Prime fields: dense reduction modulo ``p`` in the modular kernel.
* Rationals: rows are cleared of denominators, the integer matrix is reduced
  modulo several word-size primes, the reduced form is lifted by CRT plus
  rational reconstruction, and the lift is *verified exactly*: the pivot
  minor is non-zero modulo a prime (so the rational rank is at least the
  modular rank) and every non-pivot column is checked to equal the stated
  combination of pivot columns over the integers (so the rank is at most it).
  A failed lift adds primes; after ``MAX_PRIMES`` the plain fraction-based
  elimination is used instead.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from . import _kernels
from .errors import NoSolution, ShapeMismatch
from .field import QQ, Field, PrimeField

# large primes below 2**31 used for the multimodular rational path; the
# Mersenne prime 2**31-1 is deliberately absent so that the prime backend
# used for cross-checks stays independent.
LIFT_PRIMES = (
    2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
    2147483543, 2147483497, 2147483489, 2147483477, 2147483423,
    2147483399, 2147483353, 2147483323, 2147483269, 2147483249,
    2147483237,
)
MAX_PRIMES = len(LIFT_PRIMES)
DENSE_FRACTION_LIMIT = 64 * 64


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class ExactMatrix:
    """Sparse exact matrix in canonical COO form (row-major sorted)."""

    __slots__ = ("field", "shape", "rows", "cols", "vals")

    def __init__(self, field: Field, shape, rows=None, cols=None, vals=None, canonical=False):
        self.field = field
        self.shape = (int(shape[0]), int(shape[1]))
        if rows is None:
            rows = np.zeros(0, dtype=np.int64)
            cols = np.zeros(0, dtype=np.int64)
            vals = np.zeros(0, dtype=object)
        rows = np.asarray(rows, dtype=np.int64).reshape(-1)
        cols = np.asarray(cols, dtype=np.int64).reshape(-1)
        v = np.empty(len(rows), dtype=object)
        v[:] = list(vals) if not isinstance(vals, np.ndarray) else vals.reshape(-1)
        if canonical:
            self.rows, self.cols, self.vals = rows, cols, v
        else:
            self.rows, self.cols, self.vals = self._canonical(rows, cols, v)

    def _canonical(self, rows, cols, vals):
        if len(rows) == 0:
            return rows, cols, vals
        key = rows * self.shape[1] + cols
        order = np.argsort(key, kind="stable")
        key = key[order]
        vals = vals[order]
        starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
        summed = np.add.reduceat(vals, starts) if len(starts) < len(key) else vals
        summed = self.field.reduce(summed)
        keep = np.asarray(summed != 0, dtype=bool)
        ukey = key[starts][keep]
        out = np.empty(int(keep.sum()), dtype=object)
        out[:] = summed[keep]
        return ukey // self.shape[1], ukey % self.shape[1], out

    # ------------------------------------------------------------ builders

    @classmethod
    def zeros(cls, field, shape):
        return cls(field, shape)

    @classmethod
    def identity(cls, field, n):
        idx = np.arange(n, dtype=np.int64)
        vals = np.empty(n, dtype=object)
        vals.fill(1)
        return cls(field, (n, n), idx, idx, vals, canonical=True)

    @classmethod
    def from_dense(cls, field, arr):
        arr = np.asarray(arr, dtype=object)
        if arr.ndim != 2:
            raise ShapeMismatch("from_dense needs a 2-d array")
        mask = np.asarray(arr != 0, dtype=bool)
        r, c = np.nonzero(mask)
        return cls(field, arr.shape, r, c, arr[r, c], canonical=True)

    @classmethod
    def block(cls, field, blocks):
        """Assemble from a 2-d list of ``ExactMatrix`` (``None`` = zero block)."""
        heights = []
        for brow in blocks:
            h = {b.shape[0] for b in brow if b is not None}
            if len(h) != 1:
                raise ShapeMismatch("inconsistent block heights")
            heights.append(h.pop())
        widths = []
        for j in range(len(blocks[0])):
            w = {brow[j].shape[1] for brow in blocks if brow[j] is not None}
            if len(w) != 1:
                raise ShapeMismatch("inconsistent block widths")
            widths.append(w.pop())
        r0 = np.cumsum([0] + heights)
        c0 = np.cumsum([0] + widths)
        rows, cols, vals = [], [], []
        for i, brow in enumerate(blocks):
            for j, b in enumerate(brow):
                if b is None or b.nnz == 0:
                    continue
                rows.append(b.rows + r0[i])
                cols.append(b.cols + c0[j])
                vals.append(b.vals)
        if not rows:
            return cls(field, (r0[-1], c0[-1]))
        return cls(field, (r0[-1], c0[-1]), np.concatenate(rows), np.concatenate(cols),
                   np.concatenate(vals))

    # ------------------------------------------------------------ basics

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def is_zero(self) -> bool:
        return self.nnz == 0

    def to_dense(self) -> np.ndarray:
        out = self.field.zeros(self.shape)
        out[self.rows, self.cols] = self.vals
        return out

    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.field, (self.shape[1], self.shape[0]), self.cols, self.rows, self.vals)

    def __neg__(self):
        return ExactMatrix(self.field, self.shape, self.rows, self.cols,
                           self.field.reduce(-self.vals), canonical=True)

    def scale(self, c) -> "ExactMatrix":
        c = self.field.coerce(c)
        if c == 0:
            return ExactMatrix(self.field, self.shape)
        return ExactMatrix(self.field, self.shape, self.rows, self.cols,
                           self.field.reduce(self.vals * c), canonical=True)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix(self.field, self.shape, np.r_[self.rows, other.rows],
                           np.r_[self.cols, other.cols], np.concatenate([self.vals, other.vals]))

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            return self.matmul(other)
        return self.apply(other)

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape[1] != other.shape[0]:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        shape = (self.shape[0], other.shape[1])
        if self.nnz == 0 or other.nnz == 0:
            return ExactMatrix(self.field, shape)
        # join A's columns with B's rows
        order = np.argsort(self.cols, kind="stable")
        a_rows, a_cols, a_vals = self.rows[order], self.cols[order], self.vals[order]
        starts = np.searchsorted(a_cols, np.arange(self.shape[1] + 1))
        counts = starts[other.rows + 1] - starts[other.rows]
        total = int(counts.sum())
        if total == 0:
            return ExactMatrix(self.field, shape)
        b_idx = np.repeat(np.arange(other.nnz), counts)
        offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        a_idx = starts[other.rows][b_idx] + offs
        vals = a_vals[a_idx] * other.vals[b_idx]
        return ExactMatrix(self.field, shape, a_rows[a_idx], other.cols[b_idx], vals)

    def apply(self, x) -> np.ndarray:
        """Matrix times a dense object vector (or a dense matrix of columns)."""
        x = np.asarray(x, dtype=object)
        if x.shape[0] != self.shape[1]:
            raise ShapeMismatch(f"cannot apply {self.shape} to vector of length {x.shape[0]}")
        out = self.field.zeros((self.shape[0],) + x.shape[1:])
        if self.nnz == 0:
            return out
        contrib = x[self.cols] * (self.vals if x.ndim == 1 else self.vals[:, None])
        np.add.at(out, self.rows, contrib)
        return self.field.reduce(out)

    def equals(self, other: "ExactMatrix") -> bool:
        return self.shape == other.shape and (self - other).is_zero()

    def column(self, j: int) -> np.ndarray:
        out = self.field.zeros(self.shape[0])
        m = self.cols == j
        out[self.rows[m]] = self.vals[m]
        return out

    def __repr__(self):
        return f"ExactMatrix({self.field.descriptor()}, shape={self.shape}, nnz={self.nnz})"


def as_matrix(field: Field, M) -> ExactMatrix:
    if isinstance(M, ExactMatrix):
        return M
    return ExactMatrix.from_dense(field, field.array(M))


def columns_matrix(field: Field, vectors, length: int) -> ExactMatrix:
    """Matrix whose columns are the given dense vectors."""
    vectors = list(vectors)
    if not vectors:
        return ExactMatrix(field, (length, 0))
    arr = np.stack([np.asarray(v, dtype=object).reshape(-1) for v in vectors], axis=1)
    return ExactMatrix.from_dense(field, arr)


# ---------------------------------------------------------------- RREF


@dataclass
class RREF:
    """Exact reduced row echelon data: ``R`` is ``rank x cols`` (dense)."""

    field: Field
    ncols: int
    pivots: np.ndarray
    R: np.ndarray
    method: str

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def free(self) -> np.ndarray:
        mask = np.ones(self.ncols, dtype=bool)
        mask[self.pivots] = False
        return np.flatnonzero(mask)

    def kernel_basis(self) -> list:
        out = []
        fld = self.field
        for f in self.free:
            v = fld.zeros(self.ncols)
            v[f] = 1
            if self.rank:
                v[self.pivots] = fld.reduce(-self.R[:, f])
            out.append(v)
        return out


def _fraction_rref(field: Field, dense: np.ndarray) -> RREF:
    """Plain exact Gauss-Jordan elimination on field elements."""
    A = np.array(dense, dtype=object, copy=True)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = A[r:, c]
        nz = [i for i, v in enumerate(col) if v != 0]
        if not nz:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = field.inv(A[r, c])
        A[r, c:] = field.reduce(A[r, c:] * inv)
        for i in range(rows):
            if i != r and A[i, c] != 0:
                A[i, c:] = field.reduce(A[i, c:] - A[i, c] * A[r, c:])
        pivots.append(c)
        r += 1
    R = A[:r].copy()
    for i in range(R.shape[0]):
        for j in range(cols):
            R[i, j] = field.coerce(R[i, j])
    return RREF(field, cols, np.asarray(pivots, dtype=np.int64), R, "fraction")


def _modular_rref_dense(M: ExactMatrix, p: int):
    A = np.zeros(M.shape, dtype=np.int64)
    if M.nnz:
        A[M.rows, M.cols] = np.array([int(v) % p for v in M.vals], dtype=np.int64)
    pivots = _kernels.rref_mod_p(A, p)
    return pivots, A[: len(pivots)]


def _prime_rref(M: ExactMatrix) -> RREF:
    p = M.field.p
    _kernels.check_modulus(p)
    pivots, R = _modular_rref_dense(M, p)
    R_obj = R.astype(object)
    return RREF(M.field, M.shape[1], np.asarray(pivots, dtype=np.int64), R_obj, f"modular:{_kernels.BACKEND}")


def _integer_rows(M: ExactMatrix) -> ExactMatrix:
    """Scale every row by the lcm of its denominators (row space unchanged)."""
    if M.nnz == 0:
        return ExactMatrix(QQ, M.shape)
    dens = np.array([v.denominator if isinstance(v, Fraction) else 1 for v in M.vals], dtype=object)
    if all(d == 1 for d in dens):
        return M
    scale = {}
    for r, d in zip(M.rows.tolist(), dens.tolist()):
        scale[r] = _lcm(scale.get(r, 1), d)
    factors = np.array([scale[r] for r in M.rows.tolist()], dtype=object)
    vals = np.array([int(v * f) for v, f in zip(M.vals, factors)], dtype=object)
    return ExactMatrix(QQ, M.shape, M.rows, M.cols, vals, canonical=True)


def _rational_reconstruct(a: int, m: int):
    """Return ``Fraction`` ``n/d`` with ``n = a d (mod m)``, ``|n|, d <= sqrt(m/2)``."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if gcd(r1, s1) != 1:
        return None
    return Fraction(r1, s1)


def _verify_lift(Mi: ExactMatrix, pivots, R_free, free) -> bool:
    """Check column ``f`` of ``Mi`` equals ``sum_j R[j, f] * column(pivot_j)``."""
    if len(free) == 0:
        return True
    dense_cols = {}
    for r, c, v in zip(Mi.rows.tolist(), Mi.cols.tolist(), Mi.vals.tolist()):
        dense_cols.setdefault(c, {})[r] = v
    piv_cols = [dense_cols.get(int(c), {}) for c in pivots]
    for idx, f in enumerate(free.tolist()):
        acc = {}
        for j, col in enumerate(piv_cols):
            coef = R_free[j, idx]
            if coef == 0:
                continue
            for r, v in col.items():
                acc[r] = acc.get(r, 0) + coef * v
        target = dense_cols.get(f, {})
        keys = set(acc) | set(target)
        for r in keys:
            if acc.get(r, 0) != target.get(r, 0):
                return False
    return True


def _rational_rref(M: ExactMatrix) -> RREF:
    rows, cols = M.shape
    if rows * cols <= DENSE_FRACTION_LIMIT or M.nnz == 0:
        return _fraction_rref(QQ, M.to_dense())
    Mi = _integer_rows(M)
    best_piv = None
    residues = []
    moduli = []
    for p in LIFT_PRIMES:
        pivots, Rp = _modular_rref_dense(Mi, p)
        if best_piv is None or len(pivots) > len(best_piv):
            best_piv, residues, moduli = pivots, [], []
        elif len(pivots) < len(best_piv) or not np.array_equal(pivots, best_piv):
            # unlucky prime (rank drop or different pivot pattern)
            continue
        residues.append(Rp)
        moduli.append(p)
        free_mask = np.ones(cols, dtype=bool)
        free_mask[best_piv] = False
        free = np.flatnonzero(free_mask)
        rank = len(best_piv)
        # CRT combine the free part
        m = 1
        comb = np.zeros((rank, len(free)), dtype=object)
        for res, q in zip(residues, moduli):
            part = res[:, free].astype(object)
            if m == 1:
                comb = part % q
            else:
                # x = comb (mod m), x = part (mod q)
                inv = pow(m, -1, q)
                comb = comb + m * (((part - comb) % q) * inv % q)
            m *= q
        lifted = np.empty(comb.shape, dtype=object)
        ok = True
        for idx in np.ndindex(comb.shape):
            fr = _rational_reconstruct(int(comb[idx]), m)
            if fr is None:
                ok = False
                break
            lifted[idx] = QQ.coerce(fr)
        if not ok:
            continue
        if _verify_lift(Mi, best_piv, lifted, free):
            R = QQ.zeros((rank, cols))
            for j in range(rank):
                R[j, best_piv[j]] = 1
            if len(free):
                R[:, free] = lifted
            return RREF(QQ, cols, np.asarray(best_piv, dtype=np.int64), R, f"multimodular:{_kernels.BACKEND}")
    return _fraction_rref(QQ, M.to_dense())


def rref(M: ExactMatrix, method: str = "auto") -> RREF:
    """Exact reduced row echelon form.

    ``method`` is ``"auto"`` (modular kernels where they apply) or
    ``"fraction"`` (plain elimination on field elements).
    """
    if method == "fraction":
        return _fraction_rref(M.field, M.to_dense())
    if isinstance(M.field, PrimeField):
        return _prime_rref(M)
    return _rational_rref(M)


def rank(M, field: Field = QQ, method: str = "auto") -> int:
    return rref(as_matrix(field, M), method).rank


def kernel_basis(M, field: Field = QQ, method: str = "auto") -> list:
    return rref(as_matrix(field, M), method).kernel_basis()


def solve(M, b, field: Field = QQ, method: str = "auto") -> np.ndarray:
    """One exact solution ``x`` of ``M x = b``; raises ``NoSolution``."""
    M = as_matrix(field, M)
    fld = M.field
    b = fld.array(b).reshape(-1)
    if b.shape[0] != M.shape[0]:
        raise ShapeMismatch("right-hand side has wrong length")
    aug = ExactMatrix.block(fld, [[M, columns_matrix(fld, [b], M.shape[0])]])
    red = rref(aug, method)
    last = M.shape[1]
    if red.rank and red.pivots[-1] == last:
        raise NoSolution("system is inconsistent")
    x = fld.zeros(M.shape[1])
    if red.rank:
        x[red.pivots] = red.R[:, last]
    if not fld.equal_arrays(M.apply(x), b):  # pragma: no cover - guarded by exact rref
        raise NoSolution("lifted solution failed verification")
    return x

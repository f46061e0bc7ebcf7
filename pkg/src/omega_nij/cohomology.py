"""Cohomology dimensions, cocycle/coboundary tests and the long exact sequence."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .cochains import KINDS, Cochain, ConeCochain, NFContext, differential_matrix, phi_matrix
from .errors import BudgetExceeded, NoSolution, NoUnit, ShapeMismatch
from .linalg import ExactMatrix, columns_matrix, rref, solve

DEFAULT_BUDGET = 20000


@dataclass
class DegreeRow:
    degree: int
    dim: int
    rank: int
    kernel: int
    h: int
    d_squared_zero: bool
    representatives: list | None = None

    def as_dict(self, fld) -> dict:
        out = {
            "degree": self.degree,
            "dim_C": self.dim,
            "rank_d": self.rank,
            "dim_ker_d": self.kernel,
            "dim_H": self.h,
            "d_squared_zero": self.d_squared_zero,
        }
        if self.representatives is not None:
            out["representatives"] = [[fld.format(v) for v in rep] for rep in self.representatives]
        return out


@dataclass
class CohomologyTable:
    kind: str
    field: object
    rows: list = dc_field(default_factory=list)
    notices: list = dc_field(default_factory=list)

    def dims(self) -> dict:
        return {r.degree: r.h for r in self.rows}

    def row(self, n: int) -> DegreeRow:
        for r in self.rows:
            if r.degree == n:
                return r
        raise KeyError(n)

    @property
    def is_complex(self) -> bool:
        return all(r.d_squared_zero for r in self.rows)

    def as_dict(self) -> dict:
        return {
            "complex": self.kind,
            "field": self.field.descriptor(),
            "is_complex": self.is_complex,
            "notices": list(self.notices),
            "degrees": [r.as_dict(self.field) for r in self.rows],
        }


def _check_budget(ctx: NFContext, n: int, kind: str, budget: int):
    if ctx.dim(n, kind) > budget:
        raise BudgetExceeded(f"dim C^{n} ({kind}) = {ctx.dim(n, kind)} exceeds the budget {budget}")


def _vector(c, n: int, kind: str, ctx: NFContext) -> np.ndarray:
    if isinstance(c, (Cochain, ConeCochain)):
        c = c.vector()
    vec = ctx.field.array(np.asarray(c, dtype=object).reshape(-1))
    if len(vec) != ctx.dim(n, kind):
        raise ShapeMismatch(f"cochain has {len(vec)} coordinates, C^{n} ({kind}) has {ctx.dim(n, kind)}")
    return vec


def rank_of(M: ExactMatrix) -> int:
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    return rref(M).rank


def cohomology(ctx: NFContext, kind: str, max_degree: int, representatives: bool = False,
               budget: int = DEFAULT_BUDGET) -> CohomologyTable:
    """Dimensions ``dim H^n = dim ker d^n - rank d^(n-1)`` for ``n <= max_degree``."""
    if kind not in KINDS:
        raise ValueError(f"unknown complex {kind!r}")
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    table = CohomologyTable(kind, ctx.field)
    start = 0
    if not ctx.unital:
        start = 1
        table.notices.append("semigroup has no unit: degree 0 omitted, complex starts at C^1")
    for n in range(start, max_degree + 1):
        _check_budget(ctx, n + 1, kind, budget)
    prev_rank = 0
    for n in range(start, max_degree + 1):
        D = differential_matrix(n, kind, ctx)
        red = rref(D) if D.shape[0] and D.shape[1] else None
        r = red.rank if red is not None else 0
        dim = ctx.dim(n, kind)
        ker = dim - r
        prev = differential_matrix(n - 1, kind, ctx) if n > start else None
        sq = True if prev is None else (D @ prev).is_zero()
        row = DegreeRow(n, dim, r, ker, ker - prev_rank, sq)
        if representatives:
            row.representatives = _representatives(ctx, D, red, prev)
        table.rows.append(row)
        prev_rank = r
    return table


def _representatives(ctx, D, red, prev) -> list:
    """Kernel vectors of ``D`` that complete a basis of ``im prev`` to ``ker D``."""
    dim = D.shape[1]
    if red is None:
        kernel = [np.eye(dim, dtype=object)[i] for i in range(dim)]
        kernel = [ctx.field.array(v) for v in kernel]
    else:
        kernel = red.kernel_basis()
    if not kernel:
        return []
    K = columns_matrix(ctx.field, kernel, dim)
    if prev is None or prev.shape[1] == 0:
        return kernel
    joint = ExactMatrix.block(ctx.field, [[prev, K]])
    piv = rref(joint).pivots
    nb = prev.shape[1]
    return [kernel[int(p) - nb] for p in piv if p >= nb]


def _require_degree(ctx: NFContext, n: int, kind: str):
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n == 0 and not ctx.unital:
        raise NoUnit("degree-0 cochains need a unital semigroup")


def is_cocycle(c, n: int, kind: str, ctx: NFContext) -> bool:
    _require_degree(ctx, n, kind)
    vec = _vector(c, n, kind, ctx)
    return ctx.field.is_zero_array(differential_matrix(n, kind, ctx).apply(vec))


def is_coboundary(c, n: int, kind: str, ctx: NFContext) -> np.ndarray:
    """Return a primitive ``b`` with ``d b = c``; raises ``NoSolution`` otherwise."""
    _require_degree(ctx, n, kind)
    vec = _vector(c, n, kind, ctx)
    if n == 0:
        if ctx.field.is_zero_array(vec):
            return ctx.field.zeros(0)
        raise NoSolution("a nonzero degree-0 cochain is never a coboundary")
    D = differential_matrix(n - 1, kind, ctx)
    if D.shape[1] == 0:
        if ctx.field.is_zero_array(vec):
            return ctx.field.zeros(0)
        raise NoSolution("no cochains below this degree")
    return solve(D, vec, ctx.field)


def primitive_without_nf_part(prim, ctx: NFContext):
    """Turn a degree-1 cone primitive ``(g1, g0)`` into ``(g1 + delta g0, 0)``.

    Both have the same image because ``d^1 d^0 = 0``.  Returns the
    ``C^1_Alg`` coordinates and whether an adjustment was needed.
    """
    a, b = ctx.split(1)
    prim = np.asarray(prim, dtype=object).reshape(-1)
    gamma = prim[:a].copy()
    g0 = prim[a:]
    if b == 0 or ctx.field.is_zero_array(g0):
        return gamma, False
    gamma = ctx.field.reduce(gamma + differential_matrix(0, "alg", ctx).apply(g0))
    return gamma, True


def apply_differential(c, n: int, kind: str, ctx: NFContext) -> np.ndarray:
    return differential_matrix(n, kind, ctx).apply(_vector(c, n, kind, ctx))


# --------------------------------------------------------------------------
# long exact sequence


def inclusion_matrix(n: int, ctx: NFContext) -> ExactMatrix:
    """``C^(n-1)_NF -> C^n_NFA``, ``g -> (0, g)``."""
    a, b = ctx.split(n)
    idx = np.arange(b, dtype=np.int64)
    vals = np.empty(b, dtype=object)
    vals.fill(1)
    return ExactMatrix(ctx.field, (a + b, b), idx + a, idx, vals)


def projection_matrix(n: int, ctx: NFContext) -> ExactMatrix:
    """``C^n_NFA -> C^n_Alg``, ``(f, g) -> f``."""
    a, b = ctx.split(n)
    idx = np.arange(a, dtype=np.int64)
    vals = np.empty(a, dtype=object)
    vals.fill(1)
    return ExactMatrix(ctx.field, (a, a + b), idx, idx, vals)


def connecting_matrix(n: int, ctx: NFContext) -> ExactMatrix:
    """``C^n_Alg -> C^n_NF`` given by ``-phi`` as in the cone differential."""
    if ctx.alg.dim(n) == 0:
        return ExactMatrix(ctx.field, (0, 0))
    return -phi_matrix(n, ctx)


class _Spaces:
    """Differentials and maps, optionally conjugated by basis permutations."""

    def __init__(self, ctx: NFContext, seed=None):
        self.ctx = ctx
        self.rng = None if seed is None else np.random.default_rng(seed)
        self._perm = {}
        self._memo = {}

    def perm(self, kind, n):
        key = (kind, n)
        if key not in self._perm:
            size = self.ctx.dim(n, kind) if n >= 0 else 0
            self._perm[key] = (np.arange(size) if self.rng is None else self.rng.permutation(size)).astype(np.int64)
        return self._perm[key]

    def _conj(self, M: ExactMatrix, out_key, in_key):
        po, pi = self.perm(*out_key), self.perm(*in_key)
        return ExactMatrix(M.field, M.shape, po[M.rows], pi[M.cols], M.vals)

    def d(self, kind, n):
        key = ("d", kind, n)
        if key not in self._memo:
            M = differential_matrix(n, kind, self.ctx)
            self._memo[key] = self._conj(M, (kind, n + 1), (kind, n))
        return self._memo[key]

    def Z(self, kind, n):
        key = ("Z", kind, n)
        if key not in self._memo:
            size = self.ctx.dim(n, kind) if n >= 0 else 0
            D = self.d(kind, n)
            if size == 0:
                basis = []
            elif D.shape[0] == 0:
                basis = [self.ctx.field.array(np.eye(size, dtype=np.int64)[i]) for i in range(size)]
            else:
                basis = rref(D).kernel_basis()
            self._memo[key] = columns_matrix(self.ctx.field, basis, size)
        return self._memo[key]

    def B(self, kind, n):
        return self.d(kind, n - 1)

    def incl(self, n):
        return self._conj(inclusion_matrix(n, self.ctx), ("nfa", n), ("nf", n - 1))

    def proj(self, n):
        return self._conj(projection_matrix(n, self.ctx), ("alg", n), ("nfa", n))

    def conn(self, n):
        return self._conj(connecting_matrix(n, self.ctx), ("nf", n), ("alg", n))


def _hstack(fld, size, mats):
    mats = [m for m in mats if m.shape[1]]
    if not mats:
        return ExactMatrix(fld, (size, 0))
    return ExactMatrix.block(fld, [mats]) if len(mats) > 1 else mats[0]


def _induced_rank(fld, fZ: ExactMatrix, B_target: ExactMatrix, size: int) -> int:
    rb = rank_of(B_target)
    return rank_of(_hstack(fld, size, [B_target, fZ])) - rb


def les_check(ctx: NFContext, max_degree: int, shuffle_seed=None) -> dict:
    """Exactness of ``H^(n-1)_NF -> H^n_NFA -> H^n_Alg -> H^n_NF -> H^(n+1)_NFA``.

    At each slot ``X -f-> Y -g-> W`` two facts are checked with exact ranks:
    ``g(f(Z_X))`` lies in ``B_W`` (image inside kernel) and
    ``rank f* = dim H_Y - rank g*`` (equal dimensions).
    """
    fld = ctx.field
    sp = _Spaces(ctx, shuffle_seed)
    start = 0 if ctx.unital else 1

    def dim_h(kind, n):
        return sp.Z(kind, n).shape[1] - rank_of(sp.B(kind, n))

    def size(kind, n):
        return ctx.dim(n, kind) if n >= 0 else 0

    complex_ok = {}
    for kind in KINDS:
        ok = True
        for n in range(start, max_degree + 1):
            prev = sp.d(kind, n - 1)
            if prev.shape[1] and not (sp.d(kind, n) @ prev).is_zero():
                ok = False
        complex_ok[kind] = ok

    slots = []

    def slot(name, n, X, f, Y, g, W):
        (kx, nx), (ky, ny), (kw, nw) = X, Y, W
        ZX, ZY = sp.Z(kx, nx), sp.Z(ky, ny)
        BY, BW = sp.B(ky, ny), sp.B(kw, nw)
        fZ = f @ ZX if ZX.shape[1] else ExactMatrix(fld, (size(ky, ny), 0))
        gfZ = g @ fZ if fZ.shape[1] else ExactMatrix(fld, (size(kw, nw), 0))
        gZ = g @ ZY if ZY.shape[1] else ExactMatrix(fld, (size(kw, nw), 0))
        contained = rank_of(_hstack(fld, size(kw, nw), [BW, gfZ])) == rank_of(BW)
        r_f = _induced_rank(fld, fZ, BY, size(ky, ny))
        r_g = _induced_rank(fld, gZ, BW, size(kw, nw))
        hy = dim_h(ky, ny)
        exact = contained and r_f == hy - r_g
        slots.append({
            "slot": name,
            "degree": n,
            "dim_H": hy,
            "rank_in": r_f,
            "rank_out": r_g,
            "image_in_kernel": contained,
            "exact": exact,
        })

    for n in range(start, max_degree + 1):
        slot(f"H^{n}_NFA", n, ("nf", n - 1), sp.incl(n), ("nfa", n), sp.proj(n), ("alg", n))
        slot(f"H^{n}_Alg", n, ("nfa", n), sp.proj(n), ("alg", n), sp.conn(n), ("nf", n))
        slot(f"H^{n}_NF", n, ("alg", n), sp.conn(n), ("nf", n), sp.incl(n + 1), ("nfa", n + 1))
    verdict = all(s["exact"] for s in slots) and all(complex_ok.values())
    return {
        "verdict": verdict,
        "complexes": complex_ok,
        "max_degree": max_degree,
        "start_degree": start,
        "shuffled": shuffle_seed is not None,
        "slots": slots,
    }

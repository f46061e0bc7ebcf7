"""Cochain spaces and the three differentials.

A degree-``n`` cochain is stored as a tensor of shape
``(k,)*n + (d,)*n + (m,)``: Omega-tuple, input basis tuple, output index.
C-order flattening gives the basis order used everywhere (lexicographic in
the Omega-tuple, then the inputs, then the output).

Sign convention for the Hochschild differential (``n >= 1``)::

    (df)(u0..un) = (-1)^(n+1) u0 . f(u1..un)
                 + sum_i (-1)^(n-i+1) f(.., u_{i-1} u_i, ..)
                 + f(u0..u_{n-1}) . un

and in degree 0 ``(dm)_w(a) = a ._{w,1} m - m ._{1,w} a`` (needs a unit).

Each differential has two independent evaluation paths: a direct tensor
contraction on a given cochain (``hochschild_delta``, ``nf_partial``,
``phi``) and an assembled sparse matrix built by index enumeration
(``delta_matrix``, ``phi_matrix``, ``cone_matrix``).  The test-suite checks
they agree.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .algebra import (
    NFBimodule,
    OmegaAlgebra,
    OperatorFamily,
    Semigroup,
    validate_nf_bimodule,
    validate_nijenhuis_family,
)
from .derived import induced_actions, star_tensor
from .errors import NotNFBimodule, NotNijenhuis, ShapeMismatch
from .field import Field
from .linalg import ExactMatrix

KINDS = ("alg", "nf", "nfa")
NF_VARIANTS = ("star", "corrected")
MAX_PHI_DEGREE = 12

_OM = string.ascii_uppercase[:12]
_IN = string.ascii_lowercase[:12]


# --------------------------------------------------------------------------
# data


@dataclass(frozen=True, eq=False)
class HochschildData:
    """Everything a Hochschild complex needs: ``mu`` and the two actions."""

    S: Semigroup
    field: Field
    mu: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def k(self):
        return self.S.size

    @property
    def d(self):
        return self.mu.shape[-1]

    @property
    def m(self):
        return self.left.shape[-1]

    def shape(self, n: int) -> tuple:
        return (self.k,) * n + (self.d,) * n + (self.m,)

    def dim(self, n: int) -> int:
        if n < 0:
            return 0
        if n == 0 and self.S.unit is None:
            return 0
        return int(np.prod(self.shape(n)))


@dataclass(frozen=True, eq=False)
class Cochain:
    degree: int
    data: np.ndarray

    def vector(self) -> np.ndarray:
        return self.data.reshape(-1)

    def is_zero(self) -> bool:
        return not any(v != 0 for v in self.vector())


@dataclass(frozen=True, eq=False)
class ConeCochain:
    """Degree-``n`` mapping-cone cochain: ``(alg, nf)`` with ``nf`` of degree ``n-1``."""

    degree: int
    alg: Cochain
    nf: Cochain | None = None

    def vector(self) -> np.ndarray:
        if self.nf is None:
            return self.alg.vector()
        return np.concatenate([self.alg.vector(), self.nf.vector()])

    def is_zero(self) -> bool:
        return self.alg.is_zero() and (self.nf is None or self.nf.is_zero())


class NFContext:
    """A Nijenhuis family algebra with a Nijenhuis family bimodule.

    Holds the Hochschild data of ``(A, M)`` and of the star algebra with the
    induced actions, and memoises differential matrices.

    ``nf_variant`` selects the differential of the Nijenhuis complex:
    ``"star"`` is the Hochschild differential of the star algebra with the
    induced actions; ``"corrected"`` additionally subtracts ``N_M`` applied
    to the inner-product terms taken over the original ``mu``.  Only the
    corrected variant makes the subset-sum map a chain map in general.
    """

    def __init__(self, S: Semigroup, A: OmegaAlgebra, N: OperatorFamily, M: NFBimodule,
                 validate: bool = True, nf_variant: str = "star"):
        if nf_variant not in NF_VARIANTS:
            raise ValueError(f"unknown Nijenhuis differential variant {nf_variant!r}")
        A.check_shape(S)
        M.check_shape(S, A)
        N.check_shape(S.size, A.dim, A.dim, "Nijenhuis family")
        if validate:
            rep = validate_nijenhuis_family(A, S, N)
            if not rep.verdict:
                raise NotNijenhuis("operator family is not Nijenhuis", witness=rep.violations[0])
            rep = validate_nf_bimodule(A, S, N, M)
            if not rep.verdict:
                raise NotNFBimodule("module is not a Nijenhuis family bimodule", witness=rep.violations[0])
        self.S, self.A, self.N, self.M = S, A, N, M
        self.field = A.field
        self.alg = HochschildData(S, A.field, A.mu, M.left, M.right)
        sl, sr = induced_actions(A, S, N, M)
        self.star_mu = star_tensor(A, S, N)
        self.nf = HochschildData(S, A.field, self.star_mu, sl, sr)
        self.nf_variant = nf_variant
        self._cache: dict = {}

    def with_variant(self, nf_variant: str) -> "NFContext":
        return NFContext(self.S, self.A, self.N, self.M, validate=False, nf_variant=nf_variant)

    @property
    def k(self):
        return self.S.size

    @property
    def d(self):
        return self.A.dim

    @property
    def m(self):
        return self.M.dim

    @property
    def unital(self) -> bool:
        return self.S.unit is not None

    def data(self, kind: str) -> HochschildData:
        if kind == "alg":
            return self.alg
        if kind == "nf":
            return self.nf
        raise ValueError(f"no Hochschild data for complex {kind!r}")

    def dim(self, n: int, kind: str) -> int:
        if kind in ("alg", "nf"):
            return self.alg.dim(n)
        if kind == "nfa":
            return self.alg.dim(n) + self.alg.dim(n - 1)
        raise ValueError(f"unknown complex {kind!r}")

    def split(self, n: int) -> tuple:
        """Sizes of the ``alg`` and ``nf`` blocks of ``C^n_NFA``."""
        return self.alg.dim(n), self.alg.dim(n - 1)

    def cochain(self, n: int, vec) -> Cochain:
        return Cochain(n, np.asarray(vec, dtype=object).reshape(self.alg.shape(n)))

    def cone_cochain(self, n: int, vec) -> ConeCochain:
        vec = np.asarray(vec, dtype=object).reshape(-1)
        a, b = self.split(n)
        if len(vec) != a + b:
            raise ShapeMismatch(f"cone cochain of degree {n} needs {a + b} entries, got {len(vec)}")
        alg = self.cochain(n, vec[:a]) if a else Cochain(n, self.field.zeros(self.alg.shape(n)))
        if n == 0:
            return ConeCochain(0, alg, None)
        nf = self.cochain(n - 1, vec[a:]) if b else Cochain(n - 1, self.field.zeros(self.alg.shape(n - 1)))
        return ConeCochain(n, alg, nf)

    def zero_cochain(self, n: int) -> Cochain:
        return Cochain(n, self.field.zeros(self.alg.shape(n)))

    def cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


def as_tensor(f, h: HochschildData, n: int) -> np.ndarray:
    data = f.data if isinstance(f, Cochain) else f
    data = np.asarray(data, dtype=object)
    if data.shape != h.shape(n):
        try:
            data = data.reshape(h.shape(n))
        except ValueError:
            raise ShapeMismatch(f"cochain has shape {data.shape}, expected {h.shape(n)}") from None
    return data


def _omega_products(S: Semigroup, n: int) -> np.ndarray:
    """``P[w1..wn] = w1 w2 .. wn`` as an integer array of shape ``(k,)*n``."""
    grid = np.indices((S.size,) * n)
    return S.prod_array(np.moveaxis(grid, 0, -1))


# --------------------------------------------------------------------------
# direct tensor evaluation


def _inner_sum(n: int, F: np.ndarray, S: Semigroup, mu: np.ndarray) -> np.ndarray:
    """Signed sum of the terms that multiply two neighbouring inputs."""
    k = S.size
    W = _OM[: n + 1]
    U = _IN[: n + 1]
    out = W + U + "q"
    total = 0
    grid = np.indices((k,) * (n + 1))
    for i in range(1, n + 1):
        idx = [grid[j] for j in range(i - 1)] + [S.table[grid[i - 1], grid[i]]] + [grid[j] for j in range(i + 1, n + 1)]
        Fsel = F[tuple(idx)]
        fin = U[: i - 1] + "l" + U[i + 1:]
        t = np.einsum(f"{W[i - 1]}{W[i]}{U[i - 1]}{U[i]}l,{W}{fin}q->{out}", mu, Fsel)
        total = total + (t if (n - i + 1) % 2 == 0 else -t)
    return total


def _delta_direct(n: int, F: np.ndarray, h: HochschildData) -> np.ndarray:
    fld, S = h.field, h.S
    if n == 0:
        u = h.S.require_unit()
        t = np.einsum("Aaoq,o->Aaq", h.left[:, u], F) - np.einsum("Aoaq,o->Aaq", h.right[u, :], F)
        return fld.reduce(t)
    W = _OM[: n + 1]
    U = _IN[: n + 1]
    out = W + U + "q"
    P = _omega_products(S, n)
    # left action term
    t = np.einsum(f"{W}{U[0]}xq,{W[1:]}{U[1:]}x->{out}", h.left[:, P], F)
    total = t if (n + 1) % 2 == 0 else -t
    total = total + _inner_sum(n, F, S, h.mu)
    # right action term
    total = total + np.einsum(f"{W[:n]}{U[:n]}x,{W[:n]}{W[n]}x{U[n]}q->{out}", F, h.right[P])
    return fld.reduce(total)


def _output_correction(n: int, F: np.ndarray, ctx) -> np.ndarray:
    """``N_M`` (at the full product index) applied to the inner terms over ``mu``."""
    W = _OM[: n + 1]
    U = _IN[: n + 1]
    inner = _inner_sum(n, F, ctx.S, ctx.A.mu)
    return np.einsum(f"{W}qo,{W}{U}o->{W}{U}q", ctx.M.nm.maps[_omega_products(ctx.S, n + 1)], inner)


def _check_degree(n: int, h: HochschildData):
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n == 0:
        h.S.require_unit()


def hochschild_delta(n: int, f, ctx) -> Cochain:
    """Hochschild differential of the Omega-algebra with bimodule coefficients."""
    h = ctx.alg if isinstance(ctx, NFContext) else ctx
    _check_degree(n, h)
    return Cochain(n + 1, _delta_direct(n, as_tensor(f, h, n), h))


def nf_partial(n: int, g, ctx: NFContext) -> Cochain:
    """Hochschild differential of the star algebra with the induced actions."""
    _check_degree(n, ctx.nf)
    G = as_tensor(g, ctx.nf, n)
    out = _delta_direct(n, G, ctx.nf)
    if ctx.nf_variant == "corrected" and n >= 1:
        out = ctx.field.reduce(out - _output_correction(n, G, ctx))
    return Cochain(n + 1, out)


def _explicit_parts(n: int, ctx: NFContext) -> dict:
    """Cochain-independent pieces of the explicit expansion, cached per degree."""
    def build():
        S, k = ctx.S, ctx.k
        mu, nmap, nm = ctx.A.mu, ctx.N.maps, ctx.M.nm.maps
        Pall = _omega_products(S, n + 1)
        Prest = _omega_products(S, n)
        grid = np.indices((k,) * (n + 1))
        slots = []
        for i in range(1, n + 1):
            idx = tuple([grid[j] for j in range(i - 1)] + [S.table[grid[i - 1], grid[i]]]
                        + [grid[j] for j in range(i + 1, n + 1)])
            # u * v = u . N_b(v) + N_a(u) . v - N_ab(u . v)
            star = (np.einsum("abiyl,byj->abijl", mu, nmap)
                    + np.einsum("axi,abxjl->abijl", nmap, mu)
                    - np.einsum("ablp,abijp->abijl", nmap[S.table], mu))
            slots.append((idx, ctx.field.reduce(star)))
        W, U = _OM[: n + 1], _IN[: n + 1]
        lsel, rsel = ctx.M.left[:, Prest], ctx.M.right[Prest]
        # N_{a1}(u1) . x and x . N_{a_{n+1}}(u_{n+1}) as bilinear blocks
        nl = np.einsum(f"{W[0]}p{U[0]},{W}pxq->{W}{U[0]}xq", nmap, lsel)
        nr = np.einsum(f"{W[n]}p{U[n]},{W[:n]}{W[n]}xpq->{W}x{U[n]}q", nmap, rsel)
        return {"lsel": lsel, "rsel": rsel, "nl": nl, "nr": nr, "nmP": nm[Pall], "slots": slots}
    return ctx.cached(("explicit", n), build)


def nf_partial_explicit(n: int, g, ctx: NFContext) -> Cochain:
    """Term-by-term expansion in the original ``mu``, ``N`` and actions.

    The expansion uses the standard Hochschild signs (leading term +1,
    inner terms ``(-1)^i``, trailing term ``(-1)^(n+1)``); it is multiplied
    by ``(-1)^(n+1)`` to match the convention of ``hochschild_delta``.
    """
    if n < 1:
        raise ValueError("explicit expansion needs n >= 1")
    fld = ctx.field
    G = as_tensor(g, ctx.alg, n)
    parts = _explicit_parts(n, ctx)
    lsel, rsel, nmP = parts["lsel"], parts["rsel"], parts["nmP"]
    W = _OM[: n + 1]
    U = _IN[: n + 1]
    out = W + U + "q"
    # N_{a1}(u1) . g(u2..)
    first = np.einsum(f"{W}{U[0]}xq,{W[1:]}{U[1:]}x->{out}", parts["nl"], G)
    # - N_M(u1 . g(u2..)), N_M indexed by the full product
    inner = np.einsum(f"{W}{U[0]}xy,{W[1:]}{U[1:]}x->{W}{U}y", lsel, G)
    second = np.einsum(f"{W}qy,{out[:-1]}y->{out}", nmP, inner)
    total = first - second
    for i, (idx, star) in enumerate(parts["slots"], start=1):
        fin = U[: i - 1] + "l" + U[i + 1:]
        a, b, ua, ub = W[i - 1], W[i], U[i - 1], U[i]
        t = np.einsum(f"{a}{b}{ua}{ub}l,{W}{fin}q->{out}", star, G[idx])
        total = total + (t if i % 2 == 0 else -t)
    # (-1)^(n+1) (g(..) . N(u_{n+1}) - N_M(g(..) . u_{n+1}))
    last = np.einsum(f"{W[:n]}{U[:n]}x,{W}x{U[n]}q->{out}", G, parts["nr"])
    inner = np.einsum(f"{W[:n]}{U[:n]}x,{W[:n]}{W[n]}x{U[n]}y->{W}{U}y", G, rsel)
    last = last - np.einsum(f"{W}qy,{out[:-1]}y->{out}", nmP, inner)
    total = total + (last if (n + 1) % 2 == 0 else -last)
    if n % 2 == 0:
        total = -total
    if ctx.nf_variant == "corrected":
        total = total - _output_correction(n, G, ctx)
    return Cochain(n + 1, fld.reduce(total))


def phi(n: int, f, ctx: NFContext) -> Cochain:
    """Chain map from the Hochschild complex to the Nijenhuis complex.

    Sum over subsets of input positions: ``N`` is applied at the chosen
    positions and ``-N_M`` once per unchosen position at the output.
    """
    if n > MAX_PHI_DEGREE:
        raise ValueError(f"subset expansion capped at degree {MAX_PHI_DEGREE}")
    fld = ctx.field
    F = as_tensor(f, ctx.alg, n)
    if n == 0:
        return Cochain(0, F.copy())
    W = _OM[:n]
    U = _IN[:n]
    P = _omega_products(ctx.S, n)
    nm = ctx.M.nm.maps
    # powers of N_M at the product index
    powers = [np.broadcast_to(fld.eye(ctx.m), P.shape + (ctx.m, ctx.m))]
    for _ in range(n):
        powers.append(fld.reduce(np.einsum(f"{W}qp,{W}po->{W}qo", nm[P], powers[-1])))
    total = fld.zeros(F.shape)
    for r in range(n + 1):
        for subset in combinations(range(n), r):
            G = F
            for j in subset:
                src = U[:j] + "v" + U[j + 1:]
                G = np.einsum(f"{W[j]}v{U[j]},{W}{src}o->{W}{U}o", ctx.N.maps, G)
            G = np.einsum(f"{W}qo,{W}{U}o->{W}{U}q", powers[n - r], G)
            total = total + (G if (n - r) % 2 == 0 else -G)
    return Cochain(n, fld.reduce(total))


def cone_differential(n: int, c: ConeCochain, ctx: NFContext) -> ConeCochain:
    """``d(f, g) = (delta f, -partial g - phi f)``; ``d(m) = (delta m, -m)``."""
    fld = ctx.field
    if n == 0:
        ctx.S.require_unit()
        f = c.alg
        return ConeCochain(1, hochschild_delta(0, f, ctx), Cochain(0, fld.reduce(-as_tensor(f, ctx.alg, 0))))
    df = hochschild_delta(n, c.alg, ctx)
    pf = phi(n, c.alg, ctx).data
    if n == 1 and not ctx.unital:
        dg = fld.zeros(pf.shape)
    else:
        dg = nf_partial(n - 1, c.nf, ctx).data
    return ConeCochain(n + 1, df, Cochain(n, fld.reduce(-dg - pf)))


# --------------------------------------------------------------------------
# matrix assembly by index enumeration


def _emit(field, shape, rows, cols, vals):
    rows = rows.reshape(-1)
    cols = cols.reshape(-1)
    vals = np.asarray(vals, dtype=object).reshape(-1)
    keep = np.asarray(vals != 0, dtype=bool)
    return ExactMatrix(field, shape, rows[keep], cols[keep], vals[keep])


def delta_matrix(n: int, h: HochschildData) -> ExactMatrix:
    """Matrix of the Hochschild differential ``C^n -> C^{n+1}``."""
    fld, S = h.field, h.S
    k, d, m = h.k, h.d, h.m
    shape = (h.dim(n + 1), h.dim(n))
    if n == 0:
        if S.unit is None:
            return ExactMatrix(fld, shape)
        u = S.unit
        w, a, o, q = np.indices((k, d, m, m))
        vals = fld.reduce(h.left[w, u, a, o, q] - h.right[u, w, o, a, q])
        rows = np.ravel_multi_index((w, a, q), h.shape(1))
        return _emit(fld, shape, rows, o, vals)
    out_shape, in_shape = h.shape(n + 1), h.shape(n)
    parts = []
    # left action term
    g = np.indices((k,) * (n + 1) + (d,) * (n + 1) + (m, m))
    Wg, Ug, o, q = g[: n + 1], g[n + 1: 2 * n + 2], g[-2], g[-1]
    P = S.prod_array(np.stack(Wg[1:], axis=-1))
    vals = h.left[Wg[0], P, Ug[0], o, q]
    if (n + 1) % 2:
        vals = -vals
    rows = np.ravel_multi_index((*Wg, *Ug, q), out_shape)
    cols = np.ravel_multi_index((*Wg[1:], *Ug[1:], o), in_shape)
    parts.append((rows, cols, vals))
    # inner products
    g = np.indices((k,) * (n + 1) + (d,) * (n + 2) + (m,))
    Wg, Ug, l, o = g[: n + 1], g[n + 1: 2 * n + 2], g[-2], g[-1]
    for i in range(1, n + 1):
        vals = h.mu[Wg[i - 1], Wg[i], Ug[i - 1], Ug[i], l]
        if (n - i + 1) % 2:
            vals = -vals
        merged = S.table[Wg[i - 1], Wg[i]]
        cw = list(Wg[: i - 1]) + [merged] + list(Wg[i + 1:])
        cu = list(Ug[: i - 1]) + [l] + list(Ug[i + 1:])
        rows = np.ravel_multi_index((*Wg, *Ug, o), out_shape)
        cols = np.ravel_multi_index((*cw, *cu, o), in_shape)
        parts.append((rows, cols, vals))
    # right action term
    g = np.indices((k,) * (n + 1) + (d,) * (n + 1) + (m, m))
    Wg, Ug, o, q = g[: n + 1], g[n + 1: 2 * n + 2], g[-2], g[-1]
    P = S.prod_array(np.stack(Wg[:n], axis=-1))
    vals = h.right[P, Wg[n], o, Ug[n], q]
    rows = np.ravel_multi_index((*Wg, *Ug, q), out_shape)
    cols = np.ravel_multi_index((*Wg[:n], *Ug[:n], o), in_shape)
    parts.append((rows, cols, vals))
    rows = np.concatenate([p[0].reshape(-1) for p in parts])
    cols = np.concatenate([p[1].reshape(-1) for p in parts])
    vals = np.concatenate([np.asarray(p[2], dtype=object).reshape(-1) for p in parts])
    return _emit(fld, shape, rows, cols, vals)


def _slot_operator(n: int, j: int, ctx: NFContext) -> ExactMatrix:
    """Precompose input slot ``j`` with ``N_{w_j}``."""
    k, d, m = ctx.k, ctx.d, ctx.m
    sh = ctx.alg.shape(n)
    g = np.indices((k,) * n + (d,) * n + (d, m))
    Wg, Ug, v, o = g[:n], g[n: 2 * n], g[-2], g[-1]
    vals = ctx.N.maps[Wg[j], v, Ug[j]]
    rows = np.ravel_multi_index((*Wg, *Ug, o), sh)
    cu = list(Ug)
    cu[j] = v
    cols = np.ravel_multi_index((*Wg, *cu, o), sh)
    size = ctx.alg.dim(n)
    return _emit(ctx.field, (size, size), rows, cols, vals)


def _output_operator(n: int, ctx: NFContext) -> ExactMatrix:
    """Postcompose with ``N_M`` at the product index."""
    k, d, m = ctx.k, ctx.d, ctx.m
    sh = ctx.alg.shape(n)
    g = np.indices((k,) * n + (d,) * n + (m, m))
    Wg, Ug, q, o = g[:n], g[n: 2 * n], g[-2], g[-1]
    P = ctx.S.prod_array(np.stack(Wg, axis=-1))
    vals = ctx.M.nm.maps[P, q, o]
    rows = np.ravel_multi_index((*Wg, *Ug, q), sh)
    cols = np.ravel_multi_index((*Wg, *Ug, o), sh)
    size = ctx.alg.dim(n)
    return _emit(ctx.field, (size, size), rows, cols, vals)


def phi_matrix(n: int, ctx: NFContext) -> ExactMatrix:
    """Matrix of the chain map in degree ``n`` as a product of commuting factors."""
    def build():
        size = ctx.alg.dim(n)
        if n == 0:
            return ExactMatrix.identity(ctx.field, size)
        L = _output_operator(n, ctx)
        out = None
        for j in range(n):
            factor = _slot_operator(n, j, ctx) - L
            out = factor if out is None else out @ factor
        return out
    return ctx.cached(("phi", n), build)


def differential_matrix(n: int, kind: str, ctx: NFContext) -> ExactMatrix:
    """Matrix of the differential of complex ``kind`` from degree ``n``."""
    if kind not in KINDS:
        raise ValueError(f"unknown complex {kind!r}")
    if n < 0:
        return ExactMatrix(ctx.field, (ctx.dim(0, kind), 0))
    if kind == "alg":
        return ctx.cached(("alg", n), lambda: delta_matrix(n, ctx.alg))
    if kind == "nf":
        return ctx.cached(("nf", n), lambda: nf_matrix(n, ctx))
    return ctx.cached(("nfa", n), lambda: cone_matrix(n, ctx))


def nf_matrix(n: int, ctx: NFContext) -> ExactMatrix:
    base = delta_matrix(n, ctx.nf)
    if ctx.nf_variant != "corrected" or n < 1:
        return base
    z = ctx.field.zeros(ctx.M.left.shape)
    inner = delta_matrix(n, HochschildData(ctx.S, ctx.field, ctx.A.mu, z, ctx.field.zeros(ctx.M.right.shape)))
    return base - _output_operator(n + 1, ctx) @ inner


def cone_matrix(n: int, ctx: NFContext) -> ExactMatrix:
    fld = ctx.field
    delta = differential_matrix(n, "alg", ctx)
    a1, b1 = ctx.split(n + 1)
    a0, b0 = ctx.split(n)
    if n == 0:
        minus_id = -ExactMatrix.identity(fld, a0) if a0 else ExactMatrix(fld, (b1, 0))
        return ExactMatrix.block(fld, [[delta], [minus_id]])
    P = -phi_matrix(n, ctx)
    if b1 != P.shape[0]:  # pragma: no cover - defensive
        raise ShapeMismatch("cone block sizes disagree")
    blocks = [[delta], [P]]
    if b0:
        dn = -differential_matrix(n - 1, "nf", ctx)
        blocks = [[delta, ExactMatrix(fld, (a1, b0))], [P, dn]]
    return ExactMatrix.block(fld, blocks)


def basis_cochains(n: int, kind: str, ctx: NFContext) -> list:
    """Ordered basis labels ``(part, omega_tuple, input_tuple, output)``."""
    if kind not in KINDS:
        raise ValueError(f"unknown complex {kind!r}")

    def plain(deg, part):
        if ctx.alg.dim(deg) == 0:
            return []
        labels = ctx.S.labels
        out = []
        for idx in np.ndindex(*ctx.alg.shape(deg)):
            w = tuple(labels[i] for i in idx[:deg])
            out.append((part, w, tuple(int(i) for i in idx[deg: 2 * deg]), int(idx[-1])))
        return out

    if kind in ("alg", "nf"):
        return plain(n, kind)
    return plain(n, "alg") + (plain(n - 1, "nf") if n >= 1 else [])

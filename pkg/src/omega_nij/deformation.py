"""Truncated one-parameter deformations of a Nijenhuis family algebra.

A deformation of order ``K`` is a list of structure tensors
``mu_0..mu_K`` (``mu_0 = mu``) and operator families ``N_0..N_K``
(``N_0 = N``).  Every check works coefficient-wise on ``t^n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .algebra import DEFAULT_WITNESS_CAP, _witnesses
from .cochains import Cochain, ConeCochain, NFContext, differential_matrix
from .cohomology import is_coboundary, primitive_without_nf_part
from .errors import NoSolution, NotCoboundary, OrderMismatch, OrderTooLow, ShapeMismatch


@dataclass(frozen=True, eq=False)
class TruncatedDeformation:
    order: int
    mu_coeffs: tuple
    n_coeffs: tuple

    def __post_init__(self):
        if len(self.mu_coeffs) != self.order + 1 or len(self.n_coeffs) != self.order + 1:
            raise ShapeMismatch("need exactly order + 1 coefficients for mu and N")


@dataclass(frozen=True, eq=False)
class GaugeFamily:
    order: int
    psi_coeffs: tuple

    def __post_init__(self):
        if len(self.psi_coeffs) != self.order + 1:
            raise ShapeMismatch("need exactly order + 1 gauge coefficients")


def _regular(ctx: NFContext):
    if ctx.M.dim != ctx.A.dim or not ctx.field.equal_arrays(ctx.M.left, ctx.A.mu):
        raise ShapeMismatch("deformations live over the regular bimodule context")


def trivial_deformation(ctx: NFContext, order: int = 2) -> TruncatedDeformation:
    fld = ctx.field
    mus = [ctx.A.mu] + [fld.zeros(ctx.A.mu.shape) for _ in range(order)]
    ns = [ctx.N.maps] + [fld.zeros(ctx.N.maps.shape) for _ in range(order)]
    return TruncatedDeformation(order, tuple(mus), tuple(ns))


def make_deformation(ctx: NFContext, mu_higher, n_higher) -> TruncatedDeformation:
    """Deformation with the base instance at order 0 and the given higher terms."""
    fld = ctx.field
    mus = [ctx.A.mu] + [fld.array(m) for m in mu_higher]
    ns = [ctx.N.maps] + [fld.array(x) for x in n_higher]
    if len(mus) != len(ns):
        raise OrderMismatch("mu and N need the same number of coefficients")
    for m in mus:
        if m.shape != ctx.A.mu.shape:
            raise ShapeMismatch(f"mu coefficient has shape {m.shape}")
    for x in ns:
        if x.shape != ctx.N.maps.shape:
            raise ShapeMismatch(f"N coefficient has shape {x.shape}")
    return TruncatedDeformation(len(mus) - 1, tuple(mus), tuple(ns))


def identity_gauge(ctx: NFContext, order: int) -> GaugeFamily:
    fld = ctx.field
    eye = np.stack([fld.eye(ctx.d)] * ctx.k)
    return GaugeFamily(order, tuple([eye] + [fld.zeros(eye.shape) for _ in range(order)]))


def make_gauge(ctx: NFContext, higher) -> GaugeFamily:
    fld = ctx.field
    eye = np.stack([fld.eye(ctx.d)] * ctx.k)
    coeffs = [eye] + [fld.array(h) for h in higher]
    for c in coeffs:
        if c.shape != eye.shape:
            raise ShapeMismatch(f"gauge coefficient has shape {c.shape}")
    return GaugeFamily(len(coeffs) - 1, tuple(coeffs))


# --------------------------------------------------------------------------
# order-by-order equations


def _compositions(n: int, parts: int):
    for c in product(range(n + 1), repeat=parts):
        if sum(c) == n:
            yield c


def order_terms(D: TruncatedDeformation, ctx: NFContext, n: int):
    """Both sides of the ``t^n`` coefficient of associativity and of the Nijenhuis identity."""
    T = ctx.S.table
    fld = ctx.field
    ar = np.arange(ctx.k)
    mus, ns = D.mu_coeffs, D.n_coeffs
    lhs = 0
    rhs = 0
    for i, j in _compositions(n, 2):
        outer_l = mus[i][T[:, :, None], ar[None, None, :]]
        outer_r = mus[i][ar[:, None, None], T[None, :, :]]
        lhs = lhs + np.einsum("abijp,abcplq->abcijlq", mus[j], outer_l)
        rhs = rhs + np.einsum("bcjlp,abcipq->abcijlq", mus[j], outer_r)
    nl = 0
    nr = 0
    for i, j, l in _compositions(n, 3):
        NP = ns[i][T]
        nl = nl + np.einsum("axi,byj,abxyq->abijq", ns[j], ns[l], mus[i])
        nr = nr + np.einsum("abqp,axi,abxjp->abijq", NP, ns[l], mus[j])
        nr = nr + np.einsum("abqp,byj,abiyp->abijq", NP, ns[l], mus[j])
        nr = nr - np.einsum("abqp,abpr,abijr->abijq", NP, ns[j][T], mus[l])
    return fld.reduce(lhs), fld.reduce(rhs), fld.reduce(nl), fld.reduce(nr)


def check_deformation(D: TruncatedDeformation, ctx: NFContext, cap: int = DEFAULT_WITNESS_CAP) -> dict:
    """Check the deformation equations order by order; reports the first failing order."""
    fld = ctx.field
    labels = ctx.S.labels
    orders = []
    first_fail = None
    for n in range(D.order + 1):
        lhs, rhs, nl, nr = order_terms(D, ctx, n)
        assoc = _witnesses("deformed-associativity", fld.reduce(lhs - rhs), lhs, rhs, labels, 3, fld, cap)
        nij = _witnesses("deformed-nijenhuis", fld.reduce(nl - nr), nl, nr, labels, 2, fld, cap)
        ok = assoc.verdict and nij.verdict
        if not ok and first_fail is None:
            first_fail = n
        orders.append({"order": n, "associativity": assoc, "nijenhuis": nij, "verdict": ok})
    return {"verdict": first_fail is None, "first_failure": first_fail, "orders": orders}


def infinitesimal(D: TruncatedDeformation, ctx: NFContext) -> ConeCochain:
    """``(mu_1, N_1)`` as a degree-2 cone cochain."""
    if D.order < 1:
        raise OrderTooLow("the infinitesimal needs order >= 1")
    mu1 = np.asarray(D.mu_coeffs[1], dtype=object)
    n1 = np.transpose(np.asarray(D.n_coeffs[1], dtype=object), (0, 2, 1))
    return ConeCochain(2, Cochain(2, mu1.copy()), Cochain(1, n1.copy()))


# --------------------------------------------------------------------------
# gauge action


def series_inverse(G: GaugeFamily, fld) -> list:
    """Coefficients of the inverse of ``sum psi_j t^j`` modulo ``t^(K+1)``."""
    psi = G.psi_coeffs
    inv = [psi[0]]
    for n in range(1, G.order + 1):
        acc = 0
        for j in range(n):
            acc = acc + np.einsum("wij,wjk->wik", inv[j], psi[n - j])
        inv.append(fld.reduce(-acc))
    return inv


def gauge_transform(D: TruncatedDeformation, G: GaugeFamily, ctx: NFContext) -> TruncatedDeformation:
    """``mu' = psi^-1 mu (psi x psi)`` and ``N' = psi^-1 N psi`` modulo ``t^(K+1)``."""
    if D.order != G.order:
        raise OrderMismatch(f"deformation has order {D.order}, gauge has order {G.order}")
    fld = ctx.field
    T = ctx.S.table
    psi = G.psi_coeffs
    inv = series_inverse(G, fld)
    K = D.order
    mus, ns = [], []
    for n in range(K + 1):
        m_acc = 0
        n_acc = 0
        for a, b, c, e in _compositions(n, 4):
            m_acc = m_acc + np.einsum("ablp,abxyp,axi,byj->abijl", inv[a][T], D.mu_coeffs[b], psi[c], psi[e])
        for a, b, c in _compositions(n, 3):
            n_acc = n_acc + np.einsum("wij,wjk,wkl->wil", inv[a], D.n_coeffs[b], psi[c])
        mus.append(fld.reduce(m_acc))
        ns.append(fld.reduce(n_acc))
    return TruncatedDeformation(K, tuple(mus), tuple(ns))


def deformations_equal(D1: TruncatedDeformation, D2: TruncatedDeformation, fld) -> bool:
    if D1.order != D2.order:
        return False
    return all(fld.equal_arrays(a, b) for a, b in zip(D1.mu_coeffs, D2.mu_coeffs)) and all(
        fld.equal_arrays(a, b) for a, b in zip(D1.n_coeffs, D2.n_coeffs)
    )


def gauge_cochain(psi1, ctx: NFContext) -> np.ndarray:
    """Coordinates of the degree-1 cone cochain ``(psi_1, 0)``."""
    a, b = ctx.split(1)
    vec = ctx.field.zeros(a + b)
    vec[:a] = np.transpose(np.asarray(psi1, dtype=object), (0, 2, 1)).reshape(-1)
    return vec


def psi_from_cochain(vec, ctx: NFContext) -> np.ndarray:
    """Operator family ``(k, d, d)`` from the ``C^1_Alg`` coordinates."""
    a = ctx.split(1)[0]
    arr = np.asarray(vec, dtype=object)[:a].reshape(ctx.k, ctx.d, ctx.m)
    return np.transpose(arr, (0, 2, 1)).copy()


def trivialization_step(D: TruncatedDeformation, ctx: NFContext):
    """One step of the rigidity argument.

    Finds ``psi_1`` with ``d(psi_1, 0) = (mu_1, N_1)`` and returns
    ``(psi_1, D')`` where ``D' = gauge(D, id - psi_1 t)`` has vanishing
    order-1 terms.  Raises ``NotCoboundary`` when no primitive exists.
    """
    _regular(ctx)
    inf = infinitesimal(D, ctx)
    try:
        prim = is_coboundary(inf.vector(), 2, "nfa", ctx)
    except NoSolution:
        raise NotCoboundary("the infinitesimal is not a coboundary") from None
    gamma, adjusted = primitive_without_nf_part(prim, ctx)
    psi1 = psi_from_cochain(gamma, ctx)
    fld = ctx.field
    higher = [fld.reduce(-psi1)] + [fld.zeros(psi1.shape) for _ in range(D.order - 1)]
    G = make_gauge(ctx, higher)
    D2 = gauge_transform(D, G, ctx)
    if not (fld.is_zero_array(D2.mu_coeffs[1]) and fld.is_zero_array(D2.n_coeffs[1])):
        raise NotCoboundary("gauging by the primitive did not clear the order-1 terms")
    return {"psi1": psi1, "deformation": D2, "adjusted_nf_part": adjusted}


def equivalent_at_order_one(D1: TruncatedDeformation, D2: TruncatedDeformation, ctx: NFContext):
    """``psi_1`` with ``inf(D2) - inf(D1) = d(psi_1, 0)``, or ``NotCoboundary``."""
    fld = ctx.field
    diff = fld.reduce(infinitesimal(D2, ctx).vector() - infinitesimal(D1, ctx).vector())
    try:
        prim = is_coboundary(diff, 2, "nfa", ctx)
    except NoSolution:
        raise NotCoboundary("infinitesimals are not cohomologous") from None
    gamma, _ = primitive_without_nf_part(prim, ctx)
    return psi_from_cochain(gamma, ctx)


def apply_d1(psi1, ctx: NFContext) -> np.ndarray:
    return differential_matrix(1, "nfa", ctx).apply(gauge_cochain(psi1, ctx))

"""Small instance generators: classical algebras, operators with prescribed
squares, and an exhaustive search for scaled families over a semigroup.
"""
from __future__ import annotations

from itertools import product

import numpy as np

from .algebra import (
    OmegaAlgebra,
    OperatorFamily,
    Semigroup,
    build_semigroup,
    validate_nijenhuis_family,
    validate_omega_associativity,
)
from .field import QQ, Field

SQUARE_KINDS = ("square-zero", "idempotent", "involution")


def two_element_monoid() -> Semigroup:
    """``{1, e}`` with ``e^2 = e``."""
    return build_semigroup(["1", "e"], [["1", "e"], ["e", "e"]], unit="1")


def left_zero_semigroup() -> Semigroup:
    """``{x, y}`` with ``ab = a``; it has no unit."""
    return build_semigroup(["x", "y"], [["x", "x"], ["y", "y"]])


def poly_mu(D: int, fld: Field = QQ) -> np.ndarray:
    """Structure constants of ``k[x]/(x^D)`` on the basis ``1, x, .., x^(D-1)``."""
    mu = fld.zeros((D, D, D))
    for i in range(D):
        for j in range(D - i):
            mu[i, j, i + j] = 1
    return mu


def upper_triangular_mu(fld: Field = QQ) -> np.ndarray:
    """Upper triangular 2x2 matrices on the basis ``E11, E12, E22``."""
    mu = fld.zeros((3, 3, 3))
    mu[0, 0, 0] = 1
    mu[0, 1, 1] = 1
    mu[1, 2, 1] = 1
    mu[2, 2, 2] = 1
    return mu


def product_mu(d: int, fld: Field = QQ) -> np.ndarray:
    """``k x .. x k`` (``d`` orthogonal idempotents)."""
    mu = fld.zeros((d, d, d))
    for i in range(d):
        mu[i, i, i] = 1
    return mu


def scaled_family(mu0, S: Semigroup, coeffs, fld: Field = QQ) -> OmegaAlgebra:
    """``mu_{a,b} = c_{a,b} mu0``; ``coeffs`` is row-major over pairs."""
    k = S.size
    mu0 = fld.array(mu0)
    mu = fld.zeros((k, k) + mu0.shape)
    for a in range(k):
        for b in range(k):
            mu[a, b] = fld.reduce(mu0 * fld.coerce(coeffs[a * k + b]))
    return OmegaAlgebra(fld, mu)


def search_scaled_families(mu0, S: Semigroup, values=(0, 1, 2), fld: Field = QQ) -> list:
    """All coefficient tuples from ``values`` giving an Omega-associative family."""
    out = []
    for c in product(values, repeat=S.size ** 2):
        if validate_omega_associativity(scaled_family(mu0, S, c, fld), S, cap=1).verdict:
            out.append(c)
    return out


def search_nijenhuis(A: OmegaAlgebra, S: Semigroup, entries=(0, 1), fld: Field = QQ, limit=None) -> list:
    """Operator families with matrix entries in ``entries`` that are Nijenhuis on ``A``."""
    d = A.dim
    mats = [fld.array(np.array(v, dtype=object).reshape(d, d)) for v in product(entries, repeat=d * d)]
    found = []
    for choice in product(range(len(mats)), repeat=S.size):
        N = OperatorFamily(fld, np.stack([mats[c] for c in choice]))
        if validate_nijenhuis_family(A, S, N, cap=1).verdict:
            found.append(N)
            if limit is not None and len(found) >= limit:
                break
    return found


def _random_invertible(d: int, rng, fld: Field):
    while True:
        P = rng.integers(-2, 3, size=(d, d))
        if round(np.linalg.det(P)) != 0:
            Pq = fld.array(P.astype(object))
            return Pq, _inverse(Pq, fld)


def _inverse(P, fld: Field):
    from .linalg import ExactMatrix, solve

    d = P.shape[0]
    M = ExactMatrix.from_dense(fld, P)
    cols = [solve(M, fld.eye(d)[:, j], fld) for j in range(d)]
    return fld.array(np.stack(cols, axis=1))


def operator_with_square(kind: str, d: int, rng, fld: Field = QQ) -> np.ndarray:
    """Random ``d x d`` matrix with ``N^2 = 0``, ``N^2 = N`` or ``N^2 = id``."""
    if kind not in SQUARE_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    core = fld.zeros((d, d))
    if kind == "square-zero":
        r = int(rng.integers(0, d // 2 + 1))
        for t in range(r):
            core[2 * t, 2 * t + 1] = 1
    elif kind == "idempotent":
        for t in range(d):
            core[t, t] = int(rng.integers(0, 2))
    else:
        for t in range(d):
            core[t, t] = int(rng.choice([-1, 1]))
    P, Pinv = _random_invertible(d, rng, fld)
    return fld.reduce(P.dot(core).dot(Pinv))

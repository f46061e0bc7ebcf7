"""Structures built from a Nijenhuis family: the star product, the induced
bimodule over it, the regular bimodule and the square-zero extension A + M.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    NFBimodule,
    OmegaAlgebra,
    OperatorFamily,
    Semigroup,
    validate_nf_bimodule,
    validate_nijenhuis_family,
)
from .errors import NotNFBimodule, NotNijenhuis, ShapeMismatch


@dataclass(frozen=True, eq=False)
class StarAlgebra:
    """The star-product algebra together with the data it was built from."""

    algebra: OmegaAlgebra
    source: OmegaAlgebra
    N: OperatorFamily

    @property
    def mu(self):
        return self.algebra.mu

    @property
    def dim(self):
        return self.algebra.dim


def star_tensor(A: OmegaAlgebra, S: Semigroup, N: OperatorFamily) -> np.ndarray:
    """``a * b = a.N_b(b) + N_a(a).b - N_ab(a.b)`` as a structure tensor."""
    fld = A.field
    mu, n = A.mu, N.maps
    t1 = np.einsum("abiyl,byj->abijl", mu, n)
    t2 = np.einsum("axi,abxjl->abijl", n, mu)
    t3 = np.einsum("ablp,abijp->abijl", n[S.table], mu)
    return fld.reduce(t1 + t2 - t3)


def star_product(A: OmegaAlgebra, S: Semigroup, N: OperatorFamily, check: bool = True) -> StarAlgebra:
    if check:
        rep = validate_nijenhuis_family(A, S, N)
        if not rep.verdict:
            raise NotNijenhuis("operator family is not Nijenhuis", witness=rep.violations[0])
    return StarAlgebra(OmegaAlgebra(A.field, star_tensor(A, S, N)), A, N)


def induced_actions(A: OmegaAlgebra, S: Semigroup, N: OperatorFamily, M: NFBimodule):
    """Left/right action tensors of ``M`` over the star algebra."""
    fld = A.field
    n, nm = N.maps, M.nm.maps
    nmP = nm[S.table]
    left = np.einsum("api,abpxy->abixy", n, M.left) - np.einsum("abyq,abixq->abixy", nmP, M.left)
    right = np.einsum("bpi,abxpy->abxiy", n, M.right) - np.einsum("abyq,abxiq->abxiy", nmP, M.right)
    return fld.reduce(left), fld.reduce(right)


def induced_bimodule(A: OmegaAlgebra, S: Semigroup, N: OperatorFamily, M: NFBimodule,
                     check: bool = True) -> NFBimodule:
    if check:
        rep = validate_nf_bimodule(A, S, N, M)
        if not rep.verdict:
            raise NotNFBimodule("module is not a Nijenhuis family bimodule", witness=rep.violations[0])
    left, right = induced_actions(A, S, N, M)
    return NFBimodule(A.field, left, right, M.nm)


def regular_nf_bimodule(A: OmegaAlgebra, S: Semigroup, N: OperatorFamily, check: bool = True) -> NFBimodule:
    if check:
        rep = validate_nijenhuis_family(A, S, N)
        if not rep.verdict:
            raise NotNijenhuis("operator family is not Nijenhuis", witness=rep.violations[0])
    return NFBimodule(A.field, A.mu.copy(), A.mu.copy(), N)


def extension_algebra(A: OmegaAlgebra, S: Semigroup, N: OperatorFamily, M: NFBimodule, psi, chi):
    """Square-zero extension ``A + M`` twisted by ``psi`` (pairs) and ``chi``.

    ``psi`` has shape ``(k, k, d, d, m)`` and ``chi`` shape ``(k, d, m)``.
    The first ``d`` coordinates are ``A``, the next ``m`` are ``M``.  No
    axioms are checked here.
    """
    fld = A.field
    k, d, m = S.size, A.dim, M.dim
    # coercing turns integral fractions into ints, which keeps later products cheap
    psi = fld.array(getattr(psi, "data", psi))
    chi = fld.array(getattr(chi, "data", chi))
    if psi.shape != (k, k, d, d, m):
        raise ShapeMismatch(f"psi has shape {psi.shape}, expected {(k, k, d, d, m)}")
    if chi.shape != (k, d, m):
        raise ShapeMismatch(f"chi has shape {chi.shape}, expected {(k, d, m)}")
    t = d + m
    mu = fld.zeros((k, k, t, t, t))
    mu[:, :, :d, :d, :d] = A.mu
    mu[:, :, :d, :d, d:] = psi
    mu[:, :, :d, d:, d:] = M.left
    mu[:, :, d:, :d, d:] = M.right
    maps = fld.zeros((k, t, t))
    maps[:, :d, :d] = N.maps
    maps[:, d:, :d] = np.transpose(chi, (0, 2, 1))
    maps[:, d:, d:] = M.nm.maps
    return OmegaAlgebra(fld, mu), OperatorFamily(fld, maps)

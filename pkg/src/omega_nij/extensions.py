"""Abelian extensions ``0 -> M -> A_hat -> A -> 0`` of Nijenhuis family algebras.

The total space has basis ``(e_1..e_d, f_1..f_m)``: the first block is a
copy of ``A``, the second a copy of ``M``.  The inclusion ``i`` is the second
block inclusion and the projection ``p`` the first block projection.
Sections are operator families ``A -> A_hat`` with ``p o s = id``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    DEFAULT_WITNESS_CAP,
    NFBimodule,
    OmegaAlgebra,
    OperatorFamily,
    Semigroup,
    ValidationReport,
    _witnesses,
    check_nf_morphism,
    validate_nf_bimodule,
    validate_nijenhuis_family,
    validate_omega_associativity,
)
from .cochains import NFContext
from .cohomology import is_coboundary, is_cocycle, primitive_without_nf_part
from .derived import extension_algebra
from .errors import (
    DiagramFails,
    IncompatibleContexts,
    NoSolution,
    NotASection,
    NotCocycle,
    ShapeMismatch,
)


@dataclass(frozen=True, eq=False)
class AbelianExtension:
    S: Semigroup
    base: OmegaAlgebra
    N: OperatorFamily
    total: OmegaAlgebra
    N_hat: OperatorFamily
    module_dim: int

    @property
    def field(self):
        return self.base.field

    @property
    def d(self):
        return self.base.dim

    @property
    def m(self):
        return self.module_dim

    @property
    def inclusion(self) -> OperatorFamily:
        fld, d, m = self.field, self.d, self.m
        maps = fld.zeros((self.S.size, d + m, m))
        maps[:, d:, :] = fld.eye(m)
        return OperatorFamily(fld, maps)

    @property
    def projection(self) -> OperatorFamily:
        fld, d, m = self.field, self.d, self.m
        maps = fld.zeros((self.S.size, d, d + m))
        maps[:, :, :d] = fld.eye(d)
        return OperatorFamily(fld, maps)

    @property
    def module_operator(self) -> OperatorFamily:
        """``N_M``, read off as the restriction of ``N_hat`` to the kernel."""
        d = self.d
        return OperatorFamily(self.field, self.N_hat.maps[:, d:, d:].copy())

    def kernel_algebra(self) -> OmegaAlgebra:
        """``M`` with its (zero) multiplication inherited from the total space."""
        d = self.d
        return OmegaAlgebra(self.field, self.total.mu[:, :, d:, d:, d:].copy())


@dataclass(frozen=True, eq=False)
class Section:
    maps: np.ndarray  # (k, d + m, d)

    def family(self, fld) -> OperatorFamily:
        return OperatorFamily(fld, self.maps)


def _report_first(name: str, reports) -> ValidationReport:
    out = ValidationReport(name)
    for r in reports:
        out.extend(r)
    return out


def validate_total(E: AbelianExtension, cap: int = DEFAULT_WITNESS_CAP) -> ValidationReport:
    """Omega-associativity and the Nijenhuis identity on the total space."""
    return _report_first("extension-total", [
        validate_omega_associativity(E.total, E.S, cap),
        validate_nijenhuis_family(E.total, E.S, E.N_hat, cap),
    ])


def build_extension(ctx: NFContext, psi, chi, cap: int = DEFAULT_WITNESS_CAP) -> AbelianExtension:
    """Total space twisted by ``(psi, chi)``; raises ``NotCocycle`` if it is not a valid algebra.

    Validity is decided by running the validators on the total space, so
    the result is independent of which Nijenhuis differential ``ctx`` uses.
    """
    total, N_hat = extension_algebra(ctx.A, ctx.S, ctx.N, ctx.M, psi, chi)
    E = AbelianExtension(ctx.S, ctx.A, ctx.N, total, N_hat, ctx.m)
    rep = validate_total(E, cap)
    if not rep.verdict:
        raise NotCocycle("twisted total space fails its axioms", witness=rep.violations[0])
    return E


def extension_from_total(S: Semigroup, A: OmegaAlgebra, N: OperatorFamily, total: OmegaAlgebra,
                         N_hat: OperatorFamily, module_dim: int, check: bool = True) -> AbelianExtension:
    """Wrap a total space given in block form (``A`` first, then ``M``).

    With ``check`` the total space is validated, the kernel must square to
    zero, and ``i``, ``p`` must be morphisms making the diagram commute.
    """
    d, m = A.dim, module_dim
    total.check_shape(S)
    if total.dim != d + m:
        raise ShapeMismatch(f"total space has dimension {total.dim}, expected {d + m}")
    N_hat.check_shape(S.size, d + m, d + m, "total operator family")
    E = AbelianExtension(S, A, N, total, N_hat, m)
    if check:
        fld = A.field
        rep = validate_total(E)
        if not rep.verdict:
            raise NotCocycle("total space fails its axioms", witness=rep.violations[0])
        if not fld.is_zero_array(total.mu[:, :, d:, d:, :]):
            raise ShapeMismatch("the kernel block does not square to zero")
        if not fld.is_zero_array(N_hat.maps[:, :d, d:]):
            raise ShapeMismatch("the operator family does not preserve the kernel")
        proj = check_nf_morphism(E.projection, (total, N_hat), (A, N), S)
        if not proj.verdict:
            raise DiagramFails("projection is not a morphism onto the base", witness=proj.violations[0])
        if not fld.is_zero_array(total.mu[:, :, :d, d:, :d]) or not fld.is_zero_array(total.mu[:, :, d:, :d, :d]):
            raise DiagramFails("mixed products leave the kernel")
    return E


def canonical_section(E: AbelianExtension) -> Section:
    fld, d = E.field, E.d
    maps = fld.zeros((E.S.size, d + E.m, d))
    maps[:, :d, :] = fld.eye(d)
    return Section(maps)


def section_from_offset(E: AbelianExtension, sigma) -> Section:
    """``s_w(a) = (a, sigma_w(a))`` for a family ``sigma`` of shape ``(k, m, d)``."""
    s = canonical_section(E)
    sigma = np.asarray(sigma, dtype=object)
    if sigma.shape != (E.S.size, E.m, E.d):
        raise ShapeMismatch(f"section offset has shape {sigma.shape}, expected {(E.S.size, E.m, E.d)}")
    maps = s.maps.copy()
    maps[:, E.d:, :] = sigma
    return Section(E.field.reduce(maps))


def random_section(E: AbelianExtension, rng, lo: int = -3, hi: int = 3) -> Section:
    sigma = rng.integers(lo, hi + 1, size=(E.S.size, E.m, E.d)).astype(object)
    return section_from_offset(E, E.field.array(sigma))


def _check_section(E: AbelianExtension, s: Section):
    fld, d = E.field, E.d
    maps = np.asarray(s.maps, dtype=object)
    if maps.shape != (E.S.size, d + E.m, d):
        raise NotASection(f"section has shape {maps.shape}, expected {(E.S.size, d + E.m, d)}")
    top = np.stack([fld.eye(d)] * E.S.size)
    if not fld.equal_arrays(maps[:, :d, :], top):
        bad = np.argwhere(fld.reduce(maps[:, :d, :] - top) != 0)[0]
        raise NotASection("p o s is not the identity",
                          witness={"omega": E.S.labels[bad[0]], "basis": int(bad[2])})
    return maps


def extract_cocycle(E: AbelianExtension, s: Section):
    """``psi_{a,b}(x, y) = s_a(x) s_b(y) - s_ab(xy)`` and ``chi_w(x) = N_hat_w s_w(x) - s_w N_w(x)``.

    Returns ``(psi, chi)`` as tensors of shapes ``(k, k, d, d, m)`` and
    ``(k, d, m)``.
    """
    maps = _check_section(E, s)
    fld, d, T = E.field, E.d, E.S.table
    prod = np.einsum("api,bqj,abpqr->abijr", maps, maps, E.total.mu)
    image = np.einsum("abrl,abijl->abijr", maps[T], E.base.mu)
    psi_full = fld.reduce(prod - image)
    nchi = np.einsum("wrp,wpi->wri", E.N_hat.maps, maps) - np.einsum("wrp,wpi->wri", maps, E.N.maps)
    chi_full = fld.reduce(nchi)
    if not fld.is_zero_array(psi_full[..., :d]) or not fld.is_zero_array(chi_full[:, :d, :]):
        raise NotASection("the cocycle does not land in the kernel")
    psi = psi_full[..., d:].copy()
    chi = np.transpose(chi_full[:, d:, :], (0, 2, 1)).copy()
    return psi, chi


def induced_module_from_section(E: AbelianExtension, s: Section, check: bool = True) -> NFBimodule:
    """Actions ``x . m = s(x) m`` and ``m . x = m s(x)`` with ``N_M`` from ``N_hat``."""
    maps = _check_section(E, s)
    fld, d = E.field, E.d
    mu = E.total.mu
    left = np.einsum("api,abpxy->abixy", maps, mu[:, :, :, d:, d:])
    right = np.einsum("bpi,abxpy->abxiy", maps, mu[:, :, d:, :, d:])
    M = NFBimodule(fld, fld.reduce(left), fld.reduce(right), E.module_operator)
    if check:
        rep = validate_nf_bimodule(E.base, E.S, E.N, M)
        if not rep.verdict:
            raise NotASection("section induces no Nijenhuis family bimodule", witness=rep.violations[0])
    return M


def context_of(E: AbelianExtension, nf_variant: str = "star") -> NFContext:
    M = induced_module_from_section(E, canonical_section(E))
    return NFContext(E.S, E.base, E.N, M, validate=False, nf_variant=nf_variant)


def cocycle_vector(psi, chi) -> np.ndarray:
    """Coordinates of ``(psi, chi)`` in ``C^2_NFA``."""
    return np.concatenate([np.asarray(psi, dtype=object).reshape(-1),
                           np.asarray(chi, dtype=object).reshape(-1)])


def extension_class(E: AbelianExtension, s: Section | None = None) -> np.ndarray:
    """A representative of the class of ``E``: the cocycle of a section, as a vector."""
    psi, chi = extract_cocycle(E, s or canonical_section(E))
    return cocycle_vector(psi, chi)


def _same_data(E1: AbelianExtension, E2: AbelianExtension) -> bool:
    fld = E1.field
    if E1.field != E2.field or E1.S.size != E2.S.size or E1.d != E2.d or E1.m != E2.m:
        return False
    if not np.array_equal(E1.S.table, E2.S.table):
        return False
    if not (fld.equal_arrays(E1.base.mu, E2.base.mu) and E1.N.equals(E2.N)):
        return False
    M1 = induced_module_from_section(E1, canonical_section(E1), check=False)
    M2 = induced_module_from_section(E2, canonical_section(E2), check=False)
    return (fld.equal_arrays(M1.left, M2.left) and fld.equal_arrays(M1.right, M2.right)
            and M1.nm.equals(M2.nm))


def classes_equal(E1: AbelianExtension, E2: AbelianExtension, nf_variant: str = "star"):
    """Whether the two classes agree; returns ``(verdict, primitive or None)``."""
    if not _same_data(E1, E2):
        raise IncompatibleContexts("extensions are not over the same algebra, operators and bimodule")
    ctx = context_of(E1, nf_variant)
    diff = ctx.field.reduce(extension_class(E2) - extension_class(E1))
    try:
        prim = is_coboundary(diff, 2, "nfa", ctx)
    except NoSolution:
        return False, None
    return True, prim


def is_extension_cocycle(ctx: NFContext, psi, chi) -> bool:
    return is_cocycle(cocycle_vector(psi, chi), 2, "nfa", ctx)


def iso_from_coboundary(E: AbelianExtension, gamma) -> OperatorFamily:
    """``zeta_w(x, m) = (x, m - gamma_w(x))`` on the total space.

    ``gamma`` is a degree-1 cochain ``A -> M`` of shape ``(k, d, m)``.
    """
    fld, d, m = E.field, E.d, E.m
    gamma = np.asarray(getattr(gamma, "data", gamma), dtype=object)
    if gamma.shape != (E.S.size, d, m):
        raise ShapeMismatch(f"gamma has shape {gamma.shape}, expected {(E.S.size, d, m)}")
    maps = np.stack([fld.eye(d + m)] * E.S.size)
    maps[:, d:, :d] = fld.reduce(-np.transpose(gamma, (0, 2, 1)))
    return OperatorFamily(fld, maps)


def iso_between(E1: AbelianExtension, E2: AbelianExtension, nf_variant: str = "star") -> OperatorFamily:
    """Isomorphism ``E1 -> E2`` built from a primitive of the class difference."""
    ok, prim = classes_equal(E1, E2, nf_variant)
    if not ok:
        raise DiagramFails("extensions are not cohomologous")
    ctx = context_of(E1, nf_variant)
    gamma, _ = primitive_without_nf_part(prim, ctx)
    return iso_from_coboundary(E1, np.asarray(gamma, dtype=object).reshape(ctx.k, ctx.d, ctx.m))


def verify_extension_iso(zeta: OperatorFamily, E1: AbelianExtension, E2: AbelianExtension,
                         strict: bool = False, cap: int = DEFAULT_WITNESS_CAP) -> ValidationReport:
    """``zeta`` is a morphism of the totals with ``zeta i1 = i2`` and ``p2 zeta = p1``."""
    fld = E1.field
    rep = ValidationReport("extension-isomorphism")
    rep.extend(check_nf_morphism(zeta, (E1.total, E1.N_hat), (E2.total, E2.N_hat), E1.S, cap), cap)
    # columns are images of basis vectors, so compare per input column
    zi = fld.reduce(np.einsum("wij,wjk->wki", zeta.maps, E1.inclusion.maps))
    i2 = np.transpose(E2.inclusion.maps, (0, 2, 1))
    rep.extend(_witnesses("diagram-inclusion", fld.reduce(zi - i2), zi, i2, E1.S.labels, 1, fld, cap), cap)
    pz = fld.reduce(np.einsum("wij,wjk->wki", E2.projection.maps, zeta.maps))
    p1 = np.transpose(E1.projection.maps, (0, 2, 1))
    rep.extend(_witnesses("diagram-projection", fld.reduce(pz - p1), pz, p1, E1.S.labels, 1, fld, cap), cap)
    if strict and not rep.verdict:
        raise DiagramFails("extension isomorphism check failed", witness=rep.violations[0])
    return rep

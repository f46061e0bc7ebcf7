"""Semigroups, Omega-associative algebras, operator families and bimodules.

Tensor conventions (all arrays are numpy object arrays of field elements):

* ``OmegaAlgebra.mu[a, b, i, j, l]`` is the coefficient of ``e_l`` in
  ``e_i ._{a,b} e_j``.
* ``OperatorFamily.maps[w]`` is a matrix acting on column vectors, so
  ``N_w(e_j) = sum_i maps[w, i, j] e_i``.
* ``NFBimodule.left[a, b, i, x, y]`` is the coefficient of ``f_y`` in
  ``e_i ._{a,b} f_x`` and ``right[a, b, x, i, y]`` the one in ``f_x ._{a,b} e_i``.

Validators only look at basis elements; every axiom is multilinear.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    BadUnit,
    BimoduleAxiomsFail,
    NonAssociativeTable,
    NoUnit,
    ShapeMismatch,
)
from .field import QQ, Field

DEFAULT_WITNESS_CAP = 16


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Violation:
    axiom: str
    indices: tuple
    basis: tuple
    lhs: tuple
    rhs: tuple

    def as_dict(self, fld: Field) -> dict:
        return {
            "axiom": self.axiom,
            "indices": list(self.indices),
            "basis": list(self.basis),
            "lhs": [fld.format(v) for v in self.lhs],
            "rhs": [fld.format(v) for v in self.rhs],
        }


@dataclass
class ValidationReport:
    name: str
    violations: list = dc_field(default_factory=list)
    checked: int = 0

    @property
    def verdict(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.verdict

    def extend(self, other: "ValidationReport", cap: int = DEFAULT_WITNESS_CAP):
        room = cap - len(self.violations)
        if room > 0:
            self.violations.extend(other.violations[:room])
        elif other.violations and not self.violations:
            self.violations.append(other.violations[0])
        self.checked += other.checked
        return self

    def as_dict(self, fld: Field) -> dict:
        return {
            "name": self.name,
            "verdict": "pass" if self.verdict else "fail",
            "checked": self.checked,
            "violations": [v.as_dict(fld) for v in self.violations],
        }


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True, eq=False)
class Semigroup:
    labels: tuple
    table: np.ndarray
    unit: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ShapeMismatch(f"unknown semigroup element {label!r}") from None

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def prod(self, word: Sequence[int]) -> int:
        """Product of a non-empty word of element indices."""
        it = iter(word)
        acc = next(it)
        for w in it:
            acc = int(self.table[acc, w])
        return acc

    def prod_array(self, words: np.ndarray) -> np.ndarray:
        """Vectorised product along the last axis of an integer array."""
        acc = words[..., 0]
        for j in range(1, words.shape[-1]):
            acc = self.table[acc, words[..., j]]
        return acc

    def require_unit(self) -> int:
        if self.unit is None:
            raise NoUnit("operation needs a unital semigroup (monoid)")
        return self.unit


def build_semigroup(labels, table, unit=None) -> Semigroup:
    """Validate and build a finite semigroup.

    ``table`` may hold labels or indices.  Associativity is checked on all
    triples; a failure raises ``NonAssociativeTable`` carrying the first
    witness triple (as labels).
    """
    labels = tuple(str(x) for x in labels)
    if len(set(labels)) != len(labels):
        raise ShapeMismatch("duplicate semigroup labels")
    k = len(labels)
    if k == 0:
        raise ShapeMismatch("empty semigroup")
    pos = {lab: i for i, lab in enumerate(labels)}
    rows = list(table)
    if len(rows) != k or any(len(r) != k for r in rows):
        raise ShapeMismatch(f"multiplication table must be {k}x{k}")
    tab = np.zeros((k, k), dtype=np.int64)
    for a, row in enumerate(rows):
        for b, entry in enumerate(row):
            if isinstance(entry, (int, np.integer)) and not isinstance(entry, bool):
                if not 0 <= entry < k:
                    raise ShapeMismatch(f"table entry {entry} out of range")
                tab[a, b] = int(entry)
            elif str(entry) in pos:
                tab[a, b] = pos[str(entry)]
            else:
                raise ShapeMismatch(f"table entry {entry!r} is not a declared label")
    for a, b, c in itertools.product(range(k), repeat=3):
        if tab[tab[a, b], c] != tab[a, tab[b, c]]:
            raise NonAssociativeTable(
                f"(({labels[a]}{labels[b]}){labels[c]}) != ({labels[a]}({labels[b]}{labels[c]}))",
                witness=(labels[a], labels[b], labels[c]),
            )
    u = None
    if unit is not None:
        u = unit if isinstance(unit, int) and not isinstance(unit, bool) else pos.get(str(unit))
        if u is None or not 0 <= u < k:
            raise BadUnit(f"unit {unit!r} is not a declared label")
        for a in range(k):
            if tab[u, a] != a or tab[a, u] != a:
                raise BadUnit(f"unit law fails at {labels[a]}", witness=(labels[a],))
    tab.setflags(write=False)
    return Semigroup(labels, tab, u)


def trivial_monoid() -> Semigroup:
    return build_semigroup(["1"], [["1"]], unit="1")


@dataclass(frozen=True, eq=False)
class OmegaAlgebra:
    field: Field
    mu: np.ndarray

    @property
    def dim(self) -> int:
        return self.mu.shape[-1]

    @property
    def omega(self) -> int:
        return self.mu.shape[0]

    def check_shape(self, S: Semigroup):
        k, d = S.size, self.dim
        if self.mu.shape != (k, k, d, d, d):
            raise ShapeMismatch(f"mu has shape {self.mu.shape}, expected {(k, k, d, d, d)}")

    def product(self, a: int, b: int, x, y):
        return np.einsum("i,j,ijl->l", np.asarray(x, dtype=object), np.asarray(y, dtype=object), self.mu[a, b])


@dataclass(frozen=True, eq=False)
class OperatorFamily:
    field: Field
    maps: np.ndarray

    @property
    def omega(self) -> int:
        return self.maps.shape[0]

    @property
    def dims(self) -> tuple:
        return self.maps.shape[1], self.maps.shape[2]

    def check_shape(self, k: int, dout: int, din: int, what: str = "operator family"):
        if self.maps.shape != (k, dout, din):
            raise ShapeMismatch(f"{what} has shape {self.maps.shape}, expected {(k, dout, din)}")

    def apply(self, w: int, x):
        return self.maps[w].dot(np.asarray(x, dtype=object))

    def compose(self, other: "OperatorFamily") -> "OperatorFamily":
        """``(self o other)_w = self_w o other_w``."""
        return OperatorFamily(self.field, self.field.reduce(np.einsum("wij,wjk->wik", self.maps, other.maps)))

    def scaled(self, lam) -> "OperatorFamily":
        return OperatorFamily(self.field, self.field.reduce(self.maps * self.field.coerce(lam)))

    def __add__(self, other):
        return OperatorFamily(self.field, self.field.reduce(self.maps + other.maps))

    def __sub__(self, other):
        return OperatorFamily(self.field, self.field.reduce(self.maps - other.maps))

    def equals(self, other) -> bool:
        return self.maps.shape == other.maps.shape and self.field.equal_arrays(self.maps, other.maps)


@dataclass(frozen=True, eq=False)
class NFBimodule:
    field: Field
    left: np.ndarray
    right: np.ndarray
    nm: OperatorFamily

    @property
    def dim(self) -> int:
        return self.left.shape[-1]

    def check_shape(self, S: Semigroup, A: OmegaAlgebra):
        k, d, m = S.size, A.dim, self.dim
        if self.left.shape != (k, k, d, m, m):
            raise ShapeMismatch(f"left action has shape {self.left.shape}, expected {(k, k, d, m, m)}")
        if self.right.shape != (k, k, m, d, m):
            raise ShapeMismatch(f"right action has shape {self.right.shape}, expected {(k, k, m, d, m)}")
        self.nm.check_shape(k, m, m, "module operator family")


# --------------------------------------------------------------------------
# generic identity checkers


def _witnesses(name, diff, lhs, rhs, labels, n_idx, fld, cap):
    report = ValidationReport(name, checked=int(np.prod(diff.shape[:-1])) if diff.ndim else 1)
    flat = diff.reshape(-1, diff.shape[-1])
    mask = np.array([any(v != 0 for v in row) for row in flat], dtype=bool)
    nz = mask.reshape(diff.shape[:-1])
    for pos in zip(*np.nonzero(nz)):
        if len(report.violations) >= cap:
            break
        pos = tuple(int(p) for p in pos)
        report.violations.append(
            Violation(
                name,
                tuple(labels[p] for p in pos[:n_idx]),
                pos[n_idx:],
                tuple(lhs[pos]),
                tuple(rhs[pos]),
            )
        )
    return report


def _assoc_identity(name, F, G, H, K, S, fld, cap):
    """Check ``(x ._{a,b} y) ._{ab,c} z == x ._{a,bc} (y ._{b,c} z)``.

    ``F`` is the inner left product, ``G`` the outer left product, ``H`` the
    inner right product and ``K`` the outer right product.
    """
    k = S.size
    T = S.table
    ar = np.arange(k)
    G_ab_c = G[T[:, :, None], ar[None, None, :]]
    K_a_bc = K[ar[:, None, None], T[None, :, :]]
    lhs = fld.reduce(np.einsum("abijp,abcplq->abcijlq", F, G_ab_c))
    rhs = fld.reduce(np.einsum("bcjlp,abcipq->abcijlq", H, K_a_bc))
    diff = fld.reduce(lhs - rhs)
    return _witnesses(name, diff, lhs, rhs, S.labels, 3, fld, cap)


def _nijenhuis_identity(name, B, P, Q, R, S, fld, cap):
    """Check ``P_a(u) . Q_b(v) == R_ab(P_a(u) . v + u . Q_b(v) - R_ab(u . v))``

    for a bilinear family ``B[a, b, i, j, q]`` and operator families with
    column convention.
    """
    T = S.table
    RP = R[T]
    lhs = fld.reduce(np.einsum("axi,byj,abxyq->abijq", P, Q, B, optimize=True))
    t1 = np.einsum("axi,abxjq->abijq", P, B)
    t2 = np.einsum("byj,abiyq->abijq", Q, B)
    t3 = np.einsum("abqp,abijp->abijq", RP, B)
    inner = fld.reduce(t1 + t2 - t3)
    rhs = fld.reduce(np.einsum("abqp,abijp->abijq", RP, inner))
    diff = fld.reduce(lhs - rhs)
    return _witnesses(name, diff, lhs, rhs, S.labels, 2, fld, cap)


# --------------------------------------------------------------------------
# validators


def validate_omega_associativity(A: OmegaAlgebra, S: Semigroup, cap: int = DEFAULT_WITNESS_CAP) -> ValidationReport:
    A.check_shape(S)
    mu = A.mu
    return _assoc_identity("omega-associativity", mu, mu, mu, mu, S, A.field, cap)


def validate_nijenhuis_family(A: OmegaAlgebra, S: Semigroup, N: OperatorFamily, cap: int = DEFAULT_WITNESS_CAP) -> ValidationReport:
    A.check_shape(S)
    N.check_shape(S.size, A.dim, A.dim, "Nijenhuis family")
    n = N.maps
    return _nijenhuis_identity("nijenhuis", A.mu, n, n, n, S, A.field, cap)


def validate_bimodule(A: OmegaAlgebra, S: Semigroup, M: NFBimodule, cap: int = DEFAULT_WITNESS_CAP) -> ValidationReport:
    A.check_shape(S)
    M.check_shape(S, A)
    fld = A.field
    mu, l, r = A.mu, M.left, M.right
    rep = ValidationReport("bimodule")
    rep.extend(_assoc_identity("bimodule-left", mu, l, l, l, S, fld, cap), cap)
    rep.extend(_assoc_identity("bimodule-middle", l, r, r, l, S, fld, cap), cap)
    rep.extend(_assoc_identity("bimodule-right", r, r, mu, r, S, fld, cap), cap)
    return rep


def validate_nf_bimodule(A: OmegaAlgebra, S: Semigroup, N: OperatorFamily, M: NFBimodule,
                         cap: int = DEFAULT_WITNESS_CAP) -> ValidationReport:
    """Nijenhuis-family compatibility of the actions with ``N`` and ``N_M``."""
    base = validate_bimodule(A, S, M, cap)
    if not base.verdict:
        raise BimoduleAxiomsFail("underlying bimodule axioms fail", witness=base.violations[0])
    N.check_shape(S.size, A.dim, A.dim, "Nijenhuis family")
    fld = A.field
    n, nm = N.maps, M.nm.maps
    rep = ValidationReport("nf-bimodule")
    rep.extend(_nijenhuis_identity("nf-bimodule-left", M.left, n, nm, nm, S, fld, cap), cap)
    rep.extend(_nijenhuis_identity("nf-bimodule-right", M.right, nm, n, nm, S, fld, cap), cap)
    return rep


def _rota_baxter_identity(name, A, S, N, kind, cap):
    """Weight-0, weight -1 and modified weight -1 Rota-Baxter family identities."""
    fld = A.field
    T = S.table
    mu, n = A.mu, N.maps
    NP = n[T]
    lhs = fld.reduce(np.einsum("axi,byj,abxyq->abijq", n, n, mu, optimize=True))
    inner = np.einsum("axi,abxjq->abijq", n, mu) + np.einsum("byj,abiyq->abijq", n, mu)
    if kind == "weight-1":
        inner = inner - mu
    rhs = np.einsum("abqp,abijp->abijq", NP, fld.reduce(inner))
    if kind == "modified-1":
        rhs = rhs - mu
    rhs = fld.reduce(rhs)
    diff = fld.reduce(lhs - rhs)
    return _witnesses(name, diff, lhs, rhs, S.labels, 2, fld, cap)


def rb_relation_check(A: OmegaAlgebra, S: Semigroup, N: OperatorFamily, cap: int = DEFAULT_WITNESS_CAP) -> dict:
    """Relate the Nijenhuis identity to the three Rota-Baxter-type identities.

    Returns a dict with the componentwise predicates on ``N_w^2``, the
    Nijenhuis verdict, and for every case whose predicate holds the verdict of
    the matching Rota-Baxter identity and whether both verdicts agree.
    """
    A.check_shape(S)
    fld = A.field
    sq = N.compose(N)
    ident = OperatorFamily(fld, np.stack([fld.eye(A.dim)] * S.size))
    zero = OperatorFamily(fld, fld.zeros(N.maps.shape))
    nij = validate_nijenhuis_family(A, S, N, cap)
    cases = {
        "square-zero": (sq.equals(zero), "rota-baxter-weight-0", "weight0"),
        "idempotent": (sq.equals(N), "rota-baxter-weight-minus-1", "weight-1"),
        "involution": (sq.equals(ident), "modified-rota-baxter-weight-minus-1", "modified-1"),
    }
    out = {"nijenhuis": nij.verdict, "cases": {}}
    for case, (holds, rb_name, kind) in cases.items():
        entry = {"predicate": holds}
        if holds:
            rb = _rota_baxter_identity(rb_name, A, S, N, kind, cap)
            entry.update(relation=rb_name, relation_verdict=rb.verdict, confirmed=rb.verdict == nij.verdict)
        out["cases"][case] = entry
    out["applicable"] = [c for c, e in out["cases"].items() if e["predicate"]]
    return out


def check_omega_morphism(f: OperatorFamily, A: OmegaAlgebra, A2: OmegaAlgebra, S: Semigroup,
                         cap: int = DEFAULT_WITNESS_CAP) -> ValidationReport:
    """``f_ab(x ._{a,b} y) == f_a(x) .'_{a,b} f_b(y)`` on basis pairs."""
    A.check_shape(S)
    A2.check_shape(S)
    f.check_shape(S.size, A2.dim, A.dim, "morphism")
    fld = A.field
    fm = f.maps
    lhs = fld.reduce(np.einsum("abqp,abijp->abijq", fm[S.table], A.mu))
    rhs = fld.reduce(np.einsum("axi,byj,abxyq->abijq", fm, fm, A2.mu))
    return _witnesses("omega-morphism", fld.reduce(lhs - rhs), lhs, rhs, S.labels, 2, fld, cap)


def check_nf_morphism(f: OperatorFamily, src: tuple, dst: tuple, S: Semigroup,
                      cap: int = DEFAULT_WITNESS_CAP) -> ValidationReport:
    """Morphism of Nijenhuis family algebras ``(A, N) -> (A', N')``."""
    (A, N), (A2, N2) = src, dst
    rep = ValidationReport("nf-morphism")
    rep.extend(check_omega_morphism(f, A, A2, S, cap), cap)
    fld = A.field
    lhs = fld.reduce(np.einsum("wij,wjk->wik", f.maps, N.maps))
    rhs = fld.reduce(np.einsum("wij,wjk->wik", N2.maps, f.maps))
    # witness per (w, input basis vector); lhs/rhs are the image columns
    lhs_c = np.transpose(lhs, (0, 2, 1))
    rhs_c = np.transpose(rhs, (0, 2, 1))
    rep.extend(_witnesses("nf-morphism-intertwining", fld.reduce(lhs_c - rhs_c), lhs_c, rhs_c,
                          S.labels, 1, fld, cap), cap)
    return rep


# --------------------------------------------------------------------------
# builders


def constant_family(mu_classical, S: Semigroup, fld: Field = QQ) -> OmegaAlgebra:
    """The family with the same product at every index pair."""
    mu = fld.array(mu_classical)
    k = S.size
    return OmegaAlgebra(fld, np.broadcast_to(mu, (k, k) + mu.shape).copy())


def trivial_wrap(mu_classical, fld: Field = QQ, S: Semigroup | None = None) -> OmegaAlgebra:
    """A classical algebra seen as an Omega-algebra (trivial monoid by default)."""
    return constant_family(mu_classical, S or trivial_monoid(), fld)


def constant_operator(matrix, k: int, fld: Field = QQ) -> OperatorFamily:
    m = fld.array(matrix)
    return OperatorFamily(fld, np.broadcast_to(m, (k,) + m.shape).copy())


def identity_family(k: int, d: int, fld: Field = QQ) -> OperatorFamily:
    return constant_operator(fld.eye(d), k, fld)


def zero_family(k: int, dout: int, din: int | None = None, fld: Field = QQ) -> OperatorFamily:
    return OperatorFamily(fld, fld.zeros((k, dout, dout if din is None else din)))


def truncated_poly(D: int, k: int, S: Semigroup | None = None, fld: Field = QQ):
    """``k[a]/(a^D)`` with ``N(a^n) = a^(n+k)``, truncated to zero at degree >= D.

    Returns ``(A, N)``; both families are constant over ``S``.
    """
    if D < 1 or k < 0:
        raise ValueError("need D >= 1 and k >= 0")
    S = S or trivial_monoid()
    mu = fld.zeros((D, D, D))
    for i in range(D):
        for j in range(D - i):
            mu[i, j, i + j] = 1
    n = fld.zeros((D, D))
    for i in range(D - k):
        n[i + k, i] = 1
    return constant_family(mu, S, fld), constant_operator(n, S.size, fld)


def left_mult(A: OmegaAlgebra, S: Semigroup, a) -> OperatorFamily:
    """``N_w(x) = a ._{1,w} x``; needs a unit so the indices line up."""
    u = S.require_unit()
    fld = A.field
    a = fld.array(a)
    maps = np.einsum("i,wijl->wlj", a, A.mu[u])
    return OperatorFamily(fld, fld.reduce(maps))


def right_mult(A: OmegaAlgebra, S: Semigroup, a) -> OperatorFamily:
    """``N_w(x) = x ._{w,1} a``; needs a unit."""
    u = S.require_unit()
    fld = A.field
    a = fld.array(a)
    maps = np.einsum("j,wijl->wli", a, A.mu[:, u])
    return OperatorFamily(fld, fld.reduce(maps))


def scalar_scale(N: OperatorFamily, lam) -> OperatorFamily:
    return N.scaled(lam)

"""Regenerate the shipped corpus and its stored oracle cohomology dimensions.

Oracle ranks use plain fraction Gauss-Jordan on dense matrices, a different
elimination path from the multimodular one the library uses by default.

    python tools/make_corpus.py
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from omega_nij import io
from omega_nij.algebra import (
    NFBimodule,
    OmegaAlgebra,
    OperatorFamily,
    trivial_monoid,
    trivial_wrap,
    truncated_poly,
    validate_nf_bimodule,
)
from omega_nij.cochains import NF_VARIANTS, differential_matrix
from omega_nij.deformation import gauge_transform, make_gauge, trivial_deformation
from omega_nij.field import QQ
from omega_nij.generators import (
    left_zero_semigroup,
    poly_mu,
    product_mu,
    scaled_family,
    search_nijenhuis,
    two_element_monoid,
    upper_triangular_mu,
)
from omega_nij.linalg import rank

OUT = Path(__file__).resolve().parents[1] / "src" / "omega_nij" / "corpus"
ORACLE_DEGREE = 3
ORACLE_BUDGET = 1500  # dense fraction elimination gets slow past this many columns
RNG = np.random.default_rng(20240611)


def fam(mats):
    return OperatorFamily(QQ, QQ.array(np.array(mats, dtype=object)))


def pick(found):
    """A deterministic 'interesting' solution: every N_w nonzero and not all equal."""
    for N in found:
        mats = N.maps
        if all(not QQ.is_zero_array(m) for m in mats) and not all(QQ.equal_arrays(mats[0], m) for m in mats):
            return N
    for N in found:
        if not QQ.is_zero_array(N.maps):
            return N
    return found[0]


def instances():
    T = trivial_monoid()
    S2 = two_element_monoid()
    LZ = left_zero_semigroup()
    out = {}

    k = trivial_wrap([[[1]]])
    out["trivial_k"] = io.Instance(QQ, T, k, fam([[[0]]]))
    out["k_id"] = io.Instance(QQ, T, k, fam([[[1]]]))
    out["zero_d2"] = io.Instance(QQ, T, OmegaAlgebra(QQ, QQ.zeros((1, 1, 2, 2, 2))), fam([[[0, 1], [0, 0]]]))
    out["zero_S2_d1"] = io.Instance(QQ, S2, OmegaAlgebra(QQ, QQ.zeros((2, 2, 1, 1, 1))), fam([[[1]], [[2]]]))

    for D, kk in [(2, 1), (3, 0), (3, 1), (4, 1), (4, 2), (5, 2), (6, 2)]:
        A, N = truncated_poly(D, kk)
        out[f"trunc_poly_D{D}_k{kk}"] = io.Instance(QQ, T, A, N)
    A, N = truncated_poly(2, 1, S2)
    out["S2_trunc_poly_D2_k1"] = io.Instance(QQ, S2, A, N)

    # solver-found families over {1, e}
    for name, mu0, coeffs in [("S2_dual_scaled_1112", poly_mu(2), (1, 1, 1, 2)),
                              ("S2_kxk_scaled_1001", product_mu(2), (1, 0, 0, 1))]:
        A = scaled_family(mu0, S2, coeffs)
        out[name] = io.Instance(QQ, S2, A, pick(search_nijenhuis(A, S2)))

    ut = trivial_wrap(upper_triangular_mu())
    out["upper_triangular"] = io.Instance(QQ, T, ut, pick(search_nijenhuis(ut, T)))

    # no unit: constant dual-number family over a left-zero semigroup
    A = scaled_family(poly_mu(2), LZ, (1, 1, 1, 1))
    out["left_zero_dual"] = io.Instance(QQ, LZ, A, pick(search_nijenhuis(A, LZ)))

    # explicit module: the augmentation module k of k[x]/(x^2)
    A, _ = truncated_poly(2, 1)
    left = QQ.zeros((1, 1, 2, 1, 1))
    right = QQ.zeros((1, 1, 1, 2, 1))
    left[0, 0, 0, 0, 0] = 1
    right[0, 0, 0, 0, 0] = 1
    chosen = None
    for N in search_nijenhuis(A, T, entries=(0, 1)):
        for c in (1, 2, 0):
            M = NFBimodule(QQ, left, right, fam([[[c]]]))
            if validate_nf_bimodule(A, T, N, M).verdict and not QQ.is_zero_array(N.maps) and c:
                chosen = (N, M)
                break
        if chosen:
            break
    out["dual_augmentation_module"] = io.Instance(QQ, T, A, chosen[0], chosen[1])
    return out


def extras(base):
    """Instances carrying cochain, deformation and extension blocks."""
    out = {}
    inst = base["trunc_poly_D3_k1"]
    ctx = inst.context()
    # a degree-2 coboundary of the Hochschild complex and a random cochain
    b = QQ.array(RNG.integers(-2, 3, size=ctx.dim(1, "alg")).astype(object))
    cob = differential_matrix(1, "alg", ctx).apply(b)
    rnd = QQ.array(RNG.integers(-2, 3, size=ctx.dim(2, "alg")).astype(object))
    cochains = {
        "coboundary": {"complex": "alg", "degree": 2, "alg": cob.reshape(ctx.alg.shape(2)), "nf": None},
        "random": {"complex": "alg", "degree": 2, "alg": rnd.reshape(ctx.alg.shape(2)), "nf": None},
    }
    G = make_gauge(ctx, [QQ.array(RNG.integers(-1, 2, size=(1, 3, 3)).astype(object)) for _ in range(2)])
    D = gauge_transform(trivial_deformation(ctx, 2), G, ctx)
    deformation = {"order": 2, "mu": list(D.mu_coeffs[1:]), "nijenhuis": list(D.n_coeffs[1:]),
                   "gauge": list(G.psi_coeffs[1:])}
    out["trunc_poly_D3_k1_blocks"] = io.Instance(QQ, inst.S, inst.A, inst.N, None, cochains, deformation)

    # split extension of k by its regular module and a twisted one
    k = base["trivial_k"]
    kctx = k.context()
    zero2 = QQ.zeros(kctx.alg.shape(2))
    zero1 = QQ.zeros(kctx.alg.shape(1))
    out["ext_split_trivial_k"] = io.Instance(QQ, k.S, k.A, k.N, None,
                                             extension={"psi": zero2, "chi": zero1, "sections": {}})
    # psi = delta(gamma) for gamma(1) = 1 gives a cohomologous, non-split-looking cocycle
    gamma = QQ.array(np.array([1], dtype=object))
    twisted = differential_matrix(1, "alg", kctx).apply(gamma).reshape(kctx.alg.shape(2))
    sec = {"shifted": QQ.array(np.array([[[3]]], dtype=object))}
    out["ext_twisted_trivial_k"] = io.Instance(QQ, k.S, k.A, k.N, None,
                                               extension={"psi": twisted, "chi": zero1, "sections": sec})
    return out


def oracle(base) -> dict:
    table = {}
    for name, inst in base.items():
        entry = {}
        for variant in NF_VARIANTS:
            ctx = inst.context(nf_variant=variant)
            start = 0 if ctx.unital else 1
            top = ORACLE_DEGREE if ctx.dim(ORACLE_DEGREE + 1, "nfa") <= ORACLE_BUDGET else ORACLE_DEGREE - 1
            per = {}
            for kind in ("alg", "nf", "nfa"):
                dims = {}
                prev = 0
                for n in range(start, top + 1):
                    D = differential_matrix(n, kind, ctx)
                    r = rank(D, QQ, method="fraction") if D.shape[0] and D.shape[1] else 0
                    dims[str(n)] = ctx.dim(n, kind) - r - prev
                    prev = r
                per[kind] = dims
            entry[variant] = per
        table[name] = entry
    return table


def main():
    (OUT / "oracle").mkdir(parents=True, exist_ok=True)
    base = instances()
    for name, inst in {**base, **extras(base)}.items():
        io.serialize(inst, OUT / f"{name}.json")
    doc = {"max_degree": ORACLE_DEGREE, "method": "fraction Gauss-Jordan on dense matrices",
           "dims": oracle(base)}
    (OUT / "oracle" / "dims.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(base)} base instances to {OUT}")


if __name__ == "__main__":
    main()

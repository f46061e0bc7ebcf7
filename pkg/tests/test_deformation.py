import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omega_nij import io
from omega_nij.cochains import differential_matrix
from omega_nij.cohomology import is_coboundary, is_cocycle
from omega_nij.deformation import (
    apply_d1,
    check_deformation,
    deformations_equal,
    equivalent_at_order_one,
    gauge_cochain,
    gauge_transform,
    identity_gauge,
    infinitesimal,
    make_deformation,
    make_gauge,
    psi_from_cochain,
    series_inverse,
    trivial_deformation,
    trivialization_step,
)
from omega_nij.errors import NoSolution, NotCoboundary, OrderMismatch, OrderTooLow, ShapeMismatch
from omega_nij.field import QQ
from omega_nij.linalg import kernel_basis

from conftest import CORPUS, poly_ctx
import oracles

REGULAR = [n for n in CORPUS if io.load_corpus(n).M is None]


def _random_gauge(ctx, rng, order=2, lo=-1, hi=1):
    return make_gauge(ctx, [QQ.array(rng.integers(lo, hi + 1, size=(ctx.k, ctx.d, ctx.d)).astype(object))
                            for _ in range(order)])


def _random_deformation(ctx, rng, order=2):
    mus = [QQ.array(rng.integers(-1, 2, size=ctx.A.mu.shape).astype(object)) for _ in range(order)]
    ns = [QQ.array(rng.integers(-1, 2, size=ctx.N.maps.shape).astype(object)) for _ in range(order)]
    return make_deformation(ctx, mus, ns)


def _verdicts(rep):
    return [o["verdict"] for o in rep["orders"]]


@pytest.mark.parametrize("name", REGULAR)
def test_trivial_deformation_passes(name, corpus):
    ctx = corpus[name].context()
    rep = check_deformation(trivial_deformation(ctx, 3), ctx)
    assert rep["verdict"] and rep["first_failure"] is None and len(rep["orders"]) == 4


@pytest.mark.parametrize("name", ["trunc_poly_D2_k1", "trunc_poly_D3_k1", "S2_trunc_poly_D2_k1",
                                  "left_zero_dual", "upper_triangular"])
def test_order_verdicts_match_series_oracle(name, corpus, rng):
    ctx = corpus[name].context()
    for _ in range(4):
        for D in (_random_deformation(ctx, rng), gauge_transform(trivial_deformation(ctx), _random_gauge(ctx, rng), ctx)):
            want = oracles.deformation_order_verdicts(D.mu_coeffs, D.n_coeffs, ctx.S.table)
            assert _verdicts(check_deformation(D, ctx)) == want


@pytest.mark.parametrize("name", REGULAR)
def test_gauged_trivial_deformation(name, corpus, rng):
    ctx = corpus[name].context(nf_variant="corrected")
    triv = trivial_deformation(ctx)
    for _ in range(3):
        G = _random_gauge(ctx, rng)
        D = gauge_transform(triv, G, ctx)
        assert check_deformation(D, ctx)["verdict"]
        inf = infinitesimal(D, ctx)
        assert is_cocycle(inf, 2, "nfa", ctx)
        # order-one gauge relation against the trivial infinitesimal (which is zero)
        assert QQ.equal_arrays(inf.vector(), apply_d1(G.psi_coeffs[1], ctx))
        step = trivialization_step(D, ctx)
        D2 = step["deformation"]
        assert QQ.is_zero_array(D2.mu_coeffs[1]) and QQ.is_zero_array(D2.n_coeffs[1])
        assert check_deformation(D2, ctx)["verdict"]


def test_literal_variant_misses_gauge_infinitesimals():
    # the literal cone is not a complex here, so exact infinitesimals need not be cocycles
    ctx = poly_ctx(3, 1)
    rng = np.random.default_rng(5)
    found = False
    for _ in range(10):
        D = gauge_transform(trivial_deformation(ctx), _random_gauge(ctx, rng), ctx)
        found |= not is_cocycle(infinitesimal(D, ctx), 2, "nfa", ctx)
    assert found


@pytest.mark.parametrize("name", ["trunc_poly_D3_k1", "trunc_poly_D3_k0", "S2_trunc_poly_D2_k1"])
def test_first_order_kernel_is_infinitesimal_space(name, corpus, rng):
    ctx = corpus[name].context(nf_variant="corrected")
    D2 = differential_matrix(2, "nfa", ctx)
    kern = kernel_basis(D2)
    for _ in range(6):
        coeffs = rng.integers(-2, 3, size=len(kern))
        v = QQ.reduce(sum(int(c) * b for c, b in zip(coeffs, kern)))
        c = ctx.cone_cochain(2, v)
        D = make_deformation(ctx, [c.alg.data], [np.transpose(c.nf.data, (0, 2, 1))])
        assert check_deformation(D, ctx)["verdict"]
        assert QQ.equal_arrays(infinitesimal(D, ctx).vector(), v)
    for _ in range(6):
        w = QQ.array(rng.integers(-2, 3, size=ctx.dim(2, "nfa")).astype(object))
        c = ctx.cone_cochain(2, w)
        D = make_deformation(ctx, [c.alg.data], [np.transpose(c.nf.data, (0, 2, 1))])
        assert check_deformation(D, ctx)["verdict"] == is_cocycle(w, 2, "nfa", ctx)


def test_gauge_relation_between_two_deformations(rng):
    ctx = poly_ctx(3, 1, variant="corrected")
    D = gauge_transform(trivial_deformation(ctx), _random_gauge(ctx, rng), ctx)
    G = _random_gauge(ctx, rng)
    D2 = gauge_transform(D, G, ctx)
    diff = QQ.reduce(infinitesimal(D2, ctx).vector() - infinitesimal(D, ctx).vector())
    assert QQ.equal_arrays(diff, apply_d1(G.psi_coeffs[1], ctx))
    psi = equivalent_at_order_one(D, D2, ctx)
    assert QQ.equal_arrays(apply_d1(psi, ctx), diff)


def test_non_trivial_infinitesimal_is_not_trivialized():
    ctx = poly_ctx(3, 1, variant="corrected")
    for v in kernel_basis(differential_matrix(2, "nfa", ctx)):
        try:
            is_coboundary(v, 2, "nfa", ctx)
        except NoSolution:
            c = ctx.cone_cochain(2, v)
            D = make_deformation(ctx, [c.alg.data], [np.transpose(c.nf.data, (0, 2, 1))])
            with pytest.raises(NotCoboundary):
                trivialization_step(D, ctx)
            return
    pytest.fail("expected a non-exact 2-cocycle")


def test_series_inverse(rng):
    ctx = poly_ctx(3, 1)
    G = _random_gauge(ctx, rng, order=3)
    inv = series_inverse(G, QQ)
    for n in range(4):
        acc = sum(np.einsum("wij,wjk->wik", inv[a], G.psi_coeffs[n - a]) for a in range(n + 1))
        want = G.psi_coeffs[0] if n == 0 else QQ.zeros(acc.shape)
        assert QQ.equal_arrays(QQ.reduce(acc), want)


def test_identity_gauge_is_neutral(rng):
    ctx = poly_ctx(3, 1)
    D = _random_deformation(ctx, rng)
    assert deformations_equal(gauge_transform(D, identity_gauge(ctx, 2), ctx), D, QQ)


def test_gauge_cochain_round_trip(rng):
    ctx = poly_ctx(3, 1)
    psi = QQ.array(rng.integers(-3, 4, size=(1, 3, 3)).astype(object))
    assert QQ.equal_arrays(psi_from_cochain(gauge_cochain(psi, ctx), ctx), psi)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=18, max_size=18))
def test_gauge_preserves_validity(vals):
    ctx = poly_ctx(3, 1)
    arr = np.array(vals, dtype=object).reshape(2, 1, 3, 3)
    G = make_gauge(ctx, [QQ.array(a) for a in arr])
    D = gauge_transform(trivial_deformation(ctx), G, ctx)
    assert check_deformation(D, ctx)["verdict"]


def test_stored_deformation_block(corpus):
    inst = corpus["trunc_poly_D3_k1_blocks"]
    ctx = inst.context()
    D = io.instance_deformation(inst, ctx)
    G = io.instance_gauge(inst, ctx)
    assert check_deformation(D, ctx)["verdict"]
    assert deformations_equal(D, gauge_transform(trivial_deformation(ctx), G, ctx), QQ)


def test_errors(corpus):
    ctx = poly_ctx(3, 1)
    with pytest.raises(OrderMismatch):
        gauge_transform(trivial_deformation(ctx, 2), identity_gauge(ctx, 3), ctx)
    with pytest.raises(OrderTooLow):
        infinitesimal(trivial_deformation(ctx, 0), ctx)
    with pytest.raises(ShapeMismatch):
        make_gauge(ctx, [QQ.zeros((1, 2, 2))])
    with pytest.raises(OrderMismatch):
        make_deformation(ctx, [QQ.zeros(ctx.A.mu.shape)], [])
    aug = corpus["dual_augmentation_module"].context()
    with pytest.raises(ShapeMismatch):
        trivialization_step(trivial_deformation(aug, 1), aug)

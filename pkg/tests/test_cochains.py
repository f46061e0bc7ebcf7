import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omega_nij.algebra import trivial_monoid, trivial_wrap
from omega_nij.cochains import (
    NF_VARIANTS,
    NFContext,
    basis_cochains,
    cone_differential,
    differential_matrix,
    hochschild_delta,
    nf_partial,
    nf_partial_explicit,
    phi,
    phi_matrix,
)
from omega_nij.derived import regular_nf_bimodule
from omega_nij.errors import NoUnit, ShapeMismatch
from omega_nij.field import QQ

from conftest import CORPUS, poly_ctx, rand_vec
import oracles

ORACLE_DEGREES = (0, 1, 2)


def _ctx(corpus, name, variant="star"):
    return corpus[name].context(nf_variant=variant)


def _degrees(ctx, top):
    return [n for n in range(top + 1) if n > 0 or ctx.unital]


def _oracle_nf(ctx):
    star = oracles.star_mu(ctx.A.mu, ctx.N.maps, ctx.S.table)
    L, R = oracles.induced(ctx.A.mu, ctx.N.maps, ctx.M.left, ctx.M.right, ctx.M.nm.maps, ctx.S.table)
    return star, L, R


# --------------------------------------------------------------------------
# direct evaluation against the loop oracles


@pytest.mark.parametrize("name", CORPUS)
def test_delta_matches_oracle(name, corpus, rng):
    ctx = _ctx(corpus, name)
    for n in _degrees(ctx, 2):
        f = rand_vec(rng, ctx.alg.dim(n)).reshape(ctx.alg.shape(n))
        want = oracles.delta(f, n, ctx.A.mu, ctx.M.left, ctx.M.right, ctx.S.table, ctx.S.unit)
        assert QQ.equal_arrays(hochschild_delta(n, f, ctx).data, want)


@pytest.mark.parametrize("variant", NF_VARIANTS)
@pytest.mark.parametrize("name", CORPUS)
def test_nf_partial_matches_oracle(name, variant, corpus, rng):
    ctx = _ctx(corpus, name, variant)
    star, L, R = _oracle_nf(ctx)
    for n in _degrees(ctx, 2):
        g = rand_vec(rng, ctx.alg.dim(n)).reshape(ctx.alg.shape(n))
        want = oracles.delta(g, n, star, L, R, ctx.S.table, ctx.S.unit)
        if variant == "corrected" and n >= 1:
            want = want - oracles.correction(g, n, ctx.A.mu, ctx.M.nm.maps, ctx.S.table)
        assert QQ.equal_arrays(nf_partial(n, g, ctx).data, want)


@pytest.mark.parametrize("name", CORPUS)
def test_phi_matches_oracle(name, corpus, rng):
    ctx = _ctx(corpus, name)
    for n in _degrees(ctx, 2):
        f = rand_vec(rng, ctx.alg.dim(n)).reshape(ctx.alg.shape(n))
        want = oracles.phi(f, n, ctx.N.maps, ctx.M.nm.maps, ctx.S.table)
        assert QQ.equal_arrays(phi(n, f, ctx).data, want)


# --------------------------------------------------------------------------
# matrices against direct evaluation


@pytest.mark.parametrize("variant", NF_VARIANTS)
@pytest.mark.parametrize("name", CORPUS)
def test_matrices_agree_with_direct_paths(name, variant, corpus, rng):
    ctx = _ctx(corpus, name, variant)
    for n in _degrees(ctx, 3):
        v = rand_vec(rng, ctx.alg.dim(n))
        assert QQ.equal_arrays(differential_matrix(n, "alg", ctx).apply(v), hochschild_delta(n, v, ctx).vector())
        assert QQ.equal_arrays(differential_matrix(n, "nf", ctx).apply(v), nf_partial(n, v, ctx).vector())
        assert QQ.equal_arrays(phi_matrix(n, ctx).apply(v), phi(n, v, ctx).vector())
        w = rand_vec(rng, ctx.dim(n, "nfa"))
        got = differential_matrix(n, "nfa", ctx).apply(w)
        assert QQ.equal_arrays(got, cone_differential(n, ctx.cone_cochain(n, w), ctx).vector())


@pytest.mark.parametrize("variant", NF_VARIANTS)
@pytest.mark.parametrize("name", CORPUS)
def test_explicit_expansion_agrees(name, variant, corpus, rng):
    ctx = _ctx(corpus, name, variant)
    for n in (1, 2, 3):
        for _ in range(5):
            g = rand_vec(rng, ctx.alg.dim(n))
            assert QQ.equal_arrays(nf_partial_explicit(n, g, ctx).vector(), nf_partial(n, g, ctx).vector())


# --------------------------------------------------------------------------
# complex identities


@pytest.mark.parametrize("name", CORPUS)
def test_delta_squares_to_zero(name, corpus):
    ctx = _ctx(corpus, name)
    for n in _degrees(ctx, 2):
        assert (differential_matrix(n + 1, "alg", ctx) @ differential_matrix(n, "alg", ctx)).is_zero()


@pytest.mark.parametrize("name", CORPUS)
def test_corrected_variant_is_complex_and_chain_map(name, corpus):
    ctx = _ctx(corpus, name, "corrected")
    for n in _degrees(ctx, 2):
        assert (differential_matrix(n + 1, "nf", ctx) @ differential_matrix(n, "nf", ctx)).is_zero()
        assert (differential_matrix(n + 1, "nfa", ctx) @ differential_matrix(n, "nfa", ctx)).is_zero()
        lhs = phi_matrix(n + 1, ctx) @ differential_matrix(n, "alg", ctx)
        rhs = differential_matrix(n, "nf", ctx) @ phi_matrix(n, ctx)
        assert lhs.equals(rhs)


def test_literal_variant_chain_map_gap():
    # phi(delta f) - partial(phi f) = N_M(phi f(a.b)) in degree 1
    ctx = poly_ctx(3, 1)
    rng = np.random.default_rng(7)
    f = rand_vec(rng, ctx.alg.dim(1))
    pf = phi(1, f, ctx).data
    gap = phi(2, hochschild_delta(1, f, ctx), ctx).data - nf_partial(1, pf, ctx).data
    expected = np.einsum("qo,abl,lo->abq", ctx.M.nm.maps[0], ctx.A.mu[0, 0], pf[0])
    assert QQ.equal_arrays(QQ.reduce(gap[0, 0]), QQ.reduce(expected))
    assert not QQ.is_zero_array(QQ.reduce(gap))


# --------------------------------------------------------------------------
# small explicit values


def _k_ctx(n_value=0):
    A = trivial_wrap([[[1]]])
    T = trivial_monoid()
    from omega_nij.algebra import OperatorFamily
    N = OperatorFamily(QQ, QQ.array([[[n_value]]]))
    return NFContext(T, A, N, regular_nf_bimodule(A, T, N))


def test_ground_field_delta_matrices():
    ctx = _k_ctx()
    assert differential_matrix(0, "alg", ctx).to_dense().tolist() == [[0]]
    assert differential_matrix(1, "alg", ctx).to_dense().tolist() == [[1]]
    assert differential_matrix(2, "alg", ctx).to_dense().tolist() == [[0]]


def test_ground_field_cone_degree_zero():
    ctx = _k_ctx()
    assert differential_matrix(0, "nfa", ctx).to_dense().tolist() == [[0], [-1]]


def test_phi_degree_zero_is_identity(rng):
    ctx = poly_ctx(3, 1)
    v = rand_vec(rng, ctx.alg.dim(0))
    assert QQ.equal_arrays(phi(0, v, ctx).vector(), v)


def test_phi_with_zero_operators_is_signed_power():
    ctx = poly_ctx(3, 1)
    # N = x-multiplication, N_M = N; with one input phi f = f(N u) - N_M f(u)
    e = QQ.zeros(ctx.alg.dim(1))
    e[0] = 1  # f(1) = 1
    out = phi(1, e, ctx).data[0]
    assert out[0].tolist() == [0, -1, 0]
    assert out[2].tolist() == [0, 0, 0]


# --------------------------------------------------------------------------
# properties


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=27, max_size=27), st.integers(-3, 3))
def test_delta_is_linear(vals, c):
    ctx = poly_ctx(3, 1)
    f = QQ.array(np.array(vals[:9], dtype=object))
    g = QQ.array(np.array(vals[9:18], dtype=object))
    lhs = hochschild_delta(1, QQ.reduce(f * c + g), ctx).vector()
    rhs = QQ.reduce(hochschild_delta(1, f, ctx).vector() * c + hochschild_delta(1, g, ctx).vector())
    assert QQ.equal_arrays(lhs, rhs)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9), st.sampled_from(NF_VARIANTS))
def test_direct_delta_squares_to_zero(vals, variant):
    ctx = poly_ctx(3, 1, variant=variant)
    f = QQ.array(np.array(vals, dtype=object))
    assert hochschild_delta(2, hochschild_delta(1, f, ctx), ctx).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=27, max_size=27))
def test_corrected_nf_squares_to_zero_on_cochains(vals):
    ctx = poly_ctx(3, 1, variant="corrected")
    g = QQ.array(np.array(vals, dtype=object))
    assert nf_partial(3, nf_partial(2, g, ctx), ctx).is_zero()


# --------------------------------------------------------------------------
# errors and bookkeeping


def test_shape_mismatch(rng):
    ctx = poly_ctx(3, 1)
    with pytest.raises(ShapeMismatch):
        hochschild_delta(1, rand_vec(rng, 5), ctx)
    with pytest.raises(ShapeMismatch):
        ctx.cone_cochain(2, rand_vec(rng, 3))


def test_degree_zero_needs_unit(corpus):
    ctx = _ctx(corpus, "left_zero_dual")
    with pytest.raises(NoUnit):
        hochschild_delta(0, QQ.zeros(2), ctx)
    assert ctx.dim(0, "alg") == 0
    assert differential_matrix(0, "alg", ctx).shape == (ctx.dim(1, "alg"), 0)


def test_negative_degree_and_explicit_degree_zero():
    ctx = poly_ctx(2, 1)
    with pytest.raises(ValueError):
        hochschild_delta(-1, QQ.zeros(1), ctx)
    with pytest.raises(ValueError):
        nf_partial_explicit(0, QQ.zeros(2), ctx)


def test_unknown_variant_rejected():
    A = trivial_wrap([[[1]]])
    T = trivial_monoid()
    from omega_nij.algebra import OperatorFamily
    N = OperatorFamily(QQ, QQ.array([[[0]]]))
    with pytest.raises(ValueError):
        NFContext(T, A, N, regular_nf_bimodule(A, T, N), nf_variant="other")


@pytest.mark.parametrize("kind", ["alg", "nf", "nfa"])
def test_basis_labels_cover_the_space(kind, S2):
    ctx = poly_ctx(2, 1, S2)
    for n in (0, 1, 2):
        labels = basis_cochains(n, kind, ctx)
        assert len(labels) == ctx.dim(n, kind)
        assert len(set(labels)) == len(labels)

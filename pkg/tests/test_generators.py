import numpy as np
import pytest

from omega_nij import io
from omega_nij.algebra import trivial_monoid, trivial_wrap, validate_omega_associativity
from omega_nij.field import QQ
from omega_nij.generators import (
    SQUARE_KINDS,
    left_zero_semigroup,
    operator_with_square,
    poly_mu,
    product_mu,
    scaled_family,
    search_nijenhuis,
    search_scaled_families,
    two_element_monoid,
    upper_triangular_mu,
)

import oracles


@pytest.mark.parametrize("mu", [poly_mu(2), poly_mu(4), product_mu(3), upper_triangular_mu()])
def test_classical_structure_constants_are_associative(mu):
    assert not oracles.assoc_failures(trivial_wrap(mu).mu, trivial_monoid().table)


def test_semigroups():
    S2, LZ = two_element_monoid(), left_zero_semigroup()
    assert S2.unit == 0 and LZ.unit is None
    assert LZ.table.tolist() == [[0, 0], [1, 1]]


def test_scaled_family_search_matches_brute_force():
    S2 = two_element_monoid()
    found = search_scaled_families(poly_mu(2), S2, values=(0, 1, 2))
    brute = [c for c in np.ndindex(3, 3, 3, 3)
             if not oracles.assoc_failures(scaled_family(poly_mu(2), S2, c).mu, S2.table)]
    assert found == [tuple(c) for c in brute]
    assert (1, 1, 1, 2) in found and (1, 1, 1, 1) in found


@pytest.mark.parametrize("name", ["S2_dual_scaled_1112", "S2_kxk_scaled_1001", "upper_triangular", "left_zero_dual"])
def test_solver_reproduces_corpus_operators(name, corpus):
    inst = corpus[name]
    found = search_nijenhuis(inst.A, inst.S)
    assert any(QQ.equal_arrays(N.maps, inst.N.maps) for N in found)
    for N in found:
        assert not oracles.nijenhuis_failures(inst.A.mu, N.maps, inst.S.table)


def test_solver_is_exhaustive_on_small_case():
    A = trivial_wrap(poly_mu(2))
    T = trivial_monoid()
    found = {tuple(N.maps.reshape(-1)) for N in search_nijenhuis(A, T)}
    brute = set()
    for v in np.ndindex(*(2,) * 4):
        m = QQ.array(np.array(v, dtype=object).reshape(1, 2, 2))
        if not oracles.nijenhuis_failures(A.mu, m, T.table):
            brute.add(tuple(m.reshape(-1)))
    assert found == brute
    assert len(search_nijenhuis(A, T, limit=2)) == 2


@pytest.mark.parametrize("kind", SQUARE_KINDS)
@pytest.mark.parametrize("seed", range(5))
def test_operator_with_square(kind, seed):
    d = 4
    N = operator_with_square(kind, d, np.random.default_rng(seed))
    sq = QQ.reduce(N.dot(N))
    want = {"square-zero": QQ.zeros((d, d)), "idempotent": N, "involution": QQ.eye(d)}[kind]
    assert QQ.equal_arrays(sq, want)


def test_unknown_square_kind():
    with pytest.raises(ValueError):
        operator_with_square("cube", 2, np.random.default_rng(0))


def test_scaled_family_coefficients():
    S2 = two_element_monoid()
    A = scaled_family(poly_mu(2), S2, (1, 0, 0, 3))
    assert QQ.is_zero_array(A.mu[0, 1]) and A.mu[1, 1, 0, 0, 0] == 3
    assert validate_omega_associativity(A, S2).verdict == (not oracles.assoc_failures(A.mu, S2.table))


def test_corpus_is_regenerable():
    import importlib.util
    from pathlib import Path
    path = Path(__file__).resolve().parents[1] / "tools" / "make_corpus.py"
    spec = importlib.util.spec_from_file_location("make_corpus", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    base = mod.instances()
    for name, inst in {**base, **mod.extras(base)}.items():
        assert io.serialize(inst) == (io.corpus_dir() / f"{name}.json").read_text(), name

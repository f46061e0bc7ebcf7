"""Compare the numba and numpy modular kernels.

Two measurements:

* kernel level: ``rref_mod_p`` and ``matmul_mod_p`` on random int64 matrices,
  numba-compiled versus the numpy fallback, in one process;
* end to end: exact rank of cochain differentials on the largest corpus
  instances, run in subprocesses with ``OMEGA_NIJ_NUMBA`` set to 1 and 0.

Usage::

    python3 benchmarks/bench_kernels.py [--sizes 100 200 400] [--repeat 3]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

P = 2147483629  # largest prime below 2**31

END_TO_END = r"""
import json, time
from omega_nij import io, _kernels
from omega_nij.cochains import differential_matrix
from omega_nij.cohomology import rank_of
out = {"backend": _kernels.BACKEND, "cases": {}}
for name, n, kind in [("trunc_poly_D5_k2", 3, "nfa"), ("trunc_poly_D6_k2", 2, "nfa"), ("trunc_poly_D6_k2", 3, "alg")]:
    ctx = io.load_corpus(name).context(nf_variant="corrected")
    M = differential_matrix(n, kind, ctx)
    rank_of(differential_matrix(1, "alg", ctx))  # warm-up / jit compile
    t0 = time.perf_counter()
    r = rank_of(M)
    out["cases"][f"{name} d^{n} {kind} {M.shape[0]}x{M.shape[1]}"] = (r, time.perf_counter() - t0)
print(json.dumps(out))
"""


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_level(sizes, repeat):
    from omega_nij import _kernels

    rng = np.random.default_rng(0)
    rows = []
    have = _kernels.HAVE_NUMBA
    if have:  # trigger compilation outside the timed region
        _kernels.rref_mod_p(rng.integers(0, P, size=(4, 4)).astype(np.int64), P)
        _kernels.matmul_mod_p(np.ones((2, 2), np.int64), np.ones((2, 2), np.int64), P)
    for n in sizes:
        A = rng.integers(0, P, size=(n, n + n // 2)).astype(np.int64)
        B = rng.integers(0, P, size=(n + n // 2, n)).astype(np.int64)
        t_np = _best(lambda: _kernels.rref_mod_p_numpy(A.copy(), P), repeat)
        m_np = _best(lambda: _kernels.matmul_mod_p_numpy(A, B, P), repeat)
        row = {"n": n, "rref_numpy": t_np, "matmul_numpy": m_np}
        if have:
            row["rref_numba"] = _best(lambda: _kernels.rref_mod_p(A.copy(), P), repeat)
            row["matmul_numba"] = _best(lambda: _kernels.matmul_mod_p(A, B, P), repeat)
            # both paths must agree
            X, Y = A.copy(), A.copy()
            assert list(_kernels.rref_mod_p_numpy(X, P)) == list(_kernels.rref_mod_p(Y, P))
            assert np.array_equal(X, Y)
        rows.append(row)
    return have, rows


def end_to_end():
    results = {}
    for flag in ("1", "0"):
        env = dict(os.environ, OMEGA_NIJ_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        doc = json.loads(res.stdout.strip().splitlines()[-1])
        results[doc["backend"]] = doc["cases"]
    return results


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args(argv)

    have, rows = kernel_level(args.sizes, args.repeat)
    print(f"kernel level (p = {P}, best of {args.repeat}, seconds)")
    print(f"{'n':>6} {'rref numpy':>12} {'rref numba':>12} {'speedup':>8} {'matmul numpy':>13} {'matmul numba':>13}")
    for r in rows:
        rn, mn = r.get("rref_numba"), r.get("matmul_numba")
        sp = f"{r['rref_numpy'] / rn:8.1f}" if rn else f"{'-':>8}"
        print(f"{r['n']:>6} {r['rref_numpy']:12.4f} {rn if rn is not None else float('nan'):12.4f} {sp} "
              f"{r['matmul_numpy']:13.4f} {mn if mn is not None else float('nan'):13.4f}")
    if not have:
        print("numba is unavailable or disabled; only the numpy path was timed")

    if not args.skip_end_to_end:
        res = end_to_end()
        print("\nend to end: exact rank of differential matrices (seconds)")
        cases = next(iter(res.values())).keys()
        for case in cases:
            cells = "  ".join(f"{b}: rank {res[b][case][0]} in {res[b][case][1]:.3f}" for b in res)
            print(f"  {case}  {cells}")
            ranks = {res[b][case][0] for b in res}
            assert len(ranks) == 1, f"backends disagree on {case}"


if __name__ == "__main__":
    main()

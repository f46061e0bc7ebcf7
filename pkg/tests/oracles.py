"""Slow, loop-based reference implementations used as independent oracles.

Nothing here imports library internals beyond plain data containers; every
formula is evaluated entry by entry with Python arithmetic.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import numpy as np


def prod_word(table, word):
    acc = word[0]
    for w in word[1:]:
        acc = int(table[acc, w])
    return acc


# --------------------------------------------------------------------------
# axioms, evaluated on basis elements


def assoc_failures(mu, table):
    """Basis triples where (a._{A,B}b)._{AB,C}c != a._{A,BC}(b._{B,C}c)."""
    k, d = mu.shape[0], mu.shape[-1]
    bad = []
    for A, B, C in product(range(k), repeat=3):
        AB, BC = int(table[A, B]), int(table[B, C])
        for i, j, l in product(range(d), repeat=3):
            lhs = [sum(mu[A, B, i, j, p] * mu[AB, C, p, l, q] for p in range(d)) for q in range(d)]
            rhs = [sum(mu[B, C, j, l, p] * mu[A, BC, i, p, q] for p in range(d)) for q in range(d)]
            if lhs != rhs:
                bad.append((A, B, C, i, j, l))
    return bad


def _apply(mat, vec):
    return [sum(mat[r][c] * vec[c] for c in range(len(vec))) for r in range(len(mat))]


def _mult(mu, A, B, x, y):
    d = mu.shape[-1]
    return [sum(x[i] * y[j] * mu[A, B, i, j, q] for i in range(d) for j in range(d)) for q in range(d)]


def nijenhuis_failures(mu, N, table):
    k, d = mu.shape[0], mu.shape[-1]
    bad = []
    basis = [[1 if t == s else 0 for t in range(d)] for s in range(d)]
    for A, B in product(range(k), repeat=2):
        AB = int(table[A, B])
        for i, j in product(range(d), repeat=2):
            a, b = basis[i], basis[j]
            Na, Nb = _apply(N[A], a), _apply(N[B], b)
            lhs = _mult(mu, A, B, Na, Nb)
            inner = [x + y - z for x, y, z in zip(_mult(mu, A, B, Na, b), _mult(mu, A, B, a, Nb),
                                                _apply(N[AB], _mult(mu, A, B, a, b)))]
            rhs = _apply(N[AB], inner)
            if lhs != rhs:
                bad.append((A, B, i, j))
    return bad


def star_mu(mu, N, table):
    """a * b = a.N(b) + N(a).b - N(a.b), entry by entry."""
    k, d = mu.shape[0], mu.shape[-1]
    out = np.empty(mu.shape, dtype=object)
    basis = [[1 if t == s else 0 for t in range(d)] for s in range(d)]
    for A, B in product(range(k), repeat=2):
        AB = int(table[A, B])
        for i, j in product(range(d), repeat=2):
            a, b = basis[i], basis[j]
            v = [x + y - z for x, y, z in zip(_mult(mu, A, B, a, _apply(N[B], b)),
                                             _mult(mu, A, B, _apply(N[A], a), b),
                                             _apply(N[AB], _mult(mu, A, B, a, b)))]
            out[A, B, i, j] = v
    return out


# --------------------------------------------------------------------------
# Hochschild-type differential with actions, by the defining formula


def delta(f, n, mu, left, right, table, unit):
    """(delta f) for a cochain tensor f of degree n.

    Sign convention: (-1)^(n+1) on the left action term, (-1)^(n-i+1) on
    the i-th inner term, +1 on the right action term; degree 0 uses
    a ._{w,1} m - m ._{1,w} a.
    """
    k, d, m = mu.shape[0], mu.shape[-1], left.shape[-1]
    out = np.empty((k,) * (n + 1) + (d,) * (n + 1) + (m,), dtype=object)
    out.fill(0)
    if n == 0:
        for w, a in product(range(k), range(d)):
            for q in range(m):
                out[w, a, q] = sum(f[x] * left[w, unit, a, x, q] - f[x] * right[unit, w, x, a, q] for x in range(m))
        return out
    for om in product(range(k), repeat=n + 1):
        for us in product(range(d), repeat=n + 1):
            acc = [0] * m
            # left action
            rest = prod_word(table, om[1:])
            val = f[om[1:] + us[1:]]
            s = -1 if n % 2 == 0 else 1
            for q in range(m):
                acc[q] += s * sum(left[om[0], rest, us[0], x, q] * val[x] for x in range(m))
            # inner terms
            for i in range(1, n + 1):
                s = 1 if (n - i + 1) % 2 == 0 else -1
                merged = om[: i - 1] + (int(table[om[i - 1], om[i]]),) + om[i + 1:]
                for p in range(d):
                    c = mu[om[i - 1], om[i], us[i - 1], us[i], p]
                    if c == 0:
                        continue
                    val = f[merged + us[: i - 1] + (p,) + us[i + 1:]]
                    for q in range(m):
                        acc[q] += s * c * val[q]
            # right action
            head = prod_word(table, om[:n])
            val = f[om[:n] + us[:n]]
            for q in range(m):
                acc[q] += sum(val[x] * right[head, om[n], x, us[n], q] for x in range(m))
            out[om + us] = np.array(acc, dtype=object)
    return out


def induced(mu, N, left, right, NM, table):
    """a |> m = N(a).m - N_M(a.m) and m <| a = m.N(a) - N_M(m.a)."""
    k, d, m = mu.shape[0], mu.shape[-1], left.shape[-1]
    L = np.empty(left.shape, dtype=object)
    R = np.empty(right.shape, dtype=object)
    for A, B in product(range(k), repeat=2):
        AB = int(table[A, B])
        for i, x in product(range(d), range(m)):
            for y in range(m):
                L[A, B, i, x, y] = (sum(N[A][p][i] * left[A, B, p, x, y] for p in range(d))
                                    - sum(NM[AB][y][q] * left[A, B, i, x, q] for q in range(m)))
                R[A, B, x, i, y] = (sum(N[B][p][i] * right[A, B, x, p, y] for p in range(d))
                                    - sum(NM[AB][y][q] * right[A, B, x, i, q] for q in range(m)))
    return L, R


def phi(f, n, N, NM, table):
    """Subset sum: N at chosen inputs, -N_M at the output once per unchosen input."""
    k, d = N.shape[0], N.shape[1]
    m = NM.shape[1]
    out = np.empty(f.shape, dtype=object)
    out.fill(0)
    if n == 0:
        return f.copy()
    for om in product(range(k), repeat=n):
        P = prod_word(table, om)
        for us in product(range(d), repeat=n):
            acc = [Fraction(0)] * m
            for r in range(n + 1):
                for sub in combinations(range(n), r):
                    # expand f(.., N(u_j), ..) over the basis
                    vec = [Fraction(0)] * m
                    choices = [range(d) if j in sub else [us[j]] for j in range(n)]
                    for vs in product(*choices):
                        coef = 1
                        for j in sub:
                            coef *= N[om[j]][vs[j]][us[j]]
                        if coef == 0:
                            continue
                        val = f[om + tuple(vs)]
                        for q in range(m):
                            vec[q] += coef * val[q]
                    for _ in range(n - r):
                        vec = [-x for x in _apply(NM[P], vec)]
                    acc = [a + b for a, b in zip(acc, vec)]
            out[om + us] = np.array([Fraction(x) for x in acc], dtype=object)
    return out


def correction(g, n, mu, NM, table):
    """N_M at the full product index applied to the inner terms over mu."""
    k, d = mu.shape[0], mu.shape[-1]
    m = NM.shape[1]
    zero_l = np.zeros((k, k, d, m, m), dtype=object)
    zero_r = np.zeros((k, k, m, d, m), dtype=object)
    inner = delta(g, n, mu, zero_l, zero_r, table, None)
    out = np.empty(inner.shape, dtype=object)
    for om in product(range(k), repeat=n + 1):
        P = prod_word(table, om)
        for us in product(range(d), repeat=n + 1):
            out[om + us] = np.array(_apply(NM[P], list(inner[om + us])), dtype=object)
    return out


# --------------------------------------------------------------------------
# exact rank by fraction elimination


def rank(rows):
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return 0
    r = 0
    ncols = len(M[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                t = M[i][c] / M[r][c]
                M[i] = [a - t * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return r


# --------------------------------------------------------------------------
# bimodule axioms and the induced-action defect


def bimodule_failures(mu, left, right, table):
    """Basis witnesses (axiom, A, B, C) where one of the three bimodule identities fails."""
    k, d, m = mu.shape[0], mu.shape[-1], left.shape[-1]
    bad = set()
    for A, B, C in product(range(k), repeat=3):
        AB, BC = int(table[A, B]), int(table[B, C])
        for i, j, x in product(range(d), range(d), range(m)):
            # (a.b).m = a.(b.m)
            lhs = [sum(mu[A, B, i, j, p] * left[AB, C, p, x, q] for p in range(d)) for q in range(m)]
            rhs = [sum(left[B, C, j, x, y] * left[A, BC, i, y, q] for y in range(m)) for q in range(m)]
            if lhs != rhs:
                bad.add(("left", A, B, C))
            # (m.a).b = m.(a.b)
            lhs = [sum(right[A, B, x, i, y] * right[AB, C, y, j, q] for y in range(m)) for q in range(m)]
            rhs = [sum(mu[B, C, i, j, p] * right[A, BC, x, p, q] for p in range(d)) for q in range(m)]
            if lhs != rhs:
                bad.add(("right", A, B, C))
            # (a.m).b = a.(m.b)
            lhs = [sum(left[A, B, i, x, y] * right[AB, C, y, j, q] for y in range(m)) for q in range(m)]
            rhs = [sum(right[B, C, x, j, y] * left[A, BC, i, y, q] for y in range(m)) for q in range(m)]
            if lhs != rhs:
                bad.add(("middle", A, B, C))
    return bad


def induced_left_defect(mu, N, left, NM, table):
    """Index triples (A, B, C) where N_M(N_M(c.m) - N(c).m) != 0 for some basis a, b, m, c = a.b."""
    k, d, m = mu.shape[0], mu.shape[-1], left.shape[-1]
    bad = set()
    for A, B, C in product(range(k), repeat=3):
        AB, P = int(table[A, B]), prod_word(table, (A, B, C))
        for i, j, x in product(range(d), range(d), range(m)):
            c = [mu[A, B, i, j, p] for p in range(d)]
            em = [1 if y == x else 0 for y in range(m)]
            cm = [sum(c[p] * left[AB, C, p, x, q] for p in range(d)) for q in range(m)]
            Nc = _apply(N[AB], c)
            Ncm = [sum(Nc[p] * left[AB, C, p, y, q] * em[y] for p in range(d) for y in range(m)) for q in range(m)]
            inner = [a - b for a, b in zip(_apply(NM[P], cm), Ncm)]
            if any(v != 0 for v in _apply(NM[P], inner)):
                bad.add((A, B, C))
    return bad


# --------------------------------------------------------------------------
# truncated power series, coefficient lists of vectors


def _series_mult(mus, A, B, xs, ys, K):
    d = mus[0].shape[-1]
    out = [[0] * d for _ in range(K + 1)]
    for r in range(K + 1):
        for s in range(K + 1 - r):
            for t in range(K + 1 - r - s):
                m = mus[r]
                for i in range(d):
                    if xs[s][i] == 0:
                        continue
                    for j in range(d):
                        if ys[t][j] == 0:
                            continue
                        for q in range(d):
                            out[r + s + t][q] += xs[s][i] * ys[t][j] * m[A, B, i, j, q]
    return out


def _series_apply(ns, w, xs, K):
    d = len(xs[0])
    out = [[0] * d for _ in range(K + 1)]
    for r in range(K + 1):
        for s in range(K + 1 - r):
            v = _apply(ns[r][w], xs[s])
            out[r + s] = [a + b for a, b in zip(out[r + s], v)]
    return out


def deformation_order_verdicts(mus, ns, table):
    """Per order n, whether both deformed identities hold at t^n on all basis inputs."""
    K = len(mus) - 1
    k, d = mus[0].shape[0], mus[0].shape[-1]
    ok = [True] * (K + 1)

    def basis(i):
        return [[1 if q == i else 0 for q in range(d)]] + [[0] * d for _ in range(K)]

    def mark(lhs, rhs):
        for n in range(K + 1):
            if lhs[n] != rhs[n]:
                ok[n] = False

    for A, B, C in product(range(k), repeat=3):
        AB, BC = int(table[A, B]), int(table[B, C])
        for i, j, l in product(range(d), repeat=3):
            x, y, z = basis(i), basis(j), basis(l)
            mark(_series_mult(mus, AB, C, _series_mult(mus, A, B, x, y, K), z, K),
                 _series_mult(mus, A, BC, x, _series_mult(mus, B, C, y, z, K), K))
    for A, B in product(range(k), repeat=2):
        AB = int(table[A, B])
        for i, j in product(range(d), repeat=2):
            x, y = basis(i), basis(j)
            Nx, Ny = _series_apply(ns, A, x, K), _series_apply(ns, B, y, K)
            lhs = _series_mult(mus, A, B, Nx, Ny, K)
            a = _series_mult(mus, A, B, Nx, y, K)
            b = _series_mult(mus, A, B, x, Ny, K)
            c = _series_apply(ns, AB, _series_mult(mus, A, B, x, y, K), K)
            inner = [[p + q - r for p, q, r in zip(u, v, w)] for u, v, w in zip(a, b, c)]
            mark(lhs, _series_apply(ns, AB, inner, K))
    return ok


# --------------------------------------------------------------------------
# single-witness evaluation, used to confirm reported violations


def assoc_at(F, G, H, K, table, A, B, C, i, j, l):
    """Both sides of (x._{A,B}y)._{AB,C}z = x._{A,BC}(y._{B,C}z) at basis (i, j, l)."""
    AB, BC = int(table[A, B]), int(table[B, C])
    out = G.shape[-1]
    lhs = [sum(F[A, B, i, j, p] * G[AB, C, p, l, q] for p in range(F.shape[-1])) for q in range(out)]
    rhs = [sum(H[B, C, j, l, p] * K[A, BC, i, p, q] for p in range(H.shape[-1])) for q in range(out)]
    return lhs, rhs


def nijenhuis_like_at(Bt, P, Q, R, table, A, B, i, j):
    """Both sides of P(u).Q(v) = R(P(u).v + u.Q(v) - R(u.v)) at basis (i, j)."""
    AB = int(table[A, B])
    out = Bt.shape[-1]
    nx, ny = P.shape[1], Q.shape[1]
    lhs = [sum(P[A][x][i] * Q[B][y][j] * Bt[A, B, x, y, q] for x in range(nx) for y in range(ny))
           for q in range(out)]
    inner = [sum(P[A][x][i] * Bt[A, B, x, j, q] for x in range(nx))
             + sum(Q[B][y][j] * Bt[A, B, i, y, q] for y in range(ny))
             - sum(R[AB][q][p] * Bt[A, B, i, j, p] for p in range(out)) for q in range(out)]
    return lhs, _apply(R[AB], inner)


def rota_baxter_failures(mu, N, table, kind):
    """Basis pairs failing the weight-0 ("weight0"), weight -1 ("weight-1") or
    modified weight -1 ("modified-1") identity."""
    k, d = mu.shape[0], mu.shape[-1]
    bad = []
    basis = [[1 if t == s else 0 for t in range(d)] for s in range(d)]
    for A, B in product(range(k), repeat=2):
        AB = int(table[A, B])
        for i, j in product(range(d), repeat=2):
            a, b = basis[i], basis[j]
            Na, Nb = _apply(N[A], a), _apply(N[B], b)
            lhs = _mult(mu, A, B, Na, Nb)
            ab = _mult(mu, A, B, a, b)
            inner = [x + y for x, y in zip(_mult(mu, A, B, Na, b), _mult(mu, A, B, a, Nb))]
            if kind == "weight-1":
                inner = [x - y for x, y in zip(inner, ab)]
            rhs = _apply(N[AB], inner)
            if kind == "modified-1":
                rhs = [x - y for x, y in zip(rhs, ab)]
            if lhs != rhs:
                bad.append((A, B, i, j))
    return bad

"""Exact matrix routines over (possibly noncommutative) division rings.

Matrices are numpy object arrays. Entries only need ``+``, ``-``, ``*``,
truthiness (nonzero test) and an ``inverse()`` method, so the same code
serves field elements and division-algebra elements. Products are always
formed left-to-right, which keeps the routines valid without commutativity.
"""

from __future__ import annotations

import numpy as np

from .errors import NotInvertible


def zeros(n, m, zero):
    out = np.empty((n, m), dtype=object)
    out.fill(zero)
    return out


def identity(n, one, zero):
    out = zeros(n, n, zero)
    for i in range(n):
        out[i, i] = one
    return out


def as_matrix(rows):
    """Build a 2-d object array without numpy unpacking the entries."""
    rows = [list(r) for r in rows]
    n = len(rows)
    m = len(rows[0]) if n else 0
    out = np.empty((n, m), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != m:
            raise ValueError("ragged matrix")
        for j, x in enumerate(r):
            out[i, j] = x
    return out


def apply(f, M):
    out = np.empty(M.shape, dtype=object)
    for idx, x in np.ndenumerate(M):
        out[idx] = f(x)
    return out


def conj_transpose(M, conj):
    return apply(conj, M).T.copy()


def matmul(A, B, zero):
    # numpy's object matmul cannot handle an empty inner dimension
    if A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1], zero)
    return A @ B


def is_zero(M):
    return not any(bool(x) for x in M.flat)


def equal(A, B):
    return A.shape == B.shape and all(x == y for x, y in zip(A.flat, B.flat))


def block_diag(blocks, zero):
    n = sum(b.shape[0] for b in blocks)
    out = zeros(n, n, zero)
    pos = 0
    for b in blocks:
        k = b.shape[0]
        out[pos:pos + k, pos:pos + k] = b
        pos += k
    return out


def inverse(M, one, zero):
    """Gauss-Jordan inverse; row operations act by left multiplication."""
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("square matrix expected")
    work = np.concatenate([M.copy(), identity(n, one, zero)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r, col]), None)
        if piv is None:
            raise NotInvertible("matrix is singular")
        if piv != col:
            work[[col, piv]] = work[[piv, col]]
        p_inv = work[col, col].inverse()
        work[col] = [p_inv * x for x in work[col]]
        for r in range(n):
            c = work[r, col]
            if r != col and c:
                work[r] = [x - c * y for x, y in zip(work[r], work[col])]
    return work[:, n:].copy()


def hermitian_diagonalize(H, conj, units, one, zero, eps=1):
    """Diagonalize an eps-hermitian matrix by congruence.

    Returns ``(G, entries, zeros)`` with ``conj(G)^t H G`` equal to
    ``diag(*entries, 0, ..., 0)``. Pivot search on the remaining block: the
    first nonzero diagonal entry, otherwise ``e_i + e_j d`` over pairs
    ``i < j`` in lexicographic order and ``d`` in ``units``. Fails (raises
    ``ValueError``) only when every vector is isotropic but the block is
    nonzero, which happens for alternating forms over a commutative field.
    """
    n = H.shape[0]
    W = H.copy()
    G = identity(n, one, zero)
    entries = []
    t = 0
    while t < n:
        S = W[t:, t:]
        if is_zero(S):
            break
        m = n - t
        x = None
        for i in range(m):
            if S[i, i]:
                x = [zero] * m
                x[i] = one
                pivot = i
                break
        if x is None:
            for i in range(m):
                for j in range(i + 1, m):
                    a = S[i, j]
                    if not a:
                        continue
                    for d in units:
                        ad = a * d
                        if ad + eps * conj(ad):
                            x = [zero] * m
                            x[i] = one
                            x[j] = d
                            pivot = i
                            break
                    if x is not None:
                        break
                if x is not None:
                    break
        if x is None:
            raise ValueError("no anisotropic vector: alternating form")
        support = [r for r in range(m) if x[r]]
        # h(x, e_c) and h(e_a, x) for the current block
        row = [sum((conj(x[r]) * S[r, c] for r in support), zero) for c in range(m)]
        col = [sum((S[a, r] * x[r] for r in support), zero) for a in range(m)]
        u = sum((row[c] * x[c] for c in support), zero)
        u_inv = u.inverse()
        coeff = [u_inv * row[k] for k in range(m)]
        others = [k for k in range(m) if k != pivot]
        # complement vectors e_k - x * coeff_k are h-orthogonal to x
        newS = zeros(m, m, zero)
        newS[0, 0] = u
        for ia, a in enumerate(others, 1):
            ca = col[a]
            for ib, b in enumerate(others, 1):
                newS[ia, ib] = S[a, b] - ca * coeff[b] if ca and coeff[b] else S[a, b]
        Gb = G[:, t:]
        gx = [sum((Gb[i, r] * x[r] for r in support), zero) for i in range(n)]
        newG = zeros(n, m, zero)
        newG[:, 0] = gx
        for ia, k in enumerate(others, 1):
            ck = coeff[k]
            newG[:, ia] = [Gb[i, k] - gx[i] * ck if ck else Gb[i, k] for i in range(n)]
        G[:, t:] = newG
        W[t:, t:] = newS
        entries.append(u)
        t += 1
    return G, entries, n - t


def skew_diagonalize(H, one, zero):
    """Reduce an alternating matrix over a field to hyperbolic 2x2 blocks.

    Returns ``(G, k, zeros)`` with ``G^t H G = J ⊕ ... ⊕ J ⊕ 0`` where
    ``J = [[0, 1], [-1, 0]]`` appears ``k`` times.
    """
    n = H.shape[0]
    W = H.copy()
    G = identity(n, one, zero)
    t = 0
    blocks = 0
    while t < n:
        S = W[t:, t:]
        m = n - t
        hit = next(((i, j) for i in range(m) for j in range(i + 1, m) if S[i, j]), None)
        if hit is None:
            break
        i, j = hit
        alpha_inv = S[i, j].inverse()
        x = [zero] * m
        x[i] = one
        y = [zero] * m
        y[j] = alpha_inv

        def h(v, w):
            return sum((v[r] * S[r, c] * w[c] for r in range(m) for c in range(m) if v[r] and w[c]), zero)

        L = zeros(m, m, zero)
        L[:, 0] = x
        L[:, 1] = y
        col = 2
        for k in range(m):
            if k in (i, j):
                continue
            z = [one if r == k else zero for r in range(m)]
            hy, hx = h(y, z), h(x, z)
            L[:, col] = [z[r] + x[r] * hy - y[r] * hx for r in range(m)]
            col += 1
        G[:, t:] = matmul(G[:, t:], L, zero)
        W[t:, t:] = matmul(matmul(L.T, S, zero), L, zero)
        t += 2
        blocks += 1
    return G, blocks, n - t


def row_reduce(rows, zero):
    """Reduced row echelon form over a commutative field.

    Returns ``(rref, pivots)`` where ``pivots[k]`` is the pivot column of
    row ``k`` of ``rref`` (zero rows dropped).
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(len(rows)):
            f = rows[i][c]
            if i != r and f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def independent_subset(vectors, zero):
    """Indices of a maximal linearly independent prefix-greedy subset."""
    chosen = []
    basis = []
    for idx, v in enumerate(vectors):
        trial = basis + [list(v)]
        rref, piv = row_reduce(trial, zero)
        if len(piv) == len(trial):
            chosen.append(idx)
            basis = trial
    return chosen

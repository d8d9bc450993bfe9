"""Exact lattice routines over Z and Q used by the involution solver.

Vectors are plain Python int sequences; matrices are lists of rows.  Sizes
here are tiny (at most 2g <= 20), so clarity wins over asymptotics.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .symplectic import as_vector, omega, pairing


def _rows(a):
    return [[int(e) for e in row] for row in np.asarray(a, dtype=object)]


def column_echelon(a):
    """Unimodular column reduction.

    Returns ``(h, u, rank)`` with ``a @ u == h`` (both lists of rows), ``u``
    unimodular, and every column of ``h`` past ``rank`` identically zero.
    """
    h = _rows(a)
    m = len(h)
    n = len(h[0]) if m else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(dst, src, q):
        # column dst -= q * column src
        for row in h:
            row[dst] -= q * row[src]
        for row in u:
            row[dst] -= q * row[src]

    def swap(i, j):
        for row in h:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    col = 0
    for r in range(m):
        if col >= n:
            break
        while True:
            nz = [j for j in range(col, n) if h[r][j]]
            if not nz:
                break
            piv = min(nz, key=lambda j: abs(h[r][j]))
            if piv != col:
                swap(piv, col)
            done = True
            for j in range(col + 1, n):
                if h[r][j]:
                    colop(j, col, h[r][j] // h[r][col])
                    if h[r][j]:
                        done = False
            if done:
                break
        if h[r][col]:
            col += 1
    return h, u, col


def integer_kernel(a):
    """Z-basis (list of vectors) of {z in Z^n : a z = 0}."""
    h, u, rank = column_echelon(a)
    n = len(u)
    return [[u[i][j] for i in range(n)] for j in range(rank, n)]


def saturate(vectors):
    """Z-basis of (Q-span of ``vectors``) intersected with Z^n."""
    vecs = [[int(e) for e in v] for v in vectors]
    n = len(vecs[0])
    ker = integer_kernel(vecs)
    if not ker:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    return integer_kernel(ker)


def lattice_basis(vectors):
    """Z-basis of the lattice generated by ``vectors`` (as columns)."""
    vecs = [[int(e) for e in v] for v in vectors]
    n = len(vecs[0])
    cols = [[vecs[j][i] for j in range(len(vecs))] for i in range(n)]
    h, _, rank = column_echelon(cols)
    return [[h[i][j] for i in range(n)] for j in range(rank)]


def rational_solve(a, b):
    """Solve ``a z = b`` exactly over Q.

    Returns ``(z, unique)`` or ``None`` when inconsistent.  For
    underdetermined systems the free variables are set to zero.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [[Fraction(int(e)) for e in row] + [Fraction(int(bi))] for row, bi in zip(a, b)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [e / pv for e in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [ei - f * er for ei, er in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    z = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        z[c] = aug[i][n]
    return z, len(pivots) == n


def coordinates(basis, v):
    """Integer coordinates of ``v`` in ``basis`` (columns), or ``None``."""
    cols = [[basis[j][i] for j in range(len(basis))] for i in range(len(v))]
    sol = rational_solve(cols, v)
    if sol is None:
        return None
    z, _ = sol
    if any(e.denominator != 1 for e in z):
        return None
    return [int(e) for e in z]


def inverse_unimodular(m):
    n = len(m)
    inv = []
    for j in range(n):
        sol = rational_solve(m, [int(i == j) for i in range(n)])
        if sol is None or not sol[1]:
            raise ValueError("matrix is singular")
        inv.append(sol[0])
    out = [[inv[j][i] for j in range(n)] for i in range(n)]
    if any(e.denominator != 1 for row in out for e in row):
        raise ValueError("matrix is not unimodular")
    return [[int(e) for e in row] for row in out]


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


class CompletionError(ValueError):
    """Sublattice cannot be extended to a symplectic basis."""


def _project_out(z, pairs):
    z = list(z)
    for e, f in pairs:
        a, b = pairing(z, f), pairing(z, e)
        z = [zi - a * ei + b * fi for zi, ei, fi in zip(z, e, f)]
    return z


def _symplectic_basis_unimodular(basis):
    """Darboux basis of a lattice on which the form is unimodular."""
    pairs = []
    basis = [list(b) for b in basis]
    while basis:
        e = basis[0]
        row = [[pairing(e, b) for b in basis]]
        h, u, rank = column_echelon(row)
        if rank == 0 or abs(h[0][0]) != 1:
            raise CompletionError("form is not unimodular on the complement")
        s = h[0][0]
        f = [s * sum(u[j][0] * basis[j][i] for j in range(len(basis))) for i in range(len(e))]
        pairs.append((e, f))
        rest = [_project_out(b, [(e, f)]) for b in basis[1:]]
        rest = [b for b in rest if any(b)]
        basis = lattice_basis(rest) if rest else []
    return pairs


def complete_symplectic_basis(isotropic, genus):
    """Extend a Z-basis e_1..e_m of a primitive isotropic sublattice.

    Returns the columns (e_1, f_1, ..., e_g, f_g) of a symplectic matrix
    whose first m e-columns are exactly the given vectors.
    """
    es = [[int(v) for v in e] for e in isotropic]
    n = 2 * genus
    m = len(es)
    for i in range(m):
        for j in range(m):
            if pairing(es[i], es[j]):
                raise CompletionError("sublattice is not isotropic")
    om = omega(genus)
    pairs = []
    if m:
        a = [[int(e) for e in np.asarray(ev, dtype=object).dot(om)] for ev in es]
        h, u, rank = column_echelon(a)
        if rank != m:
            raise CompletionError("vectors are linearly dependent")
        hm = [row[:m] for row in h]
        try:
            hinv = inverse_unimodular(hm)
        except ValueError as exc:
            raise CompletionError("sublattice is not primitive") from exc
        um = [row[:m] for row in u]
        fcols = _matmul(um, hinv)
        fs = [[fcols[i][j] for i in range(n)] for j in range(m)]
        for j in range(m):
            for i in range(j):
                c = pairing(fs[i], fs[j])
                if c:
                    fs[j] = [fj + c * ei for fj, ei in zip(fs[j], es[i])]
        pairs = list(zip(es, fs))
    if m < genus:
        rest = [_project_out([int(i == j) for j in range(n)], pairs) for i in range(n)]
        rest = [r for r in rest if any(r)]
        pairs += _symplectic_basis_unimodular(lattice_basis(rest))
    cols = []
    for e, f in pairs:
        cols += [e, f]
    s = np.array([[cols[j][i] for j in range(n)] for i in range(n)], dtype=object)
    if not (s.T.dot(om).dot(s) == om).all():
        raise CompletionError("internal error: completed basis is not symplectic")
    return s


def partial_involution(pairs):
    """Involution on V = span{v, w} determined by pairs v -> w.

    ``pairs`` is a list of (v, w) meaning J v = w (and therefore J w = v).
    Returns ``(basis, a)``: a Z-basis of the saturation of V and the integer
    matrix of J in that basis; or ``None`` if no linear involution of V
    realises the pairs.
    """
    vs = [list(map(int, v)) for v, _ in pairs]
    ws = [list(map(int, w)) for _, w in pairs]
    basis = saturate(vs + ws)
    m = len(basis)
    cv = [coordinates(basis, v) for v in vs]
    cw = [coordinates(basis, w) for w in ws]
    src = cv + cw
    dst = cw + cv
    # select m independent source columns
    chosen = []
    for idx in range(len(src)):
        trial = chosen + [idx]
        mat = [[src[j][i] for j in trial] for i in range(m)]
        _, _, rank = column_echelon(mat)
        if rank == len(trial):
            chosen = trial
        if len(chosen) == m:
            break
    if len(chosen) < m:
        return None
    xs = [[src[j][i] for j in chosen] for i in range(m)]
    ys = [[dst[j][i] for j in chosen] for i in range(m)]
    xinv = []
    for j in range(m):
        sol = rational_solve(xs, [int(i == j) for i in range(m)])
        xinv.append(sol[0])
    xinv = [[xinv[j][i] for j in range(m)] for i in range(m)]
    a = [[sum(Fraction(ys[i][k]) * xinv[k][j] for k in range(m)) for j in range(m)] for i in range(m)]
    if any(e.denominator != 1 for row in a for e in row):
        return None
    a = [[int(e) for e in row] for row in a]
    for s, d in zip(src, dst):
        if [sum(a[i][k] * s[k] for k in range(m)) for i in range(m)] != d:
            return None
    if _matmul(a, a) != [[int(i == j) for j in range(m)] for i in range(m)]:
        return None
    gram = [[pairing(bi, bj) for bj in basis] for bi in basis]
    at = [list(r) for r in zip(*a)]
    if _matmul(_matmul(at, gram), a) != gram:
        return None
    return [as_vector(b) for b in basis], a

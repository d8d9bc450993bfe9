"""Pure numpy implementation of the permutation kernels.

Permutations are int32 arrays ``a`` with ``a[i]`` the image of point i.
Every function here has a compiled twin in ``_kernels.pyx`` with identical
results; the Schreier tree BFS order in particular must match so that
certificates are reproducible across backends.
"""

import numpy as np

BACKEND = "numpy"


def compose(a, b):
    """a o b (apply b first)."""
    return a[b]


def invert(a):
    inv = np.empty_like(a)
    inv[a] = np.arange(a.shape[0], dtype=a.dtype)
    return inv


def is_identity(a):
    return bool((a == np.arange(a.shape[0], dtype=a.dtype)).all())


def schreier_tree(root, gens):
    """BFS orbit of ``root`` under the rows of ``gens``.

    Returns ``(orbit, label)`` where ``orbit`` lists points in BFS order and
    ``label[p]`` is the index of the generator that first reached p
    (-2 for the root, -1 outside the orbit).
    """
    n = gens.shape[1]
    k = gens.shape[0]
    label = np.full(n, -1, dtype=np.int32)
    label[root] = -2
    frontier = np.array([root], dtype=np.int32)
    parts = [frontier]
    while frontier.size and k:
        imgs = gens[:, frontier].T.ravel()
        which = np.tile(np.arange(k, dtype=np.int32), frontier.size)
        fresh = label[imgs] == -1
        imgs = imgs[fresh]
        which = which[fresh]
        if not imgs.size:
            break
        _, first = np.unique(imgs, return_index=True)
        first.sort()
        frontier = imgs[first]
        label[frontier] = which[first]
        parts.append(frontier)
    return np.concatenate(parts), label


def strip(h, root, label, gens_inv):
    """Return u^-1 o h where u is the tree word taking root to h[root].

    ``None`` if h[root] is outside the orbit.
    """
    d = int(h[root])
    if label[d] == -1:
        return None
    path = []
    while d != root:
        j = int(label[d])
        path.append(j)
        d = int(gens_inv[j][d])
    out = h
    for j in path:
        out = gens_inv[j][out]
    return out


def coset_rep(point, root, label, gens_inv, n):
    """The tree element u with u[root] == point."""
    path = []
    d = point
    while d != root:
        j = int(label[d])
        path.append(j)
        d = int(gens_inv[j][d])
    u_inv = np.arange(n, dtype=np.int32)
    for j in path:
        u_inv = gens_inv[j][u_inv]
    return invert(u_inv)


def orbit_partition(gens, n):
    """Orbit id for every point (orbits numbered by smallest member)."""
    comp = np.full(n, -1, dtype=np.int64)
    if gens.shape[0] == 0:
        return np.arange(n)
    for start in range(n):
        if comp[start] != -1:
            continue
        orbit, _ = schreier_tree(start, gens)
        comp[orbit] = start
    return comp

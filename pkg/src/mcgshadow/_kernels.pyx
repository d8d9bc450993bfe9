# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled permutation kernels; see _pykernels for the contract."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

ctypedef cnp.int32_t i32


def compose(const i32[::1] a, const i32[::1] b):
    cdef Py_ssize_t i, n = b.shape[0]
    out = np.empty(n, dtype=np.int32)
    cdef i32[::1] o = out
    for i in range(n):
        o[i] = a[b[i]]
    return out


def invert(const i32[::1] a):
    cdef Py_ssize_t i, n = a.shape[0]
    out = np.empty(n, dtype=np.int32)
    cdef i32[::1] o = out
    for i in range(n):
        o[a[i]] = <i32>i
    return out


def is_identity(const i32[::1] a):
    cdef Py_ssize_t i, n = a.shape[0]
    for i in range(n):
        if a[i] != i:
            return False
    return True


def schreier_tree(Py_ssize_t root, const i32[:, ::1] gens):
    cdef Py_ssize_t k = gens.shape[0], n = gens.shape[1]
    label_arr = np.full(n, -1, dtype=np.int32)
    orbit_arr = np.empty(n, dtype=np.int32)
    cdef i32[::1] label = label_arr
    cdef i32[::1] orbit = orbit_arr
    cdef Py_ssize_t head = 0, tail = 1, j
    cdef i32 d, e
    label[root] = -2
    orbit[0] = <i32>root
    while head < tail:
        d = orbit[head]
        head += 1
        for j in range(k):
            e = gens[j, d]
            if label[e] == -1:
                label[e] = <i32>j
                orbit[tail] = e
                tail += 1
    return orbit_arr[:tail].copy(), label_arr


def strip(const i32[::1] h, Py_ssize_t root, const i32[::1] label, const i32[:, ::1] gens_inv):
    cdef Py_ssize_t n = h.shape[0], i, t, depth = 0
    cdef i32 d = h[root], e
    if label[d] == -1:
        return None
    path_arr = np.empty(n, dtype=np.int32)
    cdef i32[::1] path = path_arr
    while d != root:
        path[depth] = label[d]
        d = gens_inv[label[d], d]
        depth += 1
    out = np.empty(n, dtype=np.int32)
    cdef i32[::1] o = out
    for i in range(n):
        e = h[i]
        for t in range(depth):
            e = gens_inv[path[t], e]
        o[i] = e
    return out


def coset_rep(Py_ssize_t point, Py_ssize_t root, const i32[::1] label, const i32[:, ::1] gens_inv, Py_ssize_t n):
    cdef Py_ssize_t i, t, depth = 0
    cdef i32 d = <i32>point, e
    path_arr = np.empty(n, dtype=np.int32)
    cdef i32[::1] path = path_arr
    while d != root:
        path[depth] = label[d]
        d = gens_inv[label[d], d]
        depth += 1
    uinv = np.empty(n, dtype=np.int32)
    cdef i32[::1] ui = uinv
    for i in range(n):
        e = <i32>i
        for t in range(depth):
            e = gens_inv[path[t], e]
        ui[i] = e
    return invert(uinv)


def orbit_partition(const i32[:, ::1] gens, Py_ssize_t n):
    cdef Py_ssize_t k = gens.shape[0], start, head, tail, j
    comp_arr = np.full(n, -1, dtype=np.int64)
    queue_arr = np.empty(n, dtype=np.int32)
    cdef long long[::1] comp = comp_arr
    cdef i32[::1] queue = queue_arr
    cdef i32 d, e
    for start in range(n):
        if comp[start] != -1:
            continue
        comp[start] = start
        queue[0] = <i32>start
        head = 0
        tail = 1
        while head < tail:
            d = queue[head]
            head += 1
            for j in range(k):
                e = gens[j, d]
                if comp[e] == -1:
                    comp[e] = start
                    queue[tail] = e
                    tail += 1
    return comp_arr

"""Exact integer symplectic linear algebra.

Homology of a closed genus-g surface is modelled as Z^(2g) with the
interleaved basis x1, y1, x2, y2, ..., xg, yg and the intersection form
Omega with Omega(x_i, y_i) = +1.  A Dehn twist about a curve with class c
acts as the transvection u -> u + Omega(u, c) c.

All matrices are numpy arrays of dtype ``object`` so entries are Python
integers and never overflow.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

BASIS_ID = "xy-interleaved-v1"


class DimensionError(ValueError):
    """Vector or matrix has the wrong size for the ambient genus."""


class DegenerateCurveError(ValueError):
    """A transvection was requested along the zero vector."""


class NotSymplecticError(ValueError):
    """Matrix does not preserve the intersection form."""


class ConfigurationError(ValueError):
    """Bad numeric configuration (non-prime modulus, oversize action...)."""


def _freeze(a):
    a.setflags(write=False)
    return a


def as_vector(v, genus=None):
    """Return ``v`` as a read-only 1-d object array of Python ints."""
    arr = np.array([int(x) for x in np.asarray(v).ravel()], dtype=object)
    if genus is not None and arr.shape[0] != 2 * genus:
        raise DimensionError(f"expected length {2 * genus}, got {arr.shape[0]}")
    if arr.shape[0] % 2:
        raise DimensionError(f"homology vectors have even length, got {arr.shape[0]}")
    return _freeze(arr)


def basis_vector(genus, name):
    """``basis_vector(3, 'y2')`` is the class y2 in genus 3."""
    kind, idx = name[0], int(name[1:])
    if kind not in "xy" or not 1 <= idx <= genus:
        raise ValueError(f"bad basis name {name!r} for genus {genus}")
    v = np.zeros(2 * genus, dtype=object)
    v[2 * (idx - 1) + (kind == "y")] = 1
    return as_vector(v)


def x(genus, i):
    return basis_vector(genus, f"x{i}")


def y(genus, i):
    return basis_vector(genus, f"y{i}")


@lru_cache(maxsize=None)
def _omega(genus):
    om = np.zeros((2 * genus, 2 * genus), dtype=object)
    for i in range(genus):
        om[2 * i, 2 * i + 1] = 1
        om[2 * i + 1, 2 * i] = -1
    return _freeze(om)


def omega(genus):
    """The block-diagonal intersection form with blocks [[0, 1], [-1, 0]]."""
    return _omega(genus)


@lru_cache(maxsize=None)
def _identity(n):
    return _freeze(np.identity(n, dtype=int).astype(object))


def identity(genus):
    return _identity(2 * genus)


def pairing(u, v):
    """Algebraic intersection number u^T Omega v."""
    u = np.asarray(u, dtype=object)
    v = np.asarray(v, dtype=object)
    if u.shape != v.shape or u.ndim != 1 or u.shape[0] % 2:
        raise DimensionError(f"cannot pair vectors of shapes {u.shape} and {v.shape}")
    return int(sum(u[0::2] * v[1::2]) - sum(u[1::2] * v[0::2]))


def is_symplectic(m):
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    if m.shape != (n, n) or n % 2:
        return False
    om = omega(n // 2)
    return bool((m.T.dot(om).dot(m) == om).all())


class SympMatrix:
    """Immutable integer matrix preserving the intersection form.

    The symplectic condition is checked on construction unless
    ``check=False`` (used internally for products of known symplectic
    matrices).
    """

    __slots__ = ("array", "genus")

    def __init__(self, entries, check=True):
        arr = np.array(np.asarray(entries, dtype=object), dtype=object)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
            raise DimensionError(f"not a square even-size matrix: shape {arr.shape}")
        if check:
            arr = np.vectorize(int, otypes=[object])(arr)
            if not is_symplectic(arr):
                raise NotSymplecticError("matrix does not preserve the intersection form")
        self.array = _freeze(arr)
        self.genus = arr.shape[0] // 2

    @classmethod
    def identity(cls, genus):
        return cls(identity(genus), check=False)

    def __matmul__(self, other):
        if isinstance(other, SympMatrix):
            if other.genus != self.genus:
                raise DimensionError("genus mismatch in product")
            return SympMatrix(self.array.dot(other.array), check=False)
        v = np.asarray(other, dtype=object)
        if v.shape != (2 * self.genus,):
            raise DimensionError(f"cannot apply genus-{self.genus} matrix to shape {v.shape}")
        return as_vector(self.array.dot(v))

    def apply(self, v):
        return self @ v

    def inverse(self):
        # M^-1 = Omega^-1 M^T Omega = -Omega M^T Omega
        om = omega(self.genus)
        return SympMatrix(-om.dot(self.array.T).dot(om), check=False)

    def __pow__(self, n):
        n = int(n)
        base = self if n >= 0 else self.inverse()
        result = SympMatrix.identity(self.genus)
        n = abs(n)
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, SympMatrix):
            return NotImplemented
        return self.genus == other.genus and bool((self.array == other.array).all())

    def __hash__(self):
        return hash(tuple(self.array.ravel()))

    def __repr__(self):
        return f"SympMatrix(genus={self.genus}, rows={self.tolist()})"

    def tolist(self):
        return [[int(e) for e in row] for row in self.array]

    def is_identity(self):
        return bool((self.array == identity(self.genus)).all())

    def max_abs_entry(self):
        return max(abs(int(e)) for e in self.array.ravel())


def transvection(c):
    """Matrix of the Dehn-twist shadow u -> u + Omega(u, c) c."""
    c = as_vector(c)
    if not any(c):
        raise DegenerateCurveError("transvection along the zero vector")
    g = c.shape[0] // 2
    oc = omega(g).dot(c)
    return SympMatrix(identity(g) + np.outer(c, oc), check=False)


def is_involution(m):
    """True iff ``m`` squared is the identity."""
    a = m.array if isinstance(m, SympMatrix) else np.asarray(m, dtype=object)
    return bool((a.dot(a) == np.identity(a.shape[0], dtype=int)).all())


def is_prime(p):
    p = int(p)
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def reduce_mod(m, p):
    """Entrywise reduction to an int64 matrix with entries in [0, p)."""
    if not is_prime(p):
        raise ConfigurationError(f"modulus {p} is not prime")
    a = m.array if isinstance(m, SympMatrix) else np.asarray(m, dtype=object)
    return np.array([[int(e) % p for e in row] for row in a], dtype=np.int64)


def is_symplectic_mod(a, p):
    a = np.asarray(a, dtype=np.int64)
    om = np.array(omega(a.shape[0] // 2), dtype=np.int64) % p
    return bool(((a.T @ om @ a) % p == om).all())


def primitive(v):
    """True iff v is nonzero and the gcd of its entries is 1."""
    return math.gcd(*(int(e) for e in v)) == 1


def same_up_to_sign(u, v):
    u = np.asarray(u, dtype=object)
    v = np.asarray(v, dtype=object)
    return u.shape == v.shape and (bool((u == v).all()) or bool((u == -v).all()))

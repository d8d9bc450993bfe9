"""Permutation groups via a base and strong generating set.

The stabiliser chain is built by Schreier-Sims with Schreier vectors
(no explicit transversals: at 16k points those would not fit in memory).
Construction has two phases:

1. sift deterministic pseudo-random group elements (product replacement
   with a fixed seed), stopping early if the order reaches a caller-supplied
   upper bound;
2. unless the bound was reached, sift every Schreier generator, which makes
   the chain provably complete.

When phase 1 reaches a valid upper bound the chain is complete as well: the
products of transversal elements are distinct group elements, so the product
of basic orbit lengths never exceeds the group order.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .perm import Permutation
from .symplectic import ConfigurationError, DimensionError, SympMatrix, is_prime, is_symplectic_mod, reduce_mod

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Schreier-generator verification ran past its configured budget."""


def _as_array(p, degree=None):
    if isinstance(p, Permutation):
        arr = np.asarray(p.to_array(), dtype=np.int32)
    else:
        arr = np.ascontiguousarray(np.asarray(p, dtype=np.int32))
    if degree is not None and arr.shape[0] != degree:
        raise DimensionError(f"permutation of degree {arr.shape[0]} in a group of degree {degree}")
    return arr


class _Level:
    __slots__ = ("point", "gen_idx", "gens", "gens_inv", "orbit", "label")

    def __init__(self, point):
        self.point = point
        self.gen_idx = []


class PermGroup:
    """Group generated by permutations of {0, ..., degree-1}.

    Generators may be :class:`Permutation` objects (1-indexed) or 0-indexed
    integer arrays.  The chain is built on first use.

    ``order_bound`` must be a true upper bound for the group order (for
    instance |Sp(2g, p)| b! for symplectic generators).  Construction stops
    as soon as the chain reaches it; a bound that is too small can stop the
    build early and is only detected when the partial order overshoots it.
    ``budget`` caps the number of Schreier generators sifted in phase 2.
    """

    def __init__(self, generators, degree=None, order_bound=None, seed=0, patience=40, budget=None):
        gens = [_as_array(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group with no generators")
            degree = gens[0].shape[0]
        self.degree = int(degree)
        self.generators = [_as_array(g, self.degree) for g in gens]
        for g in self.generators:
            if not (np.sort(g) == np.arange(self.degree)).all():
                raise ValueError("generator is not a bijection")
        self.order_bound = order_bound
        self.seed = seed
        self.patience = patience
        self.budget = budget
        self._levels = None
        self.strong = []
        self.strong_inv = []
        self.stats = {"sifts": 0, "schreier_checked": 0, "phase": None}

    # -- chain construction -------------------------------------------------
    def _ensure(self):
        if self._levels is None:
            self._levels = []
            self._build()
        return self._levels

    @property
    def base(self):
        return [lv.point for lv in self._ensure()]

    def orbit_sizes(self):
        return [len(lv.orbit) for lv in self._ensure()]

    def order(self):
        return math.prod(self.orbit_sizes())

    def level_orders(self):
        """Order of the i-th stabiliser G^(i) for i = 0..len(base)."""
        sizes = self.orbit_sizes()
        return [math.prod(sizes[i:]) for i in range(len(sizes) + 1)]

    def _refresh(self, i):
        lv = self._levels[i]
        lv.gens = np.ascontiguousarray(np.stack([self.strong[j] for j in lv.gen_idx]))
        lv.gens_inv = np.ascontiguousarray(np.stack([self.strong_inv[j] for j in lv.gen_idx]))
        lv.orbit, lv.label = kernels.schreier_tree(lv.point, lv.gens)

    def _choose_point(self, gens):
        # largest orbit of the new stabiliser level; ties -> smallest point
        comp = kernels.orbit_partition(np.ascontiguousarray(np.stack(gens)), self.degree)
        oid, counts = np.unique(comp, return_counts=True)
        best = int(oid[np.lexsort((oid, -counts))[0]])
        if counts.max() == 1:
            raise RuntimeError("no point moved by a nonidentity element")
        return best

    def _add_strong(self, h, level):
        # h fixes base[:level]; it becomes a strong generator of levels 0..level
        idx = len(self.strong)
        self.strong.append(h)
        self.strong_inv.append(kernels.invert(h))
        if level == len(self._levels):
            gens = [j for j in range(idx + 1) if self._fixes_prefix(self.strong[j], level)]
            lv = _Level(self._choose_point([self.strong[j] for j in gens]))
            lv.gen_idx = gens
            self._levels.append(lv)
        for i in range(level + 1):
            if idx not in self._levels[i].gen_idx:
                self._levels[i].gen_idx.append(idx)
            self._refresh(i)

    def _fixes_prefix(self, h, level):
        return all(h[self._levels[i].point] == self._levels[i].point for i in range(level))

    def sift(self, h, start=0):
        """Strip ``h`` through the chain; return (residue, level reached)."""
        self.stats["sifts"] += 1
        for i in range(start, len(self._levels)):
            lv = self._levels[i]
            r = kernels.strip(h, lv.point, lv.label, lv.gens_inv)
            if r is None:
                return h, i
            h = r
        return h, len(self._levels)

    def _absorb(self, h):
        r, lvl = self.sift(h)
        if not kernels.is_identity(r):
            self._add_strong(np.ascontiguousarray(r, dtype=np.int32), lvl)
            return True
        return False

    def _random_elements(self):
        rng = random.Random(self.seed)
        k = len(self.generators)
        state = [self.generators[i % k].copy() for i in range(max(10, k))]
        acc = np.arange(self.degree, dtype=np.int32)
        n = len(state)

        def step():
            nonlocal acc
            i, j = rng.sample(range(n), 2)
            if rng.random() < 0.5:
                state[i] = kernels.compose(state[i], state[j])
            else:
                state[i] = kernels.compose(state[i], kernels.invert(state[j]))
            acc = kernels.compose(acc, state[i])
            return acc

        for _ in range(50):
            step()
        while True:
            yield step()

    def _bound_reached(self):
        if self.order_bound is None:
            return False
        o = self.order()
        if o > self.order_bound:
            raise PreconditionError(f"order {o} exceeds the supplied bound {self.order_bound}")
        return o == self.order_bound

    def _build(self):
        for g in self.generators:
            if not kernels.is_identity(g):
                self._absorb(g)
        if not self._levels:
            self.stats["phase"] = "trivial"
            return
        if self._bound_reached():
            self.stats["phase"] = "bound"
            return
        quiet = 0
        for r in self._random_elements():
            quiet = 0 if self._absorb(r) else quiet + 1
            if self._bound_reached():
                self.stats["phase"] = "bound"
                return
            if quiet >= self.patience:
                break
        while not self._verify():
            if self._bound_reached():
                self.stats["phase"] = "bound"
                return
        self.stats["phase"] = "verified"

    def _verify(self):
        """Sift all Schreier generators; False if the chain had to grow."""
        for i in reversed(range(len(self._levels))):
            lv = self._levels[i]
            reps = {}

            def rep(pt):
                if pt not in reps:
                    reps[pt] = kernels.coset_rep(pt, lv.point, lv.label, lv.gens_inv, self.degree)
                return reps[pt]

            for d in lv.orbit:
                d = int(d)
                for t in range(len(lv.gen_idx)):
                    s = lv.gens[t]
                    e = int(s[d])
                    if lv.label[e] == t and int(lv.gens_inv[t][e]) == d:
                        continue  # tree edge: Schreier generator is trivial
                    self.stats["schreier_checked"] += 1
                    if self.budget is not None and self.stats["schreier_checked"] > self.budget:
                        raise BudgetExceeded(f"more than {self.budget} Schreier generators sifted")
                    g = kernels.compose(kernels.invert(rep(e)), kernels.compose(s, rep(d)))
                    r, lvl = self.sift(g, i + 1)
                    if not kernels.is_identity(r):
                        self._add_strong(np.ascontiguousarray(r, dtype=np.int32), lvl)
                        return False
        return True

    # -- queries ------------------------------------------------------------
    def contains(self, p):
        arr = _as_array(p)
        if arr.shape[0] != self.degree:
            raise DimensionError(f"degree {arr.shape[0]} != group degree {self.degree}")
        self._ensure()
        r, lvl = self.sift(arr)
        return lvl == len(self._levels) and kernels.is_identity(r)

    def bsgs_summary(self):
        self._ensure()
        return {
            "base": [int(b) for b in self.base],
            "orbit_sizes": self.orbit_sizes(),
            "strong_generators": len(self.strong),
            "phase": self.stats["phase"],
        }


def group_order(group):
    return group.order()


def contains(group, p):
    return group.contains(p)


def closure_order(generators, limit=10**6):
    """Brute-force closure size, for oracles on small groups."""
    gens = [tuple(_as_array(g)) for g in generators]
    if not gens:
        return 1
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = tuple(g[i] for i in a)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                    if len(seen) > limit:
                        raise RuntimeError("closure exceeds limit")
        frontier = nxt
    return len(seen)


def sp_order(g, p):
    """|Sp(2g, p)| = p^(g^2) prod_{i=1..g} (p^(2i) - 1)."""
    if g < 1 or not is_prime(p):
        raise ConfigurationError(f"bad parameters g={g}, p={p}")
    return p ** (g * g) * math.prod(p ** (2 * i) - 1 for i in range(1, g + 1))


MAX_POINTS = 70_000


@dataclass
class FiniteAction:
    """Sp(2g, p) x Sym_b acting on nonzero vectors plus puncture labels.

    Vector v is point ``sum(v[i] * p**i) - 1`` (little-endian digits);
    puncture j (1-based) is point ``p**(2g) - 1 + (j - 1)``.
    """

    genus: int
    p: int
    punctures: int
    generators: list = field(default_factory=list)
    names: list = field(default_factory=list)

    @property
    def vector_points(self):
        return self.p ** (2 * self.genus) - 1

    @property
    def degree(self):
        return self.vector_points + self.punctures

    def label(self, v):
        code = sum((int(e) % self.p) * self.p ** i for i, e in enumerate(v))
        if code == 0:
            raise ValueError("zero vector is not a point")
        return code - 1

    def vector(self, label):
        code = label + 1
        return [(code // self.p ** i) % self.p for i in range(2 * self.genus)]

    def puncture_point(self, j):
        return self.vector_points + j - 1

    def group(self, order_bound=None, seed=0, budget=None):
        return PermGroup(self.generators, degree=self.degree, order_bound=order_bound, seed=seed, budget=budget)

    def vector_orbits(self):
        """Number of orbits on the vector block (1 means transitive on nonzero vectors)."""
        gens = np.ascontiguousarray(np.stack(self.generators))
        comp = kernels.orbit_partition(gens, self.degree)
        return len(np.unique(comp[: self.vector_points]))

    def describe(self):
        return {
            "vector_points": self.vector_points,
            "puncture_points": self.punctures,
            "labeling": "little-endian base-p digits minus one; punctures appended",
            "p": self.p,
            "genus": self.genus,
        }


def _all_vectors(genus, p):
    dim = 2 * genus
    codes = np.arange(1, p**dim, dtype=np.int64)
    return np.stack([(codes // p**i) % p for i in range(dim)], axis=1)


def matrix_group_action(mats, perms, p, b, names=None, max_points=MAX_POINTS):
    """Product action of (matrix mod p, puncture permutation) pairs."""
    if not is_prime(p):
        raise ConfigurationError(f"modulus {p} is not prime")
    if len(mats) != len(perms):
        raise ValueError("matrix and permutation lists must be aligned")
    if not mats:
        raise ValueError("at least one generator required")
    genus = mats[0].genus if isinstance(mats[0], SympMatrix) else len(mats[0]) // 2
    npts = p ** (2 * genus) - 1
    if npts + b > max_points:
        raise ConfigurationError(
            f"action on {npts + b} points exceeds limit {max_points}; use a smaller prime or genus"
        )
    vecs = _all_vectors(genus, p)
    weights = p ** np.arange(2 * genus, dtype=np.int64)
    gens = []
    for m, s in zip(mats, perms):
        a = reduce_mod(m, p)
        if not is_symplectic_mod(a, p):
            raise ConfigurationError("generator matrix is not symplectic mod p")
        img = (vecs @ a.T) % p
        codes = img @ weights - 1
        if (codes < 0).any():
            raise ConfigurationError("matrix is singular mod p")
        perm = np.empty(npts + b, dtype=np.int32)
        perm[:npts] = codes
        if s is None:
            s = Permutation.identity(b)
        if s.degree != b:
            raise DimensionError(f"puncture permutation of degree {s.degree}, expected {b}")
        perm[npts:] = npts + np.asarray(s.to_array(), dtype=np.int32)
        if not (np.sort(perm) == np.arange(npts + b)).all():
            raise ConfigurationError("generator does not act bijectively")
        gens.append(perm)
    return FiniteAction(genus=genus, p=p, punctures=b, generators=gens, names=list(names or []))


def _normal_closure_check(group, n_group, n_gens):
    for s in group.generators:
        sinv = kernels.invert(s)
        for nn in n_gens:
            conj = kernels.compose(sinv, kernels.compose(nn, s))
            if not n_group.contains(conj):
                return False
    return True


def extension_criterion(G, n_gens, h_gens, q_order):
    """Finite form of: H contains i(N) and surjects onto Q  =>  H = G.

    ``n_gens`` must generate a normal subgroup N of G with |G| = |N| q_order.
    Returns True iff every generator of N lies in H = <h_gens> and |H|
    equals |N| q_order.
    """
    n_arr = [_as_array(x, G.degree) for x in n_gens]
    h_arr = [_as_array(x, G.degree) for x in h_gens]
    for x in itertools.chain(n_arr, h_arr):
        if not G.contains(x):
            raise PreconditionError("input element is not a member of G")
    ident = np.arange(G.degree, dtype=np.int32)
    N = PermGroup(n_arr or [ident], degree=G.degree)
    if not _normal_closure_check(G, N, n_arr or [ident]):
        raise PreconditionError("N is not normal in G")
    if N.order() * q_order != G.order():
        raise PreconditionError("|N| * q_order does not equal |G|")
    H = PermGroup(h_arr or [ident], degree=G.degree)
    if not all(H.contains(x) for x in n_arr):
        return False
    return H.order() == N.order() * q_order

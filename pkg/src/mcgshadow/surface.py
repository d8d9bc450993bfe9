"""Surface signature, curve classes, the lantern instance and puncture involutions.

Curves are known only through their homology classes.  The families
alpha_i, beta_i, gamma_i are generated from seed vectors by powers of a
shift matrix R, which is realised as the product of two handle reflections
(the homology shadows of the two half-turn symmetries).  Seed vectors are
found by a bounded search against the lantern and intersection constraints.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .lattice import partial_involution, rational_solve
from .perm import Permutation
from .symplectic import (
    SympMatrix,
    as_vector,
    pairing,
    primitive,
    same_up_to_sign,
)

log = logging.getLogger(__name__)


class UnsupportedGenusError(ValueError):
    pass


class SolverFailure(RuntimeError):
    """Bounded search exhausted; ``violations`` lists what could not be met."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


@dataclass(frozen=True)
class Surface:
    genus: int
    punctures: int

    @property
    def k(self):
        return (self.genus - 1) // 2

    @property
    def l(self):
        return (self.punctures - 1) // 2

    @property
    def theorem7(self):
        return self.genus >= 5

    @property
    def theorem8(self):
        return self.genus >= 7

    def eligible(self):
        return [t for t, ok in (("T7", self.theorem7), ("T8", self.theorem8)) if ok]


def build_surface(g, b):
    if g < 3:
        raise UnsupportedGenusError(
            f"unsupported genus {g}: mapping class groups are not generated by involutions for g <= 2"
        )
    if b < 0:
        raise ValueError("number of punctures must be non-negative")
    return Surface(int(g), int(b))


# -- puncture permutations -------------------------------------------------

@dataclass(frozen=True)
class PunctureInvolutions:
    r1: Permutation
    r2: Permutation
    r3: Permutation
    skipped: bool = False


def puncture_involutions(b):
    """The three involutions of Sym_b; trivial (and flagged) for b < 2."""
    if b < 2:
        e = Permutation.identity(max(b, 0))
        return PunctureInvolutions(e, e, e, skipped=True)
    r1 = Permutation([b - i for i in range(1, b)] + [b])
    r2 = Permutation([1] + [b + 1 - i for i in range(2, b)] + [b])
    r3 = Permutation([b + 1 - i for i in range(1, b + 1)])
    return PunctureInvolutions(r1, r2, r3)


# -- lantern ------------------------------------------------------------------

TEMPLATE_PAIRS = ((1, 2), (2, 3), (1, 3))


@dataclass(frozen=True)
class LanternClasses:
    """Boundary classes a1..a4, interior classes y1..y3 of a four-holed sphere.

    ``pairs[j]`` names the two boundary components (among a1, a2, a3) that
    the interior curve y_{j+1} encloses.
    """

    a: tuple
    y: tuple
    eps: tuple
    pairs: tuple = TEMPLATE_PAIRS

    @property
    def genus(self):
        return len(self.a[0]) // 2

    def __getattr__(self, name):
        if len(name) == 2 and name[0] in "ay" and name[1].isdigit():
            seq = object.__getattribute__(self, name[0])
            return seq[int(name[1]) - 1]
        raise AttributeError(name)

    @classmethod
    def from_boundary(cls, a1, a2, a3, eps, pairs=TEMPLATE_PAIRS):
        """Build the instance with a4 and y1..y3 forced by the template."""
        a1, a2, a3 = (as_vector(v) for v in (a1, a2, a3))
        e1, e2, e3, e4 = eps
        a4 = as_vector(-e4 * (e1 * a1 + e2 * a2 + e3 * a3))
        av = (a1, a2, a3, a4)
        ys = tuple(as_vector(eps[i - 1] * av[i - 1] + eps[j - 1] * av[j - 1]) for i, j in pairs)
        return cls(av, ys, tuple(eps), tuple(pairs))

    def violations(self):
        """Constraint names violated by this instance (empty when valid)."""
        out = []
        eps = self.eps
        if any(e not in (1, -1) for e in eps):
            out.append("signs must be +-1")
        total = sum(e * a for e, a in zip(eps, self.a))
        if any(total):
            out.append("boundary sum is nonzero")
        for i, j in itertools.combinations(range(4), 2):
            if pairing(self.a[i], self.a[j]):
                out.append(f"pairing(a{i + 1}, a{j + 1}) != 0")
        for idx, (i, j) in enumerate(self.pairs):
            want = eps[i - 1] * self.a[i - 1] + eps[j - 1] * self.a[j - 1]
            if not same_up_to_sign(self.y[idx], want):
                out.append(f"y{idx + 1} != +-(e{i} a{i} + e{j} a{j})")
        for name, v in zip(("a1", "a2", "a3", "a4", "y1", "y2", "y3"), self.a + self.y):
            if not primitive(v):
                out.append(f"{name} is not primitive")
        return out

    def is_valid(self):
        return not self.violations()

    def replace_y(self, index, vec):
        ys = list(self.y)
        ys[index - 1] = as_vector(vec)
        return LanternClasses(self.a, tuple(ys), self.eps, self.pairs)

    def mapped(self, m):
        """Image of every class under a symplectic matrix."""
        return LanternClasses(tuple(m @ v for v in self.a), tuple(m @ v for v in self.y), self.eps, self.pairs)


def toy_lantern(genus=3):
    """a_i = x_i for i <= 3 with all signs +1 (template pairing)."""
    if genus < 3:
        raise ValueError("toy lantern needs genus >= 3")
    z = np.zeros(2 * genus, dtype=object)
    xs = []
    for i in range(3):
        v = z.copy()
        v[2 * i] = 1
        xs.append(v)
    return LanternClasses.from_boundary(*xs, eps=(1, 1, 1, 1))


def random_symplectic(genus, rng, steps=6, spread=2):
    """Random product of transvections with small integer directions."""
    from .symplectic import transvection

    m = SympMatrix.identity(genus)
    for _ in range(steps):
        c = [rng.randint(-spread, spread) for _ in range(2 * genus)]
        if not any(c):
            continue
        t = transvection(c)
        m = m @ (t if rng.random() < 0.5 else t.inverse())
    return m


def random_lantern_instance(genus, rng):
    """Template-satisfying instance: isotropic a1..a3 pushed through a random symplectic map."""
    while True:
        coeffs = [[rng.randint(-2, 2) for _ in range(genus)] for _ in range(3)]
        vecs = []
        for c in coeffs:
            v = np.zeros(2 * genus, dtype=object)
            v[0::2] = c
            vecs.append(v)
        s = random_symplectic(genus, rng, steps=3, spread=1)
        a = [s @ v for v in vecs]
        eps = tuple(rng.choice((1, -1)) for _ in range(4))
        inst = LanternClasses.from_boundary(*a, eps=eps)
        if inst.is_valid():
            return inst


# -- shift and reflections -------------------------------------------------

def handle_permutation(genus, sigma):
    """Matrix sending x_i -> x_sigma(i), y_i -> y_sigma(i) (1-based handles)."""
    m = np.zeros((2 * genus, 2 * genus), dtype=object)
    for i in range(1, genus + 1):
        j = sigma(i)
        m[2 * (j - 1), 2 * (i - 1)] = 1
        m[2 * (j - 1) + 1, 2 * (i - 1) + 1] = 1
    return SympMatrix(m)


def shift_and_reflections(surface):
    """Handle reflections F1: i -> 2k - i, F2: i -> 2k + 1 - i (mod g).

    Their product F2 F1 is the cyclic handle shift i -> i + 1, and F2 swaps
    handles k and k + 1.
    """
    g, k = surface.genus, surface.k

    def wrap(i):
        return (i - 1) % g + 1

    f1 = handle_permutation(g, lambda i: wrap(2 * k - i))
    f2 = handle_permutation(g, lambda i: wrap(2 * k + 1 - i))
    return f2 @ f1, f1, f2


# -- registry ---------------------------------------------------------------

@dataclass
class CurveRegistry:
    surface: Surface
    alpha: dict
    beta: dict
    gamma: dict
    shift: SympMatrix
    reflections: tuple
    seed_vectors: dict
    metadata: dict = field(default_factory=dict)

    def window(self, family):
        g, k = self.surface.genus, self.surface.k
        top = g - 1 if family == "gamma" else g
        return list(range(max(1, k - 3), min(top, k + 3) + 1))

    def family(self, name):
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}[name]

    def violations(self):
        out = []
        for fam in ("alpha", "beta", "gamma"):
            vecs = self.family(fam)
            for i, v in vecs.items():
                if not primitive(v):
                    out.append(f"{fam}[{i}] is not primitive")
            win = self.window(fam)
            for i in win[:-1]:
                if not same_up_to_sign(self.shift @ vecs[i], vecs[i + 1]):
                    out.append(f"{fam}[{i + 1}] != +-R {fam}[{i}]")
        out += chain_violations(self)
        return out


def chain_violations(reg):
    """Intersection pattern of the standard chain on the index window."""
    out = []
    wa, wc = reg.window("alpha"), reg.window("gamma")
    for i in wa:
        for j in wa:
            want = {1} if i == j else {0}
            if abs(pairing(reg.alpha[i], reg.beta[j])) not in want:
                out.append(f"|<alpha[{i}], beta[{j}]>| != {want.pop()}")
            if pairing(reg.alpha[i], reg.alpha[j]) or pairing(reg.beta[i], reg.beta[j]):
                out.append(f"alpha/beta[{i}],[{j}] not disjoint")
        for j in wc:
            want = 1 if j in (i - 1, i) else 0
            if abs(pairing(reg.beta[i], reg.gamma[j])) != want:
                out.append(f"|<beta[{i}], gamma[{j}]>| != {want}")
            if pairing(reg.alpha[i], reg.gamma[j]):
                out.append(f"<alpha[{i}], gamma[{j}]> != 0")
    for i in wc:
        for j in wc:
            if pairing(reg.gamma[i], reg.gamma[j]):
                out.append(f"<gamma[{i}], gamma[{j}]> != 0")
    return out


def _seed_candidates(dim, bound, max_weight, rng):
    out = []
    values = [v for v in range(-bound, bound + 1) if v]
    for w in range(1, max_weight + 1):
        group = []
        for support in itertools.combinations(range(dim), w):
            for vals in itertools.product(values, repeat=w):
                v = [0] * dim
                for s, val in zip(support, vals):
                    v[s] = val
                if math.gcd(*[abs(t) for t in vals]) == 1:
                    group.append(v)
        rng.shuffle(group)
        out += group
    return out


def _mat_rows(m):
    return [[int(e) for e in row] for row in (m.array if isinstance(m, SympMatrix) else m)]


def lantern_transfer_pairs(shift, lantern):
    """The four (source, target) class pairs an involution J must realise.

    From R^2 J(a1) = a2, R^2 J(y1) = y2, J R^-2(a1) = a3, J R^-2(y1) = y3.
    """
    r2i = shift ** -2
    return [
        (lantern.a[0], r2i @ lantern.a[1]),
        (lantern.y[0], r2i @ lantern.y[1]),
        (r2i @ lantern.a[0], lantern.a[2]),
        (r2i @ lantern.y[0], lantern.y[2]),
    ]


def signed_partial_involution(pairs, isotropic=True):
    """First sign assignment for which v_i -> +-w_i extends to an involution.

    Returns ``(signs, basis, matrix)`` or ``None``.  The first sign is fixed
    to +1: negating an involution gives another one.
    """
    n = len(pairs)
    for rest in itertools.product((1, -1), repeat=n - 1):
        signs = (1,) + rest
        res = partial_involution([(v, s * np.asarray(w, dtype=object)) for (v, w), s in zip(pairs, signs)])
        if res is None:
            continue
        basis, a = res
        if isotropic and any(pairing(u, v) for u in basis for v in basis):
            continue
        return signs, basis, a
    return None


def _solve_gamma_seed(shift, u, pairs, eps, sigma, tau):
    """Solve the boundary and y1 equations for c = gamma_k; None if not unique/integral."""
    g2 = len(u)
    r = _mat_rows(shift)
    r2u = shift @ (shift @ u)
    ru = shift @ u
    e1, e2, e3, e4 = eps
    # a1 = u, a2 = R^2 u, a3 = sigma R c, a4 = c
    coef = {1: ("u", e1), 2: ("r2u", e2), 3: ("rc", e3 * sigma), 4: ("c", e4)}
    known = {"u": np.asarray(u, dtype=object), "r2u": r2u}
    rows, rhs = [], []

    def add_equation(terms, target):
        # sum of terms == target, with c-terms moved left
        mat = [[0] * g2 for _ in range(g2)]
        b = [int(t) for t in target]
        for kind, s in terms:
            if kind == "c":
                for i in range(g2):
                    mat[i][i] += s
            elif kind == "rc":
                for i in range(g2):
                    for j in range(g2):
                        mat[i][j] += s * r[i][j]
            else:
                b = [bi - s * int(vi) for bi, vi in zip(b, known[kind])]
        rows.extend(mat)
        rhs.extend(b)

    add_equation([coef[i] for i in (1, 2, 3, 4)], [0] * g2)
    i, j = pairs[0]
    if 3 in (i, j) or 4 in (i, j):
        add_equation([coef[i], coef[j]], [tau * int(t) for t in ru])
    sol = rational_solve(rows, rhs)
    if sol is None or not sol[1]:
        return None
    z, _ = sol
    if any(e.denominator != 1 for e in z):
        return None
    c = as_vector([int(e) for e in z])
    if not any(c) or not primitive(c):
        return None
    return c


def solve_registry(surface, seed=0, bound=1, max_weight=2, max_candidates=20000):
    """Bounded search for curve classes and the lantern instance at index k.

    Seed vectors alpha_k and beta_k range over integer vectors with at most
    ``max_weight`` nonzero entries of absolute value <= ``bound``; the sign
    and pairing cases of the lantern are enumerated exhaustively.  The
    candidate order depends on ``seed``; the result is deterministic for a
    fixed seed.
    """
    g, k = surface.genus, surface.k
    if g < 5:
        raise UnsupportedGenusError(f"registry solving needs genus >= 5, got {g}")
    rng = random.Random(seed)
    shift, f1, f2 = shift_and_reflections(surface)
    cands = _seed_candidates(2 * g, bound, max_weight, rng)
    pair_orders = list(itertools.permutations(TEMPLATE_PAIRS))
    rest = pair_orders[1:]
    rng.shuffle(rest)
    pair_orders = [pair_orders[0]] + rest
    sign_cases = [(1,) + s for s in itertools.product((1, -1), repeat=3)]
    tried = 0
    rejected = {"template pairing": 0, "transfer": 0, "beta": 0}
    offsets = range(-3, 4)
    powers = {d: shift ** d for d in range(-4, 5)}

    for u in cands[:max_candidates]:
        u = as_vector(u)
        tried += 1
        if not same_up_to_sign(f2 @ u, shift @ u):
            continue
        orbit = [powers[d] @ u for d in offsets]
        if any(pairing(p, q) for p in orbit for q in orbit):
            continue
        for pairs in pair_orders:
            for eps in sign_cases:
                for sigma, tau in itertools.product((1, -1), repeat=2):
                    if pairs[0] == (1, 2):
                        want = eps[0] * u + eps[1] * (powers[2] @ u)
                        if not same_up_to_sign(powers[1] @ u, want):
                            rejected["template pairing"] += 1
                            continue
                    c = _solve_gamma_seed(shift, u, pairs, eps, sigma, tau)
                    if c is None:
                        continue
                    a3 = as_vector(sigma * (shift @ c))
                    lantern = LanternClasses.from_boundary(u, powers[2] @ u, a3, eps, pairs)
                    if lantern.violations() or not same_up_to_sign(lantern.y[0], powers[1] @ u):
                        continue
                    if any(pairing(p, q) for p in orbit for q in (c, a3)):
                        continue
                    transfer = signed_partial_involution(lantern_transfer_pairs(shift, lantern))
                    if transfer is None:
                        rejected["transfer"] += 1
                        continue
                    reg = _attach_beta(surface, shift, (f1, f2), u, c, sigma, cands, powers)
                    if reg is None:
                        rejected["beta"] += 1
                        continue
                    reg.metadata = {
                        "seed": seed,
                        "bound": bound,
                        "max_weight": max_weight,
                        "candidates_tried": tried,
                        "pairs": [list(p) for p in pairs],
                        "eps": list(eps),
                        "gamma_shift_sign": sigma,
                        "rejected": dict(rejected),
                    }
                    if reg.violations():
                        continue
                    return reg, lantern
    raise SolverFailure(
        f"registry search exhausted after {tried} seed vectors",
        [f"{name}: {n} cases rejected" for name, n in rejected.items()],
    )


def _attach_beta(surface, shift, reflections, u, c, sigma, cands, powers):
    g, k = surface.genus, surface.k
    alpha = {i: as_vector(shift ** (i - k) @ u) for i in range(1, g + 1)}
    sr = SympMatrix(sigma * shift.array, check=False)
    gamma = {i: as_vector(sr ** (i - k) @ c) for i in range(1, g)}
    for w in cands:
        w = as_vector(w)
        if abs(pairing(u, w)) != 1:
            continue
        beta = {i: as_vector(shift ** (i - k) @ w) for i in range(1, g + 1)}
        reg = CurveRegistry(
            surface=surface,
            alpha=alpha,
            beta=beta,
            gamma=gamma,
            shift=shift,
            reflections=reflections,
            seed_vectors={"alpha_k": u, "beta_k": w, "gamma_k": c},
        )
        if not chain_violations(reg):
            return reg
    return None

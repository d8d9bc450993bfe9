"""Mapping-class shadows, words in named generators, and the involution solver.

A shadow is a pair (symplectic matrix, puncture permutation).  Products are
taken componentwise and ``f @ g`` means "apply g first", as for matrices.

Involutions that are only specified through conditions (the J, I and J'
of the involution generating sets) are found by a randomized completion:
the conditions determine the involution on a sublattice V; V is extended to
a symplectic basis and the involution is completed on the complement by a
random symplectic involution, then conjugated by random transvections that
fix V pointwise.
"""

from __future__ import annotations

import itertools
import logging
import random
import re
from dataclasses import dataclass, field

import numpy as np

from .lattice import CompletionError, complete_symplectic_basis, partial_involution
from .perm import Permutation
from .surface import SolverFailure, puncture_involutions
from .symplectic import (
    DimensionError,
    SympMatrix,
    as_vector,
    is_involution,
    omega,
    pairing,
    same_up_to_sign,
    transvection,
)

log = logging.getLogger(__name__)


class UnboundSymbolError(KeyError):
    pass


@dataclass(frozen=True)
class MappingClassShadow:
    matrix: SympMatrix
    perm: Permutation

    @classmethod
    def identity(cls, genus, punctures):
        return cls(SympMatrix.identity(genus), Permutation.identity(punctures))

    @classmethod
    def twist(cls, c, punctures):
        return cls(transvection(c), Permutation.identity(punctures))

    @property
    def genus(self):
        return self.matrix.genus

    @property
    def punctures(self):
        return self.perm.degree

    def __matmul__(self, other):
        if other.genus != self.genus or other.punctures != self.punctures:
            raise DimensionError("cannot compose shadows of different signatures")
        return MappingClassShadow(self.matrix @ other.matrix, self.perm * other.perm)

    def inverse(self):
        return MappingClassShadow(self.matrix.inverse(), self.perm.inverse())

    def __pow__(self, n):
        return MappingClassShadow(self.matrix ** n, self.perm ** n)

    def is_identity(self):
        return self.matrix.is_identity() and self.perm.is_identity()

    def is_involution(self):
        return is_involution(self.matrix) and self.perm.is_involution()

    def conjugate(self, by):
        return by @ self @ by.inverse()


_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_']*)(?:\^\(?(-?\d+)\)?)?")


@dataclass(frozen=True)
class Word:
    """Finite product of symbols with integer exponents, read left to right as a product."""

    terms: tuple

    @classmethod
    def parse(cls, text):
        text = text.replace("*", " ").replace(".", " ")
        terms = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse word at {text[pos:]!r}")
            terms.append((m.group(1), int(m.group(2) or 1)))
            pos = m.end()
        return cls(tuple(terms))

    def __mul__(self, other):
        return Word(self.terms + other.terms)

    def inverse(self):
        return Word(tuple((s, -e) for s, e in reversed(self.terms)))

    def symbols(self):
        return {s for s, _ in self.terms}

    def __str__(self):
        return " ".join(s if e == 1 else f"{s}^{e}" for s, e in self.terms) or "1"


def evaluate(word, table, genus=None, punctures=None):
    """Product of the bound shadows; the empty word needs an explicit signature."""
    if isinstance(word, str):
        word = Word.parse(word)
    missing = word.symbols() - set(table)
    if missing:
        raise UnboundSymbolError(f"unbound symbols: {', '.join(sorted(missing))}")
    if not word.terms:
        if genus is None:
            sample = next(iter(table.values()))
            genus, punctures = sample.genus, sample.punctures
        return MappingClassShadow.identity(genus, punctures)
    out = None
    for sym, e in word.terms:
        f = table[sym] ** e
        out = f if out is None else out @ f
    return out


def u_word(genus):
    """The chain word built from the twists along beta, gamma and alpha curves.

    It is bound against the registry like any other word but carries no
    verified relation.
    """
    down = []
    for i in range(1, genus):
        down += [(f"Tb{i}", -1), (f"Tc{i}", -1)]
    down += [(f"Tb{genus}", -1), (f"Ta{genus}", -1)]
    up = [("Ta1", 1)]
    for i in range(1, genus):
        up += [(f"Tb{i}", 1), (f"Tc{i}", 1)]
    up += [(f"Tb{genus}", 1)]
    return Word(tuple(down + up))


def twist_table(registry, punctures):
    """Symbols Ta{i}, Tb{i}, Tc{i} bound to the twist shadows of the registry."""
    table = {}
    for prefix, fam in (("Ta", registry.alpha), ("Tb", registry.beta), ("Tc", registry.gamma)):
        for i, v in fam.items():
            table[f"{prefix}{i}"] = MappingClassShadow.twist(v, punctures)
    return table


def make_rho3(rho2, a1):
    """rho3 = T_{a1} rho2 T_{a1}^{-1}."""
    t = MappingClassShadow.twist(a1, rho2.punctures)
    return rho2.conjugate(t)


# -- involution solver -----------------------------------------------------

@dataclass(frozen=True)
class Requirement:
    """prefix . X . suffix (source) == target, optionally up to sign."""

    label: str
    source: np.ndarray
    target: np.ndarray
    prefix: SympMatrix = None
    suffix: SympMatrix = None
    up_to_sign: bool = True

    def pair(self):
        v = self.source if self.suffix is None else self.suffix @ self.source
        w = self.target if self.prefix is None else self.prefix.inverse() @ self.target
        return as_vector(v), as_vector(w)

    def holds(self, m):
        v, w = self.pair()
        img = m @ v
        if self.up_to_sign:
            return same_up_to_sign(img, w)
        return bool((img == w).all())


@dataclass
class InvolutionConstraints:
    name: str
    genus: int
    requirements: list
    perm: Permutation
    dropped: list = field(default_factory=list)


def _blocks_to_matrix(blocks, genus):
    m = np.zeros((2 * genus, 2 * genus), dtype=object)
    for (i, j), blk in blocks.items():
        m[2 * i:2 * i + 2, 2 * j:2 * j + 2] = blk
    return m


def random_symplectic_involution(h, rng):
    """Random involution of Sp(2h, Z) built from handle blocks and conjugated."""
    if h == 0:
        return np.zeros((0, 0), dtype=object)
    handles = list(range(h))
    rng.shuffle(handles)
    eye = np.identity(2, dtype=int).astype(object)
    blocks = {}
    while handles:
        i = handles.pop()
        if handles and rng.random() < 0.8:
            j = handles.pop()
            if rng.random() < 0.25:
                blocks[(i, j)] = eye.copy()
                blocks[(j, i)] = eye.copy()
            else:
                # x_i <-> y_j and x_j <-> -y_i
                blocks[(j, i)] = np.array([[0, -1], [1, 0]], dtype=object)
                blocks[(i, j)] = np.array([[0, 1], [-1, 0]], dtype=object)
        else:
            blocks[(i, i)] = eye * rng.choice((1, -1))
    d = _blocks_to_matrix(blocks, h)
    k = SympMatrix.identity(h)
    for _ in range(rng.randint(1, 3)):
        c = [rng.randint(-1, 1) for _ in range(2 * h)]
        if any(c):
            k = k @ transvection(c)
    return k.array.dot(d).dot(k.inverse().array)


def _is_symp(a):
    om = omega(a.shape[0] // 2)
    return bool((a.T.dot(om).dot(a) == om).all())


def _complete(basis, a, genus, rng):
    s = complete_symplectic_basis(basis, genus)
    m = len(basis)
    jp = np.zeros((2 * genus, 2 * genus), dtype=object)
    for i in range(m):
        for j in range(m):
            jp[2 * i, 2 * j] = a[i][j]
            jp[2 * i + 1, 2 * j + 1] = a[j][i]
    h = genus - m
    d = random_symplectic_involution(h, rng)
    idx = [2 * m + t for t in range(2 * h)]
    for r, i in enumerate(idx):
        for c, j in enumerate(idx):
            jp[i, j] = d[r, c]
    sinv = SympMatrix(s, check=False).inverse().array
    j = SympMatrix(s.dot(jp).dot(sinv), check=False)
    # conjugate by transvections along V-perp, which fix V pointwise
    perp = [s[:, 2 * i] for i in range(genus)] + [s[:, 2 * i + 1] for i in range(m, genus)]
    for _ in range(rng.randint(0, 2)):
        picks = rng.sample(range(len(perp)), min(2, len(perp)))
        c = sum(rng.choice((1, -1)) * perp[p] for p in picks)
        if any(c):
            t = transvection(c)
            j = t @ j @ t.inverse()
    return j


def solve_involution(constraints, seed=0, max_attempts=10**4):
    """Find an integral symplectic involution meeting every requirement.

    Every requirement is reduced to a pair v -> +-w; sign cases are tried
    in a fixed order and the first one whose span carries a consistent
    isometric involution on an isotropic lattice is completed.  Raises
    ``SolverFailure`` when no sign case is admissible or the attempt cap is
    reached.
    """
    g = constraints.genus
    reqs = constraints.requirements
    pairs = [r.pair() for r in reqs]
    rng = random.Random(f"{constraints.name}:{seed}")
    admissible = []
    for rest in itertools.product((1, -1), repeat=max(len(pairs) - 1, 0)):
        signs = (1,) + rest
        if any(s < 0 and not r.up_to_sign for s, r in zip(signs, reqs)):
            continue
        res = partial_involution([(v, s * w) for (v, w), s in zip(pairs, signs)])
        if res is None:
            continue
        basis, a = res
        if any(pairing(u, v) for u in basis for v in basis):
            continue
        admissible.append((signs, basis, a))
    if not admissible:
        raise SolverFailure(
            f"{constraints.name}: no sign assignment extends to an involution on an isotropic lattice",
            [r.label for r in reqs],
        )
    for attempt in range(max_attempts):
        signs, basis, a = admissible[attempt % len(admissible)]
        try:
            j = _complete(basis, a, g, rng)
        except CompletionError as exc:
            raise SolverFailure(f"{constraints.name}: {exc}", [r.label for r in reqs]) from exc
        if not is_involution(j) or not _is_symp(j.array):
            continue
        if all(r.holds(j) for r in reqs):
            return MappingClassShadow(j, constraints.perm), {"signs": list(signs), "attempts": attempt + 1}
    raise SolverFailure(f"{constraints.name}: attempt cap {max_attempts} reached", [r.label for r in reqs])


# -- generator sets -----------------------------------------------------------

THEOREMS = {"T7": ("rho1", "rho2", "rho3", "J", "I"), "T8": ("rho1", "rho2", "rho3", "Jprime")}


@dataclass
class GeneratorSet:
    theorem: str
    genus: int
    punctures: int
    members: dict
    seed: int
    constraints: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    registry: object = None
    lantern: object = None

    def names(self):
        return list(self.members)

    def __getitem__(self, name):
        return self.members[name]

    def shift(self):
        return self.members["rho2"] @ self.members["rho1"]

    def j(self):
        return self.members["J"] if "J" in self.members else self.members["Jprime"]

    def table(self, registry=None):
        tab = dict(self.members)
        tab["R"] = self.shift()
        if registry is not None:
            tab.update(twist_table(registry, self.punctures))
        return tab


def j_constraints(registry, lantern, name="J", perm=None):
    r = registry.shift
    r2, r2i = r ** 2, r ** -2
    a1, a2, a3 = lantern.a[:3]
    y1, y2, y3 = lantern.y
    reqs = [
        Requirement("R^2 J(a1) = a2", a1, a2, prefix=r2),
        Requirement("R^2 J(y1) = y2", y1, y2, prefix=r2),
        Requirement("J R^-2(a1) = a3", a1, a3, suffix=r2i),
        Requirement("J R^-2(y1) = y3", y1, y3, suffix=r2i),
    ]
    if perm is None:
        perm = puncture_involutions(registry.surface.punctures).r3
    return InvolutionConstraints(name, registry.surface.genus, reqs, perm)


def i_constraints(registry):
    k = registry.surface.k
    b = registry.surface.punctures
    req = Requirement(f"I(alpha_{k}) = beta_{k + 1}", registry.alpha[k], registry.beta[k + 1])
    return InvolutionConstraints("I", registry.surface.genus, [req], Permutation.identity(b))


def jprime_constraints(registry, lantern):
    c = j_constraints(registry, lantern, name="Jprime")
    k, g = registry.surface.k, registry.surface.genus
    lo, hi = k - 3, k + 3
    label = f"J'(beta_{hi}) = gamma_{lo}"
    if 1 <= lo <= g - 1 and 1 <= hi <= g:
        c.requirements.append(Requirement(label, registry.beta[hi], registry.gamma[lo]))
    else:
        log.info("dropping %s: index outside 1..%d", label, g)
        c.dropped.append(label)
    return c


def build_generator_set(surface, registry, lantern, theorem, seed=0, max_attempts=10**4):
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; expected one of {sorted(THEOREMS)}")
    if theorem == "T7" and not surface.theorem7 or theorem == "T8" and not surface.theorem8:
        raise ValueError(f"{theorem} is not eligible for genus {surface.genus}")
    b = surface.punctures
    pi = puncture_involutions(b)
    f1, f2 = registry.reflections
    k = surface.k
    rho1 = MappingClassShadow(f1, pi.r1)
    rho2 = MappingClassShadow(f2, pi.r2)
    if not same_up_to_sign(f2 @ registry.alpha[k], registry.alpha[k + 1]):
        raise SolverFailure("rho2 does not exchange alpha_k and alpha_{k+1}", ["rho2(alpha_k) = alpha_{k+1}"])
    rho3 = make_rho3(rho2, lantern.a[0])
    members = {"rho1": rho1, "rho2": rho2, "rho3": rho3}
    constraints, prov = {}, {}
    solvers = {"J": lambda: j_constraints(registry, lantern), "I": lambda: i_constraints(registry),
               "Jprime": lambda: jprime_constraints(registry, lantern)}
    for name in THEOREMS[theorem][3:]:
        c = solvers[name]()
        shadow, info = solve_involution(c, seed, max_attempts)
        members[name] = shadow
        constraints[name] = {
            "satisfied": [r.label for r in c.requirements],
            "dropped": list(c.dropped),
        }
        prov[name] = info
    return GeneratorSet(theorem, surface.genus, b, members, seed, constraints, prov, registry, lantern)

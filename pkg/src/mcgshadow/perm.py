"""Permutations of {1, ..., n}.

Composition follows function notation: ``(p * q)(i) == p(q(i))``, so the
rightmost factor acts first.  This matches how products such as r3 r1 are
read off in cycle notation.
"""

from __future__ import annotations

import re


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        self.images = images

    @classmethod
    def identity(cls, n):
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, n, cycles):
        img = list(range(1, n + 1))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= n or a in seen:
                    raise ValueError(f"bad cycle {cyc} for degree {n}")
                seen.add(a)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b
        return cls(img)

    @classmethod
    def parse(cls, n, text):
        """Parse cycle notation such as ``"(1,8)(2,7)"``; ``"()"`` is the identity."""
        cycles = [
            [int(t) for t in body.replace(",", " ").split()]
            for body in re.findall(r"\(([^()]*)\)", text)
        ]
        return cls.from_cycles(n, [c for c in cycles if c])

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i - 1]

    def __mul__(self, other):
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Permutation(self.images[j - 1] for j in other.images)

    def inverse(self):
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(inv)

    def __pow__(self, k):
        k = int(k)
        base = self if k >= 0 else self.inverse()
        out = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images, start=1))

    def is_involution(self):
        return (self * self).is_identity()

    def cycles(self):
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen or self(start) == start:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def cycle_string(self):
        body = "".join("(" + ",".join(map(str, c)) + ")" for c in self.cycles())
        return body or "()"

    def __repr__(self):
        return f"Permutation({self.degree}, {self.cycle_string()})"

    def to_array(self):
        """0-indexed image list for the permutation-group engine."""
        return [i - 1 for i in self.images]

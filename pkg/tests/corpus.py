"""Small permutation groups with known orders, used as engine oracles.

Orders come from brute-force closure in the tests; the ``order`` column is
only the textbook value kept for readability.
"""

import itertools

import numpy as np

from mcgshadow.groups import matrix_group_action
from mcgshadow.perm import Permutation
from mcgshadow.surface import puncture_involutions
from mcgshadow.symplectic import SympMatrix, transvection, x, y


def cyc(n, *cycles):
    return Permutation.from_cycles(n, [list(c) for c in cycles])


def symmetric(n):
    return [cyc(n, (1, 2)), cyc(n, tuple(range(1, n + 1)))]


def alternating(n):
    return [cyc(n, (1, 2, i)) for i in range(3, n + 1)]


def dihedral(n):
    refl = Permutation([n + 1 - i for i in range(1, n + 1)])
    return [cyc(n, tuple(range(1, n + 1))), refl]


def cyclic(n):
    return [cyc(n, tuple(range(1, n + 1)))]


def psl27():
    # action on the 7 points of the Fano plane, labelled 0..6 -> 1..7
    a = Permutation([(i + 1) % 7 + 1 for i in range(7)])
    b = Permutation([((2 * i) % 7) + 1 for i in range(7)])
    c = cyc(7, (2, 3), (4, 7))
    return [a, b, c]


def wreath_c2_c3():
    return [cyc(6, (1, 2)), cyc(6, (1, 3, 5), (2, 4, 6))]


def matrix_gens(vectors, p):
    mats = [transvection(v) for v in vectors]
    act = matrix_group_action(mats, [None] * len(mats), p, 0)
    return [Permutation(np.asarray(g) + 1) for g in act.generators]


def corpus():
    out = []
    for n in range(2, 7):
        out.append((f"S{n}", symmetric(n)))
    for n in range(3, 8):
        out.append((f"A{n}", alternating(n)))
    for n in range(3, 11):
        out.append((f"D{n}", dihedral(n)))
        out.append((f"C{n}", cyclic(n)))
    out.append(("PSL(2,7)", psl27()))
    out.append(("C2 wr C3", wreath_c2_c3()))
    for b in range(2, 7):
        pi = puncture_involutions(b)
        out.append((f"<r1,r2,r3> b={b}", [pi.r1, pi.r2, pi.r3]))
    for b in range(4, 13):
        pi = puncture_involutions(b)
        out.append((f"<r1,r2> b={b}", [pi.r1, pi.r2]))
    out.append(("Sp(2,2)", matrix_gens([x(1, 1), y(1, 1)], 2)))
    out.append(("Sp(2,3)", matrix_gens([x(1, 1), y(1, 1)], 3)))
    out.append(("Sp(2,5)", matrix_gens([x(1, 1), y(1, 1)], 5)))
    g2 = [x(2, 1), y(2, 1), x(2, 1) - x(2, 2), y(2, 2), x(2, 2)]
    out.append(("Sp(4,2)", matrix_gens(g2, 2)))
    out.append(("<T_x1, T_x2> mod 3", matrix_gens([x(2, 1), x(2, 2)], 3)))
    return out


def all_vectors_mod(dim, p):
    return [np.array(v, dtype=object) for v in itertools.product(range(p), repeat=dim)]


def brute_sp_order(g, p):
    """Count all 2g x 2g matrices mod p preserving the form."""
    from mcgshadow.symplectic import omega

    n = 2 * g
    om = np.array(omega(g), dtype=np.int64) % p
    count = 0
    for entries in itertools.product(range(p), repeat=n * n):
        m = np.array(entries, dtype=np.int64).reshape(n, n)
        if ((m.T @ om @ m) % p == om).all():
            count += 1
    return count


__all__ = ["corpus", "brute_sp_order", "cyc", "SympMatrix"]

"""Compare the compiled kernels with the numpy fallback on a few group builds.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each workload runs once per backend by swapping the kernel module that
``mcgshadow.groups`` uses; orders are checked to agree.
"""

import argparse
import time

from mcgshadow import _pykernels, groups
from mcgshadow.groups import PermGroup, matrix_group_action, sp_order
from mcgshadow.surface import build_surface
from mcgshadow.symplectic import transvection, x, y
from mcgshadow.verify import certify_generation
from mcgshadow.io import reference_generators

try:
    from mcgshadow import _kernels
except ImportError:
    _kernels = None


def lickorish_action(g, p):
    vecs = [x(g, i) for i in range(1, g + 1)] + [y(g, i) for i in range(1, g + 1)]
    vecs += [x(g, i) - x(g, i + 1) for i in range(1, g)]
    mats = [transvection(v) for v in vecs]
    return matrix_group_action(mats, [None] * len(mats), p, 0)


def sp_verified(g, p):
    # no order bound: the full Schreier verification phase runs
    def work():
        return PermGroup(lickorish_action(g, p).generators).order()
    return work, sp_order(g, p)


def sp_bounded(g, p):
    def work():
        return lickorish_action(g, p).group(order_bound=sp_order(g, p)).order()
    return work, sp_order(g, p)


def t8_certificate():
    gens = reference_generators()
    surface = build_surface(7, 5)

    def work():
        return certify_generation(gens, surface, 2).order
    return work, sp_order(7, 2) * 120


WORKLOADS = [
    ("Sp(8,2) verified", *sp_verified(4, 2)),
    ("Sp(10,2) verified", *sp_verified(5, 2)),
    ("Sp(6,3) verified", *sp_verified(3, 3)),
    ("Sp(12,2) bounded", *sp_bounded(6, 2)),
    ("Sp(14,2) bounded", *sp_bounded(7, 2)),
    ("T8 (7,5,2) certificate", *t8_certificate()),
]


def timed(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [("numpy", _pykernels)] + ([("cython", _kernels)] if _kernels is not None else [])
    saved = groups.kernels
    print(f"{'workload':26s}" + "".join(f"{name:>12s}" for name, _ in backends) + "   speedup")
    try:
        for label, fn, want in WORKLOADS:
            times = []
            for _, mod in backends:
                groups.kernels = mod
                dt, order = timed(fn, args.repeat)
                if order != want:
                    raise SystemExit(f"{label}: order {order} != {want}")
                times.append(dt)
            speed = f"{times[0] / times[-1]:9.1f}x" if len(times) > 1 else "      n/a"
            print(f"{label:26s}" + "".join(f"{t:11.3f}s" for t in times) + speed)
    finally:
        groups.kernels = saved


if __name__ == "__main__":
    main()

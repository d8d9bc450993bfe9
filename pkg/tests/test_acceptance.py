"""Acceptance criteria 1-11, one test each.

Every test records a PASS/FAIL line which the conftest hook prints at the end
of the session.  Running this file directly prints the same lines:

    python3 tests/test_acceptance.py
"""

import json
import math
import random
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import lines, record  # noqa: E402
from corpus import brute_sp_order, corpus  # noqa: E402

from mcgshadow.groups import PermGroup, closure_order, sp_order  # noqa: E402
from mcgshadow.io import reference_generators, shadow_from_dict, shadow_to_dict  # noqa: E402
from mcgshadow.mapping import MappingClassShadow, Word, build_generator_set, evaluate  # noqa: E402
from mcgshadow.perm import Permutation  # noqa: E402
from mcgshadow.surface import (  # noqa: E402
    build_surface,
    puncture_involutions,
    random_lantern_instance,
    random_symplectic,
    solve_registry,
    toy_lantern,
)
from mcgshadow.symplectic import omega, pairing, transvection  # noqa: E402
from mcgshadow.verify import (  # noqa: E402
    FAIL,
    certify_generation,
    certify_lemma5_shadow,
    certify_with_retry,
    eq6_product,
    sym_checks,
    verify_eq7,
    verify_lantern,
    verify_lantern_rewrite,
)

CASES = 1000


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _run(number, fn):
    try:
        ok, text = fn()
    except Exception as exc:  # a crash is a red criterion, not a silent skip
        ok, text = False, f"raised {type(exc).__name__}: {exc}"
    record(number, ok, text)
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {text}")
    return ok, text


def _solved(g, b, theorem, registry_seed, seeds):
    s = build_surface(g, b)
    reg, lan = solve_registry(s, registry_seed)
    return s, reg, lan, [build_generator_set(s, reg, lan, theorem, sd) for sd in seeds]


# -- criteria -------------------------------------------------------------------

def criterion_1():
    def work():
        bad = []
        for b in range(2, 13):
            pi = puncture_involutions(b)
            order = PermGroup([pi.r1, pi.r2, pi.r3]).order()
            cycle = Permutation.from_cycles(b, [list(range(1, b + 1))])
            if order != math.factorial(b) or pi.r3 * pi.r1 != cycle or pi.r3 * pi.r2 != Permutation.from_cycles(b, [[1, b]]):
                bad.append(b)
        return bad
    bad, dt = _timed(work)
    return not bad and dt < 1.0, f"|<r1,r2,r3>| = b! with both anchors for b=2..12, failures {bad}, {dt:.3f}s (< 1s)"


def criterion_2():
    def work():
        bad = []
        for b in range(4, 13):
            pi = puncture_involutions(b)
            order = PermGroup([pi.r1, pi.r2]).order()
            checks, summary = sym_checks(b)
            noted = "2(b-1)" in summary["note"] and "D_2b" in summary["note"]
            if order != 2 * (b - 1) or order >= math.factorial(b) or not noted:
                bad.append(b)
        return bad
    bad, dt = _timed(work)
    return not bad and dt < 1.0, f"|<r1,r2>| = 2(b-1) < b! for b=4..12, discrepancy noted, failures {bad}, {dt:.3f}s (< 1s)"


def criterion_3():
    def work():
        toy = toy_lantern()
        toy_ok = verify_lantern(toy).passed and verify_lantern_rewrite(toy).passed
        failures = 0
        for g in range(3, 9):
            rng = random.Random(f"lantern:{g}")
            for _ in range(100):
                inst = random_lantern_instance(g, rng)
                if not (verify_lantern(inst).passed and verify_lantern_rewrite(inst).passed):
                    failures += 1
        rng = random.Random("corrupt")
        caught = 0
        for n in range(10):
            inst = random_lantern_instance(3 + n % 6, rng)
            i, j = rng.randrange(3), rng.randrange(4)
            bad = inst.replace_y(i + 1, inst.y[i] + inst.a[j])
            results = (verify_lantern(bad), verify_lantern_rewrite(bad))
            if all(r.status == FAIL and r.witness for r in results):
                caught += 1
        return toy_ok, failures, caught
    (toy_ok, failures, caught), dt = _timed(work)
    ok = toy_ok and failures == 0 and caught == 10 and dt < 5.0
    return ok, f"toy ok={toy_ok}, 600 random instances with {failures} failures, {caught}/10 corrupted caught, {dt:.2f}s (< 5s)"


def criterion_4():
    def work():
        out = []
        for g, th, rseed in ((5, "T7", 0), (7, "T8", 0)):
            s, reg, lan, sets = _solved(g, 5, th, rseed, range(3))
            eq5 = all((gs["rho2"] @ gs["rho3"]).matrix == transvection(lan.y1) @ transvection(lan.a1).inverse()
                      for gs in sets)
            products = {eq6_product(gs).matrix for gs in sets}
            eq6 = products == {transvection(reg.gamma[s.k])}
            out.append((th, eq5, eq6, len({gs.j().matrix for gs in sets})))
        return out
    out, dt = _timed(work)
    ok = all(e5 and e6 for _, e5, e6, _ in out) and dt < 10.0
    detail = ", ".join(f"{th}: rho2rho3 {e5}, product = T_gamma_k {e6} over 3 seeds ({nj} distinct J)"
                       for th, e5, e6, nj in out)
    return ok, f"{detail}, {dt:.2f}s (< 10s)"


def criterion_5():
    checked, ok = 0, True
    for g, th in ((5, "T7"), (7, "T8")):
        s, reg, lan, (gs,) = _solved(g, 5, th, 0, [0])
        res = verify_eq7(gs, reg)
        ok = ok and res.passed
        checked += res.details["checked"] if res.details else 0
    return ok and checked > 0, f"R T_c R^-1 = T_(next c) for all window indices at g=5,7 ({checked} identities)"


def criterion_6():
    sets = []
    for g, th in ((5, "T7"), (6, "T7"), (7, "T8"), (8, "T8")):
        sets += _solved(g, 5, th, 0, range(3))[3]
    sets.append(reference_generators())
    bad = []
    count = 0
    for gs in sets:
        om = omega(gs.genus)
        ident = np.identity(2 * gs.genus, dtype=object)
        for name, m in gs.members.items():
            a = m.matrix.array
            count += 1
            if not ((a.dot(a) == ident).all() and (m.perm * m.perm).is_identity()
                    and (a.T.dot(om).dot(a) == om).all()):
                bad.append((gs.theorem, gs.genus, name))
    return not bad, f"{count} members of {len(sets)} generator sets satisfy M^2 = Id, sigma^2 = id, M^T Om M = Om; failures {bad}"


def criterion_7():
    target = sp_order(7, 2) * 120
    s = build_surface(7, 5)
    (rep, gens, _, _), dt = _timed(lambda: certify_with_retry(s, "T8", 2, seed=0, max_seeds=16))
    pinned = certify_generation(reference_generators(), s, 2)
    ok = rep.passed and rep.order == target and pinned.passed and pinned.order == target and dt <= 300
    tried = [a["seed"] for a in rep.attempts]
    return ok, (f"T8 (7,5,2): retry policy passes at seed {gens.seed} after seeds {tried}, order {rep.order} "
                f"== sp_order(7,2)*120 {rep.order == target}; pinned seed 1 order exact {pinned.order == target}; "
                f"{dt:.2f}s (<= 300s)")


def criterion_8():
    target = sp_order(5, 2) * 120
    s = build_surface(5, 5)
    (rep, gens, _, _), dt = _timed(lambda: certify_with_retry(s, "T7", 2, seed=0, max_seeds=16))
    ok = rep.passed and rep.order == target and dt <= 60
    return ok, f"T7 (5,5,2): seed {gens.seed}, order {rep.order} == sp_order(5,2)*120 {rep.order == target}, {dt:.2f}s (<= 60s)"


def criterion_9():
    s, reg, _, (gs,) = _solved(5, 5, "T7", 0, [0])
    rep, dt = _timed(lambda: certify_lemma5_shadow(s, reg, gs, 2))
    ok = rep.passed and rep.order == sp_order(5, 2) and dt <= 60
    return ok, f"<rho1, rho2, T_alpha_k, T_beta_k, T_gamma_k> at (5,2) has order {rep.order} == sp_order(5,2) {ok}, {dt:.2f}s (<= 60s)"


def criterion_10():
    bad = []
    groups = [(n, gens) for n, gens in corpus() if closure_order(gens) <= 5000]
    for name, gens in groups:
        if PermGroup(gens).order() != closure_order(gens):
            bad.append(name)
    sp = {(1, 2): 6, (2, 2): 720, (1, 3): 24}
    sp_ok = all(sp_order(g, p) == want == brute_sp_order(g, p) for (g, p), want in sp.items())
    return not bad and sp_ok, f"{len(groups)} corpus groups match closure (failures {bad}); sp_order(1,2), (2,2), (1,3) brute force ok={sp_ok}"


def _vector(rng, g):
    while True:
        v = np.array([rng.randint(-2, 2) for _ in range(2 * g)], dtype=object)
        if any(v):
            return v


def criterion_11():
    rng = random.Random("properties")
    tallies = {}

    passed = 0
    for _ in range(CASES):
        g = rng.randint(1, 4)
        c, m = _vector(rng, g), random_symplectic(g, rng, steps=rng.randint(0, 4), spread=1)
        passed += m @ transvection(c) @ m.inverse() == transvection(m @ c)
    tallies["conjugation"] = passed

    passed = 0
    for _ in range(CASES):
        g = rng.randint(1, 4)
        # two classes in the span of the x_i are disjoint in homology; move them together
        c, d = (np.array([rng.randint(-2, 2) if i % 2 == 0 else 0 for i in range(2 * g)], dtype=object)
                for _ in range(2))
        if not any(c) or not any(d):
            c[0] = d[0] = 1
        m = random_symplectic(g, rng, steps=3, spread=1)
        c, d = m @ c, m @ d
        tc, td = transvection(c), transvection(d)
        passed += pairing(c, d) == 0 and tc @ td == td @ tc
    tallies["commutation"] = passed

    passed = 0
    for _ in range(CASES):
        g, b = rng.randint(1, 3), rng.randint(0, 5)
        tab = {}
        for sym in "ABC":
            perm = list(range(1, b + 1))
            rng.shuffle(perm)
            tab[sym] = MappingClassShadow(random_symplectic(g, rng, steps=2, spread=1), Permutation(perm))
        w1, w2 = (Word(tuple((rng.choice("ABC"), rng.choice((-2, -1, 1, 2))) for _ in range(rng.randint(0, 4))))
                  for _ in range(2))
        passed += evaluate(w1 * w2, tab, g, b) == evaluate(w1, tab, g, b) @ evaluate(w2, tab, g, b)
    tallies["homomorphism"] = passed

    passed = 0
    for _ in range(CASES):
        g, b = rng.randint(1, 4), rng.randint(0, 6)
        perm = list(range(1, b + 1))
        rng.shuffle(perm)
        m = MappingClassShadow(random_symplectic(g, rng, steps=rng.randint(0, 5)), Permutation(perm))
        passed += shadow_from_dict(json.loads(json.dumps(shadow_to_dict(m)))) == m
    tallies["serialization"] = passed

    ok = all(v == CASES for v in tallies.values())
    return ok, ", ".join(f"{k} {v}/{CASES}" for k, v in tallies.items()) + " (seeded)"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 12)}


def test_criterion_1():
    ok, text = _run(1, criterion_1)
    assert ok, text


def test_criterion_2():
    ok, text = _run(2, criterion_2)
    assert ok, text


def test_criterion_3():
    ok, text = _run(3, criterion_3)
    assert ok, text


def test_criterion_4():
    ok, text = _run(4, criterion_4)
    assert ok, text


def test_criterion_5():
    ok, text = _run(5, criterion_5)
    assert ok, text


def test_criterion_6():
    ok, text = _run(6, criterion_6)
    assert ok, text


def test_criterion_7():
    ok, text = _run(7, criterion_7)
    assert ok, text


def test_criterion_8():
    ok, text = _run(8, criterion_8)
    assert ok, text


def test_criterion_9():
    ok, text = _run(9, criterion_9)
    assert ok, text


def test_criterion_10():
    ok, text = _run(10, criterion_10)
    assert ok, text


def test_criterion_11():
    ok, text = _run(11, criterion_11)
    assert ok, text


if __name__ == "__main__":
    for n, fn in CRITERIA.items():
        _run(n, fn)
    sys.exit(0 if all(line.startswith("PASS") for line in lines()) else 1)

"""JSON persistence for generator sets ("gens-v1") and reports ("report-v1").

Group orders and other possibly large integers are written as decimal
strings.  Every file records the homology basis convention and import
refuses files written under another one.
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from . import __version__
from .mapping import (
    THEOREMS,
    GeneratorSet,
    MappingClassShadow,
    i_constraints,
    j_constraints,
    jprime_constraints,
    make_rho3,
)
from .perm import Permutation
from .surface import CurveRegistry, LanternClasses, build_surface, puncture_involutions
from .symplectic import BASIS_ID, NotSymplecticError, SympMatrix, as_vector, is_involution, same_up_to_sign

GENS_SCHEMA = "gens-v1"
REPORT_SCHEMA = "report-v1"


class GeneratorImportError(ValueError):
    pass


def _vec(v):
    return [int(e) for e in v]


def _vecs(d):
    return {str(i): _vec(v) for i, v in sorted(d.items())}


def shadow_to_dict(m):
    return {"matrix": m.matrix.tolist(), "perm": list(m.perm.images), "cycles": m.perm.cycle_string()}


def shadow_from_dict(entry):
    return MappingClassShadow(_matrix(entry["matrix"], "shadow"), Permutation(entry["perm"]))


def generators_to_dict(gens):
    reg, lan = gens.registry, gens.lantern
    out = {
        "schema": GENS_SCHEMA,
        "basis": BASIS_ID,
        "tool_version": __version__,
        "theorem": gens.theorem,
        "genus": gens.genus,
        "punctures": gens.punctures,
        "seed": gens.seed,
        "members": {
            name: shadow_to_dict(m) for name, m in gens.members.items()
        },
        "constraints": gens.constraints,
        "provenance": gens.provenance,
    }
    if reg is not None:
        out["registry"] = {
            "alpha": _vecs(reg.alpha),
            "beta": _vecs(reg.beta),
            "gamma": _vecs(reg.gamma),
            "shift": reg.shift.tolist(),
            "reflections": [m.tolist() for m in reg.reflections],
            "seed_vectors": {k: _vec(v) for k, v in reg.seed_vectors.items()},
            "metadata": reg.metadata,
        }
    if lan is not None:
        out["lantern"] = {
            "a": [_vec(v) for v in lan.a],
            "y": [_vec(v) for v in lan.y],
            "eps": list(lan.eps),
            "pairs": [list(p) for p in lan.pairs],
        }
    return out


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def export_generators(gens, path):
    with open(path, "w") as fh:
        fh.write(dumps(generators_to_dict(gens)))


def _matrix(rows, what):
    try:
        return SympMatrix(rows)
    except NotSymplecticError as exc:
        raise GeneratorImportError(f"symplectic violated: {what}") from exc
    except (ValueError, TypeError) as exc:
        raise GeneratorImportError(f"malformed matrix: {what}") from exc


def _expected_perms(theorem, b):
    pi = puncture_involutions(b)
    e = Permutation.identity(b)
    table = {"rho1": pi.r1, "rho2": pi.r2, "rho3": pi.r2, "J": pi.r3, "I": e, "Jprime": pi.r3}
    return {n: table[n] for n in THEOREMS[theorem]}


def generators_from_dict(data):
    """Rebuild a GeneratorSet and re-check every invariant it claims."""
    if data.get("schema") != GENS_SCHEMA:
        raise GeneratorImportError(f"schema mismatch: expected {GENS_SCHEMA}, got {data.get('schema')!r}")
    if data.get("basis") != BASIS_ID:
        raise GeneratorImportError(f"basis convention mismatch: expected {BASIS_ID}, got {data.get('basis')!r}")
    try:
        theorem = data["theorem"]
        surface = build_surface(int(data["genus"]), int(data["punctures"]))
        raw = data["members"]
    except (KeyError, ValueError) as exc:
        raise GeneratorImportError(f"schema mismatch: {exc}") from exc
    if theorem not in THEOREMS or set(raw) != set(THEOREMS[theorem]):
        raise GeneratorImportError(f"member list does not match {theorem}: {sorted(raw)}")
    b = surface.punctures
    members = {}
    for name in THEOREMS[theorem]:
        entry = raw[name]
        try:
            arr = np.array(entry["matrix"], dtype=object)
            square = arr.ndim == 2 and arr.shape[0] == arr.shape[1]
        except (TypeError, ValueError):
            square = False
        if not square:
            raise GeneratorImportError(f"malformed matrix: {name}")
        if not is_involution(arr):
            raise GeneratorImportError(f"involution violated: {name}")
        m = _matrix(entry["matrix"], name)
        if m.genus != surface.genus:
            raise GeneratorImportError(f"dimension violated: {name}")
        try:
            perm = Permutation(entry["perm"])
        except ValueError as exc:
            raise GeneratorImportError(f"permutation violated: {name}") from exc
        if perm.degree != b:
            raise GeneratorImportError(f"permutation violated: {name} has degree {perm.degree}")
        shadow = MappingClassShadow(m, perm)
        if not shadow.is_involution():
            raise GeneratorImportError(f"involution violated: {name}")
        members[name] = shadow
    for name, want in _expected_perms(theorem, b).items():
        if members[name].perm != want:
            raise GeneratorImportError(f"puncture image violated: {name}")

    registry = lantern = None
    if "registry" in data:
        registry = _registry_from_dict(surface, data["registry"])
        bad = registry.violations()
        if bad:
            raise GeneratorImportError(f"registry violated: {bad[0]}")
    if "lantern" in data:
        ld = data["lantern"]
        lantern = LanternClasses(
            tuple(as_vector(v) for v in ld["a"]),
            tuple(as_vector(v) for v in ld["y"]),
            tuple(int(e) for e in ld["eps"]),
            tuple(tuple(p) for p in ld["pairs"]),
        )
        bad = lantern.violations()
        if bad:
            raise GeneratorImportError(f"lantern violated: {bad[0]}")

    gens = GeneratorSet(theorem, surface.genus, b, members, int(data.get("seed", 0)),
                        data.get("constraints", {}), data.get("provenance", {}), registry, lantern)
    if registry is not None and lantern is not None:
        _check_constraints(gens, surface, registry, lantern)
    return gens


def _registry_from_dict(surface, rd):
    def fam(d):
        return {int(i): as_vector(v) for i, v in d.items()}

    try:
        return CurveRegistry(
            surface=surface,
            alpha=fam(rd["alpha"]),
            beta=fam(rd["beta"]),
            gamma=fam(rd["gamma"]),
            shift=_matrix(rd["shift"], "shift"),
            reflections=tuple(_matrix(m, "reflection") for m in rd["reflections"]),
            seed_vectors={k: as_vector(v) for k, v in rd["seed_vectors"].items()},
            metadata=rd.get("metadata", {}),
        )
    except KeyError as exc:
        raise GeneratorImportError(f"schema mismatch: registry lacks {exc}") from exc


def _check_constraints(gens, surface, registry, lantern):
    r = gens.shift().matrix
    if r != registry.shift:
        raise GeneratorImportError("constraint violated: rho2 rho1 = R")
    k = surface.k
    if not same_up_to_sign(gens["rho2"].matrix @ registry.alpha[k], registry.alpha[k + 1]):
        raise GeneratorImportError("constraint violated: rho2(alpha_k) = alpha_{k+1}")
    if make_rho3(gens["rho2"], lantern.a[0]) != gens["rho3"]:
        raise GeneratorImportError("constraint violated: rho3 = T_a1 rho2 T_a1^-1")
    builders = {"J": lambda: j_constraints(registry, lantern), "I": lambda: i_constraints(registry),
                "Jprime": lambda: jprime_constraints(registry, lantern)}
    for name in THEOREMS[gens.theorem][3:]:
        for req in builders[name]().requirements:
            if not req.holds(gens[name].matrix):
                raise GeneratorImportError(f"constraint violated: {name}: {req.label}")


def import_generators(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise GeneratorImportError(f"schema mismatch: not JSON ({exc})") from exc
    return generators_from_dict(data)


REFERENCE_FILE = "t8_g7_b5_seed1.json"


def reference_generators(name=REFERENCE_FILE):
    """Load a generator set shipped with the package (validated like any import)."""
    text = resources.files("mcgshadow").joinpath("data", name).read_text()
    return generators_from_dict(json.loads(text))


TIMING_KEYS = ("elapsed", "timing")


def strip_timing(obj):
    """Copy of a report with all timing fields removed (for stability comparisons)."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj

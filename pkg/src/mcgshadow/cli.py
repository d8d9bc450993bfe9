"""Command-line front end.

    mcgshadow verify --genus 7 --punctures 5 --theorem T8 --suite all --seed 1
    mcgshadow sym --punctures 5
    mcgshadow export --genus 5 --punctures 5 --theorem T7 --output gens.json
    mcgshadow import gens.json

Exit codes: 0 when every non-skipped check passes, 1 when a check fails,
2 on configuration or solver errors.  The default seed can be set with the
MCGSHADOW_SEED environment variable.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass

from . import __version__, kernels
from .groups import PreconditionError
from .io import (
    REPORT_SCHEMA,
    GeneratorImportError,
    dumps,
    export_generators,
    import_generators,
)
from .lattice import CompletionError
from .mapping import build_generator_set
from .surface import SolverFailure, UnsupportedGenusError, build_surface, solve_registry, toy_lantern
from .symplectic import BASIS_ID, ConfigurationError, is_prime
from .verify import (
    FAIL,
    PASS,
    SKIPPED,
    certify_generation,
    certify_lemma5_shadow,
    certify_with_retry,
    sym_checks,
    verify_conditions,
    verify_eq5_eq6,
    verify_eq7,
    verify_involutions,
    verify_lantern,
    verify_lantern_rewrite,
)

SUITES = ("lantern", "relations", "conditions", "quotient", "lemma5", "sym")
SEED_ENV = "MCGSHADOW_SEED"

log = logging.getLogger("mcgshadow")


@dataclass
class RunConfig:
    genus: int
    punctures: int
    theorem: str
    prime: int = 2
    seed: int = 0
    suites: tuple = SUITES
    output: str = None
    generators: str = None
    max_seeds: int = 16

    def echo(self):
        return {
            "genus": self.genus,
            "punctures": self.punctures,
            "theorem": self.theorem,
            "prime": self.prime,
            "seed": self.seed,
            "suites": list(self.suites),
            "generators": self.generators,
            "max_seeds": self.max_seeds,
        }


class ConfigError(ValueError):
    pass


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _check_config(cfg, need_gens=True):
    surface = build_surface(cfg.genus, cfg.punctures)
    if not is_prime(cfg.prime):
        raise ConfigError(f"--prime {cfg.prime} is not prime")
    if not need_gens:
        return surface
    if cfg.theorem == "T8" and not surface.theorem8:
        raise ConfigError(f"T8 needs genus >= 7, got {cfg.genus}")
    if cfg.theorem == "T7" and not surface.theorem7:
        raise ConfigError(f"T7 needs genus >= 5, got {cfg.genus}")
    if cfg.max_seeds < 1:
        raise ConfigError("--max-seeds must be positive")
    return surface


def run(cfg):
    """Execute the selected suites; returns (report dict, exit code)."""
    t_start = time.perf_counter()
    timing = {}
    need_gens = set(cfg.suites) & {"relations", "conditions", "quotient", "lemma5"}
    if "lantern" in cfg.suites and cfg.genus >= 5:
        need_gens.add("lantern")
    surface = _check_config(cfg, bool(need_gens))
    checks, certs, extra = [], [], {}

    gens = registry = lantern = None
    if need_gens:
        t0 = time.perf_counter()
        if cfg.generators:
            gens = import_generators(cfg.generators)
            if (gens.genus, gens.punctures, gens.theorem) != (cfg.genus, cfg.punctures, cfg.theorem):
                raise ConfigError("generator file does not match --genus/--punctures/--theorem")
            registry, lantern = gens.registry, gens.lantern
            if registry is None or lantern is None:
                raise ConfigError("generator file lacks the registry or lantern section")
            if "quotient" in cfg.suites:
                certs.append(certify_generation(gens, surface, cfg.prime))
        elif "quotient" in cfg.suites:
            rep, gens, registry, lantern = certify_with_retry(
                surface, cfg.theorem, cfg.prime, cfg.seed, cfg.max_seeds
            )
            certs.append(rep)
        else:
            registry, lantern = solve_registry(surface, cfg.seed)
            gens = build_generator_set(surface, registry, lantern, cfg.theorem, cfg.seed)
        timing["solve_and_certify"] = round(time.perf_counter() - t0, 3)
        extra["generators"] = {
            "seed": gens.seed,
            "members": list(gens.members),
            "constraints": gens.constraints,
            "registry_metadata": registry.metadata,
            "lantern_pairs": [list(p) for p in lantern.pairs],
        }

    if "lantern" in cfg.suites:
        toy = toy_lantern(max(3, cfg.genus))
        instances = [("toy", toy)] + ([("registry", lantern)] if lantern is not None else [])
        for inst_name, inst in instances:
            for res in (verify_lantern(inst), verify_lantern_rewrite(inst)):
                res.name = f"{res.name}[{inst_name}]"
                checks.append(res)
    if "relations" in cfg.suites:
        checks += [verify_involutions(gens), verify_eq5_eq6(gens, lantern, registry), verify_eq7(gens, registry)]
    if "conditions" in cfg.suites:
        checks += verify_conditions(gens, surface, registry, lantern)
    if "lemma5" in cfg.suites:
        certs.append(certify_lemma5_shadow(surface, registry, gens, cfg.prime))
    if "sym" in cfg.suites:
        res, summary = sym_checks(cfg.punctures)
        checks += res
        extra["sym"] = summary

    report, code = _assemble(cfg.echo(), checks, certs, extra)
    timing["total"] = round(time.perf_counter() - t_start, 3)
    report["timing"] = timing
    return report, code


def _assemble(config, checks, certs, extra):
    bad = [c.name for c in checks if c.status not in (PASS, SKIPPED)]
    bad += [c.name for c in certs if not c.passed]
    verdict = PASS if not bad else FAIL
    report = {
        "schema": REPORT_SCHEMA,
        "basis": BASIS_ID,
        "tool": {"name": "mcgshadow", "version": __version__, "kernels": kernels.BACKEND},
        "config": config,
        "checks": [c.to_dict() for c in checks],
        "certificates": [c.to_dict() for c in certs],
        "verdict": verdict,
        "failed": bad,
    }
    report.update(extra)
    return report, 0 if verdict == PASS else 1


def _emit(report, output):
    text = dumps(report)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(report):
    lines = []
    for c in report["checks"]:
        lines.append(f"{c['status']:8s} {c['name']}")
    for c in report["certificates"]:
        lines.append(f"{c['verdict']:8s} {c['name']}  order={c['order']} target={c['target']}")
    lines.append(f"overall: {report['verdict']}")
    return "\n".join(lines)


def build_parser():
    p = argparse.ArgumentParser(prog="mcgshadow", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites and certificates")
    v.add_argument("--genus", type=int, required=True)
    v.add_argument("--punctures", type=int, default=0)
    v.add_argument("--theorem", choices=("T7", "T8"))
    v.add_argument("--prime", type=int, default=2)
    v.add_argument("--suite", action="append", choices=SUITES + ("all",))
    v.add_argument("--seed", type=int)
    v.add_argument("--max-seeds", type=int, default=16)
    v.add_argument("--output")
    v.add_argument("--generators", help="certify a previously exported generator file")

    s = sub.add_parser("sym", help="symmetric-group generation by r1, r2, r3")
    s.add_argument("--punctures", type=int, required=True)
    s.add_argument("--output")

    e = sub.add_parser("export", help="solve a generator set and write it as JSON")
    e.add_argument("--genus", type=int, required=True)
    e.add_argument("--punctures", type=int, default=0)
    e.add_argument("--theorem", choices=("T7", "T8"))
    e.add_argument("--seed", type=int)
    e.add_argument("--certify", action="store_true", help="apply the retry policy and keep a passing seed")
    e.add_argument("--prime", type=int, default=2)
    e.add_argument("--output", required=True)

    i = sub.add_parser("import", help="validate a generator file")
    i.add_argument("path")
    return p


def _theorem_for(genus, given):
    if given:
        return given
    return "T8" if genus >= 7 else "T7"


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _dispatch(args)
    except (UnsupportedGenusError, ConfigurationError, ConfigError, SolverFailure, GeneratorImportError,
            CompletionError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # keep the exit-code contract total
        log.exception("internal error")
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def _dispatch(args):
    if args.command == "sym":
        if args.punctures < 0:
            raise ConfigError("number of punctures must be non-negative")
        checks, summary = sym_checks(args.punctures)
        report, code = _assemble({"punctures": args.punctures, "suites": ["sym"]}, checks, [], {"sym": summary})
        _emit(report, args.output)
        if args.output:
            print(_summary(report))
        return code

    seed = getattr(args, "seed", None)
    seed = seed if seed is not None else _default_seed()
    if args.command == "verify":
        suites = args.suite or ["all"]
        suites = SUITES if "all" in suites else tuple(s for s in SUITES if s in suites)
        cfg = RunConfig(args.genus, args.punctures, _theorem_for(args.genus, args.theorem), args.prime, seed,
                        suites, args.output, args.generators, args.max_seeds)
        report, code = run(cfg)
        _emit(report, args.output)
        if args.output:
            print(_summary(report))
        return code

    if args.command == "export":
        cfg = RunConfig(args.genus, args.punctures, _theorem_for(args.genus, args.theorem), args.prime, seed)
        surface = _check_config(cfg)
        if args.certify:
            rep, gens, _, _ = certify_with_retry(surface, cfg.theorem, cfg.prime, seed)
            if not rep.passed:
                print(f"no passing seed in {seed}..{seed + 15}", file=sys.stderr)
                return 1
        else:
            registry, lantern = solve_registry(surface, seed)
            gens = build_generator_set(surface, registry, lantern, cfg.theorem, seed)
        export_generators(gens, args.output)
        print(f"wrote {args.output} ({gens.theorem}, seed {gens.seed})")
        return 0

    if args.command == "import":
        gens = import_generators(args.path)
        print(f"ok: {gens.theorem} genus {gens.genus} punctures {gens.punctures} seed {gens.seed} "
              f"members {', '.join(gens.members)}")
        return 0
    raise ConfigError(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())

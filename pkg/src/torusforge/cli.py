"""Command-line interface.

Subcommands: generate | certify | verify-torus | family | show.
Exit codes: 0 certified/verified, 2 refuted, 3 inconclusive, 4 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .canon import canonical_dumps
from .errors import (
    DependencyError,
    InvalidInputError,
    NoExtensionError,
    PrecisionExhaustedError,
    StoreError,
    TorusForgeError,
)
from .families import FamilySpec
from .pipeline import (
    EXIT_INVALID,
    RunConfig,
    cmd_certify,
    cmd_family,
    cmd_generate,
    cmd_show,
    cmd_verify_torus,
    parse_polynomial,
)


_GLOBAL_DEFAULTS = {
    "precision": 256,
    "prime_budget": 100,
    "lll_delta": "99/100",
    "embedding_bitmask": 0,
    "store": None,
    "seed": 0,
    "json": False,
}


def _build_parser() -> argparse.ArgumentParser:
    # global flags are accepted both before and after the subcommand; the
    # SUPPRESS defaults keep a subparser from clobbering a value given on
    # the main parser, and _config_from fills in the real defaults
    common = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    common.add_argument("--precision", type=int, default=s, help="working precision in bits")
    common.add_argument("--prime-budget", type=int, default=s, help="witness primes to scan")
    common.add_argument("--lll-delta", type=str, default=s, help="LLL reduction parameter")
    common.add_argument("--embedding-bitmask", type=int, default=s, help="upper/lower half-plane choice per root")
    common.add_argument("--store", type=str, default=s, help="certificate store directory")
    common.add_argument("--seed", type=int, default=s, help="root-finder jitter seed (outputs are seed-invariant)")
    common.add_argument("--json", action="store_true", default=s, help="emit canonical JSON on stdout")

    ap = argparse.ArgumentParser(
        prog="torus-forge",
        description="Explicit families of simple complex tori of algebraic "
        "dimension zero: certificates and numerical verification.",
        parents=[common],
    )
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="emit a family polynomial", parents=[common])
    gen.add_argument("kind", choices=["selmer", "exp", "quadruple"])
    gen.add_argument("--g", type=int, required=True)
    gen.add_argument("--auto", action="store_true", help="first enumerated quadruple")
    gen.add_argument("--quadruple", type=str, help="explicit l,p,b,c")
    gen.add_argument("--p-max", type=int, default=200)

    cert = sub.add_parser("certify", help="run the certification chain", parents=[common])
    cert.add_argument("polynomial", nargs="?", help="coefficients JSON or expression like 'x^4+x+1'")
    cert.add_argument("--spec", type=str, help="path to a FamilySpec JSON file")

    ver = sub.add_parser("verify-torus", help="compute and check the three ranks", parents=[common])
    ver.add_argument("polynomial", nargs="?")
    ver.add_argument("--force", action="store_true", help="run without a stored certificate")
    ver.add_argument("--fixture", choices=["square-torus"], help="all-rational ground-truth fixture")

    fam = sub.add_parser("family", help="build mutually non-isogenous tori", parents=[common])
    fam.add_argument("--g", type=int, required=True)
    fam.add_argument("--count", type=int, required=True)
    fam.add_argument("--p-max", type=int, default=200)

    show = sub.add_parser("show", help="print stored certificates", parents=[common])
    show.add_argument("target", help="certificate hash or polynomial hash")

    return ap


def _config_from(args) -> RunConfig:
    for key, default in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, default)
    return RunConfig(
        precision=args.precision,
        prime_budget=args.prime_budget,
        lll_delta=Fraction(args.lll_delta),
        embedding_bitmask=args.embedding_bitmask,
        store_path=args.store,
        seed=args.seed,
    ).validate()


def _emit(payload: dict, as_json: bool):
    if as_json:
        print(canonical_dumps(payload))
        return
    _print_human(payload)


def _print_human(payload: dict, indent: str = ""):
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _print_human(value, indent + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            print(f"{indent}{key}: {json.dumps(value)[:200]}")
        else:
            print(f"{indent}{key}: {value}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from(args)
        if args.command == "generate":
            quadruple = None
            if args.quadruple:
                quadruple = tuple(int(x) for x in args.quadruple.split(","))
            code, payload = cmd_generate(
                args.kind, args.g, quadruple=quadruple, auto=args.auto, p_max=args.p_max, config=config
            )
        elif args.command == "certify":
            spec = None
            if args.spec:
                with open(args.spec) as fh:
                    spec = FamilySpec.from_json_dict(json.load(fh))
                f = spec.polynomial()
            elif args.polynomial:
                f = parse_polynomial(args.polynomial)
            else:
                raise InvalidInputError("certify needs a polynomial or --spec")
            code, payload = cmd_certify(f, config, family_spec=spec)
        elif args.command == "verify-torus":
            f = parse_polynomial(args.polynomial) if args.polynomial else None
            if f is None and args.fixture is None:
                raise InvalidInputError("verify-torus needs a polynomial or --fixture")
            code, payload = cmd_verify_torus(f, config, force=args.force, fixture=args.fixture)
        elif args.command == "family":
            code, payload = cmd_family(args.g, args.count, config, p_max=args.p_max)
        elif args.command == "show":
            code, payload = cmd_show(args.target, config)
        else:  # pragma: no cover
            raise InvalidInputError(f"unknown command {args.command}")
    except (InvalidInputError, StoreError, DependencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (PrecisionExhaustedError, NoExtensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except TorusForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(payload, args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())

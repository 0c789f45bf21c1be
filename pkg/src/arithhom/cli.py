"""Command-line interface: every computation and check, JSON on stdout.

Exit status: 0 on success, 1 when a verification fails, 2 on unsupported or
malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from . import acceptance
from .abgrp import FGAbelianGroup
from .cft import ReciprocityError, rec_Q, tame_galois_Q, verify_ff_rec0, verify_reciprocity_Q
from .classunit import ClassGroupError, class_group, unit_group
from .cycles import CycleError, ZeroCycle, class_of_cycle, oracle_h0
from .ffcurve import PlaceError
from .homology import (MV_FIELDS, CheckReport, check_dense_open_surjectivity, check_gysin,
                       check_mv_open_cover, check_mv_second_variable, ff_curve, homology,
                       number_ring, random_mv_base_configs, random_mv_cover_configs)
from .numfield import UnsupportedFieldError, number_field, parse_prime
from .rayclass import ModulusError, parse_sigma, ray_class_group, residue_units

SCHEMA = "1"


class InputError(ValueError):
    """Malformed or unsupported input; exit status 2."""


class VerificationFailure(Exception):
    def __init__(self, payload: dict):
        super().__init__("verification failed")
        self.payload = payload


def _positive(name: str) -> Callable[[str], int]:
    def parse(s: str) -> int:
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {s!r}") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be positive, got {v}")
        return v
    return parse


def _group(g: FGAbelianGroup) -> dict:
    return g.to_json()


def _field(args):
    try:
        return number_field(args.field)
    except UnsupportedFieldError as exc:
        raise InputError(f"unsupported field {args.field!r}: {exc}") from None
    except ValueError as exc:
        raise InputError(f"malformed field spec {args.field!r}: {exc}") from None


def _scheme(args, sigma_attr: str = "sigma"):
    """A number ring from --field/--sigma or a curve from --q/--places."""
    if args.q is not None:
        places = args.places if args.places is not None else getattr(args, sigma_attr, "") or ""
        return ff_curve(args.q, places)
    K = _field(args)
    return number_ring(K, parse_sigma(K, getattr(args, sigma_attr) or ""))


def _parse_cycle(K, spec: str) -> dict:
    """``"7=2,11=-1"``: prime selectors with multiplicities (default 1)."""
    out = {}
    for term in (t.strip() for t in spec.split(",") if t.strip()):
        sel, _, n = term.partition("=")
        try:
            mult = int(n) if n else 1
        except ValueError:
            raise InputError(f"malformed multiplicity in cycle term {term!r}") from None
        P = parse_prime(K, sel)
        out[P] = out.get(P, 0) + mult
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_h0(args) -> dict:
    return _group(homology(_scheme(args)).h0)


def cmd_h1(args) -> dict:
    return _group(homology(_scheme(args)).h1)


def cmd_rayclass(args) -> dict:
    K = _field(args)
    rc = ray_class_group(K, parse_sigma(K, args.sigma or ""))
    return {**_group(rc.group), "modulus": rc.modulus.to_json(),
            "class_generators": [P.selector for P in rc.class_gens]}


def cmd_classgroup(args) -> dict:
    cg = class_group(_field(args))
    return {**_group(cg.group), "order": cg.order,
            "generators": [P.selector for P in cg.generators]}


def cmd_units(args) -> dict:
    ug = unit_group(_field(args))
    return {"torsion_order": ug.torsion_order, "rank": ug.rank,
            "torsion_generator": ug.torsion_gen.to_json(),
            "fundamental_units": [u.to_json() for u in ug.fundamental_units]}


def cmd_residue_units(args) -> dict:
    K = _field(args)
    ru = residue_units(K, parse_sigma(K, args.sigma or ""))
    return {**_group(ru.group),
            "factors": [{"prime": P.selector, "order": n, "generator": [int(c) for c in g]}
                        for P, n, g in ru.factors]}


def cmd_cycle_class(args) -> dict:
    K = _field(args)
    sigma = parse_sigma(K, args.sigma or "")
    c = ZeroCycle.from_dict(_parse_cycle(K, args.cycle), sigma)
    rc = ray_class_group(K, sigma)
    vec = class_of_cycle(c, sigma)
    return {"class": list(vec), "canonical": list(rc.canonical(vec)),
            "is_identity": rc.is_identity(vec), "group": _group(rc.group)}


def cmd_oracle(args) -> dict:
    K = _field(args)
    res = oracle_h0(K, parse_sigma(K, args.sigma or ""), args.deg_bound,
                    args.height_bound, args.prime_bound)
    out = res.to_json()
    if not (res.stable and res.matches_rayclass):
        raise VerificationFailure(out)
    return out


def cmd_rec(args) -> dict:
    K = number_field("Q")
    T = tame_galois_Q(args.modulus)
    vec = rec_Q(args.modulus, _parse_cycle(K, args.cycle))
    return {"modulus": args.modulus, "frobenius": list(vec),
            "canonical": list(T.group.coords(vec)), "is_identity": T.group.is_zero(vec),
            "group": _group(T.group)}


def _collect(reports: list[CheckReport]) -> dict:
    items = sorted((r.to_json() for r in reports), key=lambda d: json.dumps(d["config"], sort_keys=True))
    out = {"check": reports[0].check if reports else None,
           "exact": all(r.exact for r in reports), "reports": items}
    if len(items) == 1:
        out = items[0]
    if not out["exact"]:
        raise VerificationFailure(out)
    return out


def _verify_mv_cover(args) -> dict:
    if args.sigma is not None and args.sigma2 is not None:
        K = _field(args)
        return _collect([check_mv_open_cover(K, parse_sigma(K, args.sigma), parse_sigma(K, args.sigma2))])
    fields = [args.field] if args.field else list(MV_FIELDS)
    return _collect([check_mv_open_cover(*cf) for f in fields
                     for cf in random_mv_cover_configs(f, args.count, args.seed)])


def _verify_mv_base(args) -> dict:
    if args.remove_u is not None or args.remove_v is not None:
        x = _scheme(args)
        return _collect([check_mv_second_variable(x, _ints(args.remove_u), _ints(args.remove_v))])
    fields = [args.field] if args.field else list(MV_FIELDS)
    return _collect([check_mv_second_variable(*cf) for f in fields
                     for cf in random_mv_base_configs(f, args.count, args.seed)])


def _ints(spec: str | None) -> list[int]:
    try:
        return [int(s) for s in (spec or "").split(",") if s.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated rational primes, got {spec!r}") from None


def _verify_gysin(args) -> dict:
    if not args.remove:
        raise InputError("verify gysin needs --remove")
    x = _scheme(args)
    D = [s for s in args.remove.split(",") if s.strip()]
    return _collect([check_gysin(x, D)])


def _verify_dense(args) -> dict:
    if not args.remove:
        raise InputError("verify dense-open needs --remove")
    x = _scheme(args)
    return _collect([check_dense_open_surjectivity(x, [s for s in args.remove.split(",") if s.strip()])])


def _verify_cft(args) -> dict:
    ms = [args.modulus] if args.modulus else acceptance.squarefree_up_to(200)
    reports = [verify_reciprocity_Q(m) for m in ms]
    out = {"check": "cft", "exact": all(r.ok for r in reports),
           "reports": [r.to_json() for r in reports]}
    if len(ms) == 1:
        out = {"check": "cft", "exact": reports[0].ok, **reports[0].to_json()}
    if not out["exact"]:
        raise VerificationFailure(out)
    return out


def _verify_ff_rec0(args) -> dict:
    if args.q is None:
        raise InputError("verify ff-rec0 needs --q")
    r = verify_ff_rec0(args.q, args.places or "")
    out = {"check": "ff-rec0", "exact": r.ok, **r.to_json()}
    if not r.ok:
        raise VerificationFailure(out)
    return out


def _verify_all(args) -> dict:
    results = acceptance.run_all()
    out = {"check": "all", "exact": all(r.passed for r in results),
           "criteria": [r.to_json() for r in results]}
    if not out["exact"]:
        raise VerificationFailure(out)
    return out


VERIFY = {
    "mv-cover": _verify_mv_cover,
    "mv-base": _verify_mv_base,
    "gysin": _verify_gysin,
    "dense-open": _verify_dense,
    "cft": _verify_cft,
    "ff-rec0": _verify_ff_rec0,
    "all": _verify_all,
}


def cmd_verify(args) -> dict:
    return VERIFY[args.which](args)


def cmd_selftest(args) -> dict:
    results = acceptance.run_all(stop_on_failure=True)
    for r in results:
        print(r.line(), file=sys.stderr)
    out = {"passed": all(r.passed for r in results), "criteria": [r.to_json() for r in results]}
    if not out["passed"]:
        raise VerificationFailure(out)
    return out


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arithhom", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help='number field: "Q" or a monic polynomial such as "x^2+5"')
    common.add_argument("--sigma", help='comma-separated prime selectors ("2,3:0") or places')
    common.add_argument("--q", type=_positive("--q"), help="field size of a function-field curve")
    common.add_argument("--places", help='Sigma of P^1 over F_q, e.g. "0,inf"')
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)

    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_ in (("h0", cmd_h0, "h_0 of a scheme"), ("h1", cmd_h1, "h_1 of a scheme"),
                            ("rayclass", cmd_rayclass, "ray class group C_m"),
                            ("classgroup", cmd_classgroup, "ideal class group"),
                            ("units", cmd_units, "unit group"),
                            ("residue-units", cmd_residue_units, "(O/m)^x")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)

    p = sub.add_parser("cycle-class", parents=[common], help="class of a zero-cycle in C_m")
    p.add_argument("--cycle", required=True, help='"7=2,11=-1": selectors with multiplicities')
    p.set_defaults(func=cmd_cycle_class)

    p = sub.add_parser("oracle", parents=[common], help="h_0 from cycle relations, compared with C_m")
    p.add_argument("--deg-bound", type=_positive("--deg-bound"), default=2)
    p.add_argument("--height-bound", type=_positive("--height-bound"), default=300)
    p.add_argument("--prime-bound", type=_positive("--prime-bound"), default=50)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("rec", parents=[common], help="Frobenius of a cycle over Q")
    p.add_argument("--modulus", type=_positive("--modulus"), required=True)
    p.add_argument("--cycle", required=True)
    p.set_defaults(func=cmd_rec)

    p = sub.add_parser("verify", parents=[common], help="exactness and reciprocity checks")
    p.add_argument("which", choices=sorted(VERIFY))
    p.add_argument("--sigma2", help="second open of an open cover (mv-cover)")
    p.add_argument("--remove", help="removed primes or places (gysin, dense-open)")
    p.add_argument("--remove-u", help="rational primes missing from U (mv-base)")
    p.add_argument("--remove-v", help="rational primes missing from V (mv-base)")
    p.add_argument("--modulus", type=_positive("--modulus"))
    p.add_argument("--count", type=_positive("--count"), default=20)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.set_defaults(func=cmd_selftest)
    return parser


def _emit(payload: dict, fmt: str) -> None:
    payload = {"schema": SCHEMA, **payload}
    if fmt == "text":
        for k, v in payload.items():
            print(f"{k}: {json.dumps(v, sort_keys=True)}")
    else:
        print(json.dumps(payload, sort_keys=True))


INPUT_ERRORS = (InputError, UnsupportedFieldError, ModulusError, PlaceError, ReciprocityError,
                CycleError, ClassGroupError, ValueError)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload = args.func(args)
    except VerificationFailure as exc:
        _emit(exc.payload, args.format)
        return 1
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(payload, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ``kextremal <command> ...``.

Output is JSON by default (one document per line); ``--format table``
renders the same content as indented ``key: value`` lines.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .algebra import Scalar, as_rational
from .identities import TrialConfig, verify_identities, verify_lemmas
from .isoparametric import (
    classify,
    enumerate_tori,
    extremality_residual,
    spectrum_from_lambda1,
)
from .jsonio import dumps, to_jsonable
from .models import parse_model
from .pinching import EPSILON_VARIANTS, EpsilonInputs, InvariantError, c1, c1_prime, c2, c3
from .pinching import epsilon_derivation, verdict
from .tensors import PrincipalSpectrum, check_k

SEED_ENV = "KEXTREMAL_SEED"

EXIT_OK = 0
EXIT_PARAM = 1
EXIT_INVARIANT = 2


class ParameterError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; parameter errors are status 1 here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


# -- argument types -------------------------------------------------------------

def rational_arg(text: str):
    try:
        return as_rational(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def scalar_arg(text: str) -> Scalar:
    try:
        return Scalar.parse(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number in the scalar grammar: {text!r}") from None


def int_list_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def parse_spectrum(text: str) -> PrincipalSpectrum:
    """``"lam:mult,lam:mult,..."``; a missing ``:mult`` means multiplicity 1."""
    entries = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        bare = part.count(":") == (1 if part.startswith("float:") else 0)
        lam, _, mult = (part, "", "1") if bare else part.rpartition(":")
        try:
            entries.append((Scalar.parse(lam), int(mult)))
        except ValueError:
            raise ParameterError(f"bad spectrum entry {part!r}; expected value:multiplicity") from None
    if not entries:
        raise ParameterError("empty spectrum")
    return PrincipalSpectrum(tuple(entries))


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ParameterError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


# -- rendering --------------------------------------------------------------------

def _table_lines(obj, indent: int = 0):
    pad = "  " * indent
    if isinstance(obj, dict) and set(obj) == {"value", "exact", "approx"}:
        yield pad + obj["value"]
        return
    if isinstance(obj, dict):
        for key, val in obj.items():
            if isinstance(val, dict) and set(val) == {"value", "exact", "approx"}:
                yield f"{pad}{key}: {val['value']}"
            elif isinstance(val, (dict, list)) and val:
                yield f"{pad}{key}:"
                yield from _table_lines(val, indent + 1)
            else:
                yield f"{pad}{key}: {_atom(val)}"
        return
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) or _is_scalar(v) for v in obj):
            yield pad + "[" + ", ".join(_atom(v) for v in obj) + "]"
            return
        for i, val in enumerate(obj):
            yield f"{pad}- [{i}]"
            yield from _table_lines(val, indent + 1)
        return
    yield pad + _atom(obj)


def _is_scalar(v) -> bool:
    return isinstance(v, dict) and set(v) == {"value", "exact", "approx"}


def _atom(v) -> str:
    if _is_scalar(v):
        return v["value"]
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[" + ", ".join(_atom(x) for x in v) + "]"
    return str(v)


def emit(records, fmt: str, out=None) -> None:
    out = out or sys.stdout
    for rec in records:
        if fmt == "json":
            out.write(dumps(rec) + "\n")
        else:
            out.write("\n".join(_table_lines(to_jsonable(rec))) + "\n")
            if len(records) > 1:
                out.write("\n")


# -- commands -----------------------------------------------------------------------

def cmd_ktori(args):
    k = check_k(args.k)
    if args.n < 2:
        raise ParameterError(f"n >= 2 required, got {args.n}")
    tori = enumerate_tori(args.n, k)
    return EXIT_OK, [{
        "command": "ktori list",
        "inputs": {"n": args.n, "k": Scalar(k)},
        "count": len(tori),
        "tori": tori,
    }]


def cmd_iso_classify(args):
    res = classify(args.g, args.mult, args.k)
    return EXIT_OK, [{"command": "iso classify", "result": res}]


def cmd_iso_residual(args):
    spec = parse_spectrum(args.spectrum)
    r = extremality_residual(spec, args.k)
    zero = r == 0 if r.is_exact else abs(float(r)) < args.tolerance
    return EXIT_OK, [{
        "command": "iso residual",
        "inputs": {
            "spectrum": [{"curvature": lam, "multiplicity": m} for lam, m in spec.entries],
            "k": Scalar(check_k(args.k)),
        },
        "n": spec.n,
        "residual": r,
        "k_extremal": zero,
    }]


def cmd_iso_spectrum(args):
    iso = spectrum_from_lambda1(args.g, args.mult, args.lambda1)
    rec = {"command": "iso spectrum", "spectrum": iso}
    if args.k is not None:
        rec["residual"] = extremality_residual(iso.spectrum, args.k)
    return EXIT_OK, [rec]


def cmd_model(args):
    model = parse_model(args.model)
    summary = model.curvatures(planes=args.planes, seed=args.seed)
    report = verdict(model, args.k, planes=args.planes, seed=args.seed)
    return EXIT_OK, [{
        "command": "model check",
        "model": model,
        "curvature": summary,
        "el_residual": list(model.el_residual(args.k)),
        "report": report,
    }]


def cmd_bounds(args):
    k = check_k(args.k)
    if args.n < 2 or args.p < 1:
        raise ParameterError(f"need n >= 2 and p >= 1, got n = {args.n}, p = {args.p}")
    vals = {
        "C1": c1(args.n, args.p, args.H, args.rho, k),
        "C1_prime": c1_prime(args.n, args.H, args.rho, k),
        "C2": c2(args.n, args.H, args.rho, k) if args.n >= 4 else None,
        "C3": c3(args.n, args.p, args.H, k),
    }
    notes = [] if args.n >= 4 else [f"C2 needs n >= 4 (n = {args.n})"]
    return EXIT_OK, [{
        "command": "bounds",
        "inputs": {"n": args.n, "p": args.p, "k": Scalar(k), "H": args.H, "rho": args.rho},
        "value": vals,
        "notes": notes,
    }]


def cmd_epsilon(args):
    if args.H0 is not None and args.H0_sq is not None:
        raise ParameterError("give either --H0 or --H0-sq, not both")
    if args.H0 is not None:
        if args.H0 < 0:
            raise ParameterError(f"H0 must be non-negative, got {args.H0}")
        h0_sq = args.H0 * args.H0
    else:
        h0_sq = args.H0_sq if args.H0_sq is not None else Scalar(0)
    inp = EpsilonInputs(args.variant, args.n, args.p, args.k, h0_sq, args.delta0)
    res = epsilon_derivation(inp)
    rec = res.to_dict()
    rec = {"command": "epsilon", **rec}
    return EXIT_OK, [rec]


def _trial_config(args) -> TrialConfig:
    return TrialConfig(
        trials=args.trials,
        n_max=args.n_max,
        p_max=args.p_max,
        seed=args.seed,
        tolerance=args.tolerance,
    )


def cmd_verify_lemmas(args):
    reports = verify_lemmas(_trial_config(args), witnesses=not args.no_witnesses)
    status = EXIT_OK if all(r.passed for r in reports) else EXIT_INVARIANT
    return status, reports


def cmd_verify_identities(args):
    reports = verify_identities(_trial_config(args))
    status = EXIT_OK if all(r.passed for r in reports) else EXIT_INVARIANT
    return status, reports


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("json", "table"), default="json")

    parser = _Parser(prog="kextremal", description="k-extremal submanifold toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ktori = sub.add_parser("ktori", help="k-extremal tori")
    ktori_sub = ktori.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = ktori_sub.add_parser("list", parents=[fmt], help="all T_{m,k} in dimension n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=rational_arg, required=True)
    p.set_defaults(func=cmd_ktori)

    iso = sub.add_parser("iso", help="isoparametric hypersurfaces")
    iso_sub = iso.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = iso_sub.add_parser("classify", parents=[fmt], help="k-extremal members of a family")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--mult", type=int_list_arg, required=True, help="m1[,m2,...]")
    p.add_argument("--k", type=rational_arg, required=True)
    p.set_defaults(func=cmd_iso_classify)
    p = iso_sub.add_parser("residual", parents=[fmt], help="extremality residual of a spectrum")
    p.add_argument("--spectrum", required=True, help='"lam:mult,lam:mult,..."')
    p.add_argument("--k", type=rational_arg, required=True)
    p.add_argument("--tolerance", type=float, default=1e-10,
                   help="zero test for float residuals")
    p.set_defaults(func=cmd_iso_residual)
    p = iso_sub.add_parser("spectrum", parents=[fmt], help="spectrum generated by lambda_1")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--mult", type=int_list_arg, required=True)
    p.add_argument("--lambda1", type=scalar_arg, required=True)
    p.add_argument("--k", type=rational_arg, default=None)
    p.set_defaults(func=cmd_iso_spectrum)

    model = sub.add_parser("model", help="catalog models")
    model_sub = model.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = model_sub.add_parser("check", parents=[fmt], help="curvature and pinching report")
    p.add_argument("--model", required=True, help="tag[:params], e.g. clifford:2,2")
    p.add_argument("--k", type=rational_arg, required=True)
    p.add_argument("--planes", type=int, default=10_000,
                   help="random planes for k_min on non-diagonal forms")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("bounds", parents=[fmt], help="evaluate C1, C1', C2, C3")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=rational_arg, required=True)
    p.add_argument("--H", type=scalar_arg, required=True)
    p.add_argument("--rho", type=scalar_arg, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("epsilon", parents=[fmt], help="integral pinching threshold")
    p.add_argument("--variant", choices=EPSILON_VARIANTS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--k", type=rational_arg, required=True)
    p.add_argument("--H0", type=scalar_arg, default=None)
    p.add_argument("--H0-sq", dest="H0_sq", type=scalar_arg, default=None)
    p.add_argument("--delta0", type=scalar_arg, required=True)
    p.set_defaults(func=cmd_epsilon)

    verify = sub.add_parser("verify", help="randomized lemma and identity suites")
    verify_sub = verify.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, func, trials, n_max, p_max in (
        ("lemmas", cmd_verify_lemmas, 10_000, 6, 4),
        ("identities", cmd_verify_identities, 1_000, 5, 3),
    ):
        p = verify_sub.add_parser(name, parents=[fmt])
        p.add_argument("--trials", type=int, default=trials)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--n-max", type=int, default=n_max)
        p.add_argument("--p-max", type=int, default=p_max)
        p.add_argument("--tolerance", type=float, default=1e-9)
        if name == "lemmas":
            p.add_argument("--no-witnesses", action="store_true",
                           help="skip the equality-case suites")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = default_seed()
        status, records = args.func(args)
    except InvariantError as exc:
        print(f"kextremal: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, ZeroDivisionError) as exc:
        print(f"kextremal: error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    emit(records, args.format)
    return status


if __name__ == "__main__":
    sys.exit(main())

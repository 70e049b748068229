"""cyclokummer command line.

Subcommands print one JSON document (or TSV rows for ``scan``).  Exit codes:

    0   every internal check passed
    2   witness degenerate, or sigma(A) = A^mu alpha^p failed
    3   an Omega check failed (cross formula, sigma_mu order, fixedness, distinctness)
    4   minimal polynomial has a non-rational coefficient or misses a root
    5   local verification contradicted the predicted decomposition
    64  usage error
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

from .bernoulli import irregular_pairs, is_prime, multiplicative_order, primitive_root
from .kummer import (
    KummerExtension,
    NonRationalCoefficient,
    OmegaReport,
    compute_omegas,
    min_poly,
    poly_eval,
)
from .ramification import (
    CONTRADICTED,
    StickelbergerForbidden,
    half_turn,
    orbits,
    predict_decomposition,
    verify_decomposition_local,
)
from .witness import (
    KINDS,
    SingularWitness,
    default_precision,
    kummer_unit_witness,
    verify_singular_relations,
)

SCHEMA_VERSION = "1.0"
PRECISION_ENV = "CYCLOKUMMER_PRECISION"

EXIT_OK = 0
EXIT_WITNESS = 2
EXIT_OMEGA = 3
EXIT_MINPOLY = 4
EXIT_CONTRADICTED = 5
EXIT_USAGE = 64

SCAN_COLUMNS = ("p", "two_m", "mu_plus", "mu_minus", "d_plus", "d_minus",
                "primes_plus", "primes_minus", "v")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    p: Optional[int] = None
    m: Optional[int] = None
    mu: Optional[int] = None
    kind: str = "unit"
    precision: Optional[int] = None  # None: exact arithmetic
    root: Optional[int] = None
    format: str = "json"
    newton: bool = True
    output: Optional[str] = None


# -- argument handling ------------------------------------------------------------

def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "y"):
        return True
    if low in ("0", "false", "no", "n"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cyclokummer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    out = _Parser(add_help=False)
    out.add_argument("-o", "--output", help="write to this file instead of stdout")

    field = _Parser(add_help=False)
    field.add_argument("-p", type=int, required=True, help="odd prime")
    field.add_argument("--root", type=int, help="primitive root v (default: least)")

    chain = _Parser(add_help=False)
    chain.add_argument("-m", type=int, required=True, help="eigenvalue index, mu = v^(2m)")
    chain.add_argument("--kind", default="unit", choices=KINDS)
    tier = chain.add_mutually_exclusive_group()
    tier.add_argument("--precision", "-N", type=int,
                      help=f"work modulo p^N (default: ${PRECISION_ENV} or a p-dependent minimum)")
    tier.add_argument("--exact", action="store_true", help="exact rational arithmetic")
    chain.add_argument("--no-newton", dest="newton", action="store_false",
                       help="verify with the Dedekind test only")

    s = sub.add_parser("scan", parents=[out], help="irregular pairs up to a bound")
    s.add_argument("--max", dest="max_p", type=int, required=True)
    s.add_argument("--format", choices=("tsv", "json"), default="tsv")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.add_argument("--header", action="store_true", help="print a TSV header line")

    for name, text in [
        ("witness", "singular unit witness and its relations"),
        ("omega", "Omega by both formulas and the consistency checks"),
        ("minpoly", "minimal polynomial of Omega"),
        ("verify", "local check of the predicted decomposition"),
    ]:
        sub.add_parser(name, parents=[field, chain, out], help=text)

    pipe = sub.add_parser("pipeline", parents=[field, chain, out], help="all stages in one report")
    pipe.add_argument("--force", action="store_true", help="allow regular (p, 2m)")

    r = sub.add_parser("ramify", parents=[field, out], help="predicted decomposition of p in M")
    r.add_argument("--mu", type=int, required=True)
    r.add_argument("--primary", type=_parse_bool, required=True)
    r.add_argument("--kind", choices=KINDS)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand, output=args.output)
    if args.subcommand == "scan":
        if args.max_p < 3:
            raise UsageError("--max must be at least 3")
        if args.jobs < 1:
            raise UsageError("--jobs must be positive")
        cfg.format = args.format
        return cfg

    p = args.p
    if p < 3 or not is_prime(p):
        raise UsageError(f"p must be an odd prime, got {p}")
    cfg.p = p
    if args.root is None:
        cfg.root = primitive_root(p)
    else:
        r = args.root % p
        if r == 0 or multiplicative_order(r, p) != p - 1:
            raise UsageError(f"{args.root} is not a primitive root mod {p}")
        cfg.root = r

    if args.subcommand == "ramify":
        cfg.mu = args.mu % p
        cfg.kind = args.kind
        return cfg

    if p < 5:
        raise UsageError("witnesses need p >= 5")
    if not 1 <= args.m <= (p - 3) // 2:
        raise UsageError(f"m must lie in 1..{(p - 3) // 2}")
    if args.kind != "unit":
        raise UsageError("only unit witnesses can be constructed")
    cfg.m = args.m
    cfg.kind = args.kind
    cfg.newton = args.newton
    if not args.exact:
        N = args.precision
        if N is None and os.environ.get(PRECISION_ENV):
            try:
                N = int(os.environ[PRECISION_ENV])
            except ValueError:
                raise UsageError(f"${PRECISION_ENV} must be an integer") from None
        if N is None:
            N = default_precision(p)
        if N * (p - 1) < p + 2:
            raise UsageError(f"precision {N} too small for p={p}: need N(p-1) >= p+2")
        cfg.precision = N
    return cfg


# -- stages -----------------------------------------------------------------------

def _residue(c, p: int) -> int:
    """Image of an integral element of K in O_K / pi = F_p."""
    b0 = c.lambda_digits()[0]
    if isinstance(b0, int):
        return b0 % p
    return b0.numerator * pow(b0.denominator, -1, p) % p


def _witness_stage(cfg: RunConfig) -> tuple[SingularWitness, dict, int]:
    w = kummer_unit_witness(cfg.p, cfg.root, cfg.m, cfg.precision)
    identity = w.identity_holds()
    rel = verify_singular_relations(w.A, w.mu, w.kind, w.v, alpha=w.alpha)
    doc = {"witness": w.to_json(), "identity_holds": identity, "relations": rel.to_json()}
    ok = identity and not w.degenerate and rel.all_ok
    return w, doc, EXIT_OK if ok else EXIT_WITNESS


def _omega_summary(rep: OmegaReport, p: int) -> dict:
    # omega = 1 modulo every prime above pi, so Omega mod pi is the coefficient sum
    residues = [_residue(c, p) for c in rep.omegas[0].coeffs]
    return {
        "mu": rep.sigma.mu,
        "w": rep.sigma.w,
        "coeffs": [[str(x) for x in c.coeffs] for c in rep.omegas[0].coeffs],
        "omega_mod_pi": sum(residues) % p,
        "cross_formula_ok": rep.cross_formula_ok,
        "order_ok": rep.order_ok,
        "fixed_ok": rep.fixed_ok,
        "distinct_ok": rep.distinct_ok,
    }


def _omega_ok(rep: OmegaReport) -> bool:
    return rep.cross_formula_ok and rep.order_ok and rep.fixed_ok and rep.distinct_ok


def _minpoly_stage(rep: OmegaReport, p: int) -> tuple[Optional[list], dict, int]:
    try:
        f = min_poly(rep.omegas)
    except NonRationalCoefficient as exc:
        return None, {"error": str(exc)}, EXIT_MINPOLY
    sample = sorted({0, 1, p - 1})
    roots_ok = all(poly_eval(f, rep.omegas[i]).is_zero() for i in sample)
    doc = {
        "coeffs": [str(c) for c in f],
        "mod_p": [_residue_rational(c, p) for c in f],
        "sampled_roots": sample,
        "roots_ok": roots_ok,
    }
    return f, doc, EXIT_OK if roots_ok else EXIT_MINPOLY


def _residue_rational(c, p: int) -> int:
    if isinstance(c, int):
        return c % p
    return c.numerator * pow(c.denominator, -1, p) % p


def _verify_stage(f: list, w: SingularWitness, cfg: RunConfig) -> tuple[dict, dict, int]:
    report = predict_decomposition(cfg.p, cfg.root, w.mu, w.primarity.is_primary)
    if any(not isinstance(c, int) for c in f):
        raise ArithmeticError("minimal polynomial of Omega is not integral")
    verdict = verify_decomposition_local(f, report, cfg.precision, cfg.newton)
    code = EXIT_CONTRADICTED if verdict.status == CONTRADICTED else EXIT_OK
    return report.to_json(), verdict.to_json(), code


# -- subcommands ------------------------------------------------------------------

def _scan_prime(p: int) -> list[dict]:
    v = primitive_root(p)
    rows = []
    for pair in irregular_pairs(p, v):
        d_plus = multiplicative_order(v * pow(pair.mu_plus, -1, p), p)
        d_minus = multiplicative_order(v * pow(pair.mu_minus, -1, p), p)
        rows.append({
            "p": p,
            "two_m": pair.two_m,
            "mu_plus": pair.mu_plus,
            "mu_minus": pair.mu_minus,
            "d_plus": d_plus,
            "d_minus": d_minus,
            "primes_plus": 1 + (p - 1) // d_plus,
            "primes_minus": 1 + (p - 1) // d_minus,
            "v": v,
        })
    return rows


def scan_rows(max_p: int, jobs: int = 1) -> list[dict]:
    """Irregular pairs for 5 <= p <= max_p, sorted by (p, 2m)."""
    primes = [p for p in range(5, max_p + 1) if is_prime(p)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_scan_prime, primes, chunksize=16))
    else:
        chunks = [_scan_prime(p) for p in primes]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r["p"], r["two_m"]))
    return rows


def cmd_scan(cfg: RunConfig, args) -> tuple[str, int]:
    rows = scan_rows(args.max_p, args.jobs)
    if cfg.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": "scan", "max_p": args.max_p,
               "columns": list(SCAN_COLUMNS), "rows": rows}
        return _dump(doc), EXIT_OK
    lines = ["\t".join(SCAN_COLUMNS)] if args.header else []
    lines += ["\t".join(str(r[c]) for c in SCAN_COLUMNS) for r in rows]
    return "".join(line + "\n" for line in lines), EXIT_OK


def _header(cfg: RunConfig) -> dict:
    conf = asdict(cfg)
    conf.pop("output")
    conf.pop("format")
    return {"schema_version": SCHEMA_VERSION, "command": cfg.subcommand, "config": conf}


def cmd_witness(cfg: RunConfig, args) -> tuple[str, int]:
    _, doc, code = _witness_stage(cfg)
    return _dump({**_header(cfg), **doc}), code


def _extension(cfg: RunConfig):
    w, wdoc, code = _witness_stage(cfg)
    rep = compute_omegas(KummerExtension.from_witness(w))
    return w, wdoc, code, rep


def cmd_omega(cfg: RunConfig, args) -> tuple[str, int]:
    w, wdoc, code, rep = _extension(cfg)
    doc = {**_header(cfg), "primarity": str(w.primarity), "omega": _omega_summary(rep, cfg.p)}
    if code == EXIT_OK and not _omega_ok(rep):
        code = EXIT_OMEGA
    return _dump(doc), code


def cmd_minpoly(cfg: RunConfig, args) -> tuple[str, int]:
    w, wdoc, code, rep = _extension(cfg)
    _, mdoc, mcode = _minpoly_stage(rep, cfg.p)
    doc = {**_header(cfg), "primarity": str(w.primarity), "minpoly": mdoc}
    return _dump(doc), code or mcode


def cmd_verify(cfg: RunConfig, args) -> tuple[str, int]:
    w, wdoc, code, rep = _extension(cfg)
    f, mdoc, mcode = _minpoly_stage(rep, cfg.p)
    doc = {**_header(cfg), "primarity": str(w.primarity)}
    if f is None:
        doc["error"] = mdoc["error"]
        return _dump(doc), mcode
    doc["prediction"], doc["verdict"], vcode = _verify_stage(f, w, cfg)
    return _dump(doc), code or mcode or vcode


def cmd_ramify(cfg: RunConfig, args) -> tuple[str, int]:
    try:
        report = predict_decomposition(cfg.p, cfg.root, cfg.mu, args.primary)
        ht = half_turn(cfg.p, cfg.root, cfg.mu, cfg.kind)
    except StickelbergerForbidden as exc:
        raise UsageError(str(exc)) from None
    doc = {
        **_header(cfg),
        "prediction": report.to_json(),
        "orbits": orbits(cfg.p, cfg.root, cfg.mu),
        "half_turn": {"action": ht.action, "expected": ht.expected, "consistent": ht.consistent},
    }
    return _dump(doc), EXIT_OK


def cmd_pipeline(cfg: RunConfig, args) -> tuple[str, int]:
    regular = all(pair.two_m != 2 * cfg.m for pair in irregular_pairs(cfg.p, cfg.root))
    if regular and not args.force:
        raise UsageError(f"({cfg.p}, {2 * cfg.m}) is not an irregular pair; use --force")
    doc = {**_header(cfg), "irregular": not regular, "failed_stage": None}

    w, wdoc, code = _witness_stage(cfg)
    doc.update(wdoc)
    if code:
        doc["failed_stage"] = "witness"
        return _dump(doc), code

    rep = compute_omegas(KummerExtension.from_witness(w))
    doc["omega"] = _omega_summary(rep, cfg.p)
    if not _omega_ok(rep):
        doc["failed_stage"] = "omega"
        return _dump(doc), EXIT_OMEGA

    f, doc["minpoly"], code = _minpoly_stage(rep, cfg.p)
    if code:
        doc["failed_stage"] = "minpoly"
        return _dump(doc), code

    doc["prediction"], doc["verdict"], code = _verify_stage(f, w, cfg)
    if code:
        doc["failed_stage"] = "verify"
    return _dump(doc), code


COMMANDS = {
    "scan": cmd_scan,
    "witness": cmd_witness,
    "omega": cmd_omega,
    "minpoly": cmd_minpoly,
    "verify": cmd_verify,
    "ramify": cmd_ramify,
    "pipeline": cmd_pipeline,
}


def load_schema(command: str) -> dict:
    """The JSON schema shipped for a subcommand's report."""
    path = resources.files("cyclokummer") / "schemas" / f"{command}.schema.json"
    return json.loads(path.read_text())


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        text, code = COMMANDS[cfg.subcommand](cfg, args)
    except UsageError as exc:
        print(f"cyclokummer: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

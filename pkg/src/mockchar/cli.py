"""Command-line front end: ``mockchar expand | decompose | tables | verify``."""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .characters import CharacterSpec, Sector, check_recursion, character
from .errors import InconsistentSystem, InvalidSpec, MockcharError, UnknownObject
from .genus import GenusSpec, build_genus, decompose_genus
from .golden import compare_h_reference
from .mock import basis_B, coefficient_tables, reconstruct_theta_product, theta_product
from .modular import affine_character, eta_pow, jacobi_theta, level_theta, psi
from .series import QSeries

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2, 3


def parse_order(text: str) -> Fraction:
    try:
        o = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad order {text!r}") from None
    if o <= 0:
        raise argparse.ArgumentTypeError("order must be positive")
    return o


def parse_tau(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tau {text!r}") from None


# -- object registry --------------------------------------------------------


def _ints(parts: list[str], n: int, name: str) -> list[int]:
    if len(parts) != n:
        raise UnknownObject(f"{name} takes {n} integer fields")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise UnknownObject(f"{name} fields must be integers") from None


def genus_from_parts(parts: list[str]) -> GenusSpec:
    if not parts:
        raise UnknownObject("genus needs a kind")
    kind, rest = parts[0].lower(), parts[1:]
    if kind == "k3" and not rest:
        return GenusSpec.k3()
    if kind == "x2":
        return GenusSpec.x2(*_ints(rest, 1, "genus:x2"))
    if kind == "sym":
        return GenusSpec.symmetric(*_ints(rest, 1, "genus:sym"))
    if kind == "mixed":
        return GenusSpec.mixed(*_ints(rest, 3, "genus:mixed"))
    raise UnknownObject(f"unknown genus kind {kind!r}")


def resolve(name: str, order: Fraction) -> QSeries:
    """Build the named object to ``order``.

    Grammar: ``eta3``, ``eta:p``, ``theta00|theta10|theta01|theta11``,
    ``vartheta:P:a``, ``chi:k:2l``, ``psi:P:a``, ``B:P:a``,
    ``ch:SECTOR:k:h:l``, ``thetaprod:k2:k3:k4``, ``genus:KIND[:args]``.
    """
    parts = name.strip().split(":")
    head = parts[0]
    rest = parts[1:]
    try:
        if head == "eta3" and not rest:
            return eta_pow(3, order)
        if head == "eta":
            return eta_pow(*_ints(rest, 1, "eta"), order)
        if head.lower() in ("theta00", "theta10", "theta01", "theta11") and not rest:
            return jacobi_theta(head[-2:], 1, order)
        if head == "vartheta":
            return level_theta(tuple(_ints(rest, 2, "vartheta")), order)
        if head == "chi":
            k, two_l = _ints(rest, 2, "chi")
            return affine_character(k, Fraction(two_l, 2), order)
        if head == "psi":
            return psi(tuple(_ints(rest, 2, "psi")), order)
        if head == "B":
            return basis_B(*_ints(rest, 2, "B"), order)
        if head == "thetaprod":
            return theta_product(tuple(_ints(rest, 3, "thetaprod")), order)
        if head == "ch":
            if len(rest) != 4:
                raise UnknownObject("ch takes SECTOR:k:h:l")
            sector = Sector.parse(rest[0])
            spec = CharacterSpec(sector, int(rest[1]), Fraction(rest[2]), Fraction(rest[3]))
            return character(spec, order)
        if head == "genus":
            return build_genus(genus_from_parts(rest), order)
    except (ValueError, ZeroDivisionError) as exc:
        raise UnknownObject(f"cannot parse {name!r}: {exc}") from None
    raise UnknownObject(f"unknown object {name!r}")


# -- cache ------------------------------------------------------------------


def cache_dir(flag: str | None) -> Path:
    if flag:
        return Path(flag)
    env = os.environ.get("MOCKCHAR_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "mockchar"


def cache_key(name: str, order: Fraction) -> str:
    raw = json.dumps([name, str(order), __version__])
    return hashlib.sha256(raw.encode()).hexdigest()


def cached_resolve(name: str, order: Fraction, where: Path | None) -> QSeries:
    if where is None:
        return resolve(name, order)
    path = where / f"{cache_key(name, order)}.json"
    if path.exists():
        return QSeries.from_json(path.read_text())
    s = resolve(name, order)
    where.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(s.to_json())
    tmp.replace(path)
    return s


# -- formatting ------------------------------------------------------------


def series_csv(s: QSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q_exp", "u_pow", "coeff"])
    for e, poly in s.terms:
        for m, c in poly.terms:
            w.writerow([e, m, c])
    return buf.getvalue()


def format_series(s: QSeries, fmt: str) -> str:
    if fmt == "json":
        return s.to_json() + "\n"
    if fmt == "csv":
        return series_csv(s)
    return str(s) + "\n"


def report_text(rep) -> str:
    lines = [f"genus {rep.label}  k={rep.k}  euler={rep.euler}", "massless (R-tilde raw, NS weighted):"]
    for tl, v in sorted(rep.massless_raw.items()):
        lines.append(f"  2l={tl}: {v}  ns={rep.ns_weighted(tl)}")
    lines.append("massive (n = 1, 2, ...):")
    for a in sorted(rep.massive):
        lines.append(f"  a={a}: " + ", ".join(str(c) for c in rep.massive_stream(a)))
    lines.append("diagnostics: " + ", ".join(f"{k}={v}" for k, v in sorted(rep.diagnostics.items())))
    return "\n".join(lines) + "\n"


# -- commands --------------------------------------------------------------


def cmd_expand(args) -> int:
    where = None if args.no_cache else cache_dir(args.cache_dir)
    s = cached_resolve(args.object, args.order, where)
    sys.stdout.write(format_series(s, args.format))
    return EXIT_OK


def genus_from_args(args) -> GenusSpec:
    kind = args.genus.lower()
    if kind == "k3":
        return GenusSpec.k3()
    if kind == "x2":
        if args.n is None:
            raise InvalidSpec("--genus x2 needs --n")
        return GenusSpec.x2(args.n)
    if kind == "sym":
        if args.k is None:
            raise InvalidSpec("--genus sym needs --k")
        return GenusSpec.symmetric(args.k, args.normalization)
    if kind == "mixed":
        if None in (args.k2, args.k3, args.k4):
            raise InvalidSpec("--genus mixed needs --k2 --k3 --k4")
        return GenusSpec.mixed(args.k2, args.k3, args.k4, args.normalization)
    raise UnknownObject(f"unknown genus {args.genus!r}")


def cmd_decompose(args) -> int:
    rep = decompose_genus(genus_from_args(args), args.order + 1)
    if args.format == "json":
        sys.stdout.write(rep.to_json() + "\n")
    elif args.format == "csv":
        sys.stdout.write(rep.to_csv())
    else:
        sys.stdout.write(report_text(rep))
    return EXIT_OK


def tables_csv(kmax: int, which: str) -> str:
    t = coefficient_tables(kmax)
    out = []
    if which in ("gamma", "all"):
        out += [",".join(map(str, [k] + t.gamma_row(k))) for k in range(1, kmax + 1)]
    if which in ("ns", "all"):
        out += [",".join(map(str, [k] + t.ns_row(k))) for k in range(1, kmax + 1)]
    if which in ("alpha", "all"):
        out += [f"{P},{a},{v}" for (P, a), v in sorted(t.alpha.items())]
    if which in ("beta", "all"):
        out += [f"{n},{k},{v}" for (n, k), v in sorted(t.beta.items())]
    return "\n".join(out) + "\n"


def cmd_tables(args) -> int:
    if not 1 <= args.kmax <= 12:
        raise InvalidSpec("kmax must lie in 1..12")
    sys.stdout.write(tables_csv(args.kmax, args.table))
    return EXIT_OK


def symbolic_checks(order: Fraction) -> list[dict]:
    checks = []
    cmp = compare_h_reference(order)
    checks.append({
        "check": "h_reference",
        "pass": cmp.ok,
        "detail": f"{cmp.checked - len(cmp.mismatches)}/{cmp.checked} reference coefficients reproduced",
        "mismatches": [m.describe() for m in cmp.mismatches],
    })
    for k in range(1, 5):
        for two_l in range(1, k + 1):
            rc = check_recursion(k, Fraction(two_l, 2), order)
            checks.append({"check": f"recursion k={k} 2l={two_l}", "pass": rc.ok, "detail": "residual zero" if rc.ok else str(rc.residual)})
    for P in range(2, 5):
        for pt_cfg in ((P - 1, 0, 0), (0, P - 1, 0), (0, 0, P - 1)):
            res = reconstruct_theta_product(P, pt_cfg, order) - theta_product(pt_cfg, order)
            checks.append({"check": f"degenerate identity P={P} {pt_cfg}", "pass": res.is_zero(), "detail": ""})
    d = eta_pow(3, 20) - psi((2, 1), 20)
    checks.append({"check": "psi(2,1) = eta^3 to q^20", "pass": d.is_zero(), "detail": ""})
    for P in range(2, 7):
        for a in range(1, P):
            # one extra order on the product: chi(0) starts below q^0
            rhs = eta_pow(3, 11) * affine_character(P - 2, Fraction(a - 1, 2), 11).at_z_zero()
            d = psi((P, a), 10) - rhs
            checks.append({"check": f"psi({P},{a}) = eta^3 chi(0)", "pass": d.is_zero() and d.trunc_order >= 10, "detail": ""})
    return checks


def numeric_checks(tau: complex | None) -> list[dict]:
    from .numerics import SamplePoint, run_identity_suite

    samples = None if tau is None else [SamplePoint(tau)]
    return [
        {"check": r.identity_name, "pass": r.passed, "detail": f"residual {r.residual:.3e} (tol {r.tolerance:.0e}) tau={r.sample.tau}"}
        for r in run_identity_suite(samples=samples)
    ]


def cmd_verify(args) -> int:
    checks = []
    if args.suite in ("symbolic", "all"):
        checks += symbolic_checks(args.order)
    if args.suite in ("numeric", "all"):
        checks += numeric_checks(args.tau)
    if args.format == "json":
        sys.stdout.write(json.dumps(checks, indent=2) + "\n")
    else:
        for c in checks:
            sys.stdout.write(f"{'PASS' if c['pass'] else 'FAIL'}  {c['check']}  {c['detail']}\n")
            for m in c.get("mismatches", []):
                sys.stdout.write(f"        {m}\n")
        n_bad = sum(not c["pass"] for c in checks)
        sys.stdout.write(f"{len(checks) - n_bad}/{len(checks)} checks passed\n")
    return EXIT_OK if all(c["pass"] for c in checks) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mockchar", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", help="expand a named object as a q-series")
    e.add_argument("--object", required=True)
    e.add_argument("--order", type=parse_order, default=Fraction(5))
    e.add_argument("--format", choices=("text", "json", "csv"), default="text")
    e.add_argument("--cache-dir")
    e.add_argument("--no-cache", action="store_true")
    e.set_defaults(func=cmd_expand)

    d = sub.add_parser("decompose", help="decompose an elliptic genus into N=4 characters")
    d.add_argument("--genus", required=True, help="k3, sym, mixed or x2")
    d.add_argument("--k", type=int)
    d.add_argument("--n", type=int)
    d.add_argument("--k2", type=int)
    d.add_argument("--k3", type=int)
    d.add_argument("--k4", type=int)
    d.add_argument("--normalization", type=Fraction)
    d.add_argument("--order", type=parse_order, default=Fraction(4), help="highest massive level n reported")
    d.add_argument("--format", choices=("text", "json", "csv"), default="json")
    d.set_defaults(func=cmd_decompose)

    t = sub.add_parser("tables", help="gamma, NS-weighted gamma, alpha and beta tables as CSV")
    t.add_argument("--kmax", type=int, default=10)
    t.add_argument("--table", choices=("gamma", "ns", "alpha", "beta", "all"), default="all")
    t.add_argument("--format", choices=("csv",), default="csv")
    t.set_defaults(func=cmd_tables)

    v = sub.add_parser("verify", help="run the symbolic and/or numeric check suites")
    v.add_argument("--suite", choices=("symbolic", "numeric", "all"), default="all")
    v.add_argument("--tau", type=parse_tau)
    v.add_argument("--order", type=parse_order, default=Fraction(5))
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)
    return p


def _msg(exc: Exception) -> str:
    # KeyError subclasses repr their argument; print the plain text instead
    return str(exc.args[0]) if exc.args else type(exc).__name__


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InconsistentSystem as exc:
        print(f"error: {_msg(exc)}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (UnknownObject, InvalidSpec) as exc:
        print(f"error: {_msg(exc)}", file=sys.stderr)
        return EXIT_USAGE
    except MockcharError as exc:
        print(f"error: {_msg(exc)}", file=sys.stderr)
        return EXIT_FAIL

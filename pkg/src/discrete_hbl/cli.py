"""Command line interface: ``dhbl {constant,verify,polytope,subgroups,factor} FILE``.

Reports are JSON on stdout with a fixed key order.  Exit codes: 0 success,
1 an oracle verdict of FAIL, 2 unreadable input, 3 a cap or budget was
exceeded, 4 finitely generated datum whose exponents were not verified.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__, kernels, oracle
from .cache import ENV_VAR, cache_dir, load_lattice
from .constants import (
    factorization_check,
    local_from_orders,
    optimal_constant,
    subgroup_profile,
)
from .datumfile import DatumFile, digest, load
from .errors import (
    BudgetExceededError,
    DimensionCapError,
    HblError,
    LatticeCapError,
    ParseError,
)
from .factored import FactoredValue
from .groups import Subgroup
from .polytope import (
    DEFAULT_MAX_DIM,
    build_PA,
    check_extreme_point_structure,
    vertex_is_member,
    vertices,
)
from .subgroups import DEFAULT_MAX_ORDER

EXIT_FAIL, EXIT_INPUT, EXIT_CAP, EXIT_UNVERIFIED = 1, 2, 3, 4


def _value(v: FactoredValue) -> dict:
    return {"exact": str(v), "factorization": v.to_json(), "decimal": repr(float(v))}


def _subgroup(H: Subgroup) -> dict:
    return {
        "description": H.describe(),
        "order": H.order if H.is_finite else None,
        "generators": [list(g.coords) for g in H.generators],
    }


def _datum_info(df: DatumFile) -> dict:
    d = df.datum
    return {
        "digest": digest(d),
        "source": str(d.domain),
        "targets": [{"label": lab, "group": str(phi.codomain)} for phi, lab in zip(d.maps, d.labels)],
    }


def _exponents(args, df: DatumFile):
    raw = args.s
    if raw:
        tokens = [t for chunk in raw for t in chunk.replace(",", " ").split()]
        try:
            return df.datum.check_exponents(tokens)
        except ValueError as exc:
            raise ParseError(str(exc), None, "--s") from None
    if df.exponents is None:
        raise ParseError("no exponents in the file; pass --s, e.g. --s 1/2 1/2", None, "--s")
    return df.exponents


def _fmt_s(s) -> list[str]:
    return [str(Fraction(x)) for x in s]


def _fmt_float(s) -> list[str]:
    # rounded so float noise like -0.0 or 0.9999999999999999 reads cleanly
    return [repr(round(float(x), 12) + 0.0) for x in s]


def _prepare(args, df: DatumFile) -> None:
    d = df.datum
    if d.is_finite:
        load_lattice(d.domain, cache_dir(args.cache_dir), args.max_order)


def cmd_constant(args, df: DatumFile) -> tuple[dict, int]:
    s = _exponents(args, df)
    rep = optimal_constant(df.datum, s, args.max_order)
    out = {"exponents": _fmt_s(s), "status": rep.status}
    if rep.value is None:
        mem = rep.membership
        out["membership"] = {
            "status": mem.status,
            "reason": mem.reason,
            "witness": _subgroup(mem.witness) if mem.witness is not None else None,
            "family_size": len(mem.family),
        }
        print(
            "exponents are not verified to satisfy the rank condition; the constant is "
            f"infinite or unverified ({mem.reason})",
            file=sys.stderr,
        )
        return out, EXIT_UNVERIFIED
    out["value"] = _value(rep.value)
    out["witness"] = _subgroup(rep.witness)
    out["attained"] = rep.attained
    if rep.membership is not None:
        out["membership"] = {"status": rep.membership.status, "family_size": len(rep.membership.family)}
    return out, 0


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def cmd_verify(args, df: DatumFile) -> tuple[dict, int]:
    s = _exponents(args, df)
    d = df.datum
    if not d.is_finite:
        raise ParseError("verify needs a finite source group", None, "source")
    v = oracle.verify_theorem(
        d, s, budget=args.budget, restarts=args.restarts, seed=args.seed, max_iters=args.iters,
        tol=args.tol, max_order=args.max_order,
    )
    A = v.constant.value
    bound = v.bound
    out = {"exponents": _fmt_s(s), "constant": _value(A), "witness": _subgroup(v.constant.witness)}
    out["witness_ratio"] = str(v.witness_ratio)
    ind = v.indicator
    if ind is None:
        out["indicator_search"] = {"verdict": "SKIPPED", "space": oracle.search_space(d), "budget": args.budget}
        ind_ok = True
    else:
        ind_ok = ind.value == A
        out["indicator_search"] = {
            "verdict": _verdict(ind_ok),
            "max_ratio": _value(ind.value),
            "sets": [[list(t.torsion.decode(c)) for c in E] for E, t in zip(ind.sets, d.targets)],
            "space": ind.space,
        }
    ratios = [tr.best_ratio for tr in v.ascent]
    asc_ok = all(r <= bound * (1 + oracle.BOUND_TOL) for r in ratios)
    out["ascent"] = {
        "verdict": _verdict(asc_ok),
        "runs": len(v.ascent),
        "converged": sum(tr.converged for tr in v.ascent),
        "max_ratio": repr(max(ratios)),
        "witness_start_ratio": repr(v.ascent[0].ratios[0]),
    }
    out["upper_bound_ok"] = v.upper_ok
    out["attained_ok"] = v.attain_ok
    out["trivial_bound_ok"] = v.trivial_ok
    out["backend"] = kernels.BACKEND
    passed = v.passed and ind_ok
    out["verdict"] = _verdict(passed)
    if v.partial:
        out["partial"] = True
        print(f"indicator search skipped: {oracle.search_space(d)} tuples exceed budget {args.budget}", file=sys.stderr)
        return out, EXIT_CAP
    return out, 0 if passed else EXIT_FAIL


def cmd_polytope(args, df: DatumFile) -> tuple[dict, int]:
    d = df.datum
    if not d.is_finite:
        raise ParseError("polytope needs a finite source group", None, "source")
    if args.bound == "attained":
        s = _exponents(args, df)
        bound = optimal_constant(d, s, args.max_order).value
    else:
        try:
            bound = FactoredValue.parse(args.bound)
        except ValueError as exc:
            raise ParseError(str(exc), None, "--bound") from None
    poly = build_PA(d, bound, args.max_order)
    mode, note = args.mode, None
    if mode == "exact" and not poly.single_prime:
        mode = "float"
        note = f"data involve primes {sorted(poly.primes)}; exact vertices need a single prime, using float mode"
        print(f"warning: {note}", file=sys.stderr)
    verts = vertices(poly, mode, max_dim=args.max_dim)
    rows = poly.rows(mode)
    out = {"bound": _value(bound), "mode": mode}
    if note:
        out["mode_note"] = note
    out["constraints"] = [
        {"label": f"H{i}", "subgroup": _subgroup(c.subgroup), "order": c.order, "image_orders": list(c.image_orders)}
        for i, c in enumerate(poly.constraints)
    ]
    fmt = _fmt_s if mode == "exact" else _fmt_float
    out["vertices"] = [
        {"s": fmt(v.s), "active": [rows[i][2] for i in v.active], "member": vertex_is_member(poly, v)}
        for v in verts
    ]
    if mode == "exact":
        rep = check_extreme_point_structure(d, bound, verts, args.max_order)
        out["extreme_points"] = {
            "ok": rep.ok,
            "checks": [
                {"s": _fmt_s(c.vertex.s), "hypotheses": c.hypotheses, "branch": c.branch, "ok": c.ok}
                for c in rep.checks
            ],
        }
    return out, 0


def cmd_subgroups(args, df: DatumFile) -> tuple[dict, int]:
    d = df.datum
    if not d.is_finite:
        raise ParseError("subgroups needs a finite source group", None, "source")
    s = _exponents(args, df) if args.s or df.exponents is not None else None
    prof = subgroup_profile(d, args.max_order)
    listing = []
    for i, (H, order, img) in enumerate(zip(prof.subgroups, prof.orders, prof.image_orders)):
        entry = {"index": i, **_subgroup(H), "image_orders": list(img)}
        if s is not None:
            entry["local_constant"] = _value(local_from_orders(order, img, s))
        listing.append(entry)
    out = {"exponents": _fmt_s(s) if s is not None else None, "count": len(listing), "subgroups": listing}
    return out, 0


def _parse_gens(args, G) -> list:
    gens = []
    for text in args.gen or []:
        try:
            coords = [int(t) for t in text.replace(",", " ").split()]
        except ValueError:
            raise ParseError(f"generator {text!r} is not a list of integers", None, "--gen") from None
        if len(coords) != G.ngens:
            raise ParseError(f"generator {text!r} needs {G.ngens} coordinates for {G}", None, "--gen")
        gens.append(G.element(coords))
    return gens


def cmd_factor(args, df: DatumFile) -> tuple[dict, int]:
    d = df.datum
    if not d.is_finite:
        raise ParseError("factor needs a finite source group", None, "source")
    s = _exponents(args, df)
    sub = Subgroup.generated_by(d.domain, _parse_gens(args, d.domain))
    rep = factorization_check(d, s, sub, args.max_order)
    out = {
        "exponents": _fmt_s(s),
        "subgroup": _subgroup(sub),
        "local_constant": _value(rep.local),
        "sub_constant": _value(rep.sub),
        "quotient_constant": _value(rep.quotient),
        "full_constant": _value(rep.full),
        "hypothesis": rep.hypothesis,
        "product_bound": rep.inequality,
        "consistent": rep.consistent,
    }
    return out, 0


COMMANDS = {
    "constant": cmd_constant,
    "verify": cmd_verify,
    "polytope": cmd_polytope,
    "subgroups": cmd_subgroups,
    "factor": cmd_factor,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dhbl", description="Exact constants of multilinear inequalities on abelian groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="datum file")
    common.add_argument("--s", nargs="+", metavar="P/Q", help="exponents, overriding the file")
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, help="subgroup lattice cap")
    common.add_argument("--cache-dir", help=f"lattice cache directory (default ${ENV_VAR})")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("constant", parents=[common], help="optimal constant and witness")
    v = sub.add_parser("verify", parents=[common], help="cross-check the constant numerically")
    v.add_argument("--tol", type=float, default=1e-12, help="ascent convergence tolerance")
    v.add_argument("--iters", type=int, default=200, help="ascent iterations per run")
    v.add_argument("--restarts", type=int, default=8, help="random ascent restarts")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET, help="indicator search budget (tuples)")
    q = sub.add_parser("polytope", parents=[common], help="vertices of the exponent polytope")
    q.add_argument("--bound", default="attained", help="bound such as '2^(3/2)', or 'attained'")
    q.add_argument("--mode", choices=("exact", "float"), default="exact")
    q.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    sub.add_parser("subgroups", parents=[common], help="list the subgroup lattice")
    f = sub.add_parser("factor", parents=[common], help="factorization check for a subgroup")
    f.add_argument("--gen", action="append", metavar="COORDS", help="generator such as '1,0' (repeatable)")
    return p


def run(argv=None) -> tuple[dict | None, int]:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        df = load(args.file)
        _prepare(args, df)
        result, code = COMMANDS[args.command](args, df)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_INPUT
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_INPUT
    except (LatticeCapError, BudgetExceededError, DimensionCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_CAP
    except HblError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_INPUT
    report = {
        "tool": "discrete-hbl",
        "version": __version__,
        "command": {"name": args.command, "argv": list(argv if argv is not None else sys.argv[1:])},
        "datum": _datum_info(df),
        "result": result,
    }
    if args.timings:
        report["timings"] = {"total_seconds": round(time.perf_counter() - start, 6)}
    return report, code


def main(argv=None) -> int:
    report, code = run(argv)
    if report is not None:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

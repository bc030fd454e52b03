"""Command line front end: xfam <subcommand> [options].

Exit codes: 0 success, 1 violations / refuted / failed checks, 2 usage or
parameter errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import constructions, generating, inequalities, search
from .core import (
    CapacityError,
    DomainError,
    FamilyPair,
    ParameterError,
    UniformFamily,
    elements,
    format_family,
    is_cross_t_intersecting,
    iter_k_subsets,
    parse_family,
    to_mask,
)
from .shifting import compress_pair, compress_to_fixpoint, is_left_compressed


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _elems(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ParameterError(f"expected comma separated integers, got {text!r}") from exc


# --------------------------------------------------------------------------
# subcommands

def cmd_compress(args) -> int:
    F = parse_family(_read_text(args.family))
    _emit(format_family(compress_to_fixpoint(F)), args.out)
    return 0


def cmd_generators(args) -> int:
    F = parse_family(_read_text(args.family))
    _emit(generating.format_generators(generating.minimal_generating_set(F)), args.out)
    return 0


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise ParameterError(f"{args.family} needs {' '.join(missing)}")


def cmd_construct(args) -> int:
    if args.family == "frankl":
        _need(args, "n", "k", "t", "r")
        _emit(format_family(constructions.frankl_family(args.n, args.k, args.t, args.r)), args.out)
    elif args.family == "star":
        _need(args, "n", "k")
        if args.T is not None:
            T = to_mask(_elems(args.T))
        else:
            _need(args, "t")
            T = to_mask(range(1, args.t + 1))
        _emit(format_family(constructions.star(args.n, args.k, T)), args.out)
    else:
        _need(args, "n", "m", "k", "l", "t")
        pairs = constructions.extremal_pairs(args.n, args.m, args.k, args.l, args.t)
        doc = [{"descriptor": e.descriptor(), "product": str(e.pair.product),
                "A_file": format_family(e.pair.A), "B_file": format_family(e.pair.B)} for e in pairs]
        _emit(_dump(doc), args.out)
    return 0


AUDITS = {
    "3.1": inequalities.audit_lemma31,
    "3.2": inequalities.audit_lemma32,
    "3.3": inequalities.audit_lemma33,
    "case3": inequalities.audit_case3,
}


def _grid(args) -> inequalities.Grid:
    fixed = {name: getattr(args, name) for name in ("n", "m", "k", "l", "t") if getattr(args, name) is not None}
    nmax = args.nmax if args.nmax is not None else (18 if args.lemma == "case3" else 60)
    return inequalities.Grid(tmax=args.tmax, kmax=args.kmax, nmax=nmax, fixed=fixed)


def cmd_audit(args) -> int:
    rep = AUDITS[args.lemma](_grid(args))
    _emit(_dump(rep.to_json()), args.out)
    return 0 if rep.clean else 1


def cmd_search(args) -> int:
    n, m, k, l, t = args.n, args.m, args.k, args.l, args.t
    if args.method == "antichain":
        cert = search.max_product_antichain(n, m, k, l, t, jobs=args.jobs)
    elif args.method == "raw":
        cert = search.max_product_raw(n, m, k, l, t, max_sets=args.max_sets)
    else:
        cert = search.max_product_both(n, m, k, l, t, jobs=args.jobs, max_sets=args.max_sets)
    _emit(_dump(cert.to_json()), args.out)
    if not cert.recheck():
        return 1
    if args.method == "both" and not cert.stats["agree"]:
        return 1
    return 0


def _path41(args) -> dict:
    _need(args, "n", "m", "k", "l", "t", "r", "T", "j", "A", "B")
    A, B = to_mask(_elems(args.A)), to_mask(_elems(args.B))
    As, Bs = constructions.lemma41_path(args.n, args.m, args.k, args.l, args.t, args.r,
                                        _elems(args.T), args.j, A, B)
    checks = {
        "disjoint_same_index": all(a & b == 0 for a, b in zip(As, Bs)),
        "disjoint_shifted_index": all(As[i + 1] & Bs[i] == 0 for i in range(len(As) - 1)),
        "endpoints": As[0] == A and Bs[-1] == B,
        "length": len(As) == len(Bs) == (A & B).bit_count() + 1,
    }
    return {"lemma": "4.1", "A_sequence": [elements(a) for a in As],
            "B_sequence": [elements(b) for b in Bs], "checks": checks}


def _path42(args) -> dict:
    _need(args, "T", "tprime", "A", "B")
    A, B = to_mask(_elems(args.A)), to_mask(_elems(args.B))
    path, labels = constructions.lemma42_path(_elems(args.T), args.tprime, A, B)
    w = (A & B).bit_count() // args.tprime + 1
    checks = {
        "consecutive_meets": all((path[i] & path[i + 1]).bit_count() == args.tprime
                                 for i in range(len(path) - 1)),
        "endpoints": path[0] == B and path[-1] == A,
        "length": len(path) == 2 * w,
    }
    return {"lemma": "4.2", "path": [elements(x) for x in path], "labels": labels, "checks": checks}


def cmd_paths(args) -> int:
    doc = _path41(args) if args.lemma == "4.1" else _path42(args)
    _emit(_dump(doc), args.out)
    return 0 if all(doc["checks"].values()) else 1


# --------------------------------------------------------------------------
# certify

def read_params(text: str) -> list[tuple[int, ...]]:
    """One (n, m, k, l, t) per line; commas or spaces; '#' starts a comment."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ParameterError(f"line {lineno}: expected 5 integers n m k l t, got {line!r}")
        try:
            out.append(tuple(int(x) for x in parts))
        except ValueError as exc:
            raise ParameterError(f"line {lineno}: not an integer tuple: {line!r}") from exc
    return out


def _skip_reason(n, m, k, l, t) -> str | None:
    if not (1 <= t <= min(k, l) and k <= n and l <= m):
        return "infeasible parameters: need 1 <= t <= min(k,l), k <= n, l <= m"
    if t < 3:
        return "t < 3 is outside the theorem's range"
    if not constructions.in_main_domain(n, m, k, l, t):
        return "outside 3 <= t <= l <= k, min(m,n) >= (t+1)(k-t+1)"
    return None


def _random_cross_pair(n, m, k, l, t, rng: random.Random) -> FamilyPair | None:
    A_sets = list(iter_k_subsets(n, k))
    seed = UniformFamily(n, k, tuple(rng.sample(A_sets, rng.randint(1, 3))))
    B = search.best_response(seed, m, l, t)
    if not B.members:
        return None
    B = B.with_members(rng.sample(B.members, rng.randint(1, len(B))))
    A = search.best_response(B, n, k, t)
    A = A.with_members(rng.sample(A.members, rng.randint(1, len(A))))
    return FamilyPair(A, B, t)


def property_sample(n, m, k, l, t, cases: int, rng: random.Random) -> dict:
    """Random cross-t pairs: joint compression keeps sizes and the property,
    and the canonical generator of each compressed family expands back to it."""
    checked = failures = infeasible = 0
    examples = []
    for _ in range(cases):
        P = _random_cross_pair(n, m, k, l, t, rng)
        if P is None:
            infeasible += 1
            continue
        checked += 1
        Q = compress_pair(P)
        ok = (len(Q.A) == len(P.A) and len(Q.B) == len(P.B) and is_cross_t_intersecting(Q)
              and is_left_compressed(Q.A) and is_left_compressed(Q.B))
        for F in (Q.A, Q.B):
            ok = ok and generating.expand(generating.minimal_generating_set(F)) == F
        if not ok:
            failures += 1
            if len(examples) < 3:
                examples.append({"A_file": format_family(P.A), "B_file": format_family(P.B)})
    return {"cases_checked": checked, "infeasible_draws": infeasible, "failures": failures,
            "examples": examples}


def certify_tuple(params, bundle: Path, jobs: int, samples: int, rng: random.Random) -> dict:
    n, m, k, l, t = params
    entry = {"params": {"n": n, "m": m, "k": k, "l": l, "t": t}}
    reason = _skip_reason(*params)
    if reason is None:
        try:
            theorem = search.verify_theorem_1_8(n, m, k, l, t, jobs=jobs)
        except CapacityError as exc:
            reason = f"beyond search capacity: {exc}"
    if reason is not None:
        entry.update(status="SKIPPED", reason=reason)
        return entry

    sub = bundle / f"n{n}_m{m}_k{k}_l{l}_t{t}"
    sub.mkdir(parents=True, exist_ok=True)
    (sub / "theorem.json").write_text(_dump(theorem))
    checks = {"theorem": theorem["status"]}
    grid = inequalities.Grid(tmax=t, kmax=k, nmax=max(n, m), fixed=dict(entry["params"]))
    for lemma in ("3.1", "3.2", "3.3"):
        rep = AUDITS[lemma](grid)
        (sub / f"lemma{lemma}.json").write_text(_dump(rep.to_json()))
        checks[f"lemma{lemma}"] = {"tuples_checked": rep.tuples_checked, "violations": len(rep.violations)}
    props = property_sample(n, m, k, l, t, samples, rng)
    (sub / "properties.json").write_text(_dump(props))
    checks["properties"] = {"cases_checked": props["cases_checked"], "failures": props["failures"]}

    ok = (theorem["status"] == "CONFIRMED" and props["failures"] == 0
          and all(checks[f"lemma{x}"]["violations"] == 0 for x in ("3.1", "3.2", "3.3")))
    entry.update(status="CONFIRMED" if ok else "REFUTED", checks=checks)
    return entry


def cmd_certify(args) -> int:
    if not args.out or args.out == "-":
        raise ParameterError("certify needs --out DIR for the bundle")
    tuples = read_params(_read_text(args.params))
    bundle = Path(args.out)
    bundle.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    results = [certify_tuple(p, bundle, args.jobs, args.samples, rng) for p in tuples]
    counts = {s: sum(r["status"] == s for r in results) for s in ("CONFIRMED", "REFUTED", "SKIPPED")}
    summary = {"seed": args.seed, "tuples": results, "counts": counts}
    (bundle / "summary.json").write_text(_dump(summary))
    sys.stdout.write(_dump({"bundle": str(bundle), "counts": counts}))
    return 1 if counts["REFUTED"] else 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $XFAM_JOBS or all cores)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")

    p = argparse.ArgumentParser(prog="xfam", description="Cross-t-intersecting family toolkit.")
    subs = p.add_subparsers(dest="command", required=True)

    s = subs.add_parser("compress", parents=[common], help="left-compress a family file")
    s.add_argument("family", help="family file, or - for stdin")
    s.set_defaults(func=cmd_compress)

    s = subs.add_parser("generators", parents=[common], help="canonical generator of a family file")
    s.add_argument("family", help="family file, or - for stdin")
    s.set_defaults(func=cmd_generators)

    s = subs.add_parser("construct", parents=[common], help="write named families")
    s.add_argument("--family", required=True, choices=["frankl", "star", "extremal-pairs"])
    for name in ("n", "m", "k", "l", "t", "r"):
        s.add_argument(f"--{name}", type=int)
    s.add_argument("--T", help="star centre as comma separated elements (default [t])")
    s.set_defaults(func=cmd_construct)

    s = subs.add_parser("audit", parents=[common], help="sign audits of the polynomial inequalities")
    s.add_argument("--lemma", required=True, choices=sorted(AUDITS))
    s.add_argument("--tmax", type=int, default=6)
    s.add_argument("--kmax", type=int, default=8)
    s.add_argument("--nmax", type=int, default=None, help="default 60, or 18 for case3")
    for name in ("n", "m", "k", "l", "t"):
        s.add_argument(f"--{name}", type=int, help=f"pin {name} to one value")
    s.set_defaults(func=cmd_audit)

    s = subs.add_parser("search", parents=[common], help="exact maximum product search")
    for name in ("n", "m", "k", "l", "t"):
        s.add_argument(f"--{name}", type=int, required=True)
    s.add_argument("--method", choices=["antichain", "raw", "both"], default="antichain")
    s.add_argument("--max-sets", type=int, default=search.RAW_MAX_SETS,
                   help="raw method refuses C(n,k) above this")
    s.set_defaults(func=cmd_search)

    s = subs.add_parser("paths", parents=[common], help="explicit disjoint / meeting paths")
    s.add_argument("--lemma", required=True, choices=["4.1", "4.2"])
    for name in ("n", "m", "k", "l", "t", "r", "j", "tprime"):
        s.add_argument(f"--{name}", type=int)
    for name in ("T", "A", "B"):
        s.add_argument(f"--{name}", help="comma separated elements")
    s.set_defaults(func=cmd_paths)

    s = subs.add_parser("certify", parents=[common], help="verify a list of parameter tuples")
    s.add_argument("params", help="file with one 'n m k l t' per line")
    s.add_argument("--samples", type=int, default=50, help="random property cases per tuple")
    s.set_defaults(func=cmd_certify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs is None:
        args.jobs = search.default_jobs()
    try:
        return args.func(args)
    except (ParameterError, DomainError, CapacityError, OSError) as exc:
        print(f"xfam {args.command}: error: {exc}", file=sys.stderr)
        return 2


run = main

if __name__ == "__main__":
    sys.exit(main())

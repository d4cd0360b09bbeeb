"""Batch command-line surface with JSON output and a persistent cache.

Every subcommand computes a plain JSON-able result dict; human output is
rendered from that dict, so cached and fresh invocations are
byte-identical.  The cache is a line-delimited JSON file, content
addressed by a hash of the canonical query string and engine version;
corrupt lines are skipped with a warning and never change results.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass

from . import __version__
from .branching import reciprocity_check, restrict_gl_to_so, restrict_gl_to_sp
from .characters import dim
from .errors import IsotypicError, NotDecreasing
from .fock import (
    FockShape,
    check_covariance,
    hwv,
    pairing,
    parse_poly,
    render_poly,
    sl2_generators,
    sp2n_generators,
    supq_laplacians,
    weyl_commutator,
)
from .lr import Decomposition, tensor_multi
from .signatures import GroupFamily, parse, render
from .stable_limits import identity_multiplicity, stable_branch, stable_tensor


@dataclass(frozen=True)
class QueryRecord:
    """One append-only cache entry."""

    key: str
    query: str
    result: dict
    engine_version: str


def decomposition_to_json(dec: Decomposition, k0=None) -> dict:
    obj: dict = {"group": {"family": dec.group.family, "rank": dec.group.rank}}
    if k0 is not None:
        obj["k0"] = k0
    obj["terms"] = [
        {"signature": list(sig), "mult": mult} for sig, mult in dec.items()
    ]
    return obj


def decomposition_from_json(obj: dict) -> Decomposition:
    group = GroupFamily(obj["group"]["family"], obj["group"]["rank"])
    return Decomposition(
        group, {tuple(t["signature"]): t["mult"] for t in obj["terms"]}
    )


def parse_mixed_text(text: str):
    """Parse a comma-separated signature allowing negative entries."""
    parts = tuple(int(p) for p in text.split(","))
    for a, b in zip(parts, parts[1:]):
        if a < b:
            raise NotDecreasing(f"parts {list(parts)} are not weakly decreasing")
    return parts


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    common.add_argument("--cache", help="cache file (default: $ISOTYPIC_CACHE)")
    common.add_argument("--seed", type=int, default=0, help="seed for covariance trials")

    parser = argparse.ArgumentParser(
        prog="isotypic",
        description="Exact tensor products, branchings, and Fock-space checks "
        "for the classical dual pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tensor = sub.add_parser("tensor", parents=[common], help="tensor product decomposition")
    p_tensor.add_argument("--group", default="u", choices=["u"])
    mode = p_tensor.add_mutually_exclusive_group(required=True)
    mode.add_argument("--stable", action="store_true")
    mode.add_argument("--rank", type=int)
    p_tensor.add_argument("sigs", nargs="+", metavar="SIG")

    p_branch = sub.add_parser("branch", parents=[common], help="restrict U(k) to SO or Sp")
    p_branch.add_argument("--to", required=True, choices=["so", "sp"])
    mode = p_branch.add_mutually_exclusive_group(required=True)
    mode.add_argument("--stable", action="store_true")
    mode.add_argument("--rank", type=int)
    p_branch.add_argument("sig", metavar="SIG")

    p_rec = sub.add_parser("reciprocity", parents=[common], help="two-sided multiplicity check")
    p_rec.add_argument("--n", type=int, required=True)
    p_rec.add_argument("--k", type=int, required=True)
    p_rec.add_argument("sig", metavar="SIG")

    p_idm = sub.add_parser(
        "identity-mult", parents=[common],
        help="multiplicity of the trivial signature in a product with a dual factor",
    )
    p_idm.add_argument("--mu", required=True, metavar="SIG")
    p_idm.add_argument("sigs", nargs="+", metavar="SIG")

    p_dim = sub.add_parser("dim", parents=[common], help="irreducible dimension")
    p_dim.add_argument("--group", required=True, choices=["u", "so", "sp"])
    p_dim.add_argument("--rank", type=int, required=True)
    p_dim.add_argument("sig", metavar="SIG")

    p_fock = sub.add_parser("fock", help="symbolic Fock-space commands")
    fock_sub = p_fock.add_subparsers(dest="fock_command", required=True)

    p_verify = fock_sub.add_parser(
        "verify", parents=[common], help="check operator commutation relations"
    )
    p_verify.add_argument("target", choices=["sl2", "sp2n", "supq"])
    p_verify.add_argument("--n", type=int, default=1)
    p_verify.add_argument("--k", type=int, required=True)
    p_verify.add_argument("--p", type=int)
    p_verify.add_argument("--q", type=int)

    p_hwv = fock_sub.add_parser(
        "hwv", parents=[common], help="construct and verify a highest weight vector"
    )
    p_hwv.add_argument("--kind", required=True, choices=["gl", "so_rank1", "so_general", "upq"])
    p_hwv.add_argument("--sig", required=True, metavar="SIG")
    p_hwv.add_argument("--n", type=int, default=1)
    p_hwv.add_argument("--k", type=int, required=True)
    p_hwv.add_argument("--p", type=int)
    p_hwv.add_argument("--q", type=int)

    p_pair = fock_sub.add_parser(
        "pair", parents=[common], help="Fock pairing of two polynomial expressions"
    )
    p_pair.add_argument("exprs", nargs=2, metavar="EXPR")

    return parser


def _tensor_result(args):
    factors = [parse(s) for s in args.sigs]
    if args.stable:
        query = f"tensor|stable|{';'.join(render(f) for f in factors)}"

        def compute():
            res = stable_tensor(factors)
            return decomposition_to_json(res.stable, k0=res.k0)

        return query, compute
    query = f"tensor|rank={args.rank}|{';'.join(render(f) for f in factors)}"
    return query, lambda: decomposition_to_json(tensor_multi(factors, args.rank))


def _branch_result(args):
    lam = parse(args.sig)
    if args.stable:
        query = f"branch|{args.to}|stable|{render(lam)}"

        def compute():
            res = stable_branch(lam, args.to)
            return decomposition_to_json(res.stable, k0=res.k0)

        return query, compute
    restrict = restrict_gl_to_so if args.to == "so" else restrict_gl_to_sp
    query = f"branch|{args.to}|rank={args.rank}|{render(lam)}"
    return query, lambda: decomposition_to_json(restrict(lam, args.rank))


def _reciprocity_result(args):
    lam = parse(args.sig)

    def compute():
        report = reciprocity_check(lam, args.n, args.k)
        return {
            "signature": list(lam),
            "n": args.n,
            "k": args.k,
            "rows": [
                {"mu": list(mu), "side_a": a, "side_b": b, "agree": ok}
                for mu, a, b, ok in report.rows
            ],
            "all_agree": report.all_agree,
        }

    return f"reciprocity|n={args.n}|k={args.k}|{render(lam)}", compute


def _identity_mult_result(args):
    factors = [parse(s) for s in args.sigs]
    mu = parse(args.mu)

    def compute():
        return {
            "factors": [list(f) for f in factors],
            "mu": list(mu),
            "multiplicity": identity_multiplicity(factors, mu),
        }

    query = f"identity-mult|mu={render(mu)}|{';'.join(render(f) for f in factors)}"
    return query, compute


def _dim_result(args):
    sig = parse(args.sig)
    group = GroupFamily(args.group, args.rank)

    def compute():
        return {
            "group": {"family": args.group, "rank": args.rank},
            "signature": list(sig),
            "dim": dim(group, sig),
        }

    return f"dim|{args.group}|rank={args.rank}|{render(sig)}", compute


def verify_sl2(k: int) -> tuple[int, bool]:
    """Check the three ladder relations at rank k."""
    e_op, xp, xm = sl2_generators(k)
    checks = [
        weyl_commutator(e_op, xp) == 2 * xp,
        weyl_commutator(e_op, xm) == (-2) * xm,
        weyl_commutator(xm, xp) == e_op,
    ]
    return len(checks), all(checks)


def verify_sp2n(n: int, k: int) -> tuple[int, bool]:
    """Check every index instance of the six commutation relation families."""
    fam = sp2n_generators(n, k)
    e_ops, p_ops, d_ops = fam["E"], fam["P"], fam["D"]
    shape = next(iter(e_ops.values())).shape
    from .fock import WeylOp

    def d(i, j):
        return 1 if i == j else 0

    def combo(table, pieces):
        out = WeylOp.zero(shape)
        for coeff, idx in pieces:
            if coeff:
                out = out + coeff * table[idx]
        return out

    rng = range(1, n + 1)
    checked = 0
    ok = True
    for a in rng:
        for b in rng:
            for c in rng:
                for e in rng:
                    ok &= weyl_commutator(e_ops[(a, b)], e_ops[(c, e)]) == combo(
                        e_ops, [(d(b, c), (a, e)), (-d(a, e), (c, b))]
                    )
                    ok &= weyl_commutator(e_ops[(a, b)], p_ops[(c, e)]) == combo(
                        p_ops, [(d(b, c), (a, e)), (d(b, e), (a, c))]
                    )
                    ok &= weyl_commutator(e_ops[(a, b)], d_ops[(c, e)]) == combo(
                        d_ops, [(-d(a, c), (b, e)), (-d(a, e), (b, c))]
                    )
                    # E-index placement is forced by the E_ab = sum_i Z_ai d_bi
                    # convention the first three families already pin down.
                    ok &= weyl_commutator(p_ops[(a, b)], d_ops[(c, e)]) == combo(
                        e_ops,
                        [
                            (d(a, c), (b, e)),
                            (d(a, e), (b, c)),
                            (d(b, c), (a, e)),
                            (d(b, e), (a, c)),
                        ],
                    )
                    ok &= weyl_commutator(p_ops[(a, b)], p_ops[(c, e)]).is_zero()
                    ok &= weyl_commutator(d_ops[(a, b)], d_ops[(c, e)]).is_zero()
                    checked += 6
    return checked, bool(ok)


def verify_supq(p: int, q: int, k: int) -> tuple[int, bool]:
    """Check that the invariant quadratics and Laplacians each commute."""
    fam = supq_laplacians(p, q, k)
    pairs = [(a, b) for a in range(1, p + 1) for b in range(1, q + 1)]
    checked = 0
    ok = True
    for first in pairs:
        for second in pairs:
            ok &= weyl_commutator(fam["p"][first], fam["p"][second]).is_zero()
            ok &= weyl_commutator(fam["delta"][first], fam["delta"][second]).is_zero()
            checked += 2
    return checked, bool(ok)


def _fock_verify_result(args):
    if args.target == "sl2":
        query = f"fock-verify|sl2|k={args.k}"

        def compute():
            checked, holds = verify_sl2(args.k)
            return {
                "target": "sl2", "k": args.k,
                "relations_checked": checked, "holds": holds,
            }

    elif args.target == "sp2n":
        query = f"fock-verify|sp2n|n={args.n}|k={args.k}"

        def compute():
            checked, holds = verify_sp2n(args.n, args.k)
            return {
                "target": "sp2n", "n": args.n, "k": args.k,
                "relations_checked": checked, "holds": holds,
            }

    else:
        p = args.p or 1
        q = args.q or 1
        query = f"fock-verify|supq|p={p}|q={q}|k={args.k}"

        def compute():
            checked, holds = verify_supq(p, q, args.k)
            return {
                "target": "supq", "p": p, "q": q, "k": args.k,
                "relations_checked": checked, "holds": holds,
            }

    return query, compute


def _fock_hwv_result(args):
    kind = args.kind
    if kind == "upq":
        p = args.p or 1
        q = args.q or 1
        sig = parse_mixed_text(args.sig)
        if len(sig) != args.k:
            raise IsotypicError(
                f"mixed signature must have exactly k={args.k} parts"
            )
        query = f"fock-hwv|upq|p={p}|q={q}|k={args.k}|{render(sig)}|seed={args.seed}"

        def compute():
            nu_sig = tuple(x for x in sig if x > 0)
            lam_sig = tuple(-x for x in reversed(sig) if x < 0)
            vector = hwv("upq", (nu_sig, lam_sig), (p, q), args.k)
            fam = supq_laplacians(p, q, args.k)
            verified = all(
                op.apply(vector).is_zero() for op in fam["delta"].values()
            )
            return {
                "kind": kind, "signature": list(sig), "n": args.n, "k": args.k,
                "polynomial": render_poly(vector), "verified": verified,
            }

        return query, compute
    sig = parse(args.sig)
    query = f"fock-hwv|{kind}|n={args.n}|k={args.k}|{render(sig)}|seed={args.seed}"

    def compute():
        vector = hwv(kind, sig, args.n, args.k)
        if kind == "gl":
            verified = check_covariance(
                vector, "left_lower", sig, seed=args.seed
            ) and check_covariance(vector, "right_upper", sig, seed=args.seed)
        elif kind == "so_rank1":
            _, _, lower = sl2_generators(args.k)
            verified = lower.apply(vector).is_zero()
        else:
            fam = sp2n_generators(args.n, args.k)
            verified = all(
                fam["D"][(a, b)].apply(vector).is_zero()
                for a in range(1, args.n + 1)
                for b in range(a, args.n + 1)
            )
        return {
            "kind": kind, "signature": list(sig), "n": args.n, "k": args.k,
            "polynomial": render_poly(vector), "verified": verified,
        }

    return query, compute


def _fock_pair_result(args):
    first = parse_poly(args.exprs[0])
    second = parse_poly(args.exprs[1])
    shape = FockShape(
        max(first.shape.rows, second.shape.rows),
        max(first.shape.cols, second.shape.cols),
        max(first.shape.wrows, second.shape.wrows),
    )
    first = parse_poly(args.exprs[0], shape)
    second = parse_poly(args.exprs[1], shape)
    query = f"fock-pair|{render_poly(first)}|{render_poly(second)}"
    return query, lambda: {"value": str(pairing(first, second))}


_EXECUTORS = {
    "tensor": _tensor_result,
    "branch": _branch_result,
    "reciprocity": _reciprocity_result,
    "identity-mult": _identity_mult_result,
    "dim": _dim_result,
}


def canonical_key(query: str) -> str:
    payload = f"{__version__}\n{query}".encode()
    return hashlib.sha256(payload).hexdigest()


def cache_get(path: str, key: str):
    """Look a record up by key; corrupt lines are skipped, never fatal."""
    try:
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    print("warning: skipping corrupt cache line", file=sys.stderr)
                    continue
                if (
                    isinstance(rec, dict)
                    and rec.get("key") == key
                    and rec.get("engine_version") == __version__
                ):
                    return QueryRecord(
                        rec["key"], rec["query"], rec["result"], rec["engine_version"]
                    )
    except FileNotFoundError:
        return None
    except OSError as exc:
        print(f"warning: cache read failed: {exc}", file=sys.stderr)
    return None


def cache_put(path: str, record: QueryRecord):
    """Append one record under an advisory lock; failures only warn."""
    try:
        with open(path, "a", encoding="utf-8") as handle:
            try:
                import fcntl

                fcntl.flock(handle, fcntl.LOCK_EX)
            except (ImportError, OSError):
                pass
            handle.write(json.dumps(asdict(record)) + "\n")
    except OSError as exc:
        print(f"warning: cache write failed: {exc}", file=sys.stderr)


def _execute(args) -> dict:
    if args.command == "fock":
        executor = {
            "verify": _fock_verify_result,
            "hwv": _fock_hwv_result,
            "pair": _fock_pair_result,
        }[args.fock_command]
    else:
        executor = _EXECUTORS[args.command]
    query, compute = executor(args)
    cache_path = args.cache or os.environ.get("ISOTYPIC_CACHE")
    if not cache_path:
        return compute()
    key = canonical_key(query)
    hit = cache_get(cache_path, key)
    if hit is not None:
        return hit.result
    result = compute()
    cache_put(cache_path, QueryRecord(key, query, result, __version__))
    return result


def render_human(obj: dict) -> str:
    if "terms" in obj:
        group = obj["group"]
        head = f"group: {group['family']}({group['rank']})"
        if "k0" in obj:
            head += f"  k0={obj['k0']}"
        lines = [head]
        for term in obj["terms"]:
            sig = ",".join(str(x) for x in term["signature"]) or "0"
            lines.append(f"{term['mult']:>6}  {sig}")
        return "\n".join(lines)
    if "rows" in obj:
        sig = ",".join(str(x) for x in obj["signature"]) or "0"
        lines = [f"reciprocity of {sig} at n={obj['n']}, k={obj['k']}"]
        lines.append("    mu        side_a  side_b  agree")
        for row in obj["rows"]:
            mu = ",".join(str(x) for x in row["mu"]) or "0"
            lines.append(
                f"    {mu:<10}{row['side_a']:<8}{row['side_b']:<8}"
                f"{'yes' if row['agree'] else 'NO'}"
            )
        lines.append(f"all rows agree: {'yes' if obj['all_agree'] else 'NO'}")
        return "\n".join(lines)
    if "dim" in obj:
        return str(obj["dim"])
    if "multiplicity" in obj:
        return str(obj["multiplicity"])
    if "relations_checked" in obj:
        label = obj["target"]
        params = ", ".join(
            f"{name}={obj[name]}" for name in ("n", "p", "q", "k") if name in obj
        )
        verdict = "hold" if obj["holds"] else "FAIL"
        return f"{label} ({params}): {obj['relations_checked']} relations {verdict}"
    if "polynomial" in obj:
        status = "verified" if obj["verified"] else "NOT verified"
        return f"{obj['polynomial']}\n{status}"
    if "value" in obj:
        return obj["value"]
    return json.dumps(obj)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        result = _execute(args)
    except IsotypicError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # Malformed argument text (signatures, polynomial expressions).
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(result))
    else:
        print(render_human(result))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

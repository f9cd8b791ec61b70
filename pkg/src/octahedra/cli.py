"""Command-line front end.

Every command builds a Report (verdicts plus exact numbers), prints it as
text and optionally writes it as JSON.  Exit codes: 0 all checks pass,
1 a mathematical check failed, 2 I/O / format / usage error, 3 infeasible
system or exhausted search budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from . import bounds as bd
from . import joincomplex as jc
from .completion import (
    BudgetExhausted,
    InfeasibleError,
    NksysFormatError,
    SearchConfig,
    build_system,
    gram_construct,
    min_rank_search,
    read_nksys,
    sample,
    solve_space,
    write_nksys,
)
from .gf2 import Gf2Matrix, Gf2mFormatError, read_gf2m, write_gf2m
from .k1 import StructureError, certify_k1
from .nkmatrix import (
    OctMatrix,
    PropertyError,
    check_properties,
    heredity_reduce,
    rank_lower_bound,
    verify_rank_bound,
)
from .vankampen import van_kampen_number

REPORT_VERSION = 1

EXIT_OK, EXIT_CHECK, EXIT_IO, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    return str(x)


@dataclass
class Report:
    command: str
    statement: str
    parameters: dict[str, Any] = field(default_factory=dict)
    verdicts: list[tuple[str, bool, Any]] = field(default_factory=list)
    numbers: dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None

    def verdict(self, name: str, passed: bool, witness: Any = None) -> bool:
        self.verdicts.append((name, bool(passed), witness))
        return passed

    @property
    def passed(self) -> bool:
        return all(v[1] for v in self.verdicts)

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "statement": self.statement,
            "parameters": _jsonable(self.parameters),
            "verdicts": [
                {"check": name, "passed": ok, "witness": _jsonable(w)}
                for name, ok, w in self.verdicts
            ],
            "numbers": {k: str(v) for k, v in self.numbers.items()},
            "seed": self.seed,
            "version": REPORT_VERSION,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command}  [{self.statement}]"]
        for key in sorted(self.parameters):
            lines.append(f"  param  {key} = {self.parameters[key]}")
        if self.seed is not None:
            lines.append(f"  seed   {self.seed}")
        for key in sorted(self.numbers):
            lines.append(f"  value  {key} = {self.numbers[key]}")
        for name, ok, w in self.verdicts:
            tail = "" if ok or w is None else f"  witness={_jsonable(w)}"
            lines.append(f"  {'PASS' if ok else 'FAIL'}   {name}{tail}")
        lines.append("OK" if self.passed else "FAILED")
        return "\n".join(lines) + "\n"


# -- helpers ---------------------------------------------------------------


def _load_matrix(path: str, n: Optional[int], k: Optional[int]) -> OctMatrix:
    with open(path, encoding="ascii") as fh:
        m, meta = read_gf2m(fh)
    vals = {}
    for key, flag in (("n", n), ("k", k)):
        from_meta = meta.get(key)
        if from_meta is not None:
            try:
                from_meta = int(from_meta)
            except ValueError as exc:
                raise Gf2mFormatError(f"meta {key}={meta[key]!r} is not an integer") from exc
        if flag is not None and from_meta is not None and flag != from_meta:
            raise UsageError(f"--{key} {flag} disagrees with the file's {key}={from_meta}")
        vals[key] = flag if flag is not None else from_meta
        if vals[key] is None:
            raise UsageError(f"{path}: no {key} in the file; pass --{key}")
    size = jc.octahedron_count(vals["n"], vals["k"])
    if m.shape != (size, size):
        raise Gf2mFormatError(
            f"{path}: (n={vals['n']}, k={vals['k']}) needs {size}x{size}, file has {m.nrows}x{m.ncols}"
        )
    return OctMatrix(vals["n"], vals["k"], m)


def _save_matrix(a: OctMatrix, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        write_gf2m(a.m, fh, a.meta())


def _need(args, *names):
    for nm in names:
        if getattr(args, nm) is None:
            raise UsageError(f"--{nm} is required for this command")


def _property_verdicts(rep: Report, a: OctMatrix, prefix: str = "") -> bool:
    pr = check_properties(a)
    for name in ("symmetric", "independent", "additive", "nontrivial"):
        rep.verdict(prefix + name, getattr(pr, name), pr.witnesses.get(name))
    rep.numbers[prefix + "sa"] = pr.sa_value
    return pr.is_nk_matrix


# -- commands --------------------------------------------------------------


def cmd_verify_combinatorial(args) -> Report:
    k = 1 if args.k is None else args.k
    n = 4 if args.n is None else args.n
    rep = Report("verify combinatorial", "pair-product-identity; coboundary-size; decompositions",
                 {"n": n, "k": k})
    ident = jc.verify_pair_product_identity(k)
    rep.verdict("pair_product_identity", ident.holds, ident.witness)
    rep.numbers["disjoint_ordered_pairs"] = len(ident.disjoint_pairs)
    rep.numbers["product_sum_pairs"] = len(ident.product_sum)
    if k >= 1:
        bad = None
        total = 0
        for alpha in jc.all_faces(3, k):
            for t in range(k + 1):
                for e_rest in jc.all_faces(3, k - 1):
                    e = e_rest[:t] + (None,) + e_rest[t:]
                    if not jc.vertex_disjoint(alpha, e):
                        continue
                    total += 1
                    size = len(jc.elementary_coboundary(alpha, e))
                    if size != 2 and bad is None:
                        bad = (alpha, e, size)
        rep.verdict("coboundary_size_two", bad is None, bad)
        rep.numbers["coboundaries_checked"] = total
    if n >= 2:
        ok, w = jc.check_decompositions_one_coordinate(n, k)
        rep.verdict("decompositions_one_coordinate", ok, w)
        rep.numbers["decomposition_triples"] = len(jc.decomposition_table(n, k))
    return rep


def cmd_verify_vankampen(args) -> Report:
    k = 1 if args.k is None else args.k
    rep = Report("verify vankampen", "van-kampen-parity", {"k": k, "geometric": args.geometric})
    res = van_kampen_number(k, geometric=args.geometric)
    rep.numbers["intersecting_pairs"] = res.count
    rep.numbers["disjoint_pairs"] = res.pairs_checked
    rep.numbers["van_kampen_number"] = res.parity
    rep.verdict("count_is_3^(k+1)", res.count == 3 ** (k + 1), res.count)
    rep.verdict("parity_is_one", res.parity == 1, res.parity)
    if args.geometric:
        rep.numbers["geometric_count"] = res.geometric_count
        rep.verdict("geometric_agrees", not res.disagreements,
                    res.disagreements[0] if res.disagreements else None)
    return rep


def cmd_verify_bounds(args) -> Report:
    k = 1 if args.k is None else args.k
    n_max = 200 if args.n is None else args.n
    rep = Report("verify bounds", "gamma-inequalities; skeleton-reduction", {"k": k, "n": n_max})
    scan = bd.gamma_inequality_scan(k, n_max)
    rep.numbers["threshold"] = scan.threshold
    rep.verdict("eventually_both_hold", scan.threshold is not None)
    bad = None
    for n in range(5 * k + 3, n_max + 1):
        if not bd.skeleton_reduction_consistent(n, k):
            bad = n
            break
    rep.verdict("skeleton_below_joinpower", bad is None, bad)
    if k == 1 and n_max >= 10:
        vals = bd.gamma_inequality_values(10, 1)
        rep.numbers["sample_n10"] = " < ".join(map(str, vals))
        rep.verdict("sample_n10", vals == (15, 22, 28), vals)
    return rep


def cmd_bounds(args) -> Report:
    _need(args, "n", "k")
    params = {"n": args.n, "k": args.k}
    if args.beta is not None:
        params["beta"] = args.beta
    rep = Report("bounds", "closed-form-bounds", params)
    r = bd.evaluate_bounds(args.n, args.k, args.beta)
    rep.numbers.update(r.numbers())
    rep.numbers["skeleton_valid"] = r.skeleton_valid
    rep.numbers["joinpower_valid"] = r.joinpower_valid
    rep.numbers["gamma_negative"] = r.gamma_negative
    return rep


def cmd_check(args) -> Report:
    a = _load_matrix(args.file, args.n, args.k)
    rep = Report("check", "nk-matrix-properties", {"file": os.path.basename(args.file), "n": a.n, "k": a.k})
    _property_verdicts(rep, a)
    return rep


def cmd_rank(args) -> Report:
    a = _load_matrix(args.file, args.n, args.k)
    rep = Report("rank", "joinpower-rank-bound", {"file": os.path.basename(args.file), "n": a.n, "k": a.k})
    rep.numbers["rank"] = a.rank()
    if a.n < 4:
        return rep
    rep.numbers["bound"] = rank_lower_bound(a.n, a.k)
    if not _property_verdicts(rep, a):
        return rep
    res = verify_rank_bound(a)
    rep.numbers["real_bound"] = res.real_bound
    for step in res.chain:
        kk = step["k"]
        for key in ("rank", "rank_block_23", "rank_block_32", "rank_z"):
            rep.numbers[f"chain_k{kk}_{key}"] = step[key]
        rep.verdict(f"chain_k{kk}_half_chain", step["half_chain"] and step["block_le_rank"])
        rep.verdict(f"chain_k{kk}_z_is_nk_matrix", step["z_is_nk_matrix"])
    rep.verdict("rank_meets_bound", res.rank >= res.bound, (res.rank, res.bound))
    return rep


def cmd_heredity(args) -> Report:
    a = _load_matrix(args.file, args.n, args.k)
    rep = Report("heredity", "heredity-reduction", {"file": os.path.basename(args.file), "n": a.n, "k": a.k})
    if a.k < 1 or a.n < 4:
        raise UsageError("heredity reduction needs n >= 4 and k >= 1")
    z = heredity_reduce(a)
    if args.output:
        _save_matrix(z, args.output)
    rep.numbers["rank_a"] = a.rank()
    rep.numbers["rank_z"] = z.rank()
    _property_verdicts(rep, z, prefix="z_")
    return rep


def cmd_k1_certify(args) -> Report:
    a = _load_matrix(args.file, args.n, args.k)
    rep = Report("k1 certify", "k1-rank-chain", {"file": os.path.basename(args.file), "n": a.n, "k": a.k})
    if a.k != 1 or a.n < 4:
        raise UsageError("k1 certify needs k = 1 and n >= 4")
    if not _property_verdicts(rep, a):
        return rep
    try:
        res = certify_k1(a)
    except StructureError as exc:
        rep.verdict("structure", False, str(exc))
        return rep
    rep.verdict("block_sums_diagonal", res["block_sums_diagonal"], res["block_sums_witness"])
    rep.verdict("first_row_tournament", res["first_row_tournament"], res["first_row_witness"])
    for key in ("rank_a", "rank_b", "rank_c", "rank_d", "rank_c_plus_d",
                "certified_d_bound", "certificate_steps", "chain_value", "final_bound"):
        if key in res:
            rep.numbers[key] = res[key]
    for name, ok in res.get("checks", {}).items():
        rep.verdict(name, ok)
    return rep


def _system_from_args(args):
    if getattr(args, "system", None):
        with open(args.system, encoding="ascii") as fh:
            system = read_nksys(fh)
        for key in ("n", "k"):
            flag = getattr(args, key)
            if flag is not None and flag != getattr(system, key):
                raise UsageError(f"--{key} {flag} disagrees with the system file")
        return system
    _need(args, "n", "k")
    if args.n < 4:
        raise UsageError("the constraint space needs n >= 4")
    return build_system(args.n, args.k)


def cmd_space_build(args) -> Report:
    system = _system_from_args(args)
    rep = Report("space build", "nk-matrix-space", {"n": system.n, "k": system.k})
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            write_nksys(system, fh)
    space = solve_space(system)
    rep.numbers["variables"] = system.nvars
    rep.numbers["equations"] = len(system.equations)
    rep.numbers["dimension"] = space.dimension
    rep.verdict("feasible", True)
    return rep


def cmd_space_sample(args) -> Report:
    system = _system_from_args(args)
    seed = 0 if args.seed is None else args.seed
    count = 10 if args.count is None else args.count
    rep = Report("space sample", "nk-matrix-space", {"n": system.n, "k": system.k, "count": count}, seed=seed)
    space = solve_space(system)
    mats = sample(space, seed, count, threads=args.threads)
    if args.output:
        os.makedirs(args.output, exist_ok=True)
    bound = rank_lower_bound(system.n, system.k)
    bad_props = None
    bad_rank = None
    ranks = []
    for i, a in enumerate(mats):
        pr = check_properties(a)
        r = a.rank()
        ranks.append(r)
        if not pr.is_nk_matrix and bad_props is None:
            bad_props = (i, pr.failed())
        if r < bound and bad_rank is None:
            bad_rank = (i, r)
        if args.output:
            _save_matrix(a, os.path.join(args.output, f"sample_{i:04d}.gf2m"))
    rep.numbers["dimension"] = space.dimension
    rep.numbers["bound"] = bound
    rep.numbers["ranks"] = ",".join(map(str, ranks))
    rep.verdict("all_nk_matrices", bad_props is None, bad_props)
    rep.verdict("all_meet_bound", bad_rank is None, bad_rank)
    return rep


def cmd_space_minrank(args) -> Report:
    system = _system_from_args(args)
    cfg = SearchConfig(
        seed=0 if args.seed is None else args.seed,
        budget=2000 if args.budget is None else args.budget,
        exhaustive_threshold=20 if args.threshold is None else args.threshold,
    )
    rep = Report(
        "space minrank", "nk-matrix-space",
        {"n": system.n, "k": system.k, "budget": cfg.budget, "threshold": cfg.exhaustive_threshold},
        seed=cfg.seed,
    )
    space = solve_space(system)
    res = min_rank_search(space, cfg, threads=args.threads)
    if args.output:
        _save_matrix(res.witness, args.output)
    rep.numbers["dimension"] = space.dimension
    rep.numbers["best_rank"] = res.best_rank
    rep.numbers["method"] = res.method
    rep.numbers["evaluated"] = res.evaluated
    rep.numbers["bound"] = res.bound
    rep.verdict("best_meets_bound", res.best_rank >= res.bound, (res.best_rank, res.bound))
    return rep


def cmd_gram(args) -> Report:
    _need(args, "n", "k", "beta")
    seed = 0 if args.seed is None else args.seed
    count = 10 if args.count is None else args.count
    rep = Report("gram", "gram-construction",
                 {"n": args.n, "k": args.k, "beta": args.beta, "form": args.form, "count": count},
                 seed=seed)
    size = jc.octahedron_count(args.n, args.k)
    rng = np.random.default_rng(seed)
    bad = None
    ranks = []
    for i in range(count):
        y = Gf2Matrix.random(args.beta, size, rng)
        a = gram_construct(args.beta, args.form, y, args.n, args.k)
        r = a.rank()
        ranks.append(r)
        if (r > args.beta or not a.m.is_symmetric()) and bad is None:
            bad = (i, r)
    rep.numbers["ranks"] = ",".join(map(str, ranks))
    rep.verdict("rank_at_most_beta", bad is None, bad)
    return rep


# -- parser ----------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--threshold", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--form", choices=("identity", "hyperbolic"), default="identity")
    p.add_argument("--geometric", action="store_true")
    p.add_argument("--json", metavar="PATH")
    p.add_argument("-o", "--output", metavar="PATH")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--quiet", action="store_true", help="suppress the text report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="octahedra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a verification suite")
    vsub = verify.add_subparsers(dest="suite", required=True)
    for name, fn in (("combinatorial", cmd_verify_combinatorial),
                     ("vankampen", cmd_verify_vankampen),
                     ("bounds", cmd_verify_bounds)):
        p = vsub.add_parser(name)
        _common(p)
        p.set_defaults(func=fn)

    for name, fn in (("check", cmd_check), ("rank", cmd_rank), ("heredity", cmd_heredity)):
        p = sub.add_parser(name)
        p.add_argument("file")
        _common(p)
        p.set_defaults(func=fn)

    k1 = sub.add_parser("k1", help="k = 1 rank certificate")
    k1sub = k1.add_subparsers(dest="action", required=True)
    p = k1sub.add_parser("certify")
    p.add_argument("file")
    _common(p)
    p.set_defaults(func=cmd_k1_certify)

    space = sub.add_parser("space", help="the affine space of (n,k)-matrices")
    ssub = space.add_subparsers(dest="action", required=True)
    for name, fn in (("build", cmd_space_build), ("sample", cmd_space_sample),
                     ("minrank", cmd_space_minrank)):
        p = ssub.add_parser(name)
        p.add_argument("system", nargs="?", help="NKSYS file (default: build from --n/--k)")
        _common(p)
        p.set_defaults(func=fn)

    for name, fn in (("gram", cmd_gram), ("bounds", cmd_bounds)):
        p = sub.add_parser(name)
        _common(p)
        p.set_defaults(func=fn)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_IO
    try:
        rep = args.func(args)
    except (OSError, Gf2mFormatError, NksysFormatError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InfeasibleError, BudgetExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except PropertyError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if not args.quiet:
        stdout.write(rep.to_text())
    if args.json:
        try:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(rep.to_json())
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK if rep.passed else EXIT_CHECK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

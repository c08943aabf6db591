"""Command-line front end.

Exit codes: 0 success / property holds, 1 property violated, 2 usage or input error.
JSON goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .engine import NotIndependentError, ParameterError, Params, ContainerRun, reconstruct, run_container
from .family import ContainerRecord, generate_synthetic_rooted, iterate_containers, reconstruct_record
from .hypergraph import verify_rooted
from .supersat import KneserStats, audit_counting_identity, kneser_graph, kneser_min_eigenvalue
from .unionfree import alpha_bounds, build_union_hypergraph, count_union_free, count_union_free_via_hypergraph, crossover_n

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "union":
        (n,) = _ints(args.values, 1, "gen union N")
        _write(formats.dump_hypergraph(build_union_hypergraph(n)), args.out)
    elif args.kind == "kneser":
        m, k = _ints(args.values, 2, "gen kneser M K")
        g = kneser_graph(m, k)
        order = sorted(g.vertices)
        pos = {v: i for i, v in enumerate(order)}
        relabelled = type(g)(range(len(order)), [(pos[a], pos[b]) for a, b in g.edge_list()])
        _write(formats.dump_graph(relabelled, len(order)), args.out)
    else:
        usage = "gen synthetic M DENSITY [SEED] (or --seed)"
        if len(args.values) not in (2, 3):
            raise UsageError(usage)
        try:
            m, density = int(args.values[0]), float(args.values[1])
            seed = int(args.values[2]) if len(args.values) == 3 else args.seed
        except ValueError:
            raise UsageError(usage) from None
        _write(formats.dump_hypergraph(generate_synthetic_rooted(m, density, seed)), args.out)
    return EXIT_OK


def _ints(values: list[str], count: int, usage: str) -> list[int]:
    if len(values) != count:
        raise UsageError(usage)
    try:
        return [int(v) for v in values]
    except ValueError:
        raise UsageError(usage) from None


def cmd_verify(args: argparse.Namespace) -> int:
    hg = formats.parse_hypergraph(_read(args.hypergraph))
    report = verify_rooted(hg, args.r)
    _emit(
        {
            "rooted": report.ok,
            "r": report.r,
            "max_load": report.max_load,
            "pair": list(report.pair) if report.pair else None,
            "offending_edges": [list(e) for e in report.offending_edges],
        }
    )
    return EXIT_OK if report.ok else EXIT_FALSE


def _params(args: argparse.Namespace) -> Params:
    return Params(args.eps, args.s, args.t, args.N, tau=args.tau, z=args.z)


def cmd_contain(args: argparse.Namespace) -> int:
    hg = formats.parse_hypergraph(_read(args.hypergraph))
    independent = formats.parse_vertex_set(_read(args.iset))
    params = _params(args)
    if args.iterate:
        record = iterate_containers(hg, independent, params, args.mode, args.relaxed)
        failures = [f for lv in record.levels for f in lv.invariant_failures] + record.fingerprint_bound_failures()
        payload = record.to_dict()
        summary = f"{record.iterations} level(s), |C|={len(record.container)}, status={record.status}"
    else:
        run = run_container(hg, independent, params, args.mode, args.relaxed)
        failures = run.invariant_failures
        payload = run.to_dict()
        summary = f"|C|={len(run.C)} |T|={len(run.T)} |T'|={len(run.T_prime)} stop=Phase {run.stop_phase}"
    if args.json:
        _emit(payload)
    else:
        print(summary)
    for failure in failures:
        print(f"invariant failed: {failure}", file=sys.stderr)
    return EXIT_FALSE if failures else EXIT_OK


def _override(params: Params | None, args: argparse.Namespace) -> Params:
    """Stored params with any command-line flags applied on top."""
    given = {k: getattr(args, k) for k in ("eps", "s", "t", "N", "tau", "z") if getattr(args, k) is not None}
    if params is None:
        missing = {"eps", "s", "t", "N"} - set(given)
        if missing:
            raise UsageError(f"fingerprints carry no params; pass --{' --'.join(sorted(missing))}")
        return Params(given["eps"], given["s"], given["t"], given["N"], tau=given.get("tau"), z=given.get("z"))
    if not given:
        return params
    data = params.to_dict()
    data.update({k: str(v) for k, v in given.items()})
    # tau and z are derived unless pinned, so drop stored values the flags invalidate
    for key in ("tau", "z"):
        if key not in given and any(k in given for k in ("eps", "s", "t")):
            data[key] = None
    return Params.from_dict(data)


def cmd_reconstruct(args: argparse.Namespace) -> int:
    hg = formats.parse_hypergraph(_read(args.hypergraph))
    try:
        data = json.loads(_read(args.fingerprints))
    except json.JSONDecodeError as exc:
        raise UsageError(f"fingerprint file is not JSON: {exc}") from exc
    if "levels" in data:
        record = ContainerRecord.from_dict(data)
        prints = [(lv.T, lv.T_prime) for lv in record.levels]
        mode = args.mode or record.mode
        container = reconstruct_record(hg, prints, _override(record.params, args), mode)
    else:
        if "T" not in data or "T_prime" not in data:
            raise UsageError("fingerprint JSON needs 'T' and 'T_prime' (or 'levels')")
        stored = Params.from_dict(data["params"]) if "params" in data else None
        mode = args.mode or data.get("mode", "exact")
        container = reconstruct(hg, data["T"], data["T_prime"], _override(stored, args), mode)
    _emit({"C": sorted(container)})
    return EXIT_OK


def cmd_census(args: argparse.Namespace) -> int:
    alpha = count_union_free(args.n, threads=args.threads)
    via_hg = count_union_free_via_hypergraph(args.n) if args.n >= 1 else alpha
    _emit({"n": args.n, "alpha": alpha, "independent_sets": via_hg, "agree": alpha == via_hg})
    return EXIT_OK if alpha == via_hg else EXIT_FALSE


def cmd_spectra(args: argparse.Namespace) -> int:
    stats = KneserStats.of(args.m, args.k)
    lam = kneser_min_eigenvalue(args.m, args.k)
    _emit(
        {
            "m": args.m,
            "k": args.k,
            "N": stats.N,
            "D": stats.D,
            "lambda_formula": stats.lambda_formula,
            "lambda_computed": round(lam, 9),
            "match": abs(lam - stats.lambda_formula) <= 1e-6,
        }
    )
    return EXIT_OK if abs(lam - stats.lambda_formula) <= 1e-6 else EXIT_FALSE


def cmd_bounds(args: argparse.Namespace) -> int:
    report = alpha_bounds(args.n, args.eps)
    payload = report.to_dict()
    if args.crossover:
        payload["crossover_count"] = str(crossover_n(args.eps, "count"))
        payload["crossover_theorem"] = str(crossover_n(args.eps, "theorem"))
    _emit(payload)
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    n, family = formats.parse_family(_read(args.family))
    if n != args.n:
        raise UsageError(f"family file is over P({n}), not P({args.n})")
    audit = audit_counting_identity(family, n, delta=args.delta, include_empty=not args.exclude_empty)
    _emit(audit.to_dict())
    return EXIT_OK if audit.passed else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rooted-containers", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a hypergraph or graph file")
    p.add_argument("kind", choices=["union", "kneser", "synthetic"])
    p.add_argument("values", nargs="*")
    p.add_argument("-o", "--out")
    p.add_argument("--seed", type=int, default=0, help="seed for synthetic instances (default 0)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check rootedness of a hypergraph file")
    p.add_argument("hypergraph")
    p.add_argument("--r", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    def add_params(q: argparse.ArgumentParser, required: bool = True) -> None:
        for name in ("eps", "s", "t", "N"):
            q.add_argument(f"--{name}", required=required, default=None)
        q.add_argument("--tau", default=None)
        q.add_argument("--z", default=None)

    p = sub.add_parser("contain", help="run the container algorithm")
    p.add_argument("hypergraph")
    p.add_argument("iset")
    add_params(p)
    p.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    p.add_argument("--relaxed", action="store_true")
    p.add_argument("--iterate", action="store_true", help="iterate levels until the container is small")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_contain)

    p = sub.add_parser("reconstruct", help="rebuild a container from emitted fingerprints")
    p.add_argument("hypergraph")
    p.add_argument("fingerprints")
    add_params(p, required=False)
    p.add_argument("--mode", choices=["exact", "greedy"], default=None, help="defaults to the mode stored in the file")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("census", help="exact alpha(n) for n <= 4")
    p.add_argument("n", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("spectra", help="Kneser graph regularity and minimum eigenvalue")
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("bounds", help="evaluate the alpha(n) bound chain at n")
    p.add_argument("n", type=int)
    p.add_argument("eps", type=float)
    p.add_argument("--crossover", action="store_true", help="also report the first n where the chain holds")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("audit", help="permutation counting audit for a family file")
    p.add_argument("n", type=int)
    p.add_argument("family")
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--exclude-empty", action="store_true")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, formats.FormatError, NotIndependentError, ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

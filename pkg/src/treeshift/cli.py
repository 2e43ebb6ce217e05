"""Command-line front end.

Exit codes: 0 all checks passed, 1 at least one failed record, 2 input
rejected (bad arguments, unreadable tree, star complement), 3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import DEFAULT_ALPHA_GRID, ConfigError, RunConfig, parse_alpha_grid, parse_n_range
from .reports import reports_to_csv, reports_to_json
from .spectral import DISTANCE, SIGNLESS_LAPLACIAN, build_matrix, d_alpha, spectral_radius
from .tree_core import (
    N_MAX_DEFAULT,
    DisconnectedComplementError,
    TreeError,
    canonical_code,
    enumerate_trees,
    metrics,
    read_edge_list,
    tree_to_json,
)
from .verify import CAMPAIGNS, build_poset, identity_mismatches, run_campaign

log = logging.getLogger("treeshift")

EXIT_OK, EXIT_FAILED, EXIT_REJECTED, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _single_n(text: str, lo: int) -> int:
    a, b = parse_n_range(text)
    if a != b:
        raise UsageError(f"expected a single order, got {text!r}")
    if not lo <= a <= N_MAX_DEFAULT:
        raise UsageError(f"n must lie in [{lo}, {N_MAX_DEFAULT}], got {a}")
    return a


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def cmd_enumerate(args) -> int:
    n = _single_n(args.n, 1)
    trees = enumerate_trees(n)
    _write("".join(tree_to_json(t) + "\n" for t in trees), args.out)
    log.info("wrote %d trees of order %d", len(trees), n)
    return EXIT_OK


def cmd_inspect(args) -> int:
    alpha_grid = parse_alpha_grid(args.alpha) if args.alpha else DEFAULT_ALPHA_GRID
    RunConfig(alpha_grid=alpha_grid)
    t = read_edge_list(args.tree_file)
    m = metrics(t)
    print(f"n: {t.n}")
    print(f"code: {canonical_code(t).hex()}")
    print(f"diameter: {m.diameter}")
    print(f"pendants: {' '.join(map(str, m.pendant_vertices))}")
    try:
        lam = spectral_radius(build_matrix(t, DISTANCE)).radius
    except DisconnectedComplementError:
        print("complement disconnected")
        return EXIT_REJECTED
    print(f"lambda1: {lam:.12f}")
    print(f"mu1: {spectral_radius(build_matrix(t, SIGNLESS_LAPLACIAN)).radius:.12f}")
    for a in alpha_grid:
        print(f"rho({a:g}): {spectral_radius(build_matrix(t, d_alpha(a))).radius:.12f}")
    print(f"identity A+J-I holds: {'no' if identity_mismatches(t) else 'yes'}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = RunConfig(
        n_range=parse_n_range(args.n),
        alpha_grid=parse_alpha_grid(args.alpha) if args.alpha else DEFAULT_ALPHA_GRID,
        tol=args.tol,
        workers=args.workers,
        output_path=Path(args.out) if args.out else None,
        output_format=args.format,
    )
    names = CAMPAIGNS if args.selector == "all" else (args.selector,)
    reports = []
    for name in names:
        for n in cfg.orders:
            rep = run_campaign(name, n, cfg.alpha_grid, cfg.tol, cfg.workers)
            if rep is None:
                continue
            reports.append(rep)
            status = "ok" if rep.passed else f"FAILED ({len(rep.failures)} records)"
            margins = ", ".join(f"{k}={v:.3g}" for k, v in rep.min_margin.items())
            log.info("%-14s n=%-2d records=%-6d %s %s", name, n, len(rep.records), status, margins)
    text = reports_to_csv(reports) if cfg.output_format == "csv" else reports_to_json(reports)
    if cfg.output_path is not None:
        _write(text, str(cfg.output_path))
    failed = sum(len(r.failures) for r in reports)
    print(f"{len(reports)} reports, {sum(len(r.records) for r in reports)} records, {failed} failed")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_poset(args) -> int:
    n = _single_n(args.n, 4)
    poset = build_poset(n)
    if args.out:
        _write(poset.to_dot(), args.out)
    print(f"n={n} nodes={len(poset.nodes)} edges={len(poset.edges)}")
    print("sources: " + " ".join(c.hex() for c in poset.sources()))
    print("sinks: " + " ".join(c.hex() for c in poset.sinks()))
    print(f"path is unique source: {poset.sources() == [poset.path_code]}")
    print(f"star is unique sink: {poset.sinks() == [poset.star_code]}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treeshift", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="write one tree per isomorphism class as JSONL")
    e.add_argument("--n", required=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_enumerate)

    i = sub.add_parser("inspect", help="metrics and complement spectral radii of one tree")
    i.add_argument("tree_file")
    i.add_argument("--alpha")
    i.set_defaults(func=cmd_inspect)

    v = sub.add_parser("verify", help="run verification campaigns")
    v.add_argument("selector", choices=CAMPAIGNS + ("all",))
    v.add_argument("--n", default="5..10")
    v.add_argument("--alpha")
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("poset", help="export the proper-shift poset as DOT")
    q.add_argument("--n", required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_poset)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        parser.error(str(exc))
    except (TreeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

"""``symvenn`` command line: search, validate, render, dual, info, canon.

Exit codes: 0 success or valid, 1 invalid diagram, 2 usage or configuration
error, 3 I/O error.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .artifacts import LayoutOptions, census_report, export_dual, render_svg
from .core import (
    AlphaError,
    ClusterForm,
    OrderError,
    as_order,
    foata_normal_form,
    format_sequence,
    k_point_table,
    parse_sequence,
)
from .search import (
    ALL_PRUNES,
    EMPTY_ALPHA,
    CheckpointError,
    SearchConfig,
    SearchConfigError,
    parse_unit,
    read_alpha_file,
    search,
    write_results,
)
from .validate import (
    InvalidDiagramError,
    validate_full,
    validate_symmetric,
)

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"symvenn: {msg}", file=sys.stderr)


def _alpha(text: str) -> tuple[int, ...]:
    if text.strip() in ("", EMPTY_ALPHA):
        return ()
    return parse_sequence(text)


def _diagram(args) -> ClusterForm | tuple[int, ...]:
    """The diagram named on the command line: a cluster form or a raw sigma."""
    order = as_order(args.n)
    if getattr(args, "sigma", None) is not None:
        return parse_sequence(args.sigma)
    if args.alpha is None:
        raise UsageError("an alpha is required (--alpha, or --sigma for a raw sequence)")
    return ClusterForm(order, _alpha(args.alpha))


def _add_diagram_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("-n", type=int, required=True, help="number of curves (odd prime)")
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--alpha", help="free half as CSV ('-' for the empty one)")
    src.add_argument("--sigma", help="raw cluster sequence as CSV")


def cmd_search(args) -> int:
    prunes = ALL_PRUNES if args.prune is None else frozenset(args.prune)
    config = SearchConfig(
        n=args.n,
        limit=args.limit,
        budget_ms=args.budget,
        prefix=_alpha(args.prefix) if args.prefix else (),
        split_depth=args.split_depth,
        unit=parse_unit(args.unit) if args.unit else None,
        threads=args.threads,
        checkpoint_path=args.checkpoint,
        prunes=prunes,
    )

    def show(alpha):
        print(format_sequence(alpha) or EMPTY_ALPHA, flush=True)

    outcome = search(config, show)
    st = outcome.stats
    if args.out:
        write_results(args.out, outcome.alphas, st, config.n)
    pruned = ", ".join(f"{k}={v}" for k, v in sorted(st.prunes_by_rule.items()))
    _err(
        f"n={config.n} found={st.valid_count} nodes={st.nodes_visited} "
        f"elapsed_ms={st.elapsed_ms} complete={st.complete} pruned[{pruned}]"
    )
    return EXIT_OK


def cmd_validate(args) -> int:
    order = as_order(args.n)
    if args.alpha_file:
        items = [ClusterForm(order, a) for a in read_alpha_file(args.alpha_file)]
        if not items:
            raise UsageError(f"{args.alpha_file}: no alpha lines")
    else:
        items = [_diagram(args)]
    all_valid = True
    for item in items:
        label = format_sequence(item.alpha if isinstance(item, ClusterForm) else item)
        full = validate_full(item, order.n)
        if args.oracle:
            report = full
        else:
            report = validate_symmetric(item, order.n)
            if report.valid != full.valid:
                _err(f"validators disagree on {label}: {report.describe()} vs {full.describe()}")
                return EXIT_INVALID
        print(f"{label or EMPTY_ALPHA}: {report.describe()}")
        all_valid &= report.valid
    return EXIT_OK if all_valid else EXIT_INVALID


def cmd_render(args) -> int:
    opts = LayoutOptions(
        mode=args.layout,
        size=args.size,
        smoothing=args.smoothing,
        shade_by_cardinality=args.shade,
    )
    svg = render_svg(_diagram(args), opts, args.n)
    with open(args.output, "w", newline="\n") as fh:
        fh.write(svg)
    return EXIT_OK


def cmd_dual(args) -> int:
    text = export_dual(_diagram(args), args.format, args.n)
    with open(args.output, "w", newline="\n") as fh:
        fh.write(text)
    return EXIT_OK


def cmd_info(args) -> int:
    order = as_order(args.n)
    table = k_point_table(order)
    print(f"n = {order.n}")
    print(f"cluster length = {order.cluster_length}")
    print(f"alpha length = {order.alpha_length}")
    print("k  R_k  alpha_count")
    for row in table.rows:
        print(f"{row.k:<2} {row.r:<4} {row.alpha_count}")
    counts = table.alpha_counts()
    print("alpha value counts: " + (", ".join(f"{k}:{v}" for k, v in counts.items()) or "none"))
    if args.alpha is None and args.sigma is None:
        if args.report:
            raise UsageError("--report needs a diagram (--alpha or --sigma)")
        return EXIT_OK
    report = census_report(_diagram(args), order.n)
    print(f"crosscuts = {report.crosscut_count}")
    print(f"crosscut symmetric = {str(report.crosscut_symmetric).lower()}")
    print(f"polar symmetric = {str(report.polar_symmetric).lower()}")
    if args.report:
        from .report import write_report

        for path in write_report(report, args.report):
            _err(f"wrote {path}")
    return EXIT_OK


def cmd_canon(args) -> int:
    print(format_sequence(foata_normal_form(parse_sequence(args.seq))))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symvenn",
        description="Simple symmetric Venn diagrams from crosscut cluster sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="enumerate valid free halves")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--budget", type=int, metavar="MS", help="wall-clock budget in milliseconds")
    p.add_argument("--prefix", help="fixed leading alpha values (CSV)")
    p.add_argument("--split-depth", type=int)
    p.add_argument("--unit", metavar="I/J", help="only work units with index = I mod J")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--checkpoint", metavar="FILE")
    p.add_argument("--out", metavar="FILE", help="sorted results plus FILE.json summary")
    p.add_argument(
        "--prune",
        action="append",
        choices=sorted(ALL_PRUNES),
        help="enable only the named prune rules (repeatable; default all)",
    )
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("validate", help="check one or more diagrams")
    p.add_argument("-n", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--alpha")
    src.add_argument("--sigma")
    src.add_argument("--alpha-file", metavar="FILE")
    p.add_argument("--oracle", action="store_true", help="use only the full-sweep validator")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("render", help="write an SVG drawing")
    _add_diagram_args(p)
    p.add_argument("--layout", choices=("radial", "cylinder", "cylindrical"), default="radial")
    p.add_argument("--shade", action="store_true", help="fill faces by cardinality")
    p.add_argument("--smoothing", choices=("polyline", "curve"), default="polyline")
    p.add_argument("--size", type=float, default=800.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("dual", help="export the dual graph")
    _add_diagram_args(p)
    p.add_argument("--format", choices=("dot", "edges"), default="dot")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("info", help="lengths, k-point table and symmetry flags")
    _add_diagram_args(p, required=False)
    p.add_argument("--report", metavar="DIR", help="write census.csv and census.png")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("canon", help="lexicographically least trace-equivalent form")
    p.add_argument("--seq", required=True)
    p.set_defaults(func=cmd_canon)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except InvalidDiagramError as exc:
        _err(str(exc))
        return EXIT_INVALID
    except (OrderError, AlphaError, SearchConfigError, CheckpointError, UsageError) as exc:
        _err(str(exc))
        return EXIT_USAGE
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

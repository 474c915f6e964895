from argparse import Namespace, ArgumentParser
from pathlib import Path

from src.cmds.options import add_solver_flags, prepare, solver_overrides, solver_settings
from src.spectral.bounds import graph_bounds, sweep_bounds
from src.types.metric_graph import load_graph
from src.types.scan_report import BoundsReport
from src.types.sdp import SdpStatus
from src.types.truncated_triple import load_triple
from src.util.errors import Err, ExitCode, ForgeError
from src.util.gnuplot import bounds_script, write_data, write_script
from src.util.json_util import save_versioned, write_rows_csv
from src.util.path import sibling_path

HEADER = ["i", "j", "geodesic", "spectral", "lower", "degenerate"]


def make_parser(parser: ArgumentParser):
    parser.add_argument(
        "graph", help="Metric graph JSON (omit with --sweep)", type=Path, nargs="?", default=None
    )
    parser.add_argument(
        "--sweep",
        help="Triple JSON: use heat states along a great circle instead of a graph",
        type=Path,
        default=None,
    )
    parser.add_argument("--samples", help="Sweep points after the base point", type=int, default=None)
    add_solver_flags(parser)
    parser.add_argument("-o", "--out", help="Output CSV", type=Path, default=Path("bounds.csv"))
    parser.set_defaults(function=bounds)


def bounds(args: Namespace, parser: ArgumentParser):
    overrides = {"bounds.samples": args.samples}
    overrides.update(solver_overrides(args))
    config, _ = prepare(args, "bounds", overrides)
    if (args.graph is None) == (args.sweep is None):
        raise ForgeError(Err.INVALID_ARGUMENT, ["give either a graph or --sweep TRIPLE"])
    if args.sweep is not None:
        t = load_triple(args.sweep)
        rows, statuses = sweep_bounds(
            t,
            int(config["bounds"]["samples"]),
            int(config["bounds"]["spinor_component"]),
            solver_settings(config),
        )
        source = str(args.sweep)
    else:
        rows, statuses = graph_bounds(load_graph(args.graph)), []
        source = str(args.graph)

    table = [[r.i, r.j, r.geodesic, r.spectral, r.lower, int(r.degenerate)] for r in rows]
    write_rows_csv(args.out, HEADER, [[repr(x) for x in row] for row in table])
    data = sibling_path(args.out, ".dat")
    write_data(data, HEADER, [r for r in table if not r[5]])
    write_script(sibling_path(args.out, ".gp"), bounds_script(data))

    flagged = sum(1 for r in rows if r.degenerate)
    converged = all(s == SdpStatus.OPTIMAL for s in statuses)
    report = BoundsReport(source, len(rows), flagged, [s.name for s in statuses], converged)
    save_versioned(sibling_path(args.out, ".json", "report"), report, config)

    below = sum(1 for r in rows if not r.degenerate and r.spectral - r.geodesic <= 0)
    print(f"{len(rows)} pairs, {flagged} with a degenerate barycenter")
    print(f"{below} non degenerate pairs with spectral distance <= geodesic distance")
    if not converged:
        unsolved = sum(1 for s in statuses if s != SdpStatus.OPTIMAL)
        print(f"{unsolved} distances did not reach the solver tolerance")
        return ExitCode.NOT_CONVERGED
    return ExitCode.OK

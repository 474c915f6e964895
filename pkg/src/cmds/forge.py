import logging
from argparse import Namespace, ArgumentParser
from pathlib import Path

from src.cmds.options import add_solver_flags, add_threads_flag, prepare, solver_overrides
from src.spectral.pointforge import forge as run_forge
from src.types.forge_config import ForgeConfig
from src.types.metric_graph import save_graph
from src.types.truncated_triple import load_triple
from src.util.errors import ExitCode
from src.util.json_util import save_versioned, write_matrix_csv
from src.util.path import sibling_path

log = logging.getLogger(__name__)


def make_parser(parser: ArgumentParser):
    parser.add_argument("triple", help="Triple JSON written by 'pointforge build'", type=Path)
    parser.add_argument(
        "-n", "--count", help="Number of states (default: estimated)", type=int, default=None
    )
    parser.add_argument("--g-e", help="Repulsion coupling g_e", type=float, default=None)
    parser.add_argument("--seed", help="Seed of the first state", type=int, default=None)
    parser.add_argument(
        "--spectral-dim", help="Dimension used by the count estimate", type=int, default=None
    )
    parser.add_argument("--volume", help="Volume used by the count estimate", type=float, default=None)
    add_solver_flags(parser)
    add_threads_flag(parser)
    parser.add_argument(
        "-o", "--out", help="Output metric graph JSON", type=Path, default=Path("graph.json")
    )
    parser.set_defaults(function=forge)


def forge(args: Namespace, parser: ArgumentParser):
    overrides = {
        "forge.target_count_override": args.count,
        "forge.seed": args.seed,
        "forge.spectral_dim": args.spectral_dim,
        "forge.volume": args.volume,
        "localization.g_e": args.g_e,
    }
    overrides.update(solver_overrides(args))
    config, threads = prepare(args, "forge", overrides)
    t = load_triple(args.triple)
    cfg = ForgeConfig.from_config(config, threads)

    graph, report = run_forge(t, cfg)

    save_graph(graph, args.out, config)
    save_versioned(sibling_path(args.out, ".json", "report"), report, config)
    write_matrix_csv(sibling_path(args.out, ".csv", "distances"), graph.distance_array())
    print(f"Forged {graph.size} states, {len(report.pairs)} distances -> {args.out}")
    if report.metric_violations:
        print(f"{len(report.metric_violations)} metric axiom violations, see the report")
    if not report.converged:
        print("Some minimizations or distance solves did not converge")
        return ExitCode.NOT_CONVERGED
    return ExitCode.OK

import dataclasses
import logging
from argparse import Namespace, ArgumentParser
from pathlib import Path

from src.cmds.options import add_solver_flags, add_threads_flag, prepare, solver_overrides, solver_settings
from src.spectral.connes import check_metric_axioms, distance_matrix_detailed
from src.types.metric_graph import load_graph, save_graph
from src.types.sdp import SdpStatus
from src.types.truncated_triple import load_triple
from src.util.errors import Err, ExitCode, ForgeError
from src.util.json_util import write_matrix_csv
from src.util.path import sibling_path

log = logging.getLogger(__name__)


def make_parser(parser: ArgumentParser):
    parser.add_argument("graph", help="Metric graph JSON whose states are reused", type=Path)
    parser.add_argument(
        "triple", help="Triple JSON the distances are computed in (same dim H)", type=Path
    )
    add_solver_flags(parser)
    add_threads_flag(parser)
    parser.add_argument(
        "-o", "--out", help="Output metric graph JSON", type=Path, default=Path("graph.json")
    )
    parser.set_defaults(function=distances)


def distances(args: Namespace, parser: ArgumentParser):
    config, threads = prepare(args, "distances", solver_overrides(args))
    graph = load_graph(args.graph)
    t = load_triple(args.triple)
    if graph.size > 0 and graph.states[0].dim != t.dim:
        raise ForgeError(
            Err.DIMENSION_MISMATCH, [f"graph states have dim {graph.states[0].dim}, triple {t.dim}"]
        )
    matrix, solutions = distance_matrix_detailed(t, graph.states, solver_settings(config), threads)
    violations = check_metric_axioms(matrix)
    for violation in violations:
        log.warning(f"Metric axiom violated: {violation}")

    updated = dataclasses.replace(
        graph,
        triple_name=t.name,
        distances=[[float(x) for x in row] for row in matrix],
    )
    save_graph(updated, args.out, config, {"metric_violations": violations})
    write_matrix_csv(sibling_path(args.out, ".csv", "distances"), matrix)
    print(f"Recomputed {len(solutions)} distances on {t.name} -> {args.out}")
    if any(s.status != SdpStatus.OPTIMAL for s in solutions.values()):
        return ExitCode.NOT_CONVERGED
    return ExitCode.OK

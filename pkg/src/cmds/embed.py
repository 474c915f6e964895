import logging
from argparse import Namespace, ArgumentParser
from pathlib import Path

from src.cmds.options import prepare
from src.spectral.mds_embed import locality_weights, radii_statistics, smacof, uniform_weights
from src.types.metric_graph import load_graph
from src.types.stress_problem import StressProblem
from src.util.errors import Err, ExitCode, ForgeError
from src.util.gnuplot import scatter_3d_script, write_data, write_script
from src.util.json_util import save_versioned, write_matrix_csv
from src.util.path import sibling_path

log = logging.getLogger(__name__)

WEIGHT_FAMILIES = ["locality", "uniform"]


def make_parser(parser: ArgumentParser):
    parser.add_argument("graph", help="Metric graph JSON written by 'pointforge forge'", type=Path)
    parser.add_argument("--dim", help="Target dimension n", type=int, default=None)
    parser.add_argument(
        "--weights", help=f"Weight family, one of {WEIGHT_FAMILIES}", type=str, default=None
    )
    parser.add_argument("--tol", help="Relative stress decrease to stop at", type=float, default=None)
    parser.add_argument("--max-iter", help="SMACOF iteration cap", type=int, default=None)
    parser.add_argument("--seed", help="Seed of the random start fallback", type=int, default=None)
    parser.add_argument(
        "-o", "--out", help="Output embedding JSON", type=Path, default=Path("embedding.json")
    )
    parser.set_defaults(function=embed)


def embed(args: Namespace, parser: ArgumentParser):
    config, _ = prepare(
        args,
        "embed",
        {
            "embed.dim": args.dim,
            "embed.weights": args.weights,
            "embed.tol": args.tol,
            "embed.max_iter": args.max_iter,
            "embed.seed": args.seed,
        },
    )
    embed_config = config["embed"]
    graph = load_graph(args.graph)
    distances = graph.distance_array()
    family = embed_config["weights"]
    if family == "locality":
        weights = locality_weights(distances, graph.size)
    elif family == "uniform":
        weights = uniform_weights(graph.size)
    else:
        raise ForgeError(Err.INVALID_ARGUMENT, [f"weight family {family} not in {WEIGHT_FAMILIES}"])

    problem = StressProblem(distances, weights, int(embed_config["dim"]))
    result = smacof(
        problem,
        tol=float(embed_config["tol"]),
        max_iter=int(embed_config["max_iter"]),
        rng_seed=int(embed_config["seed"]),
    )
    radii = radii_statistics(result.coords)

    save_versioned(args.out, result, config, {"radii": radii.to_json_dict(), "graph": str(args.graph)})
    coords_csv = sibling_path(args.out, ".csv", "coords")
    write_matrix_csv(coords_csv, result.coords, [f"x{i}" for i in range(problem.target_dim)])
    data = sibling_path(args.out, ".dat", "coords")
    write_data(data, [f"x{i}" for i in range(problem.target_dim)] + ["radius"], [
        list(row) + [r] for row, r in zip(result.coords, radii.radii)
    ])
    if problem.target_dim == 3:
        write_script(sibling_path(args.out, ".gp"), scatter_3d_script(data, graph.triple_name))

    print(f"stress {result.stress:.6g} after {result.iterations} iterations")
    print(
        f"radii: mean {radii.mean:.4f}, min {radii.minimum:.4f}, max {radii.maximum:.4f}, "
        f"std {radii.std:.4f}"
    )
    if not result.converged:
        return ExitCode.NOT_CONVERGED
    return ExitCode.OK

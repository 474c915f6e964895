from argparse import ArgumentParser, Namespace
from typing import Any, Dict, Tuple

from src.types.solver_settings import SolverSettings
from src.util.config import apply_overrides, load_config, resolve_threads
from src.util.logging import initialize_logging


def add_threads_flag(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--threads",
        help="Worker threads for the parallel phases (overrides POINTFORGE_THREADS)",
        type=int,
        default=None,
    )


def add_solver_flags(parser: ArgumentParser) -> None:
    parser.add_argument("--tol", help="SDP relative tolerance", type=float, default=None)
    parser.add_argument("--max-iter", help="SDP iteration cap per pair", type=int, default=None)
    parser.add_argument(
        "--both-orientations",
        help="Solve max b.c and max -b.c and keep the larger",
        action="store_true",
        default=None,
    )


def solver_overrides(args: Namespace) -> Dict[str, Any]:
    return {
        "solver.tol": args.tol,
        "solver.max_iter": args.max_iter,
        "solver.both_orientations": args.both_orientations,
    }


def prepare(args: Namespace, command_name: str, overrides: Dict[str, Any]) -> Tuple[Dict, int]:
    """
    Loads the config under the root, applies command line overrides, starts logging
    and resolves the thread count. The returned config is the one embedded in outputs.
    """
    config = apply_overrides(load_config(args.root_path, "config.yaml"), overrides)
    threads = resolve_threads(config, getattr(args, "threads", None))
    config["threads"] = threads
    initialize_logging(command_name, config["logging"], args.root_path)
    return config, threads


def solver_settings(config: Dict) -> SolverSettings:
    return SolverSettings.from_config(config["solver"])

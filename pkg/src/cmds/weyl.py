from argparse import Namespace, ArgumentParser
from pathlib import Path

from src.cmds.options import prepare
from src.spectral.geometries import weyl_estimate
from src.types.cutoff_convention import Geometry
from src.types.truncated_triple import load_triple


def make_parser(parser: ArgumentParser):
    parser.add_argument("triple", help="Triple JSON", type=Path)
    parser.add_argument(
        "--rank-s", help="Rank of the spinor bundle (2 on the sphere)", type=int, default=None
    )
    parser.set_defaults(function=weyl)


def weyl(args: Namespace, parser: ArgumentParser):
    config, _ = prepare(args, "weyl", {"forge.rank_s": args.rank_s})
    t = load_triple(args.triple)
    rank_s = int(config["forge"]["rank_s"])
    if args.rank_s is None and t.geometry == Geometry.CIRCLE:
        rank_s = 1
    slope, volume = weyl_estimate(t.dirac_eigenvalues, rank_s)
    print(f"{t.name}: dimension {slope:.4f} (rounds to {max(int(round(slope)), 1)}), volume {volume:.6g}")
    return 0

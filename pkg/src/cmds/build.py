import logging
from argparse import Namespace, ArgumentParser
from pathlib import Path

from src.cmds.options import prepare
from src.spectral.geometries import build_triple
from src.types.cutoff_convention import CutoffConvention, Geometry
from src.types.truncated_triple import save_triple

log = logging.getLogger(__name__)


def make_parser(parser: ArgumentParser):
    parser.add_argument(
        "geometry", help="One of circle, sphere, sphere-dc", type=str,
    )
    parser.add_argument("--cutoff", help="Spectral cutoff Lambda", type=float, required=True)
    parser.add_argument(
        "--c", help="Coupling of the D_c perturbation (sphere-dc only)", type=float, default=None,
    )
    parser.add_argument(
        "--convention",
        help="Sphere shell convention: paper (one extra shell) or strict",
        type=str,
        default=None,
    )
    parser.add_argument(
        "--algebra-degree",
        help="Largest l of the algebra basis harmonics (sphere, default 2 floor(cutoff))",
        type=int,
        default=None,
    )
    parser.add_argument("-o", "--out", help="Output triple JSON", type=Path, default=None)
    parser.set_defaults(function=build)


def build(args: Namespace, parser: ArgumentParser):
    config, _ = prepare(
        args,
        "build",
        {"build.convention": args.convention, "build.dc_coupling": args.c},
    )
    geometry = Geometry.from_flag(args.geometry)
    convention = CutoffConvention.from_flag(config["build"]["convention"])
    t = build_triple(
        geometry,
        args.cutoff,
        convention,
        float(config["build"]["dc_coupling"]),
        args.algebra_degree,
    )
    print(f"{t.name}: dim H = {t.dim}, algebra dimension = {len(t.algebra_basis)}")
    if args.out is not None:
        save_triple(t, args.out, config)
        log.info(f"Saved triple to {args.out}")
    return 0

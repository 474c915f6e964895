import math
from argparse import Namespace, ArgumentParser
from pathlib import Path

from src.cmds.options import prepare
from src.spectral.localization import fit_log_scaling, heat_dispersion_scan
from src.types.cutoff_convention import CutoffConvention, Geometry
from src.types.scan_report import DispersionScanReport
from src.util.errors import ExitCode
from src.util.gnuplot import dispersion_fit_script, write_data, write_script
from src.util.json_util import save_versioned, write_rows_csv
from src.util.path import sibling_path


def make_parser(parser: ArgumentParser):
    parser.add_argument(
        "--geometry", help="circle or sphere", type=str, default="sphere",
    )
    parser.add_argument(
        "--cutoffs", help="Cutoffs to scan, all > 1", type=float, nargs="+", default=None
    )
    parser.add_argument("--convention", help="paper or strict", type=str, default=None)
    parser.add_argument(
        "-o", "--out", help="Output CSV", type=Path, default=Path("dispersion.csv")
    )
    parser.set_defaults(function=dispersion_scan)


def dispersion_scan(args: Namespace, parser: ArgumentParser):
    config, _ = prepare(
        args,
        "dispersion_scan",
        {"dispersion_scan.cutoffs": args.cutoffs, "build.convention": args.convention},
    )
    geometry = Geometry.from_flag(args.geometry)
    convention = CutoffConvention.from_flag(config["build"]["convention"])
    cutoffs = [float(c) for c in config["dispersion_scan"]["cutoffs"]]
    scan = heat_dispersion_scan(
        geometry, cutoffs, convention, int(config["dispersion_scan"]["spinor_component"])
    )
    a, max_residual = fit_log_scaling([c for c, _ in scan], [eta for _, eta in scan])

    rows = [[repr(c), repr(eta), repr(a * math.log(c) / c ** 2)] for c, eta in scan]
    write_rows_csv(args.out, ["cutoff", "eta", "fit"], rows)
    data = sibling_path(args.out, ".dat")
    write_data(data, ["cutoff", "eta", "fit"], [[c, eta, a * math.log(c) / c ** 2] for c, eta in scan])
    write_script(sibling_path(args.out, ".gp"), dispersion_fit_script(data, a))

    etas = [eta for _, eta in sorted(scan)]
    decreasing = all(later < earlier for earlier, later in zip(etas, etas[1:]))
    report = DispersionScanReport(
        geometry.value,
        [c for c, _ in scan],
        [eta for _, eta in scan],
        a,
        max_residual,
        decreasing,
    )
    save_versioned(sibling_path(args.out, ".json", "report"), report, config)

    for c, eta in scan:
        print(f"cutoff {c:g}: eta {eta:.6g}")
    if max_residual is None:
        print(f"fit degenerate (single cutoff): a = {a:.6g}")
    else:
        print(f"fit eta = a log(L)/L^2: a = {a:.6g}, max relative residual {max_residual:.3%}")
    if not decreasing:
        print("dispersion is not strictly decreasing along the scan")
        return ExitCode.NOT_CONVERGED
    return ExitCode.OK

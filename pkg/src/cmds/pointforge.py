import importlib
import logging
import pathlib
from argparse import Namespace, ArgumentParser

from src import __version__
from src.util.default_root import DEFAULT_ROOT_PATH
from src.util.errors import ExitCode, ForgeError, exit_code_for

log = logging.getLogger(__name__)

SUBCOMMANDS = [
    "init",
    "version",
    "build",
    "forge",
    "distances",
    "embed",
    "dispersion_scan",
    "bounds",
    "weyl",
]


def create_parser() -> ArgumentParser:
    parser: ArgumentParser = ArgumentParser(
        description="Point clouds and distances from truncated spectral triples (%s)." % __version__,
        epilog="Try 'pointforge build sphere --cutoff 5 -o s2.json' then 'pointforge forge s2.json'.",
    )

    parser.add_argument(
        "-r",
        "--root-path",
        help="Config file root (defaults to %s)." % DEFAULT_ROOT_PATH,
        type=pathlib.Path,
        default=DEFAULT_ROOT_PATH,
    )

    subparsers = parser.add_subparsers()

    # this magic metaprogramming generalizes:
    #   from src.cmds import version
    #   new_parser = subparsers.add_parser(version)
    #   version.version_parser(new_parser)

    for subcommand in SUBCOMMANDS:
        mod = importlib.import_module("src.cmds.%s" % subcommand)
        mod.make_parser(subparsers.add_parser(subcommand.replace("_", "-")))  # type: ignore

    parser.set_defaults(function=lambda args, parser: parser.print_help())
    return parser


def pointforge(args: Namespace, parser: ArgumentParser) -> int:
    try:
        result = args.function(args, parser)
    except ForgeError as e:
        log.error(f"{e}")
        print(f"error: {e}")
        return exit_code_for(e.code).value
    if isinstance(result, ExitCode):
        return result.value
    return ExitCode.OK.value if result is None else int(result)


def main(argv=None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    return pointforge(args, parser)


if __name__ == "__main__":
    raise SystemExit(main())

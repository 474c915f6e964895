import os
from argparse import Namespace, ArgumentParser
from pathlib import Path

import yaml

from src.util.config import (
    config_path_for_filename,
    create_default_pointforge_config,
    load_config,
    save_config,
)


def make_parser(parser: ArgumentParser):
    parser.set_defaults(function=init)


def init(args: Namespace, parser: ArgumentParser):
    return pointforge_init(args.root_path)


def pointforge_init(root_path: Path) -> int:
    if os.environ.get("POINTFORGE_ROOT", None) is not None:
        print(f"warning, your POINTFORGE_ROOT is set to {os.environ['POINTFORGE_ROOT']}.")

    print(f"PointForge directory {root_path}")
    path = config_path_for_filename(root_path, "config.yaml")
    if path.exists():
        with open(path, "r") as f:
            on_disk = yaml.safe_load(f) or {}
        # keys added by newer versions are filled in, existing values are kept
        merged = load_config(root_path, "config.yaml")
        if merged == on_disk:
            print(f"{root_path} already exists, no action taken")
            return 0
        save_config(root_path, "config.yaml", merged)
        print(f"Added new default keys to {path}")
        return 0

    create_default_pointforge_config(root_path)
    print(f"Wrote {path}")
    return 0

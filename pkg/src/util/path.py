from pathlib import Path
from typing import Union


def sibling_path(path: Union[str, Path], suffix: str, tag: str = "") -> Path:
    """
    Artifact next to an output file, e.g. graph.json -> graph.distances.csv for
    tag="distances", suffix=".csv".
    """
    path = Path(path)
    stem = path.stem if path.suffix else path.name
    name = f"{stem}.{tag}{suffix}" if tag else f"{stem}{suffix}"
    return path.with_name(name)

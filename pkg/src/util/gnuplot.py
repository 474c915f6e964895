from pathlib import Path
from typing import Any, List, Sequence, Union

from src.util.errors import Err, ForgeError


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            f.write(text)
    except OSError as e:
        raise ForgeError(Err.IO_FAILURE, [str(path), str(e)])


def write_data(path: Union[str, Path], header: Sequence[str], rows: List[List[Any]]) -> None:
    """
    Whitespace separated columns with a commented header, readable by gnuplot's
    `plot ... using`.
    """
    lines = ["# " + " ".join(header)]
    for row in rows:
        lines.append(" ".join(repr(float(x)) if not isinstance(x, str) else x for x in row))
    _write(Path(path), "\n".join(lines) + "\n")


def write_script(path: Union[str, Path], commands: List[str]) -> None:
    _write(Path(path), "\n".join(commands) + "\n")


def scatter_3d_script(data_path: Union[str, Path], title: str) -> List[str]:
    return [
        f'set title "{title}"',
        "set view equal xyz",
        "set ticslevel 0",
        f'splot "{Path(data_path).name}" using 1:2:3 with points pointtype 7 notitle',
        "pause -1",
    ]


def dispersion_fit_script(data_path: Union[str, Path], a: float) -> List[str]:
    return [
        'set title "dispersion of heat states"',
        'set xlabel "cutoff"',
        'set ylabel "eta"',
        "set logscale y",
        f"a = {a!r}",
        f'plot "{Path(data_path).name}" using 1:2 with points pointtype 7 title "eta", \\',
        '     a * log(x) / x**2 title "a log(x) / x^2"',
        "pause -1",
    ]


def bounds_script(data_path: Union[str, Path]) -> List[str]:
    return [
        'set title "distance bounds"',
        'set xlabel "geodesic distance of barycenters"',
        'set ylabel "distance"',
        f'plot "{Path(data_path).name}" using 3:4 with linespoints title "spectral distance", \\',
        '     "" using 3:5 with linespoints title "lower bound", \\',
        '     "" using 3:3 with lines title "geodesic"',
        "pause -1",
    ]

import csv
import dataclasses
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from src.util.errors import Err, ForgeError
from src.util.streamable import recurse_jsonify


class EnhancedJSONEncoder(json.JSONEncoder):
    """
    Encodes complex numbers as [re, im] pairs, numpy values as python values, and
    converts all dataclasses to json.
    """

    def default(self, o: Any):
        if dataclasses.is_dataclass(o):
            return o.to_json_dict()
        converted = recurse_jsonify(o)
        if converted is not o:
            return converted
        return super().default(o)


def dict_to_json_str(o: Any, indent: int = None) -> str:
    """
    Converts a python object into json.
    """
    json_str = json.dumps(o, cls=EnhancedJSONEncoder, sort_keys=True, indent=indent)
    return json_str


def write_json(path: Union[str, Path], o: Any) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            f.write(dict_to_json_str(o, indent=1))
    except OSError as e:
        raise ForgeError(Err.IO_FAILURE, [str(path), str(e)])


def read_json(path: Union[str, Path]) -> Dict:
    path = Path(path)
    try:
        with open(path, "r") as f:
            return json.load(f)
    except OSError as e:
        raise ForgeError(Err.IO_FAILURE, [str(path), str(e)])
    except json.JSONDecodeError as e:
        raise ForgeError(Err.MALFORMED_FILE, [str(path), str(e)])


def write_matrix_csv(
    path: Union[str, Path], matrix: np.ndarray, header: Sequence[str] = None
) -> None:
    """
    Row-major CSV with a header row; the header defaults to the column indices.
    """
    matrix = np.asarray(matrix, dtype=float)
    if header is None:
        header = [str(i) for i in range(matrix.shape[1])]
    write_rows_csv(path, list(header), [list(map(repr, row)) for row in matrix.tolist()])


def write_rows_csv(path: Union[str, Path], header: List[str], rows: List[List[Any]]):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            for row in rows:
                writer.writerow(row)
    except OSError as e:
        raise ForgeError(Err.IO_FAILURE, [str(path), str(e)])


def read_matrix_csv(path: Union[str, Path]) -> np.ndarray:
    path = Path(path)
    try:
        with open(path, "r", newline="") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise ForgeError(Err.IO_FAILURE, [str(path), str(e)])
    try:
        return np.array([[float(x) for x in row] for row in rows[1:]])
    except ValueError as e:
        raise ForgeError(Err.MALFORMED_FILE, [str(path), str(e)])


FORMAT_VERSION = 1


def save_versioned(
    path: Union[str, Path], item: Any, config: Dict = None, extra: Dict = None
) -> None:
    """
    Writes a streamable as a JSON object with a format_version field, the resolved
    configuration under "config", and any extra top level entries.
    """
    out = {"format_version": FORMAT_VERSION}
    out.update(item.to_json_dict())
    if config is not None:
        out["config"] = config
    if extra is not None:
        out.update(extra)
    write_json(path, out)


def load_versioned(path: Union[str, Path], klass: Any) -> Any:
    d = read_json(path)
    if not isinstance(d, dict) or "format_version" not in d:
        raise ForgeError(Err.MALFORMED_FILE, [str(path), "no format_version"])
    if d["format_version"] != FORMAT_VERSION:
        raise ForgeError(
            Err.UNSUPPORTED_FORMAT_VERSION, [str(path), d["format_version"]]
        )
    field_names = [f.name for f in dataclasses.fields(klass)]
    try:
        return klass.from_json_dict({k: d[k] for k in field_names if k in d})
    except (ValueError, TypeError, KeyError, IndexError) as e:
        raise ForgeError(Err.MALFORMED_FILE, [str(path), str(e)])

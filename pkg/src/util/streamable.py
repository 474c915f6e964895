from __future__ import annotations

import dataclasses
import pprint
from enum import Enum
from typing import Any, Dict, List, get_type_hints

import numpy as np

from src.util.type_checking import (
    is_type_List,
    is_type_SpecificOptional,
    is_type_Tuple,
    strictdataclass,
)

pp = pprint.PrettyPrinter(indent=1, width=120, compact=True)


def encode_complex(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


def decode_complex(pair: Any) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ValueError(f"Expected a [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def dataclass_from_dict(klass, d):
    """
    Converts a dictionary based on a dataclass, into an instance of that dataclass.
    Recursively goes through lists, optionals, tuples and nested dataclasses. Types
    with a from_json classmethod (such as HermitianMatrix) decode themselves.
    """
    if is_type_SpecificOptional(klass):
        # Type is optional, data is either None, or Any
        if d is None:
            return None
        return dataclass_from_dict(klass.__args__[0], d)
    if dataclasses.is_dataclass(klass):
        # Type is a dataclass, data is a dictionary
        fieldtypes = get_type_hints(klass)
        kwargs = {}
        for f in [field.name for field in dataclasses.fields(klass)]:
            if f not in d:
                raise ValueError(f"Field {f} missing for {klass.__name__}")
            kwargs[f] = dataclass_from_dict(fieldtypes[f], d[f])
        return klass(**kwargs)
    elif is_type_List(klass):
        # Type is a list, data is a list
        return [dataclass_from_dict(klass.__args__[0], item) for item in d]
    elif is_type_Tuple(klass):
        return tuple(
            dataclass_from_dict(inner, item) for inner, item in zip(klass.__args__, d)
        )
    elif hasattr(klass, "from_json"):
        return klass.from_json(d)
    elif isinstance(klass, type) and issubclass(klass, Enum):
        return klass[d]
    elif klass is complex:
        return decode_complex(d)
    else:
        # Type is a primitive, cast with correct class
        return klass(d)


def streamable(cls: Any):
    """
    This is a decorator for class definitions. It applies the strictdataclass decorator,
    which checks all types at construction, and adds the JSON conversion methods of
    Streamable.

    JSON format:
    - Each field is emitted under its own name, recursively.
    - Complex numbers become [re, im] pairs, matrices nested lists of such pairs.
    - Enums are emitted by name.

    Make sure to use the Streamable class as a parent class when using the streamable decorator,
    as it will allow linters to recognize the methods that are added by the decorator. Also,
    use the @dataclass(frozen=True) decorator as well, for linters to recognize constructor
    arguments.
    """

    cls1 = strictdataclass(cls)
    return type(cls.__name__, (cls1, Streamable), {})


class Streamable:
    def __str__(self: Any) -> str:
        return pp.pformat(self.to_json_dict())

    def __repr__(self: Any) -> str:
        return pp.pformat(self.to_json_dict())

    def to_json_dict(self) -> Dict:
        return {
            f.name: recurse_jsonify(getattr(self, f.name))
            for f in dataclasses.fields(self)  # type: ignore
        }

    @classmethod
    def from_json_dict(cls: Any, json_dict: Dict) -> Any:
        return dataclass_from_dict(cls, json_dict)


def recurse_jsonify(d: Any) -> Any:
    """
    Makes matrices and complex numbers into nested lists, enums into their names, and
    numpy scalars into python numbers.
    """
    if isinstance(d, Streamable):
        return d.to_json_dict()
    if hasattr(d, "to_json"):
        return d.to_json()
    if isinstance(d, Enum):
        return d.name
    if isinstance(d, dict):
        return {k: recurse_jsonify(v) for k, v in d.items()}
    if isinstance(d, (list, tuple)):
        return [recurse_jsonify(item) for item in d]
    if isinstance(d, np.ndarray):
        return recurse_jsonify(d.tolist())
    if isinstance(d, (complex, np.complexfloating)):
        return encode_complex(complex(d))
    if isinstance(d, np.floating):
        return float(d)
    if isinstance(d, np.integer):
        return int(d)
    if isinstance(d, np.bool_):
        return bool(d)
    return d

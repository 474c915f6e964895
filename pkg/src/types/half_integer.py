from fractions import Fraction
from typing import Union

from src.util.errors import Err, ForgeError


class HalfInteger:
    """
    Angular momentum label j, stored as the integer 2j so that integer and
    half-integer arithmetic stays exact.
    """

    __slots__ = ("twice_value",)

    def __init__(self, twice_value: int):
        if isinstance(twice_value, bool) or int(twice_value) != twice_value:
            raise ForgeError(Err.INVALID_LABELS, [f"2j must be an integer: {twice_value}"])
        self.twice_value = int(twice_value)

    @classmethod
    def of(cls, value: Union[int, float, Fraction, "HalfInteger"]) -> "HalfInteger":
        if isinstance(value, HalfInteger):
            return value
        twice = Fraction(value) * 2
        if twice.denominator != 1:
            raise ForgeError(Err.INVALID_LABELS, [f"{value} is not a half integer"])
        return cls(int(twice))

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __float__(self) -> float:
        return self.twice_value / 2

    def __add__(self, other: "HalfInteger") -> "HalfInteger":
        return HalfInteger(self.twice_value + HalfInteger.of(other).twice_value)

    __radd__ = __add__

    def __sub__(self, other: "HalfInteger") -> "HalfInteger":
        return HalfInteger(self.twice_value - HalfInteger.of(other).twice_value)

    def __neg__(self) -> "HalfInteger":
        return HalfInteger(-self.twice_value)

    def __abs__(self) -> "HalfInteger":
        return HalfInteger(abs(self.twice_value))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, float, Fraction)):
            return Fraction(self.twice_value, 2) == other
        if not isinstance(other, HalfInteger):
            return NotImplemented
        return self.twice_value == other.twice_value

    def __lt__(self, other: "HalfInteger") -> bool:
        return self.twice_value < HalfInteger.of(other).twice_value

    def __le__(self, other: "HalfInteger") -> bool:
        return self.twice_value <= HalfInteger.of(other).twice_value

    def __hash__(self) -> int:
        return hash(Fraction(self.twice_value, 2))

    def __repr__(self) -> str:
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"

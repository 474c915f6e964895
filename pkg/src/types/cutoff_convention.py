from enum import Enum

from src.util.errors import Err, ForgeError


class CutoffConvention(Enum):
    """
    Which eigenvalue shells of D survive the spectral projection. STRICT_ABS keeps
    |λ| ≤ ⌊Λ⌋. PAPER_S2 keeps one more shell on the sphere, which reproduces the
    published Hilbert space sizes (84 at Λ=5).
    """

    STRICT_ABS = "strict"
    PAPER_S2 = "paper"

    @classmethod
    def from_flag(cls, flag: str) -> "CutoffConvention":
        for member in cls:
            if member.value == flag or member.name == flag:
                return member
        raise ForgeError(Err.INVALID_ARGUMENT, [f"unknown convention {flag}"])


class Geometry(Enum):
    CIRCLE = "circle"
    SPHERE = "sphere"
    SPHERE_DC = "sphere-dc"

    @classmethod
    def from_flag(cls, flag: str) -> "Geometry":
        for member in cls:
            if member.value == flag or member.name == flag:
                return member
        raise ForgeError(Err.UNKNOWN_GEOMETRY, [flag])

    @property
    def is_sphere(self) -> bool:
        return self in (Geometry.SPHERE, Geometry.SPHERE_DC)

from typing import Any, List

import numpy as np

from src.util.errors import Err, ForgeError

HERMITIAN_TOLERANCE = 1e-12


class HermitianMatrix:
    """
    Immutable dense Hermitian matrix. Entries are checked against their conjugate
    transpose at construction and the backing array is read only.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Any, tolerance: float = HERMITIAN_TOLERANCE):
        arr = np.array(entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ForgeError(Err.DIMENSION_MISMATCH, [f"not square: {arr.shape}"])
        defect = float(np.max(np.abs(arr - arr.conj().T)))
        if defect > tolerance:
            raise ForgeError(Err.NOT_HERMITIAN, [f"max |a_ij - conj(a_ji)| = {defect}"])
        arr.setflags(write=False)
        self._entries = arr

    @classmethod
    def identity(cls, dim: int) -> "HermitianMatrix":
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def zeros(cls, dim: int) -> "HermitianMatrix":
        return cls(np.zeros((dim, dim), dtype=complex))

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def expectation(self, v: np.ndarray) -> float:
        if v.shape != (self.dim,):
            raise ForgeError(
                Err.DIMENSION_MISMATCH, [f"vector {v.shape} vs matrix {self.dim}"]
            )
        return float(np.real(np.vdot(v, self._entries @ v)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return bool(np.array_equal(self._entries, other._entries))

    def __hash__(self) -> int:
        return hash(self._entries.tobytes())

    def __deepcopy__(self, memo) -> "HermitianMatrix":
        return self

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"

    def to_json(self) -> List[List[List[float]]]:
        return [[[z.real, z.imag] for z in row] for row in self._entries.tolist()]

    @classmethod
    def from_json(cls, rows: Any) -> "HermitianMatrix":
        try:
            arr = np.array(rows, dtype=float)
        except (TypeError, ValueError) as e:
            raise ForgeError(Err.MALFORMED_FILE, [f"matrix entries: {e}"])
        if arr.ndim != 3 or arr.shape[2] != 2:
            raise ForgeError(Err.MALFORMED_FILE, [f"matrix shape {arr.shape}"])
        entries = np.empty(arr.shape[:2], dtype=complex)
        entries.real = arr[:, :, 0]
        entries.imag = arr[:, :, 1]
        return cls(entries)

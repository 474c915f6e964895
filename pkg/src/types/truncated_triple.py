from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from src.types.cutoff_convention import CutoffConvention, Geometry
from src.types.hermitian_matrix import HermitianMatrix
from src.types.vector_state import VectorState
from src.util.errors import Err, ForgeError
from src.util.json_util import load_versioned, save_versioned
from src.util.streamable import Streamable, streamable

EIGENVALUE_SLACK = 1e-12


@dataclass(frozen=True)
@streamable
class TruncatedTriple(Streamable):
    """
    Finite dimensional data of a spectral triple compressed by the spectral
    projection of D. The Hilbert space basis is the eigenbasis of D, so D is the
    diagonal matrix of dirac_eigenvalues. basis_labels records which eigenvector
    each basis index is ([n] on the circle, [sign, 2j, 2m] on the sphere).

    algebra_basis is a real linear basis of the self adjoint truncated functions; it
    is not orthonormal. phi and phi_sq hold the truncations of the embedding
    coordinates and of their squares.
    """

    name: str
    geometry: Geometry
    convention: CutoffConvention
    cutoff: float
    eigenvalue_bound: float
    dirac_eigenvalues: List[float]
    basis_labels: List[List[int]]
    algebra_basis: List[HermitianMatrix]
    phi: List[HermitianMatrix]
    phi_sq: List[HermitianMatrix]
    embedding_dim: int
    spectral_dim_hint: Optional[int]

    def validate(self):
        if not self.cutoff > 0:
            raise ForgeError(Err.INVALID_CUTOFF, [self.cutoff])
        dim = len(self.dirac_eigenvalues)
        if dim == 0:
            raise ForgeError(Err.INCONSISTENT_TRIPLE, ["empty spectrum"])
        if len(self.basis_labels) != dim:
            raise ForgeError(
                Err.INCONSISTENT_TRIPLE, [f"{len(self.basis_labels)} labels for dim {dim}"]
            )
        if len(self.algebra_basis) == 0:
            raise ForgeError(Err.INCONSISTENT_TRIPLE, ["empty algebra basis"])
        for m in self.algebra_basis + self.phi + self.phi_sq:
            if m.dim != dim:
                raise ForgeError(Err.DIMENSION_MISMATCH, [f"matrix dim {m.dim} vs {dim}"])
        if len(self.phi) != len(self.phi_sq) or len(self.phi) != self.embedding_dim:
            raise ForgeError(
                Err.INCONSISTENT_TRIPLE,
                [f"phi {len(self.phi)}, phi_sq {len(self.phi_sq)}, n {self.embedding_dim}"],
            )
        largest = max(abs(x) for x in self.dirac_eigenvalues)
        if largest > self.eigenvalue_bound + EIGENVALUE_SLACK:
            raise ForgeError(
                Err.INCONSISTENT_TRIPLE, [f"|λ| = {largest} > {self.eigenvalue_bound}"]
            )
        if (
            self.convention == CutoffConvention.STRICT_ABS
            and self.geometry != Geometry.SPHERE_DC
            and self.eigenvalue_bound > self.cutoff + EIGENVALUE_SLACK
        ):
            raise ForgeError(
                Err.INCONSISTENT_TRIPLE,
                [f"bound {self.eigenvalue_bound} exceeds cutoff {self.cutoff}"],
            )
        if self.spectral_dim_hint is not None and self.spectral_dim_hint < 1:
            raise ForgeError(Err.INCONSISTENT_TRIPLE, [self.spectral_dim_hint])

    @property
    def dim(self) -> int:
        return len(self.dirac_eigenvalues)

    @property
    def dirac(self) -> np.ndarray:
        return np.array(self.dirac_eigenvalues, dtype=float)

    def phi_stack(self) -> np.ndarray:
        return np.stack([m.entries for m in self.phi])

    def phi_sq_stack(self) -> np.ndarray:
        return np.stack([m.entries for m in self.phi_sq])

    def basis_stack(self) -> np.ndarray:
        return np.stack([m.entries for m in self.algebra_basis])


def state_expectation(t: TruncatedTriple, v: VectorState, a: HermitianMatrix) -> float:
    if v.dim != t.dim or a.dim != t.dim:
        raise ForgeError(
            Err.DIMENSION_MISMATCH, [f"triple {t.dim}, state {v.dim}, matrix {a.dim}"]
        )
    return a.expectation(v.vector)


def save_triple(t: TruncatedTriple, path: Union[str, Path], config: Dict = None) -> None:
    save_versioned(path, t, config)


def load_triple(path: Union[str, Path]) -> TruncatedTriple:
    return load_versioned(path, TruncatedTriple)

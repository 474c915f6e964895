"""
Builders of concrete truncated spectral triples.

circle     S^1 with D e_n = n e_n, n = -L..L, L = floor(cutoff). The algebra is
           generated by the shift T e_n = e_{n+1}, which represents e^{i theta}.
sphere     S^2 with the Dirac operator on spinors, in its eigenbasis
           e^{sign}_{j m} = (+1/2 Y_jm, -sign * -1/2 Y_jm) / sqrt(2) with eigenvalue
           sign * (j + 1/2). Matrix elements of harmonics come from triple
           integrals of spin-weighted harmonics.
sphere-dc  the sphere with D replaced by D + c sign(D) cos(pi D).
"""
import dataclasses
import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.special import gamma

from src.spectral.wigner import spin_weighted_Y_twice, triple_integral_twice
from src.types.cutoff_convention import CutoffConvention, Geometry
from src.types.hermitian_matrix import HermitianMatrix
from src.types.truncated_triple import TruncatedTriple
from src.util.errors import Err, ForgeError

log = logging.getLogger(__name__)

INTEGER_TOLERANCE = 1e-12


def _check_cutoff(cutoff: float) -> None:
    if not math.isfinite(cutoff) or cutoff < 1:
        raise ForgeError(Err.INVALID_CUTOFF, [f"cutoff must be >= 1, got {cutoff}"])


def build_circle(cutoff: float) -> TruncatedTriple:
    _check_cutoff(cutoff)
    top = int(math.floor(cutoff))
    dim = 2 * top + 1
    eigenvalues = [float(n) for n in range(-top, top + 1)]

    def shift_power(k: int) -> np.ndarray:
        # truncation of e^{ik theta}: ones at [i + k, i]
        return np.eye(dim, k=-k, dtype=complex)

    identity = np.eye(dim, dtype=complex)
    cosines: Dict[int, np.ndarray] = {}
    basis = [HermitianMatrix(identity)]
    for k in range(1, 2 * top + 1):
        t_k = shift_power(k)
        cosines[k] = (t_k + t_k.T) / 2
        basis.append(HermitianMatrix(cosines[k]))
        basis.append(HermitianMatrix((t_k - t_k.T) / 2j))

    phi = [basis[1], basis[2]]
    phi_sq = [
        HermitianMatrix((identity + cosines[2]) / 2),
        HermitianMatrix((identity - cosines[2]) / 2),
    ]
    t = TruncatedTriple(
        f"circle-{cutoff:g}",
        Geometry.CIRCLE,
        CutoffConvention.STRICT_ABS,
        float(cutoff),
        float(top),
        eigenvalues,
        [[n] for n in range(-top, top + 1)],
        basis,
        phi,
        phi_sq,
        2,
        1,
    )
    log.info(f"Built circle triple: dim H = {dim}, algebra basis {len(basis)}")
    return t


def sphere_shell_count(cutoff: float, convention: CutoffConvention) -> int:
    top = int(math.floor(cutoff))
    if convention == CutoffConvention.PAPER_S2:
        return top + 1
    return top


def sphere_basis_labels(shells: int) -> List[Tuple[int, int, int]]:
    """
    (sign, 2j, 2m) for every eigenspinor with |eigenvalue| = j + 1/2 <= shells,
    ordered by eigenvalue and then by m.
    """
    labels = []
    for sign in (-1, 1):
        ks = range(shells, 0, -1) if sign < 0 else range(1, shells + 1)
        for k in ks:
            tj = 2 * k - 1
            for tm in range(-tj, tj + 1, 2):
                labels.append((sign, tj, tm))
    return labels


def _harmonic_matrices(
    labels: List[Tuple[int, int, int]], max_l: int
) -> Dict[Tuple[int, int], np.ndarray]:
    """
    Truncations of Y_{l mu} for l <= max_l, keyed by (l, 2 mu). The element between
    eigenspinors is the average of the +1/2 and -1/2 triple integrals, with the -1/2
    part weighted by the product of the two signs.
    """
    dim = len(labels)
    sign = [x[0] for x in labels]
    tj = [x[1] for x in labels]
    tm = [x[2] for x in labels]
    tj_arr, tm_arr = np.array(tj), np.array(tm)
    matrices: Dict[Tuple[int, int], np.ndarray] = {}
    for l in range(max_l + 1):
        for tmu in range(-2 * l, 2 * l + 1, 2):
            matrices[(l, tmu)] = np.zeros((dim, dim), dtype=complex)

    d_m = tm_arr[:, None] - tm_arr[None, :]
    d_j = np.abs(tj_arr[:, None] - tj_arr[None, :])
    rows, cols = np.nonzero((np.abs(d_m) <= 2 * max_l) & (d_j <= 2 * max_l))
    for r, c in zip(rows.tolist(), cols.tolist()):
        tmu = int(d_m[r, c])
        l_min = max(abs(tmu), int(d_j[r, c])) // 2
        l_max = min(max_l, (tj[r] + tj[c]) // 2)
        for l in range(l_min, l_max + 1):
            up = triple_integral_twice(1, tj[r], tm[r], 2 * l, tmu, 1, tj[c], tm[c])
            down = triple_integral_twice(-1, tj[r], tm[r], 2 * l, tmu, -1, tj[c], tm[c])
            matrices[(l, tmu)][r, c] = 0.5 * (up + sign[r] * sign[c] * down)
    return matrices


def _real_harmonic_basis(
    matrices: Dict[Tuple[int, int], np.ndarray], degree: int
) -> List[HermitianMatrix]:
    basis = []
    root2 = math.sqrt(2)
    for l in range(degree + 1):
        basis.append(HermitianMatrix(matrices[(l, 0)]))
        for m in range(1, l + 1):
            plus, minus = matrices[(l, 2 * m)], matrices[(l, -2 * m)]
            parity = (-1) ** m
            basis.append(HermitianMatrix((plus + parity * minus) / root2))
            basis.append(HermitianMatrix((plus - parity * minus) / (1j * root2)))
    return basis


def _coordinates(matrices: Dict[Tuple[int, int], np.ndarray]) -> List[np.ndarray]:
    a = math.sqrt(2 * math.pi / 3)
    x = a * (matrices[(1, -2)] - matrices[(1, 2)])
    y = 1j * a * (matrices[(1, -2)] + matrices[(1, 2)])
    z = math.sqrt(4 * math.pi / 3) * matrices[(1, 0)]
    return [x, y, z]


def _coordinate_squares(matrices: Dict[Tuple[int, int], np.ndarray]) -> List[np.ndarray]:
    # x^2 + y^2 + z^2 = 1 on the sphere; the squares are constants plus l = 2 harmonics
    one = math.sqrt(4 * math.pi) * matrices[(0, 0)]
    z_sq = one / 3 + (2 / 3) * math.sqrt(4 * math.pi / 5) * matrices[(2, 0)]
    x_sq_minus_y_sq = math.sqrt(8 * math.pi / 15) * (matrices[(2, 4)] + matrices[(2, -4)])
    x_sq = (one - z_sq + x_sq_minus_y_sq) / 2
    y_sq = (one - z_sq - x_sq_minus_y_sq) / 2
    return [x_sq, y_sq, z_sq]


def build_sphere(
    cutoff: float,
    convention: CutoffConvention = CutoffConvention.PAPER_S2,
    algebra_degree: Optional[int] = None,
) -> TruncatedTriple:
    """
    algebra_degree is the largest l of the harmonics spanning the algebra basis,
    2 floor(cutoff) when None. A smaller degree gives a sub-algebra basis, which is
    enough for dispersion studies and much cheaper at large cutoffs.
    """
    _check_cutoff(cutoff)
    degree = 2 * int(math.floor(cutoff)) if algebra_degree is None else algebra_degree
    if degree < 0:
        raise ForgeError(Err.INVALID_ARGUMENT, [f"algebra degree {degree}"])
    shells = sphere_shell_count(cutoff, convention)
    labels = sphere_basis_labels(shells)
    matrices = _harmonic_matrices(labels, max(degree, 2))

    basis = _real_harmonic_basis(matrices, degree)
    phi = [HermitianMatrix(m) for m in _coordinates(matrices)]
    phi_sq = [HermitianMatrix(m) for m in _coordinate_squares(matrices)]
    eigenvalues = [float(sign * (tj + 1) // 2) for sign, tj, _ in labels]
    t = TruncatedTriple(
        f"sphere-{cutoff:g}-{convention.value}",
        Geometry.SPHERE,
        convention,
        float(cutoff),
        float(shells),
        eigenvalues,
        [list(x) for x in labels],
        basis,
        phi,
        phi_sq,
        3,
        2,
    )
    log.info(
        f"Built sphere triple ({convention.value}): dim H = {t.dim}, "
        f"algebra basis {len(basis)} (l <= {degree})"
    )
    return t


def build_dc_perturbation(t: TruncatedTriple, c: float) -> TruncatedTriple:
    """
    Replaces every eigenvalue lambda by lambda + c sign(lambda) cos(pi lambda). The
    eigenvectors, the algebra and phi are unchanged.
    """
    if t.geometry != Geometry.SPHERE:
        raise ForgeError(Err.INVALID_ARGUMENT, [f"D_c needs a sphere triple, got {t.geometry.value}"])
    if c == 0:
        return t
    perturbed = []
    for lam in t.dirac_eigenvalues:
        if lam == 0:
            raise ForgeError(Err.ZERO_EIGENVALUE, ["sign(0) is undefined"])
        if abs(lam - round(lam)) > INTEGER_TOLERANCE:
            raise ForgeError(Err.INVALID_ARGUMENT, [f"non-integer eigenvalue {lam}"])
        parity = -1.0 if int(round(lam)) % 2 else 1.0
        perturbed.append(lam + c * math.copysign(1.0, lam) * parity)
    if any(new * old <= 0 for new, old in zip(perturbed, t.dirac_eigenvalues)):
        log.warning(f"D_c with c = {c} moves eigenvalues through zero")
    return dataclasses.replace(
        t,
        name=f"{t.name}-dc{c:g}",
        geometry=Geometry.SPHERE_DC,
        eigenvalue_bound=t.eigenvalue_bound + abs(c),
        dirac_eigenvalues=perturbed,
    )


def weyl_estimate(dirac_eigenvalues, rank_s: int) -> Tuple[float, float]:
    """
    Dimension from the log-log slope of the counting function N(lambda), volume
    from the Weyl law N(Lambda) ~ rank vol Lambda^d / ((4 pi)^{d/2} Gamma(d/2 + 1)).
    """
    if rank_s < 1:
        raise ForgeError(Err.INVALID_ARGUMENT, [f"rank_s {rank_s}"])
    magnitudes = np.abs(np.asarray(dirac_eigenvalues, dtype=float))
    shells = np.unique(np.round(magnitudes[magnitudes > 0], 9))
    if len(shells) < 3:
        raise ForgeError(Err.TOO_FEW_SHELLS, [f"{len(shells)} distinct |eigenvalues|"])
    counts = np.array([np.count_nonzero(magnitudes <= lam + 1e-9) for lam in shells])
    slope, _ = np.polyfit(np.log(shells), np.log(counts), 1)
    d = max(int(round(slope)), 1)
    top = shells[-1]
    volume = counts[-1] * (4 * math.pi) ** (d / 2) * gamma(d / 2 + 1) / (rank_s * top ** d)
    return float(slope), float(volume)


def bott_projection(t: TruncatedTriple) -> HermitianMatrix:
    """
    (1 + [[z, x - iy], [x + iy, -z]]) / 2 assembled from the truncated coordinates,
    acting on two copies of H.
    """
    if not t.geometry.is_sphere:
        raise ForgeError(Err.INVALID_ARGUMENT, ["the Bott projection lives on the sphere"])
    x, y, z = (m.entries for m in t.phi)
    identity = np.eye(t.dim)
    block = np.block([[identity + z, x - 1j * y], [x + 1j * y, identity - z]])
    return HermitianMatrix(block / 2)


def eigenspinor_values(t: TruncatedTriple, theta, phi) -> np.ndarray:
    """
    Values of the Hilbert basis vectors at the given points, shape
    (dim, rank, points). The circle has rank 1, e_n = e^{i n theta} / sqrt(2 pi).
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if t.geometry == Geometry.CIRCLE:
        n = np.array([label[0] for label in t.basis_labels], dtype=float)
        values = np.exp(1j * n[:, None] * theta[None, :]) / math.sqrt(2 * math.pi)
        return values[:, None, :]
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    values = np.zeros((t.dim, 2, theta.shape[0]), dtype=complex)
    root2 = math.sqrt(2)
    for index, (sign, tj, tm) in enumerate(t.basis_labels):
        values[index, 0] = spin_weighted_Y_twice(1, tj, tm, theta, phi) / root2
        values[index, 1] = -sign * spin_weighted_Y_twice(-1, tj, tm, theta, phi) / root2
    return values


def build_triple(
    geometry: Geometry,
    cutoff: float,
    convention: CutoffConvention = CutoffConvention.PAPER_S2,
    c: float = 0.0,
    algebra_degree: Optional[int] = None,
) -> TruncatedTriple:
    if geometry == Geometry.CIRCLE:
        return build_circle(cutoff)
    t = build_sphere(cutoff, convention, algebra_degree)
    if geometry == Geometry.SPHERE_DC:
        return build_dc_perturbation(t, c)
    return t

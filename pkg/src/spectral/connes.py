"""
Truncated Connes distance between vector states,

    d(v, w) = sup { |<v, a v> - <w, a w>| : a in span(algebra_basis), |[D, a]| <= 1 },

as the semidefinite program  max b.c  s.t.  |sum_i c_i K_i| <= 1,  K_i = [D, a_i].
The feasible set is symmetric under c -> -c, so the supremum of |b.c| is the
maximum of b.c.

The solver works with the Hermitian matrices H_i = i K_i. The constraint
[[I, K], [K^*, I]] >= 0 is equivalent to all eigenvalues of i K lying in [-1, 1],
which is the set the splitting projects onto.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from src.types.sdp import SdpProblem, SdpSolution, SdpStatus
from src.types.solver_settings import DEFAULT_SOLVER_SETTINGS, SolverSettings
from src.types.truncated_triple import TruncatedTriple
from src.types.vector_state import VectorState
from src.util.errors import Err, ForgeError

log = logging.getLogger(__name__)

FEASIBILITY_SLACK = 1e-6
RANGE_TOLERANCE = 1e-9
BALANCE_EVERY = 10
BALANCE_RATIO = 10.0


def commutator_basis(t: TruncatedTriple) -> np.ndarray:
    # [D, a]_rc = (lambda_r - lambda_c) a_rc for diagonal D
    d = t.dirac
    return (d[:, None] - d[None, :])[None, :, :] * t.basis_stack()


def expectations(basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.real(np.einsum("i,pij,j->p", v.conj(), basis, v))


def build_problem(
    t: TruncatedTriple,
    v: VectorState,
    w: VectorState,
    commutators: Optional[np.ndarray] = None,
) -> SdpProblem:
    if v.dim != t.dim or w.dim != t.dim:
        raise ForgeError(Err.DIMENSION_MISMATCH, [f"states {v.dim}, {w.dim} vs dim {t.dim}"])
    basis = t.basis_stack()
    objective = expectations(basis, v.vector) - expectations(basis, w.vector)
    if commutators is None:
        commutators = commutator_basis(t)
    return SdpProblem(objective, commutators)


class SolverContext:
    """
    Everything about an SDP that does not depend on the objective: the Hermitian
    forms H_i, their Gram matrix Re tr(H_i H_j) and its pseudo-inverse.
    """

    def __init__(self, commutators: np.ndarray):
        p, d, _ = commutators.shape
        self.size = p
        self.dim = d
        self.flat = (1j * commutators).reshape(p, d * d)
        gram = np.real(self.flat.conj() @ self.flat.T)
        self.gram = (gram + gram.T) / 2
        self.gram_pinv = np.linalg.pinv(self.gram, rcond=1e-10, hermitian=True)

    def apply(self, c: np.ndarray) -> np.ndarray:
        m = (c @ self.flat).reshape(self.dim, self.dim)
        return (m + m.conj().T) / 2

    def adjoint(self, m: np.ndarray) -> np.ndarray:
        return np.real(self.flat.conj() @ m.ravel())

    def norm(self, c: np.ndarray) -> float:
        if not np.any(c):
            return 0.0
        return float(np.max(np.abs(np.linalg.eigvalsh(self.apply(c)))))

    def in_range(self, b: np.ndarray) -> bool:
        residual = b - self.gram @ (self.gram_pinv @ b)
        return float(np.linalg.norm(residual)) <= RANGE_TOLERANCE * max(1.0, float(np.linalg.norm(b)))


def project_to_ball(m: np.ndarray) -> np.ndarray:
    eigenvalues, vectors = np.linalg.eigh(m)
    clipped = np.clip(eigenvalues, -1.0, 1.0)
    return (vectors * clipped) @ vectors.conj().T


@dataclass
class WarmStart:
    c: np.ndarray
    z: np.ndarray
    u: np.ndarray
    rho: float


def _admm(
    b: np.ndarray,
    context: SolverContext,
    settings: SolverSettings,
    tol: float,
    max_iter: int,
    warm: Optional[WarmStart],
) -> Tuple[SdpSolution, WarmStart]:
    d = context.dim
    if warm is not None:
        z, u, rho = warm.z.copy(), warm.u.copy(), warm.rho
    else:
        z = np.zeros((d, d), dtype=complex)
        u = np.zeros((d, d), dtype=complex)
        rho = settings.rho
    c = np.zeros(context.size)
    r_norm = s_norm = math.inf
    iteration = 0
    converged = False
    for iteration in range(1, max_iter + 1):
        c = context.gram_pinv @ (context.adjoint(z - u) + b / rho)
        ac = context.apply(c)
        relaxed = settings.relaxation * ac + (1 - settings.relaxation) * z
        z_old = z
        z = project_to_ball(relaxed + u)
        u = u + relaxed - z

        r_norm = float(np.linalg.norm(ac - z))
        s_norm = rho * float(np.linalg.norm(context.adjoint(z - z_old)))
        eps_primal = tol * (1 + max(float(np.linalg.norm(ac)), float(np.linalg.norm(z))))
        eps_dual = tol * (1 + rho * float(np.linalg.norm(context.adjoint(u))))
        if r_norm <= eps_primal and s_norm <= eps_dual:
            converged = True
            break
        if iteration % BALANCE_EVERY == 0:
            if r_norm > BALANCE_RATIO * s_norm:
                rho *= 2
                u = u / 2
            elif s_norm > BALANCE_RATIO * r_norm:
                rho /= 2
                u = u * 2

    spectral = context.norm(c)
    certified = c / max(1.0, spectral)
    value = float(b @ certified)
    if value < 0:
        value, certified = -value, -certified
    solution = SdpSolution(
        value,
        list(certified),
        SdpStatus.OPTIMAL if converged else SdpStatus.MAX_ITER,
        r_norm,
        s_norm,
        iteration,
        context.norm(certified),
    )
    return solution, WarmStart(c, z, u, rho)


def check_certificate(solution: SdpSolution) -> None:
    # an infeasible returned point means the splitting did not settle on the ball
    if solution.certificate > 1 + FEASIBILITY_SLACK:
        raise ForgeError(Err.NOT_CONVERGED, [f"certificate {solution.certificate} above 1"])


def solve_distance(
    p: SdpProblem,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    settings: SolverSettings = DEFAULT_SOLVER_SETTINGS,
    context: Optional[SolverContext] = None,
    warm_start: Optional[WarmStart] = None,
) -> SdpSolution:
    return _solve(p, tol, max_iter, settings, context, warm_start)[0]


def _solve(
    p: SdpProblem,
    tol: Optional[float],
    max_iter: Optional[int],
    settings: SolverSettings,
    context: Optional[SolverContext],
    warm_start: Optional[WarmStart],
) -> Tuple[SdpSolution, Optional[WarmStart]]:
    tol = settings.tol if tol is None else tol
    max_iter = settings.max_iter if max_iter is None else max_iter
    if context is None:
        context = SolverContext(p.commutators)
    b = p.objective
    if not np.any(b):
        return SdpSolution(0.0, [0.0] * p.size, SdpStatus.OPTIMAL, 0.0, 0.0, 0, 0.0), warm_start
    if not context.in_range(b):
        log.warning("Objective has a component on commutator-free directions, distance unbounded")
        return (
            SdpSolution(math.inf, [0.0] * p.size, SdpStatus.INFEASIBLE, math.inf, math.inf, 0, 0.0),
            warm_start,
        )
    solution, warm = _admm(b, context, settings, tol, max_iter, warm_start)
    if settings.both_orientations:
        flipped, _ = _admm(-b, context, settings, tol, max_iter, None)
        if flipped.value > solution.value:
            # flipped maximizes -b.c, so its optimizer for b is -c
            solution = SdpSolution(
                flipped.value,
                [-x for x in flipped.coefficients],
                flipped.status,
                flipped.primal_residual,
                flipped.dual_residual,
                flipped.iterations,
                flipped.certificate,
            )
    check_certificate(solution)
    if solution.status == SdpStatus.MAX_ITER:
        log.warning(
            f"SDP stopped at max_iter {max_iter}: primal {solution.primal_residual:.3g}, "
            f"dual {solution.dual_residual:.3g}, value {solution.value:.6g}"
        )
    return solution, warm


SCHATTEN_ORDERS = (4, 16, 64, 256)
SUBGRADIENT_STEP = 0.1


def _schatten_ratio(c: np.ndarray, b: np.ndarray, context: SolverContext, order: int):
    """
    -b.c / |A(c)|_p and its gradient. The Schatten p-norm bounds the spectral norm
    from above, so c / |A(c)|_p is always feasible.
    """
    eigenvalues, vectors = np.linalg.eigh(context.apply(c))
    top = float(np.max(np.abs(eigenvalues)))
    if top == 0:
        return 0.0, np.zeros_like(c)
    scaled = np.abs(eigenvalues) / top
    norm = top * float(np.sum(scaled ** order)) ** (1 / order)
    weights = np.sign(eigenvalues) * (np.abs(eigenvalues) / norm) ** (order - 1)
    norm_gradient = context.adjoint((vectors * weights) @ vectors.conj().T)
    value = float(b @ c)
    gradient = b / norm - value * norm_gradient / norm ** 2
    return -value / norm, -gradient


def _subgradient_ascent(
    c: np.ndarray, b: np.ndarray, context: SolverContext, steps: int
) -> Tuple[float, np.ndarray]:
    """
    Ascent on b.c along b - (b.c) s A^*(u u^*), the subgradient of b.c / |A(c)| at
    a point with |A(c)| = 1, where u is an eigenvector of the eigenvalue s of largest
    modulus. Every iterate is renormalized to c / |A(c)|.
    """
    norm = context.norm(c)
    if norm == 0:
        return 0.0, c
    c = c / norm
    best_value, best_c = float(b @ c), c
    for k in range(steps):
        eigenvalues, vectors = np.linalg.eigh(context.apply(c))
        top = int(np.argmax(np.abs(eigenvalues)))
        u = vectors[:, top]
        value = float(b @ c)
        g = b - value * np.sign(eigenvalues[top]) * context.adjoint(np.outer(u, u.conj()))
        g_norm = float(np.linalg.norm(g))
        if g_norm == 0:
            break
        step = SUBGRADIENT_STEP * float(np.linalg.norm(c)) / (g_norm * math.sqrt(k + 1))
        stepped = c + step * g
        norm = context.norm(stepped)
        if norm == 0:
            break
        c = stepped / norm
        value = float(b @ c)
        if value > best_value:
            best_value, best_c = value, c
    return best_value, best_c


def oracle_distance(p: SdpProblem, restarts: int = 100, rng_seed: int = 0, steps: int = 400) -> float:
    """
    Independent lower bound on the distance. Each restart runs subgradient ascent
    with c -> c / |A(c)| after every step, refines the point by BFGS on the ratio
    b.c / |A(c)|_p for Schatten p-norms of increasing p, then polishes it with a
    second subgradient run. Every renormalized iterate is feasible, so the best
    exact value seen is a lower bound.
    The first restart starts from G^+ b, the others from Gaussian draws in the range
    of G.
    """
    b = p.objective
    if not np.any(b):
        return 0.0
    context = SolverContext(p.commutators)
    rng = np.random.default_rng(rng_seed)
    best = 0.0
    for restart in range(restarts):
        if restart == 0:
            c = context.gram_pinv @ b
        else:
            c = context.gram_pinv @ (context.gram @ rng.standard_normal(p.size))
        if float(b @ c) < 0:
            c = -c
        value, c = _subgradient_ascent(c, b, context, steps)
        best = max(best, value)
        for order in SCHATTEN_ORDERS:
            norm = context.norm(c)
            if norm == 0:
                break
            c = c / norm
            best = max(best, abs(float(b @ c)))
            result = optimize.minimize(
                _schatten_ratio,
                c,
                args=(b, context, order),
                jac=True,
                method="BFGS",
                options={"maxiter": steps, "gtol": 1e-10},
            )
            c = result.x
        value, _ = _subgradient_ascent(c, b, context, steps)
        best = max(best, value)
    return best


def distance_matrix_detailed(
    t: TruncatedTriple,
    states: Sequence[VectorState],
    settings: SolverSettings = DEFAULT_SOLVER_SETTINGS,
    threads: int = 1,
) -> Tuple[np.ndarray, Dict[Tuple[int, int], SdpSolution]]:
    """
    Solves every pair i < j once. Row i is a chain of pairs sharing state i, solved
    in order with warm starts; rows run in parallel.
    """
    k = len(states)
    if k < 1:
        raise ForgeError(Err.INVALID_ARGUMENT, ["no states"])
    start = time.time()
    commutators = commutator_basis(t)
    context = SolverContext(commutators)
    basis = t.basis_stack()
    for s in states:
        if s.dim != t.dim:
            raise ForgeError(Err.DIMENSION_MISMATCH, [f"state {s.dim} vs dim {t.dim}"])
    values = np.array([expectations(basis, s.vector) for s in states])

    def solve_row(i: int) -> List[Tuple[int, int, SdpSolution]]:
        warm: Optional[WarmStart] = None
        out = []
        for j in range(i + 1, k):
            p = SdpProblem(values[i] - values[j], commutators)
            solution, new_warm = _solve(p, None, None, settings, context, warm)
            if settings.warm_start:
                warm = new_warm
            out.append((i, j, solution))
        return out

    rows = list(range(k - 1))
    if threads > 1 and len(rows) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(solve_row, rows))
    else:
        results = [solve_row(i) for i in rows]

    matrix = np.zeros((k, k))
    solutions: Dict[Tuple[int, int], SdpSolution] = {}
    for row in results:
        for i, j, solution in row:
            matrix[i, j] = matrix[j, i] = solution.value
            solutions[(i, j)] = solution
    log.info(f"Solved {len(solutions)} distances in {time.time() - start:.1f}s")
    return matrix, solutions


def distance_matrix(
    t: TruncatedTriple,
    states: Sequence[VectorState],
    settings: SolverSettings = DEFAULT_SOLVER_SETTINGS,
    threads: int = 1,
) -> np.ndarray:
    return distance_matrix_detailed(t, states, settings, threads)[0]


def check_metric_axioms(distances: np.ndarray, tol: float = 1e-5, limit: int = 20) -> List[str]:
    """
    Symmetry and zero diagonal exactly, nonnegativity, and the triangle inequality up
    to tol. Returns at most limit descriptions of violations.
    """
    d = np.asarray(distances, dtype=float)
    violations: List[str] = []
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        return [f"not a square matrix: {d.shape}"]
    for i, j in zip(*np.nonzero(d != d.T)):
        if i < j:
            violations.append(f"asymmetric at ({i}, {j})")
    for i in np.nonzero(np.diag(d) != 0)[0]:
        violations.append(f"nonzero diagonal at {i}")
    for i, j in zip(*np.nonzero(d < 0)):
        violations.append(f"negative distance at ({i}, {j})")
    finite = np.where(np.isfinite(d), d, np.nan)
    for mid in range(d.shape[0]):
        via = finite[:, mid, None] + finite[None, mid, :]
        with np.errstate(invalid="ignore"):
            bad = finite > via + tol
        for i, j in zip(*np.nonzero(bad)):
            if i < j:
                violations.append(
                    f"triangle ({i}, {j}) via {mid}: {finite[i, j]:.8g} > {via[i, j]:.8g}"
                )
    if len(violations) > limit:
        violations = violations[:limit] + [f"... {len(violations) - limit} more"]
    return violations

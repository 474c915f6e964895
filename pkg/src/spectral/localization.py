"""
Localized states: dispersion and barycenters, the dispersion-plus-repulsion energy,
its minimizer on the unit sphere of H, and the truncated heat-flow states.

State expectations are taken in the scale invariant form <v, a v> / <v, v>, so the
gradient of every expectation at a unit vector is 2 (a v - <a> v) and is tangent to
the sphere.
"""
import logging
import math
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Deque, List, Optional, Sequence, Tuple

import numpy as np

from src.spectral.geometries import build_circle, build_sphere, eigenspinor_values
from src.types.cutoff_convention import CutoffConvention, Geometry
from src.types.dispersion_report import DispersionReport
from src.types.energy_params import EnergyParams
from src.types.minimizer_settings import DEFAULT_MINIMIZER_SETTINGS, MinimizerSettings, StopReason
from src.types.truncated_triple import TruncatedTriple
from src.types.vector_state import VectorState
from src.util.errors import Err, ForgeError

log = logging.getLogger(__name__)

DEGENERATE_MEAN = 1e-6
NEGATIVE_ETA_SLACK = 1e-12
# relative rounding noise of the energy: -1/eta with eta a difference of O(1) terms
ENERGY_NOISE = 100 * np.finfo(float).eps
ROUNDING_GATE = 1e3


class EmbeddingOperators:
    """
    Dense copies of phi and of sum_i phi_i^2, taken once per triple so the energy
    can be evaluated many times.
    """

    def __init__(self, t: TruncatedTriple):
        self.geometry = t.geometry
        self.dim = t.dim
        self.phi = t.phi_stack()
        self.phi_sq_sum = t.phi_sq_stack().sum(axis=0)

    def check(self, v: np.ndarray) -> None:
        if v.shape != (self.dim,):
            raise ForgeError(Err.DIMENSION_MISMATCH, [f"state {v.shape} vs dim {self.dim}"])


def _expectation(a: np.ndarray, v: np.ndarray, av: np.ndarray = None) -> float:
    if av is None:
        av = a @ v
    return float(np.real(np.vdot(v, av))) / float(np.real(np.vdot(v, v)))


def _mean_and_eta(ops: EmbeddingOperators, v: np.ndarray) -> Tuple[np.ndarray, float]:
    mean_phi = np.array([_expectation(p, v) for p in ops.phi])
    eta = _expectation(ops.phi_sq_sum, v) - float(mean_phi @ mean_phi)
    if eta < -NEGATIVE_ETA_SLACK:
        log.warning(f"Dispersion {eta} below zero beyond rounding")
    return mean_phi, max(eta, 0.0)


def _barycenter(geometry: Geometry, mean_phi: np.ndarray) -> Tuple[List[float], bool]:
    norm = float(np.linalg.norm(mean_phi))
    if norm < DEGENERATE_MEAN:
        return [], True
    if geometry == Geometry.CIRCLE:
        return [math.atan2(mean_phi[1], mean_phi[0])], False
    return list(mean_phi / norm), False


def dispersion(t: TruncatedTriple, v: VectorState) -> DispersionReport:
    ops = EmbeddingOperators(t)
    vec = v.vector
    ops.check(vec)
    mean_phi, eta = _mean_and_eta(ops, vec)
    barycenter, degenerate = _barycenter(t.geometry, mean_phi)
    return DispersionReport(eta, list(mean_phi), barycenter, degenerate)


def _energy_and_gradient(
    ops: EmbeddingOperators,
    v: np.ndarray,
    existing: np.ndarray,
    g_e: float,
    eta_clamp: float,
) -> Tuple[float, np.ndarray]:
    v = v / np.linalg.norm(v)
    phi_v = np.einsum("ijk,k->ij", ops.phi, v)
    sq_v = ops.phi_sq_sum @ v
    omega = np.real(phi_v.conj() @ v)
    sq = float(np.real(np.vdot(v, sq_v)))
    eta = max(sq - float(omega @ omega), eta_clamp)

    # gradients of the expectations, one row per phi_i
    grad_omega = 2 * (phi_v - omega[:, None] * v[None, :])
    grad_sq = 2 * (sq_v - sq * v)

    energy = -1.0 / eta
    gradient = (grad_sq - 2 * omega @ grad_omega) / eta ** 2
    if g_e > 0 and len(existing) > 0:
        offsets = omega[None, :] - existing
        r_sq = np.sum(offsets ** 2, axis=1)
        if np.any(r_sq == 0):
            return math.inf, np.zeros_like(v)
        energy += g_e * float(np.sum(1.0 / r_sq))
        weights = offsets / (r_sq ** 2)[:, None]
        gradient = gradient - 2 * g_e * (weights.sum(axis=0) @ grad_omega)
    return energy, gradient


def energy(
    t: TruncatedTriple,
    v: VectorState,
    params: EnergyParams,
    settings: MinimizerSettings = DEFAULT_MINIMIZER_SETTINGS,
) -> float:
    ops = EmbeddingOperators(t)
    ops.check(v.vector)
    existing = _existing_array(params, t.embedding_dim)
    return _energy_and_gradient(ops, v.vector, existing, params.g_e, settings.eta_clamp)[0]


def energy_gradient(
    t: TruncatedTriple,
    v: VectorState,
    params: EnergyParams,
    settings: MinimizerSettings = DEFAULT_MINIMIZER_SETTINGS,
) -> np.ndarray:
    """
    Complex vector g with dE = Re <g, dv> for real variations of the real and
    imaginary parts of the coefficients, tangent to the unit sphere at v.
    """
    ops = EmbeddingOperators(t)
    ops.check(v.vector)
    existing = _existing_array(params, t.embedding_dim)
    return _energy_and_gradient(ops, v.vector, existing, params.g_e, settings.eta_clamp)[1]


def _existing_array(params: EnergyParams, n: int) -> np.ndarray:
    existing = np.array(params.existing_states, dtype=float).reshape(-1, n)
    return existing


def _inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.real(np.vdot(a, b)))


def _project(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    return u - _inner(x, u) * x


class BackTrackingLineSearcher:
    """
    Armijo backtracking along the retraction x -> (x + alpha d) / |x + alpha d|. A
    step without decrease is rejected (alpha = 0).
    """

    def __init__(
        self,
        contraction_factor: float = 0.5,
        sufficient_decrease: float = 1e-4,
        max_iterations: int = 40,
        initial_step_size: float = 1.0,
    ):
        self.contraction_factor = contraction_factor
        self.sufficient_decrease = sufficient_decrease
        self.max_iterations = max_iterations
        self.initial_step_size = initial_step_size

    def search(
        self,
        objective: Callable[[np.ndarray], Tuple[float, np.ndarray]],
        x: np.ndarray,
        d: np.ndarray,
        f0: float,
        df0: float,
    ) -> Tuple[float, np.ndarray, float, np.ndarray]:
        alpha = self.initial_step_size
        newx = _retract(x, alpha * d)
        newf, newg = objective(newx)
        step_count = 1
        while (
            not newf <= f0 + self.sufficient_decrease * alpha * df0
            and step_count <= self.max_iterations
        ):
            alpha = self.contraction_factor * alpha
            newx = _retract(x, alpha * d)
            newf, newg = objective(newx)
            step_count += 1
        if not newf <= f0:
            return 0.0, x, f0, np.zeros_like(x)
        return alpha, newx, newf, newg


def _retract(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    y = x + u
    return y / np.linalg.norm(y)


@dataclass
class MinimizationResult:
    state: VectorState
    energy: float
    iterations: int
    converged: bool
    reseeds: int
    wall_time: float
    stop_reason: StopReason


@dataclass
class SphereRun:
    x: np.ndarray
    energy: float
    iterations: int
    stop_reason: StopReason
    # energies at the start point and after every accepted step
    energies: List[float]

    @property
    def converged(self) -> bool:
        return self.stop_reason.converged


def _lbfgs_on_sphere(
    objective: Callable[[np.ndarray], Tuple[float, np.ndarray]],
    x0: np.ndarray,
    settings: MinimizerSettings,
) -> SphereRun:
    """
    Limited memory BFGS on the unit sphere of C^N with the real inner product
    Re <a, b>. Directions are projected to the tangent space, curvature pairs are
    carried to the new point by projection, and a non-descent direction resets the
    memory to steepest descent.

    Besides |g| < grad_tol, a point counts as stationary when the decrease the
    quasi-Newton model predicts is below the rounding noise of the energy, so no
    line search can resolve it, and |g| is within ROUNDING_GATE of grad_tol.
    """
    x = x0 / np.linalg.norm(x0)
    f, g = objective(x)
    energies = [f]
    if not math.isfinite(f):
        return SphereRun(x, f, 0, StopReason.NON_FINITE, energies)
    memory: Deque[Tuple[np.ndarray, np.ndarray, float]] = deque(maxlen=settings.memory)
    # inverse curvature sy / yy of the latest pair, kept across memory resets
    inverse_curvature: Optional[float] = None
    searcher = BackTrackingLineSearcher()
    for iteration in range(settings.max_iter):
        g_norm = math.sqrt(_inner(g, g))
        if g_norm < settings.grad_tol:
            return SphereRun(x, f, iteration, StopReason.GRADIENT, energies)

        q = g.copy()
        alphas = []
        for s, y, rho in reversed(memory):
            a = rho * _inner(s, q)
            q = q - a * y
            alphas.append(a)
        if len(memory) > 0:
            s, y, _ = memory[-1]
            q = q * (_inner(s, y) / _inner(y, y))
        for (s, y, rho), a in zip(memory, reversed(alphas)):
            b = rho * _inner(y, q)
            q = q + (a - b) * s
        direction = _project(x, -q)
        slope = _inner(g, direction)
        if not slope < 0:
            memory.clear()
            direction = -g
            slope = -g_norm ** 2

        if len(memory) > 0:
            predicted: Optional[float] = -slope
        elif inverse_curvature is not None:
            predicted = inverse_curvature * g_norm ** 2
        else:
            predicted = None
        if (
            predicted is not None
            and predicted <= ENERGY_NOISE * max(abs(f), 1.0)
            and g_norm <= ROUNDING_GATE * settings.grad_tol
        ):
            log.debug(f"Stationary at rounding floor, iteration {iteration}, |g| = {g_norm}")
            return SphereRun(x, f, iteration, StopReason.ROUNDING_FLOOR, energies)

        if len(memory) == 0:
            searcher.initial_step_size = min(1.0, 1.0 / g_norm)
        else:
            searcher.initial_step_size = 1.0

        alpha, x_new, f_new, g_new = searcher.search(objective, x, direction, f, slope)
        if alpha == 0:
            if len(memory) == 0:
                log.debug(f"Line search failed at iteration {iteration}, |g| = {g_norm}")
                # steepest descent cannot resolve a decrease this close to stationary
                if g_norm <= ROUNDING_GATE * settings.grad_tol:
                    return SphereRun(x, f, iteration, StopReason.ROUNDING_FLOOR, energies)
                return SphereRun(x, f, iteration, StopReason.LINE_SEARCH, energies)
            memory.clear()
            continue

        s = _project(x_new, x_new - x)
        y = g_new - _project(x_new, g)
        sy = _inner(s, y)
        if sy > 1e-12 * math.sqrt(_inner(s, s) * _inner(y, y)):
            memory.append((s, y, 1.0 / sy))
            inverse_curvature = sy / _inner(y, y)
        x, f, g = x_new, f_new, g_new
        energies.append(f)
    g_norm = math.sqrt(_inner(g, g))
    reason = StopReason.GRADIENT if g_norm < settings.grad_tol else StopReason.MAX_ITER
    return SphereRun(x, f, settings.max_iter, reason, energies)


def random_start(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def minimize_state_detailed(
    t: TruncatedTriple,
    params: EnergyParams,
    rng_seed: int,
    settings: MinimizerSettings = DEFAULT_MINIMIZER_SETTINGS,
    threads: int = 1,
) -> MinimizationResult:
    """
    Best of settings.restarts runs from i.i.d. complex Gaussian starts. When no run
    converges, the whole batch is redrawn up to settings.reseeds times; the best
    state seen is returned either way.
    """
    start = time.time()
    ops = EmbeddingOperators(t)
    existing = _existing_array(params, t.embedding_dim)

    def objective(x: np.ndarray) -> Tuple[float, np.ndarray]:
        return _energy_and_gradient(ops, x, existing, params.g_e, settings.eta_clamp)

    rng = np.random.default_rng(rng_seed)
    best: Optional[SphereRun] = None
    reseeds = 0
    total_iterations = 0
    for attempt in range(settings.reseeds + 1):
        starts = [random_start(rng, t.dim) for _ in range(settings.restarts)]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                runs = list(executor.map(lambda x0: _lbfgs_on_sphere(objective, x0, settings), starts))
        else:
            runs = [_lbfgs_on_sphere(objective, x0, settings) for x0 in starts]
        for run in runs:
            total_iterations += run.iterations
            if best is None or _better(run, best):
                best = run
        assert best is not None
        if best.converged and math.isfinite(best.energy):
            break
        if attempt < settings.reseeds:
            reseeds += 1
            log.debug(f"Seed {rng_seed}: no converged restart, reseeding ({reseeds})")

    assert best is not None
    if not best.converged:
        log.warning(
            f"Minimization with seed {rng_seed} did not converge "
            f"(energy {best.energy}, {best.iterations} iterations, {reseeds} reseeds, "
            f"stopped on {best.stop_reason.name})"
        )
    return MinimizationResult(
        VectorState.from_vector(best.x),
        best.energy,
        total_iterations,
        best.converged,
        reseeds,
        time.time() - start,
        best.stop_reason,
    )


def _better(run: SphereRun, best: SphereRun) -> bool:
    # a converged run beats an unconverged one, otherwise lower energy wins
    if run.converged != best.converged and math.isfinite(run.energy):
        return run.converged
    return run.energy < best.energy


def minimize_state(
    t: TruncatedTriple,
    params: EnergyParams,
    rng_seed: int,
    settings: MinimizerSettings = DEFAULT_MINIMIZER_SETTINGS,
) -> VectorState:
    return minimize_state_detailed(t, params, rng_seed, settings).state


def heat_time(cutoff: float, spectral_dim: int) -> float:
    if not cutoff > 1:
        raise ForgeError(Err.INVALID_CUTOFF, [f"heat states need cutoff > 1, got {cutoff}"])
    return 2 * spectral_dim * math.log(cutoff) / cutoff ** 2


def heat_state(
    t: TruncatedTriple,
    base_point: Sequence[float],
    spinor_component: int = 0,
    spectral_dim: Optional[int] = None,
) -> VectorState:
    """
    Truncated heat flow of the unit vector in spinor_component at base_point:
    coefficients exp(-t lambda^2) conj(e_lambda(x)_k), normalized. base_point is
    (theta, phi) on the sphere and (theta,) on the circle.
    """
    m = spectral_dim if spectral_dim is not None else t.spectral_dim_hint
    if m is None:
        raise ForgeError(Err.INVALID_ARGUMENT, ["spectral dimension unknown"])
    time_t = heat_time(t.cutoff, m)
    point = list(base_point) + [0.0]
    values = eigenspinor_values(t, point[0], point[1])[:, :, 0]
    if not 0 <= spinor_component < values.shape[1]:
        raise ForgeError(Err.INVALID_ARGUMENT, [f"spinor component {spinor_component}"])
    coefficients = np.exp(-time_t * t.dirac ** 2) * np.conj(values[:, spinor_component])
    return VectorState.from_vector(coefficients)


def state_density(t: TruncatedTriple, v: VectorState, theta, phi=None) -> np.ndarray:
    """
    y -> sum_k |sum_lambda v_lambda e_lambda(y)_k|^2 at the given points.
    """
    if v.dim != t.dim:
        raise ForgeError(Err.DIMENSION_MISMATCH, [f"state {v.dim} vs dim {t.dim}"])
    if phi is None:
        phi = np.zeros_like(np.atleast_1d(np.asarray(theta, dtype=float)))
    values = eigenspinor_values(t, theta, phi)
    field = np.einsum("d,dkp->kp", v.vector, values)
    return np.sum(np.abs(field) ** 2, axis=0)


def repulsion_sufficient_coupling(alpha: float, beta: float) -> float:
    """
    Smallest g_e that overcomes local variation of the minimal dispersion, given
    Lipschitz-type bounds alpha >= beta > 0: g_e >= 1 - beta^2 / alpha^2.
    """
    if not alpha > 0 or not beta > 0:
        raise ForgeError(Err.INVALID_ARGUMENT, [f"alpha {alpha}, beta {beta}"])
    return max(0.0, 1.0 - beta ** 2 / alpha ** 2)


# only phi is needed for dispersions, so the scan keeps the algebra at l <= 2
SCAN_ALGEBRA_DEGREE = 2


def heat_dispersion_scan(
    geometry: Geometry,
    cutoffs: Sequence[float],
    convention: CutoffConvention = CutoffConvention.PAPER_S2,
    spinor_component: int = 0,
) -> List[Tuple[float, float]]:
    """
    Dispersion of the heat state at a fixed base point for each cutoff.
    """
    out = []
    for cutoff in cutoffs:
        if not cutoff > 1:
            raise ForgeError(Err.INVALID_CUTOFF, [f"scan cutoffs must be > 1, got {cutoff}"])
        if geometry == Geometry.CIRCLE:
            t = build_circle(cutoff)
            v = heat_state(t, (0.0,))
        else:
            t = build_sphere(cutoff, convention, SCAN_ALGEBRA_DEGREE)
            v = heat_state(t, (math.pi / 2, 0.0), spinor_component)
        eta = dispersion(t, v).eta
        log.info(f"cutoff {cutoff:g}: dim H = {t.dim}, eta = {eta:.6g}")
        out.append((float(cutoff), eta))
    return out


def fit_log_scaling(cutoffs: Sequence[float], etas: Sequence[float]) -> Tuple[float, Optional[float]]:
    """
    Least squares a in eta = a log(cutoff) / cutoff^2, and the largest relative
    residual; the residual is None when fewer than two cutoffs make the fit exact.
    """
    x = np.array([math.log(c) / c ** 2 for c in cutoffs])
    y = np.asarray(etas, dtype=float)
    if len(x) == 0 or not np.any(x):
        raise ForgeError(Err.INVALID_ARGUMENT, ["nothing to fit"])
    a = float(x @ y / (x @ x))
    if len(x) < 2:
        return a, None
    residual = np.abs(a * x - y) / np.abs(y)
    return a, float(residual.max())

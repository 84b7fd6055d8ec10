"""
Rasch model fitting.

P(correct) = sigmoid(s_m - d_p) for solver ability s_m and problem difficulty
d_p, fitted by maximizing

    l(s, d) = sum_O w [y log sig(s - d) + (1 - y) log sig(d - s)] - lam * sum_p u_p d_p^2

where w are per-observation weights and u_p per-problem regularizer weights
(both 1 for a plain fit, bootstrap multiplicities otherwise).
"""
import logging
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import expit, log_expit

from arena.exceptions import DivergenceError, FitError

logger = logging.getLogger(__name__)

MAX_STEP = 1.0
MAX_HALVINGS = 40


def predict(s, d):
    """Probability that a solver of ability s answers a problem of difficulty d correctly."""
    return expit(np.subtract(s, d))


@dataclass(frozen=True)
class Observations:
    """Index arrays for a weighted outcome set."""
    solvers: tuple
    problems: tuple
    solver_index: np.ndarray
    problem_index: np.ndarray
    outcome: np.ndarray
    weight: np.ndarray
    problem_weight: np.ndarray

    @property
    def size(self):
        return int(self.outcome.shape[0])

    @classmethod
    def from_matrix(cls, matrix, problems=None):
        solvers = tuple(matrix.solvers)
        problem_ids = tuple(problems if problems is not None else matrix.problems)
        solver_pos = {name: i for i, name in enumerate(solvers)}
        problem_pos = {pid: j for j, pid in enumerate(problem_ids)}
        pairs = matrix.items()
        return cls(
            solvers=solvers,
            problems=problem_ids,
            solver_index=np.array([solver_pos[s] for (s, _), _ in pairs], dtype=np.int64),
            problem_index=np.array([problem_pos[p] for (_, p), _ in pairs], dtype=np.int64),
            outcome=np.array([y for _, y in pairs], dtype=float),
            weight=np.ones(len(pairs)),
            problem_weight=np.ones(len(problem_ids)),
        )

    def reweighted(self, multiplicity):
        """
        Observations for a resample in which problem j was drawn multiplicity[j] times.

        Problems drawn zero times drop out; solvers left without observations drop out.
        """
        multiplicity = np.asarray(multiplicity, dtype=float)
        weight = self.weight * multiplicity[self.problem_index]
        keep = weight > 0
        kept_problems = np.flatnonzero(multiplicity > 0)
        kept_solvers = np.unique(self.solver_index[keep])
        problem_map = np.full(len(self.problems), -1, dtype=np.int64)
        problem_map[kept_problems] = np.arange(len(kept_problems))
        solver_map = np.full(len(self.solvers), -1, dtype=np.int64)
        solver_map[kept_solvers] = np.arange(len(kept_solvers))
        return Observations(
            solvers=tuple(self.solvers[i] for i in kept_solvers),
            problems=tuple(self.problems[j] for j in kept_problems),
            solver_index=solver_map[self.solver_index[keep]],
            problem_index=problem_map[self.problem_index[keep]],
            outcome=self.outcome[keep],
            weight=weight[keep],
            problem_weight=self.problem_weight[kept_problems] * multiplicity[kept_problems],
        )


@dataclass(frozen=True)
class RaschFit:
    abilities: dict
    difficulties: dict
    lam: float
    converged: bool = True
    iterations: int = 0
    final_grad_norm: float = 0.0
    log_likelihood: float = float('nan')
    diagnostics: dict = field(default_factory=dict)

    def centered(self):
        """Shift abilities and difficulties so the abilities average to zero."""
        if not self.abilities:
            return self
        shift = float(np.mean(list(self.abilities.values())))
        return replace(
            self,
            abilities={m: s - shift for m, s in self.abilities.items()},
            difficulties={p: d - shift for p, d in self.difficulties.items()},
        )


# -----------------------
# Objective and derivatives
# -----------------------
def _terms(s, d, obs):
    eta = s[obs.solver_index] - d[obs.problem_index]
    return eta, obs.weight * (obs.outcome * log_expit(eta) + (1.0 - obs.outcome) * log_expit(-eta))


def objective(s, d, obs, lam):
    """Regularized log-likelihood, stabilized through log_expit."""
    s = np.asarray(s, dtype=float)
    d = np.asarray(d, dtype=float)
    if obs.size:
        _, terms = _terms(s, d, obs)
        data = float(np.sum(terms))
    else:
        data = 0.0
    return data - lam * float(np.sum(obs.problem_weight * d ** 2))


def gradient(s, d, obs, lam):
    """Analytic gradient of the objective: (d l / d s, d l / d d)."""
    s = np.asarray(s, dtype=float)
    d = np.asarray(d, dtype=float)
    eta = s[obs.solver_index] - d[obs.problem_index]
    residual = obs.weight * (obs.outcome - expit(eta))
    grad_s = np.bincount(obs.solver_index, weights=residual, minlength=len(s))
    grad_d = -np.bincount(obs.problem_index, weights=residual, minlength=len(d)) - 2.0 * lam * obs.problem_weight * d
    return grad_s, grad_d


def log_likelihood(fit_result, outcomes, lam=None):
    """Objective value of a fitted model on an outcome matrix."""
    lam = fit_result.lam if lam is None else lam
    problems = tuple(sorted(set(fit_result.difficulties) | set(outcomes.problems)))
    obs = Observations.from_matrix(outcomes, problems=problems)
    s = np.array([fit_result.abilities[m] for m in obs.solvers], dtype=float)
    d = np.array([fit_result.difficulties[p] for p in obs.problems], dtype=float)
    return objective(s, d, obs, lam)


# -----------------------
# Fitting
# -----------------------
def check_divergence(obs, lam):
    """With lam = 0 a problem answered identically by every solver has no finite difficulty."""
    if lam > 0:
        return
    correct = np.bincount(obs.problem_index, weights=obs.weight * obs.outcome, minlength=len(obs.problems))
    total = np.bincount(obs.problem_index, weights=obs.weight, minlength=len(obs.problems))
    for j, problem_id in enumerate(obs.problems):
        if total[j] <= 0:
            continue
        if correct[j] >= total[j]:
            raise DivergenceError(problem_id, 1)
        if correct[j] <= 0:
            raise DivergenceError(problem_id, 0)


def _damped_newton(x, grad, curvature, block_objective, apply_step):
    """One damped Newton step for a block of independent one-dimensional concave problems."""
    step = np.clip(grad / np.maximum(curvature, 1e-12), -MAX_STEP, MAX_STEP)
    before = block_objective(x)
    for _ in range(MAX_HALVINGS):
        after = block_objective(apply_step(x, step))
        worse = after < before - 1e-12 * (1.0 + np.abs(before))
        if not worse.any():
            break
        step = np.where(worse, step / 2.0, step)
    return apply_step(x, step)


def _ability_block(s, d, obs):
    n = len(s)

    def block_objective(candidate):
        _, terms = _terms(candidate, d, obs)
        return np.bincount(obs.solver_index, weights=terms, minlength=n)

    eta = s[obs.solver_index] - d[obs.problem_index]
    p = expit(eta)
    grad = np.bincount(obs.solver_index, weights=obs.weight * (obs.outcome - p), minlength=n)
    curvature = np.bincount(obs.solver_index, weights=obs.weight * p * (1.0 - p), minlength=n)
    return _damped_newton(s, grad, curvature, block_objective, lambda x, step: x + step)


def _difficulty_block(s, d, obs, lam):
    n = len(d)
    ridge = lam * obs.problem_weight

    def block_objective(candidate):
        _, terms = _terms(s, candidate, obs)
        return np.bincount(obs.problem_index, weights=terms, minlength=n) - ridge * candidate ** 2

    eta = s[obs.solver_index] - d[obs.problem_index]
    p = expit(eta)
    grad = -np.bincount(obs.problem_index, weights=obs.weight * (obs.outcome - p), minlength=n) - 2.0 * ridge * d
    curvature = np.bincount(obs.problem_index, weights=obs.weight * p * (1.0 - p), minlength=n) + 2.0 * ridge
    return _damped_newton(d, grad, curvature, block_objective, lambda x, step: x + step)


def _initial_point(obs, seed, initial):
    s = np.zeros(len(obs.solvers))
    d = np.zeros(len(obs.problems))
    if initial is not None:
        abilities, difficulties = initial
        s = np.array([abilities.get(m, 0.0) for m in obs.solvers], dtype=float)
        d = np.array([difficulties.get(p, 0.0) for p in obs.problems], dtype=float)
    elif seed is not None:
        rng = np.random.default_rng(seed)
        s = rng.normal(0.0, 0.5, size=len(obs.solvers))
        d = rng.normal(0.0, 0.5, size=len(obs.problems))
    return s, d


def fit_observations(obs, lam=0.01, tolerance=1e-8, max_iterations=500, seed=None, initial=None):
    """
    Maximize the regularized log-likelihood by alternating damped Newton sweeps.

    Each sweep updates all abilities (independent given the difficulties),
    then all difficulties, then applies the exact optimal common shift of both
    blocks, which only the regularizer can see. The fit stops once the
    gradient infinity-norm is below tolerance; the last parameter change is
    only reported in the diagnostics. Running out of sweeps raises FitError.
    """
    if lam < 0:
        raise FitError(f"Regularization strength must be non-negative, got {lam}")
    if obs.size == 0:
        raise FitError('Cannot fit an empty outcome set')
    check_divergence(obs, lam)

    s, d = _initial_point(obs, seed, initial)
    shift_weight = float(np.sum(obs.problem_weight))
    grad_norm = float('inf')
    change = float('inf')

    for iteration in range(max_iterations + 1):
        grad_s, grad_d = gradient(s, d, obs, lam)
        grad_norm = float(max(np.max(np.abs(grad_s)), np.max(np.abs(grad_d), initial=0.0)))
        if grad_norm < tolerance:
            break
        if iteration == max_iterations:
            raise FitError(
                f"Rasch fit did not converge in {max_iterations} sweeps "
                f"(gradient norm {grad_norm:.3e}, last change {change:.3e})",
                iterations=iteration,
                grad_norm=grad_norm,
            )
        previous_s, previous_d = s, d
        s = _ability_block(s, d, obs)
        d = _difficulty_block(s, d, obs, lam)
        if lam > 0 and shift_weight > 0:
            shift = -float(np.dot(obs.problem_weight, d)) / shift_weight
            s = s + shift
            d = d + shift
        change = float(max(np.max(np.abs(s - previous_s)), np.max(np.abs(d - previous_d), initial=0.0)))

    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(d))):
        raise FitError('Rasch fit produced non-finite parameters', iterations=iteration, grad_norm=grad_norm)

    value = objective(s, d, obs, lam)
    logger.debug(f"Rasch fit converged after {iteration} sweeps (gradient norm {grad_norm:.2e}, l = {value:.6f})")
    return RaschFit(
        abilities={m: float(v) for m, v in zip(obs.solvers, s)},
        difficulties={p: float(v) for p, v in zip(obs.problems, d)},
        lam=lam,
        converged=True,
        iterations=iteration,
        final_grad_norm=grad_norm,
        log_likelihood=value,
        diagnostics={'last_change': change, 'observations': obs.size},
    )


def fit(outcomes, lam=0.01, tolerance=1e-8, max_iterations=500, seed=None, initial=None):
    """Fit abilities and difficulties to an OutcomeMatrix."""
    return fit_observations(
        Observations.from_matrix(outcomes),
        lam=lam,
        tolerance=tolerance,
        max_iterations=max_iterations,
        seed=seed,
        initial=initial,
    )

import math

import numpy as np
from django.test import SimpleTestCase
from scipy.stats import spearmanr

from arena.exceptions import DivergenceError, FitError
from arena.outcomes import OutcomeMatrix
from rating.rasch import (
    Observations,
    RaschFit,
    fit,
    fit_observations,
    gradient,
    log_likelihood,
    objective,
    predict,
)
from rating.tests.factories import synthetic_arena


def _small_observations(seed=3, n_solvers=6, n_problems=9):
    rng = np.random.default_rng(seed)
    entries = {}
    for i in range(n_solvers):
        for j in range(n_problems):
            if rng.random() < 0.8:
                entries[(f"m{i}", f"p{j}")] = int(rng.integers(0, 2))
    return Observations.from_matrix(OutcomeMatrix(entries))


class LikelihoodTests(SimpleTestCase):
    def test_shift_invariance_without_regularization(self):
        obs = _small_observations()
        rng = np.random.default_rng(11)
        for _ in range(5):
            s = rng.normal(size=len(obs.solvers))
            d = rng.normal(size=len(obs.problems))
            c = float(rng.normal(scale=3.0))
            self.assertAlmostEqual(objective(s + c, d + c, obs, 0.0), objective(s, d, obs, 0.0), delta=1e-10)

    def test_regularizer_breaks_shift_invariance(self):
        obs = _small_observations()
        s = np.zeros(len(obs.solvers))
        d = np.ones(len(obs.problems))
        self.assertNotAlmostEqual(objective(s + 1, d + 1, obs, 0.5), objective(s, d, obs, 0.5))

    def test_gradient_matches_central_differences(self):
        obs = _small_observations()
        rng = np.random.default_rng(5)
        lam = 0.3
        s = rng.normal(size=len(obs.solvers))
        d = rng.normal(size=len(obs.problems))
        grad_s, grad_d = gradient(s, d, obs, lam)
        analytic = np.concatenate([grad_s, grad_d])

        h = 1e-6
        x = np.concatenate([s, d])
        numeric = np.zeros_like(x)
        n = len(s)
        for k in range(len(x)):
            up, down = x.copy(), x.copy()
            up[k] += h
            down[k] -= h
            numeric[k] = (objective(up[:n], up[n:], obs, lam) - objective(down[:n], down[n:], obs, lam)) / (2 * h)

        relative = np.linalg.norm(analytic - numeric) / np.linalg.norm(analytic)
        self.assertLess(relative, 1e-6)

    def test_predict_is_logistic(self):
        self.assertAlmostEqual(float(predict(0.0, 0.0)), 0.5)
        self.assertAlmostEqual(float(predict(1.0, 0.0) + predict(0.0, 1.0)), 1.0)
        self.assertAlmostEqual(float(predict(math.log(10), 0.0)), 10 / 11, places=12)

    def test_predict_strictly_increasing_in_ability_and_decreasing_in_difficulty(self):
        grid = np.linspace(-8.0, 8.0, 161)
        self.assertTrue(np.all(np.diff(predict(grid, 0.5)) > 0))
        self.assertTrue(np.all(np.diff(predict(0.5, grid)) < 0))

    def test_log_likelihood_single_even_match(self):
        fit_result = RaschFit(abilities={'m': 0.7}, difficulties={'p': 0.7}, lam=0.0)
        value = log_likelihood(fit_result, OutcomeMatrix({('m', 'p'): 1}))
        self.assertAlmostEqual(value, math.log(0.5), places=12)

    def test_log_likelihood_without_observations_is_the_penalty(self):
        fit_result = RaschFit(abilities={}, difficulties={'p1': 0.5, 'p2': -1.5}, lam=0.2)
        value = log_likelihood(fit_result, OutcomeMatrix({}))
        self.assertAlmostEqual(value, -0.2 * (0.25 + 2.25), places=12)

    def test_log_likelihood_matches_direct_sum(self):
        abilities = {'m0': 0.4, 'm1': -1.1}
        difficulties = {'p0': 0.9, 'p1': -0.3}
        outcomes = {('m0', 'p0'): 1, ('m0', 'p1'): 0, ('m1', 'p0'): 0, ('m1', 'p1'): 1}
        lam = 0.05
        expected = 0.0
        for (m, p), y in outcomes.items():
            prob = 1.0 / (1.0 + math.exp(-(abilities[m] - difficulties[p])))
            expected += y * math.log(prob) + (1 - y) * math.log(1.0 - prob)
        expected -= lam * sum(d ** 2 for d in difficulties.values())

        fit_result = RaschFit(abilities=abilities, difficulties=difficulties, lam=lam)
        self.assertLess(abs(log_likelihood(fit_result, OutcomeMatrix(outcomes)) - expected), 1e-12)

    def test_log_likelihood_of_fit_is_its_optimum(self):
        matrix = OutcomeMatrix({('m0', 'p0'): 1, ('m0', 'p1'): 0, ('m1', 'p0'): 0, ('m1', 'p1'): 1, ('m2', 'p0'): 1})
        result = fit(matrix, lam=0.1)
        best = log_likelihood(result, matrix)
        moved = RaschFit(
            abilities=result.abilities,
            difficulties={p: d + 0.05 for p, d in result.difficulties.items()},
            lam=0.1,
        )
        self.assertAlmostEqual(best, result.log_likelihood, places=12)
        self.assertGreater(best, log_likelihood(moved, matrix))


class FitTests(SimpleTestCase):
    def setUp(self):
        self.matrix = OutcomeMatrix({
            ('a', 'easy'): 1, ('b', 'easy'): 1, ('c', 'easy'): 1,
            ('a', 'hard'): 0, ('b', 'hard'): 0, ('c', 'hard'): 0,
            ('a', 'mid'): 1, ('b', 'mid'): 0, ('c', 'mid'): 1,
            ('a', 'mid2'): 1, ('b', 'mid2'): 1, ('c', 'mid2'): 0,
        })

    def test_unregularized_fit_diverges_on_unanimous_problems(self):
        with self.assertRaises(DivergenceError) as ctx:
            fit(self.matrix, lam=0.0)
        self.assertIn(ctx.exception.problem_id, ('easy', 'hard'))

    def test_regularized_fit_is_finite(self):
        result = fit(self.matrix, lam=0.01)
        self.assertTrue(result.converged)
        self.assertLess(result.final_grad_norm, 1e-8)
        for value in list(result.abilities.values()) + list(result.difficulties.values()):
            self.assertTrue(np.isfinite(value))
        self.assertLess(result.difficulties['easy'], result.difficulties['mid'])
        self.assertLess(result.difficulties['mid'], result.difficulties['hard'])

    def test_seeded_start_reaches_the_same_optimum(self):
        a = fit(self.matrix, lam=0.05)
        b = fit(self.matrix, lam=0.05, seed=42)
        for model in a.abilities:
            self.assertAlmostEqual(a.abilities[model], b.abilities[model], places=6)

    def test_centered_abilities_average_zero(self):
        centered = fit(self.matrix, lam=0.01).centered()
        self.assertAlmostEqual(float(np.mean(list(centered.abilities.values()))), 0.0, places=12)

    def test_invalid_inputs(self):
        with self.assertRaises(FitError):
            fit(self.matrix, lam=-1.0)
        with self.assertRaises(FitError):
            fit(OutcomeMatrix({}))

    def test_iteration_limit(self):
        with self.assertRaises(FitError) as ctx:
            fit(self.matrix, lam=0.01, max_iterations=1, tolerance=1e-14)
        self.assertEqual(ctx.exception.iterations, 1)


class RecoveryTests(SimpleTestCase):
    """Twenty agents on [-2, 2] logits, thirty problems each."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.problems, cls.matrix, cls.abilities, cls.difficulties = synthetic_arena(seed=7)
        cls.result = fit(cls.matrix, lam=0.01)

    def test_ability_ranking_recovered(self):
        models = sorted(self.abilities)
        rho, _ = spearmanr(
            [self.abilities[m] for m in models],
            [self.result.abilities[m] for m in models],
        )
        self.assertGreaterEqual(rho, 0.95)

    def test_predicted_rates_match_empirical(self):
        obs = Observations.from_matrix(self.matrix)
        s = np.array([self.result.abilities[m] for m in obs.solvers])
        d = np.array([self.result.difficulties[p] for p in obs.problems])
        p = predict(s[obs.solver_index], d[obs.problem_index])
        errors = []
        for i in range(len(obs.solvers)):
            mask = obs.solver_index == i
            errors.append(abs(float(p[mask].mean()) - float(obs.outcome[mask].mean())))
        self.assertLessEqual(float(np.mean(errors)), 0.05)

    def test_warm_start_matches_cold_start(self):
        obs = Observations.from_matrix(self.matrix)
        warm = fit_observations(obs, lam=0.01, initial=(self.result.abilities, self.result.difficulties))
        self.assertLessEqual(warm.iterations, 1)
        for model in self.result.abilities:
            self.assertAlmostEqual(warm.abilities[model], self.result.abilities[model], places=6)

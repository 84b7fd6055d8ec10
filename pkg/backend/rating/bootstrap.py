"""
Stratified bootstrap intervals and rank ranges.

Each resample redraws every author's problems with replacement from that
author's own pool, refits the Rasch model on the reweighted outcomes and
recomputes all three rating axes. Resample i is seeded from (seed, i) alone.
"""
import logging
from collections import Counter, OrderedDict
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from arena.domain import Axis, IntervalRow, Validity
from arena.exceptions import ArenaError, BootstrapError, ConfigurationError, DataIntegrityError
from rating.elo import rate_models
from rating.rasch import Observations, fit_observations

logger = logging.getLogger(__name__)

MAX_DROP_FRACTION = 0.01
AXES = (Axis.SOLVE, Axis.AUTHOR, Axis.COMPOSITE)


@dataclass(frozen=True)
class BootstrapSpec:
    iterations: int = 10000
    alpha: float = 0.025
    seed: int = 0
    stratify_by: str = 'author'
    n_jobs: int = 1
    max_drop_fraction: float = MAX_DROP_FRACTION

    def __post_init__(self):
        if self.iterations < 1:
            raise ConfigurationError(f"Bootstrap iterations must be at least 1, got {self.iterations}")
        if not 0 < self.alpha < 0.5:
            raise ConfigurationError(f"Bootstrap alpha must lie in (0, 0.5), got {self.alpha}")
        if self.stratify_by != 'author':
            raise ConfigurationError(f"Unsupported stratification '{self.stratify_by}'")


def resample_rng(seed, index):
    return np.random.default_rng([seed, index])


def strata(problems):
    """Problems grouped by author, authors in name order, pools in input order."""
    pools = OrderedDict()
    for author in sorted({p.author for p in problems}):
        pools[author] = [p for p in problems if p.author == author]
    return pools


def stratified_resample(problems, rng):
    """Draw |pool| problems with replacement from every author's pool."""
    if any(p.validity == Validity.INVALID for p in problems):
        raise DataIntegrityError('Excluded problems cannot enter a bootstrap resample')
    sample = []
    for pool in strata(problems).values():
        picks = rng.integers(0, len(pool), size=len(pool))
        sample.extend(pool[i] for i in picks)
    return sample


def _axis_values(rows):
    return {
        row.model: {
            Axis.SOLVE: row.solve_rating,
            Axis.AUTHOR: row.author_rating,
            Axis.COMPOSITE: row.composite,
        }
        for row in rows
    }


def _one_resample(index, base, valid, position, full_fit, spec, rank_config):
    sample = stratified_resample(valid, resample_rng(spec.seed, index))
    multiplicity = np.zeros(len(base.problems))
    for problem in sample:
        j = position.get(problem.id)
        if j is not None:
            multiplicity[j] += 1
    try:
        refit = fit_observations(
            base.reweighted(multiplicity),
            lam=rank_config.lam,
            tolerance=rank_config.tolerance,
            max_iterations=rank_config.max_iterations,
            initial=(full_fit.abilities, full_fit.difficulties),
        )
        return index, _axis_values(rate_models(refit, sample, rank_config))
    except ArenaError as e:
        logger.warning(f"Bootstrap resample {index} dropped: {e}")
        return index, None


def bootstrap_ci(outcomes, problems, spec, rank_config, full_fit=None):
    """
    Percentile intervals for every model on the solve, author and composite axes.

    The point value of each row comes from the fit on the full data; pass
    `full_fit` to reuse one already computed.
    """
    valid = [p for p in problems if p.validity != Validity.INVALID]
    base = Observations.from_matrix(outcomes)
    position = {pid: j for j, pid in enumerate(base.problems)}
    if full_fit is None:
        full_fit = fit_observations(
            base,
            lam=rank_config.lam,
            tolerance=rank_config.tolerance,
            max_iterations=rank_config.max_iterations,
        )
    point = _axis_values(rate_models(full_fit, valid, rank_config))

    logger.info(f"Running {spec.iterations} stratified bootstrap resamples over {len(valid)} problems")
    results = Parallel(n_jobs=spec.n_jobs, prefer='threads')(
        delayed(_one_resample)(i, base, valid, position, full_fit, spec, rank_config)
        for i in range(spec.iterations)
    )
    results.sort(key=lambda item: item[0])

    dropped = sum(1 for _, values in results if values is None)
    if dropped > spec.max_drop_fraction * spec.iterations:
        raise BootstrapError(
            f"{dropped} of {spec.iterations} bootstrap resamples failed "
            f"(limit {spec.max_drop_fraction:.0%})"
        )
    if dropped:
        logger.warning(f"Dropped {dropped} of {spec.iterations} bootstrap resamples")

    rows = []
    for model in sorted(point):
        for axis in AXES:
            estimate = point[model][axis]
            draws = [
                values[model][axis]
                for _, values in results
                if values is not None and model in values and values[model][axis] is not None
            ]
            if estimate is None or not draws:
                continue
            lower, upper = np.quantile(np.array(draws), [spec.alpha, 1.0 - spec.alpha])
            rows.append(IntervalRow(model=model, axis=axis, point=estimate, lower=float(lower), upper=float(upper)))
    return rows


def rank_ranges(intervals):
    """
    Worst-case rank range of each model from composite intervals.

    best = 1 + #{j : lower_j > upper_m}, worst = 1 + #{j : upper_j > lower_m}.
    """
    composite = [row for row in intervals if row.axis == Axis.COMPOSITE]
    counts = Counter(row.model for row in composite)
    repeated = [model for model, count in counts.items() if count > 1]
    if repeated:
        raise DataIntegrityError(f"More than one composite interval for {', '.join(sorted(repeated))}")

    ranges = {}
    for row in composite:
        others = [other for other in composite if other.model != row.model]
        best = 1 + sum(1 for other in others if other.lower > row.upper)
        worst = 1 + sum(1 for other in others if other.upper > row.lower)
        ranges[row.model] = (best, worst)
    return ranges

"""
Elo-scale ratings derived from a Rasch fit.

Abilities and difficulties are both mapped through the same affine transform
R = anchor_rating + C_ELO * (x - anchor_ability), so solve and author ratings
live on one scale before they are combined.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from arena.domain import RatingRow, Validity
from arena.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

C_ELO = 400.0 / math.log(10.0)


@dataclass(frozen=True)
class EloScale:
    anchor_rating: float
    anchor_ability: float
    c_elo: float = C_ELO

    @classmethod
    def from_fit(cls, fit_result, anchor_model, anchor_rating=1500.0):
        if anchor_model not in fit_result.abilities:
            raise ConfigurationError(f"Anchor model '{anchor_model}' has no fitted ability")
        return cls(anchor_rating=anchor_rating, anchor_ability=fit_result.abilities[anchor_model])

    def rate(self, logit):
        return self.anchor_rating + self.c_elo * (logit - self.anchor_ability)


@dataclass(frozen=True)
class RankConfig:
    anchor_model: str
    anchor_rating: float = 1500.0
    weights: tuple = (0.5, 0.5)
    lam: float = 0.01
    tolerance: float = 1e-8
    max_iterations: int = 500

    def __post_init__(self):
        check_weights(self.weights)


def check_weights(weights):
    w_solve, w_author = weights
    if w_solve < 0 or w_author < 0 or not math.isclose(w_solve + w_author, 1.0, abs_tol=1e-12):
        raise ConfigurationError(f"Rating weights must be non-negative and sum to 1, got {tuple(weights)}")


def to_solver_rating(fit_result, scale):
    """Solve-axis rating of every solver in the fit."""
    return {model: scale.rate(ability) for model, ability in fit_result.abilities.items()}


def _scored(problems, fit_result):
    return [p for p in problems if p.validity != Validity.INVALID and p.id in fit_result.difficulties]


def author_rating(fit_result, problems, author, scale, global_mean=None):
    """
    Mean rated difficulty of an author's valid problems.

    A problem whose gold the verifier overrode counts at most at the mean
    difficulty of the author's gold-correct problems; an author without any
    gold-correct problem is capped at the mean difficulty of all problems
    given. Returns None for an author with no valid problem.
    """
    scored = _scored(problems, fit_result)
    authored = [p for p in scored if p.author == author]
    if not authored:
        return None

    difficulties = fit_result.difficulties
    gold_correct = [difficulties[p.id] for p in authored if not p.gold_overridden]
    if gold_correct:
        cap = float(np.mean(gold_correct))
    elif global_mean is not None:
        cap = global_mean
    else:
        cap = float(np.mean([difficulties[p.id] for p in scored]))

    effective = [
        difficulties[p.id] if not p.gold_overridden else min(difficulties[p.id], cap)
        for p in authored
    ]
    return float(np.mean([scale.rate(d) for d in effective]))


def composite(solve, author, weights=(0.5, 0.5)):
    """Weighted combination of the two axes; None when the author axis is missing."""
    if solve is None or author is None:
        return None
    check_weights(weights)
    w_solve, w_author = weights
    if w_author == 0:
        return float(solve)
    return w_solve * solve + w_author * author


def rate_models(fit_result, problems, config):
    """RatingRow for every solver in the fit, in model-name order."""
    centered = fit_result.centered()
    scale = EloScale.from_fit(centered, config.anchor_model, config.anchor_rating)
    solve = to_solver_rating(centered, scale)
    scored = _scored(problems, centered)
    global_mean = float(np.mean([centered.difficulties[p.id] for p in scored])) if scored else None

    rows = []
    for model in sorted(solve):
        authored = [p for p in scored if p.author == model]
        author = author_rating(centered, problems, model, scale, global_mean=global_mean)
        if author is None:
            logger.warning(f"Model '{model}' has no valid authored problem; author and composite ratings are absent")
        rows.append(
            RatingRow(
                model=model,
                solve_rating=solve[model],
                author_rating=author,
                composite=composite(solve[model], author, config.weights),
                problems_authored_valid=len(authored),
                gold_correct_count=sum(1 for p in authored if not p.gold_overridden),
            )
        )
    return rows


def display_rating(value):
    """Integer display value, rounding half to even."""
    if value is None:
        return None
    return int(round(value))

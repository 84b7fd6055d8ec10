"""
Domain types shared by every phase of an arena round.

All records are frozen dataclasses; phases produce new objects with
dataclasses.replace instead of mutating what earlier phases emitted.
"""
from dataclasses import dataclass, field
from typing import Optional

from django.db import models

from arena.exceptions import GenerationError


class Validity(models.TextChoices):
    UNCHECKED = 'unchecked', 'Unchecked'
    VALID = 'valid', 'Valid'
    INVALID = 'invalid', 'Invalid'


class Role(models.TextChoices):
    AUTHOR = 'author', 'Author'
    SOLVER = 'solver', 'Solver'
    VERIFIER = 'verifier', 'Verifier'


class Judgement(models.TextChoices):
    CORRECT = 'correct', 'Correct'
    INCORRECT = 'incorrect', 'Incorrect'
    PARSE_FAILURE = 'parse_failure', 'Parse failure'
    MISSING_ANSWER = 'missing_answer', 'Missing answer'
    GOLD_ERROR = 'gold_error', 'Gold could not be evaluated'


class Axis(models.TextChoices):
    SOLVE = 'solve', 'Solve'
    AUTHOR = 'author', 'Author'
    COMPOSITE = 'composite', 'Composite'


@dataclass(frozen=True)
class DomainTag:
    broad_area: str
    subfield: str

    def __str__(self):
        return f"{self.broad_area} / {self.subfield}"


@dataclass(frozen=True)
class MetaPrompt:
    author: str
    domain: DomainTag
    text: str


@dataclass(frozen=True)
class GenerationTrace:
    stages_used: int
    draft_statement: str
    draft_gold: str
    meta_prompt: Optional[MetaPrompt] = None
    # (statement, gold) per hardening round, in order
    amplification_history: tuple = ()

    def check(self):
        if self.stages_used not in (1, 2, 3):
            raise GenerationError(f"stages_used must be 1, 2 or 3, got {self.stages_used}")
        if self.stages_used == 1 and (self.meta_prompt is not None or self.amplification_history):
            raise GenerationError('Direct generation cannot carry a meta-prompt or amplification history')
        if self.stages_used == 2 and self.amplification_history:
            raise GenerationError('Two-stage generation cannot carry amplification history')
        if self.stages_used >= 2 and self.meta_prompt is None:
            raise GenerationError(f"{self.stages_used}-stage generation needs a meta-prompt")
        return self


@dataclass(frozen=True)
class Oracle:
    """Ground truth attached to synthetic problems."""
    latent_difficulty: float
    true_answer: str


@dataclass(frozen=True)
class Problem:
    id: str
    author: str
    domain: DomainTag
    statement: str
    gold: str
    provenance: GenerationTrace
    original_gold: str = ''
    gold_overridden: bool = False
    validity: str = Validity.UNCHECKED
    oracle: Optional[Oracle] = None

    def __post_init__(self):
        if not self.statement or not self.gold:
            raise GenerationError(f"Problem '{self.id}' needs a statement and a gold answer")
        if not self.original_gold:
            object.__setattr__(self, 'original_gold', self.gold)


@dataclass(frozen=True)
class SolveRecord:
    solver: str
    problem: str
    answer: str
    trace: str
    outcome: int
    judgement: str = Judgement.INCORRECT


@dataclass(frozen=True)
class Candidate:
    answer: str
    traces: tuple = ()
    support: int = 0
    is_gold: bool = False


@dataclass(frozen=True)
class CandidateSet:
    problem: str
    candidates: tuple

    @property
    def gold(self):
        return self.candidates[0]


@dataclass(frozen=True)
class Verdict:
    problem: str
    backbone: str
    valid: int
    selected: Optional[str]
    rationale: str = ''
    selected_index: Optional[int] = None
    samples: int = 1
    conflict: bool = False


@dataclass(frozen=True)
class RatingRow:
    model: str
    solve_rating: float
    author_rating: Optional[float]
    composite: Optional[float]
    problems_authored_valid: int = 0
    gold_correct_count: int = 0


@dataclass(frozen=True)
class IntervalRow:
    model: str
    axis: str
    point: float
    lower: float
    upper: float


@dataclass(frozen=True)
class LeaderboardRow:
    rank: int
    model: str
    solve: float
    author: Optional[float]
    composite: Optional[float]
    ci: Optional[tuple] = None
    range: Optional[tuple] = None
    flags: tuple = field(default_factory=tuple)

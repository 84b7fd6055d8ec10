"""
Synthetic participants with known latent parameters.

Authors emit templated arithmetic problems whose answers are computed
exactly; solvers answer correctly with probability sigmoid(s* - d*) and
otherwise give the true value plus one. Every random draw comes from a
stream keyed by (seed, agent, purpose, item), so results do not depend on
dispatch order.
"""
import logging
from fractions import Fraction
from math import comb

from scipy.special import expit

from agents.base import Agent, Purpose
from arena.domain import GenerationTrace, Oracle, Problem
from arena.exceptions import ConfigurationError, GenerationError, JudgmentError
from arena.randomness import keyed_rng
from grading.canonical import equivalent

logger = logging.getLogger(__name__)


def format_value(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _template(rng):
    """A random arithmetic item as (latex text, exact value)."""
    a, b, c, d = (int(x) for x in rng.integers(2, 30, size=4))
    kind = int(rng.integers(0, 5))
    if kind == 0:
        return f"{a} \\cdot {b} + {c}", Fraction(a * b + c)
    if kind == 1:
        return f"\\frac{{{a} + {b}}}{{{c}}}", Fraction(a + b, c)
    if kind == 2:
        return f"{a}^{{2}} - {b} \\cdot {c}", Fraction(a * a - b * c)
    if kind == 3:
        return f"\\frac{{{a}}}{{{b}}} + \\frac{{{c}}}{{{d}}}", Fraction(a, b) + Fraction(c, d)
    n = a % 12 + 4
    k = b % (n - 1) + 1
    return f"\\binom{{{n}}}{{{k}}} - {c}", Fraction(comb(n, k) - c)


def verdict_reply(valid, index=None, rationale=''):
    lines = [f"VALID: {'yes' if valid else 'no'}", f"ANSWER: {index if index is not None else 'none'}"]
    if rationale:
        lines.append(f"RATIONALE: {rationale}")
    return '\n'.join(lines)


class SyntheticAgent(Agent):
    synthetic = True

    def __init__(
        self,
        name,
        latent_ability=0.0,
        authoring_difficulty_mean=0.0,
        authoring_difficulty_spread=1.0,
        gold_error_rate=0.0,
        seed=0,
        canned=None,
    ):
        super().__init__(name)
        if not 0.0 <= gold_error_rate <= 1.0:
            raise ConfigurationError(f"gold_error_rate for '{name}' must be in [0, 1], got {gold_error_rate}")
        if authoring_difficulty_spread < 0:
            raise ConfigurationError(f"authoring_difficulty_spread for '{name}' must be non-negative")
        self.latent_ability = latent_ability
        self.authoring_difficulty_mean = authoring_difficulty_mean
        self.authoring_difficulty_spread = authoring_difficulty_spread
        self.gold_error_rate = gold_error_rate
        self.seed = seed
        self.canned = dict(canned or {})

    @property
    def is_canned(self):
        return bool(self.canned)

    # -----------------------
    # Authoring
    # -----------------------
    def synth_author(self, k, schedule):
        if k != len(schedule):
            raise GenerationError(f"Schedule for '{self.name}' has {len(schedule)} slots, expected {k}")
        problems = []
        perturbed = 0
        for slot, domain in enumerate(schedule):
            rng = keyed_rng(self.seed, self.name, 'author', slot)
            difficulty = self.authoring_difficulty_mean + self.authoring_difficulty_spread * float(rng.standard_normal())
            expression, value = _template(rng)
            true_answer = format_value(value)
            gold = true_answer
            if rng.random() < self.gold_error_rate:
                gold = format_value(value - 1)
                perturbed += 1
            statement = f"[{domain.broad_area}: {domain.subfield}] Evaluate ${expression}$."
            problems.append(
                Problem(
                    id=f"{self.name}/p{slot + 1:03d}",
                    author=self.name,
                    domain=domain,
                    statement=statement,
                    gold=gold,
                    provenance=GenerationTrace(stages_used=1, draft_statement=statement, draft_gold=gold),
                    oracle=Oracle(latent_difficulty=difficulty, true_answer=true_answer),
                )
            )
        if perturbed:
            logger.info(f"Synthetic author '{self.name}' recorded {perturbed} perturbed gold answer(s)")
        return problems

    # -----------------------
    # Solving
    # -----------------------
    def solve_probability(self, problem):
        return float(expit(self.latent_ability - problem.oracle.latent_difficulty))

    def synth_solve(self, problem):
        if problem.oracle is None:
            raise GenerationError(f"Problem '{problem.id}' has no latent difficulty to solve against")
        rng = keyed_rng(self.seed, self.name, 'solve', problem.id)
        truth = Fraction(problem.oracle.true_answer)
        if rng.random() < self.solve_probability(problem):
            return format_value(truth)
        return format_value(truth + 1)

    # -----------------------
    # Verifying
    # -----------------------
    def synth_verify(self, problem, candidates):
        """Pick the candidate matching the known answer, else the best-supported one."""
        options = candidates.candidates
        if problem.oracle is not None:
            for index, candidate in enumerate(options, start=1):
                try:
                    if equivalent(candidate.answer, problem.oracle.true_answer):
                        return verdict_reply(True, index, 'matches the recomputed value')
                except JudgmentError:
                    continue
            return verdict_reply(False, rationale='no candidate matches the recomputed value')
        best = max(range(len(options)), key=lambda i: (options[i].support, -i))
        return verdict_reply(True, best + 1, 'plurality of solver answers')

    def complete(self, prompt, *, purpose, context=None):
        if purpose in self.canned:
            return self.canned[purpose]
        context = context or {}
        if purpose == Purpose.SOLVE and 'problem' in context:
            return f"Substituting the values gives the result.\nANSWER: {self.synth_solve(context['problem'])}"
        if purpose == Purpose.VERIFY and 'problem' in context:
            return self.synth_verify(context['problem'], context['candidates'])
        raise GenerationError(f"Synthetic agent '{self.name}' has no reply for purpose '{purpose}'")

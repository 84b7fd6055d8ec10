import logging
from dataclasses import dataclass

from arena.domain import Judgement
from arena.exceptions import EvaluationError, ExpressionParseError, JudgmentError
from grading.canonical import canonical_from_text, forms_equal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JudgeResult:
    outcome: int
    judgement: str


def gold_form(gold):
    """Canonical form of a reference answer; a gold that cannot be evaluated is a problem-level error."""
    try:
        return canonical_from_text(gold)
    except (ExpressionParseError, EvaluationError) as e:
        raise JudgmentError(f"Gold answer '{gold}' cannot be used for judging: {e}") from e


def judge(answer, gold):
    """
    Score one answer against the reference answer.

    Returns outcome 1 only for an answer equivalent to the gold. Empty and
    unparseable answers score 0 and carry their own judgement tag so parse
    failures can be counted in the records.
    """
    reference = gold_form(gold)

    if answer is None or not str(answer).strip():
        return JudgeResult(0, Judgement.MISSING_ANSWER)

    try:
        candidate = canonical_from_text(answer)
    except (ExpressionParseError, EvaluationError) as e:
        logger.warning(f"Answer '{str(answer)[:80]}' could not be judged: {e}")
        return JudgeResult(0, Judgement.PARSE_FAILURE)

    if forms_equal(candidate, reference):
        return JudgeResult(1, Judgement.CORRECT)
    return JudgeResult(0, Judgement.INCORRECT)

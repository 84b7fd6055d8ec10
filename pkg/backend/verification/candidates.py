import logging

from arena.domain import Candidate, CandidateSet, Judgement
from arena.exceptions import EvaluationError, ExpressionParseError
from grading.canonical import canonical_from_text, forms_equal

logger = logging.getLogger(__name__)


def _form(text):
    try:
        return canonical_from_text(text)
    except (ExpressionParseError, EvaluationError):
        return None


def needs_verification(problem, records):
    """True when any non-author attempt on the problem scored 0."""
    return any(r.outcome == 0 for r in records if r.problem == problem.id and r.solver != problem.author)


def build_candidate_set(problem, records):
    """
    Distinct answers to a problem, the gold first.

    Answers are merged by canonical equivalence; missing and unparseable
    answers are left out. Traces are kept without solver names.
    """
    attempts = sorted(
        (r for r in records if r.problem == problem.id and r.solver != problem.author),
        key=lambda r: r.solver,
    )
    gold_form = _form(problem.gold)
    entries = [{'answer': problem.gold, 'form': gold_form, 'traces': [], 'support': 0, 'is_gold': True}]
    skipped = 0

    for record in attempts:
        if record.judgement == Judgement.MISSING_ANSWER or not record.answer.strip():
            skipped += 1
            continue
        form = _form(record.answer)
        if form is None:
            skipped += 1
            continue
        for entry in entries:
            if entry['form'] is not None and forms_equal(entry['form'], form):
                entry['traces'].append(record.trace)
                entry['support'] += 1
                break
        else:
            entries.append({'answer': record.answer, 'form': form, 'traces': [record.trace], 'support': 1, 'is_gold': False})

    if skipped:
        logger.debug(f"'{problem.id}': {skipped} answer(s) left out of the candidate set")
    return CandidateSet(
        problem=problem.id,
        candidates=tuple(
            Candidate(answer=e['answer'], traces=tuple(e['traces']), support=e['support'], is_gold=e['is_gold'])
            for e in entries
        ),
    )

"""
Verification of disputed problems by a backbone model.

The backbone sees the statement, the author's answer and the distinct
candidate answers with one reasoning trace each (no solver names), and
replies with VALID: yes/no and ANSWER: <candidate number>.
"""
import logging
import re
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path

from agents.base import Purpose
from arena.domain import Validity, Verdict
from arena.exceptions import DataIntegrityError, EvaluationError, ExpressionParseError, VerificationError
from arena.solving import judge_record
from genpipe.prompts import PromptLibrary
from grading.canonical import canonical_from_text, forms_equal
from verification.candidates import build_candidate_set

logger = logging.getLogger(__name__)

prompts = PromptLibrary(Path(__file__).resolve().parent / 'prompts')

TRACE_EXCERPT = 2000
VALID_RE = re.compile(r'^\s*\**\s*VALID\s*\**\s*:\s*\**\s*(\w+)', re.IGNORECASE | re.MULTILINE)
ANSWER_RE = re.compile(r'^\s*\**\s*ANSWER\s*\**\s*:\s*(.*?)\s*$', re.IGNORECASE | re.MULTILINE)
RATIONALE_RE = re.compile(r'^\s*\**\s*RATIONALE\s*\**\s*:\s*(.*)', re.IGNORECASE | re.MULTILINE | re.DOTALL)
INDEX_RE = re.compile(r'^(?:candidate\s*)?[\[(#]?\s*(\d+)\s*[\])]?\.?$', re.IGNORECASE)
YES = {'yes', 'y', 'true', 'valid', '1'}
NO = {'no', 'n', 'false', 'invalid', '0'}
NONE = {'', 'none', 'n/a', 'na', '-', 'null'}


@dataclass(frozen=True)
class VerdictSample:
    valid: int
    index: int = None
    rationale: str = ''


def _match_candidate(text, candidates):
    """1-based index of the candidate equivalent to a free-form answer, or None."""
    try:
        form = canonical_from_text(text)
    except (ExpressionParseError, EvaluationError):
        return None
    for index, candidate in enumerate(candidates.candidates, start=1):
        try:
            if forms_equal(canonical_from_text(candidate.answer), form):
                return index
        except (ExpressionParseError, EvaluationError):
            continue
    return None


def parse_verdict(text, candidates):
    """VerdictSample from a backbone reply, or None when the reply cannot be read."""
    text = text or ''
    valid_match = VALID_RE.search(text)
    if not valid_match:
        return None
    flag = valid_match.group(1).lower()
    if flag not in YES | NO:
        return None
    rationale_match = RATIONALE_RE.search(text)
    rationale = rationale_match.group(1).strip() if rationale_match else ''
    if flag in NO:
        return VerdictSample(valid=0, rationale=rationale)

    answer_match = ANSWER_RE.search(text)
    if not answer_match:
        return None
    answer = answer_match.group(1).strip().strip('`*').strip()
    if answer.lower() in NONE:
        return None
    index_match = INDEX_RE.match(answer)
    if index_match:
        index = int(index_match.group(1))
        if 1 <= index <= len(candidates.candidates):
            return VerdictSample(valid=1, index=index, rationale=rationale)
    index = _match_candidate(answer, candidates)
    if index is None:
        return None
    return VerdictSample(valid=1, index=index, rationale=rationale)


def plurality(samples):
    """Validity by majority (a tie counts as invalid), then the most chosen candidate, lowest number on ties."""
    valid = [s for s in samples if s.valid]
    if len(valid) * 2 <= len(samples):
        rationale = next((s.rationale for s in samples if not s.valid), '')
        return VerdictSample(valid=0, rationale=rationale)
    counts = Counter(s.index for s in valid)
    index = min(counts, key=lambda i: (-counts[i], i))
    rationale = next(s.rationale for s in valid if s.index == index)
    return VerdictSample(valid=1, index=index, rationale=rationale)


class VerifierService:
    def __init__(self, agent, samples=1, escalation_samples=3):
        if samples < 1 or escalation_samples < 1:
            raise VerificationError('Verifier sample counts must be at least 1')
        self.agent = agent
        self.samples = samples
        self.escalation_samples = escalation_samples

    @property
    def backbone(self):
        return self.agent.name

    def build_prompt(self, problem, candidates):
        listing = []
        for index, candidate in enumerate(candidates.candidates, start=1):
            entry = f"[{index}] {candidate.answer}"
            if candidate.traces:
                entry += f"\n    Reasoning: {candidate.traces[0][:TRACE_EXCERPT]}"
            listing.append(entry)
        return prompts.render(
            'verify', statement=problem.statement, gold=problem.gold, candidates='\n'.join(listing)
        )

    def _sample(self, problem, candidates, prompt, number):
        context = {'problem': problem, 'candidates': candidates, 'sample': number}
        reply = self.agent.complete(prompt, purpose=Purpose.VERIFY, context=context)
        parsed = parse_verdict(reply, candidates)
        if parsed is not None:
            return parsed
        logger.warning(f"Unreadable verdict from '{self.backbone}' on '{problem.id}'; re-asking once")
        reply = self.agent.complete(
            prompt + prompts.template('format_reminder'), purpose=Purpose.VERIFY, context=context
        )
        parsed = parse_verdict(reply, candidates)
        if parsed is None:
            raise VerificationError(f"Verdict from '{self.backbone}' on '{problem.id}' could not be parsed")
        return parsed

    def _verdict(self, problem, candidates, samples):
        chosen = plurality(samples)
        selected = candidates.candidates[chosen.index - 1].answer if chosen.valid else None
        conflict = self.backbone == problem.author
        if conflict:
            logger.warning(f"Verifier '{self.backbone}' is judging its own problem '{problem.id}'")
        return Verdict(
            problem=problem.id,
            backbone=self.backbone,
            valid=chosen.valid,
            selected=selected,
            rationale=chosen.rationale,
            selected_index=chosen.index if chosen.valid else None,
            samples=len(samples),
            conflict=conflict,
        )

    def verify(self, problem, candidates, samples=None):
        if not candidates.candidates:
            raise VerificationError(f"No candidates to verify for '{problem.id}'")
        samples = self.samples if samples is None else samples
        prompt = self.build_prompt(problem, candidates)
        drawn = [self._sample(problem, candidates, prompt, k) for k in range(samples)]
        return self._verdict(problem, candidates, drawn)

    def verify_problem(self, problem, records):
        """
        Verify one problem from its solve records.

        A single verdict that picks an answer held by a strict minority of the
        solvers is topped up to `escalation_samples` draws and decided by plurality.
        """
        candidates = build_candidate_set(problem, records)
        prompt = self.build_prompt(problem, candidates)
        drawn = [self._sample(problem, candidates, prompt, k) for k in range(self.samples)]
        verdict = self._verdict(problem, candidates, drawn)

        solvers = sum(1 for r in records if r.problem == problem.id and r.solver != problem.author)
        if self.samples == 1 and self.escalation_samples > 1 and verdict.valid:
            support = candidates.candidates[verdict.selected_index - 1].support
            if 2 * support < solvers:
                logger.info(
                    f"Escalating '{problem.id}' to {self.escalation_samples} verdicts "
                    f"(selected answer held by {support} of {solvers} solvers)"
                )
                drawn += [
                    self._sample(problem, candidates, prompt, k)
                    for k in range(len(drawn), self.escalation_samples)
                ]
                verdict = self._verdict(problem, candidates, drawn)
        return verdict


def apply_verdict(problem, verdict, records):
    """
    Apply a verdict to a problem and its solve records.

    v = 0 marks the problem invalid. v = 1 with an answer equivalent to the
    current gold marks it valid; any other selected answer replaces the gold
    and every record on the problem is judged again.
    """
    if verdict.problem != problem.id:
        raise DataIntegrityError(f"Verdict for '{verdict.problem}' applied to problem '{problem.id}'")
    if not verdict.valid:
        return replace(problem, validity=Validity.INVALID), list(records)
    if not verdict.selected:
        raise DataIntegrityError(f"Valid verdict on '{problem.id}' selects no answer")

    try:
        same = forms_equal(canonical_from_text(verdict.selected), canonical_from_text(problem.gold))
    except (ExpressionParseError, EvaluationError):
        same = verdict.selected.strip() == problem.gold.strip()
    if same:
        return replace(problem, validity=Validity.VALID), list(records)

    logger.info(f"Gold of '{problem.id}' overridden: '{problem.gold}' -> '{verdict.selected}'")
    updated = replace(problem, gold=verdict.selected, gold_overridden=True, validity=Validity.VALID)
    rejudged = []
    for record in records:
        if record.problem == problem.id:
            outcome, judgement = judge_record(record.answer, updated.gold)
            record = replace(record, outcome=outcome, judgement=judgement)
        rejudged.append(record)
    return updated, rejudged

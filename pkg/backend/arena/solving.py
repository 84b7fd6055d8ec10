import logging
import re
from pathlib import Path

from agents.base import Purpose
from arena.domain import Judgement, SolveRecord
from arena.exceptions import JudgmentError
from genpipe.prompts import PromptLibrary
from grading.judge import judge

logger = logging.getLogger(__name__)

prompts = PromptLibrary(Path(__file__).resolve().parent / 'prompts')

ANSWER_LINE_RE = re.compile(r'^\s*\**\s*(?:FINAL\s+)?ANSWER\s*\**\s*:\s*(.*?)\s*$', re.IGNORECASE | re.MULTILINE)


def last_boxed(text):
    """Contents of the last \\boxed{...} in the text, braces balanced."""
    start = text.rfind('\\boxed')
    while start != -1:
        i = text.find('{', start)
        if i != -1 and not text[start + len('\\boxed'):i].strip():
            depth = 0
            for j in range(i, len(text)):
                if text[j] == '{':
                    depth += 1
                elif text[j] == '}':
                    depth -= 1
                    if depth == 0:
                        return text[i + 1:j].strip()
        start = text.rfind('\\boxed', 0, start)
    return None


def extract_answer(completion):
    """Final answer from a solver completion: the last ANSWER: line, else the last \\boxed{}."""
    if not completion:
        return ''
    lines = [m.group(1) for m in ANSWER_LINE_RE.finditer(completion) if m.group(1).strip()]
    if lines:
        answer = lines[-1]
        boxed = last_boxed(answer)
        return boxed if boxed is not None else answer
    boxed = last_boxed(completion)
    return boxed or ''


def judge_record(answer, gold):
    """(outcome, judgement) for an answer; a gold that cannot be evaluated scores 0."""
    try:
        result = judge(answer, gold)
    except JudgmentError as e:
        logger.warning(f"{e}")
        return 0, Judgement.GOLD_ERROR
    return result.outcome, result.judgement


def solve_problem(agent, problem):
    prompt = prompts.render('solve', statement=problem.statement)
    completion = agent.complete(prompt, purpose=Purpose.SOLVE, context={'problem': problem})
    answer = extract_answer(completion)
    if not answer:
        logger.warning(f"'{agent.name}' returned no final answer for '{problem.id}'")
    outcome, judgement = judge_record(answer, problem.gold)
    return SolveRecord(
        solver=agent.name,
        problem=problem.id,
        answer=answer,
        trace=completion or '',
        outcome=outcome,
        judgement=judgement,
    )

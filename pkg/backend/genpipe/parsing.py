import logging
import re

from arena.exceptions import EvaluationError, ExpressionParseError, GenerationError
from grading.canonical import canonical_from_text

logger = logging.getLogger(__name__)

SECTION_RE = re.compile(r'^\s*\**\s*(STATEMENT|ANSWER)\s*\**\s*:\s*', re.IGNORECASE | re.MULTILINE)
BOXED_RE = re.compile(r'^\\boxed\s*\{(.*)\}$', re.DOTALL)


def _sections(text):
    matches = list(SECTION_RE.finditer(text))
    sections = {}
    for i, match in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        # first occurrence of a section wins
        sections.setdefault(match.group(1).upper(), text[match.end():end].strip())
    return sections


def clean_gold(text):
    """First non-empty line of an ANSWER section, without a surrounding \\boxed{}."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        return ''
    gold = lines[0].strip('`').strip()
    boxed = BOXED_RE.match(gold)
    if boxed:
        gold = boxed.group(1).strip()
    return gold


def parse_problem_reply(text):
    """
    Split an authoring reply into (statement, gold).

    The gold must canonicalize under the answer grammar; anything else is a
    GenerationError so the caller can re-ask.
    """
    sections = _sections(text or '')
    statement = sections.get('STATEMENT', '')
    gold = clean_gold(sections.get('ANSWER', ''))
    if not statement:
        raise GenerationError('Reply has no STATEMENT section')
    if not gold:
        raise GenerationError('Reply has no ANSWER section')
    try:
        canonical_from_text(gold)
    except (ExpressionParseError, EvaluationError) as e:
        raise GenerationError(f"Answer '{gold[:80]}' is not a closed-form expression: {e}") from e
    return statement, gold

import logging
from dataclasses import asdict, dataclass, field
from typing import Optional

from arena.exceptions import ComparisonError, EvaluationError, ExpressionParseError
from grading.canonical import canonical_from_text, forms_equal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AgreementReport:
    backbone_a: str
    backbone_b: str
    total: int
    same_exclusion: int
    kept_by_both: int
    same_answer: int
    exclusion_disagreements: list = field(default_factory=list)
    answer_disagreements: list = field(default_factory=list)

    @property
    def exclusion_agreement(self) -> float:
        return self.same_exclusion / self.total if self.total else 1.0

    @property
    def answer_agreement(self) -> Optional[float]:
        return self.same_answer / self.kept_by_both if self.kept_by_both else None

    def to_dict(self):
        data = asdict(self)
        data['exclusion_agreement'] = self.exclusion_agreement
        data['answer_agreement'] = self.answer_agreement
        return data


def _same_answer(a, b):
    if a.strip() == b.strip():
        return True
    try:
        return forms_equal(canonical_from_text(a), canonical_from_text(b))
    except (ExpressionParseError, EvaluationError):
        return False


def _by_problem(verdicts, label):
    indexed = {}
    for verdict in verdicts:
        if verdict.problem in indexed:
            raise ComparisonError(f"Verdict list {label} has two verdicts for '{verdict.problem}'")
        indexed[verdict.problem] = verdict
    return indexed


def compare_backbones(verdicts_a, verdicts_b):
    """Agreement between two verifier backbones on the same problem set."""
    a = _by_problem(verdicts_a, 'a')
    b = _by_problem(verdicts_b, 'b')
    if set(a) != set(b):
        only_a = sorted(set(a) - set(b))[:5]
        only_b = sorted(set(b) - set(a))[:5]
        raise ComparisonError(
            f"Verdict lists cover different problems (only in a: {only_a}, only in b: {only_b})"
        )

    same_exclusion = kept = same_answer = 0
    exclusion_disagreements = []
    answer_disagreements = []
    for problem in sorted(a):
        va, vb = a[problem], b[problem]
        if va.valid == vb.valid:
            same_exclusion += 1
        else:
            exclusion_disagreements.append({'problem': problem, 'a': va.valid, 'b': vb.valid})
        if va.valid and vb.valid:
            kept += 1
            if _same_answer(va.selected, vb.selected):
                same_answer += 1
            else:
                answer_disagreements.append({'problem': problem, 'a': va.selected, 'b': vb.selected})

    report = AgreementReport(
        backbone_a=verdicts_a[0].backbone if verdicts_a else '',
        backbone_b=verdicts_b[0].backbone if verdicts_b else '',
        total=len(a),
        same_exclusion=same_exclusion,
        kept_by_both=kept,
        same_answer=same_answer,
        exclusion_disagreements=exclusion_disagreements,
        answer_disagreements=answer_disagreements,
    )
    logger.info(
        f"Backbone agreement {report.backbone_a} vs {report.backbone_b}: "
        f"exclusion {report.exclusion_agreement:.1%} over {report.total}, "
        f"answer {same_answer}/{kept}"
    )
    return report

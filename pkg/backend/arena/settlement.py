import logging
from dataclasses import dataclass, replace

from arena.domain import Validity
from arena.exceptions import DataIntegrityError
from verification.candidates import needs_verification
from verification.verifier_service import apply_verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Settlement:
    problems: list
    records: list
    held: list

    @property
    def scored_problems(self):
        return [p for p in self.problems if p.validity == Validity.VALID]

    @property
    def scored_records(self):
        ids = {p.id for p in self.scored_problems}
        return [r for r in self.records if r.problem in ids]

    @property
    def excluded(self):
        return [p for p in self.problems if p.validity == Validity.INVALID]


def settle(problems, records, verdicts):
    """
    Apply persisted verdicts to generation-time problems and solve records.

    Problems nobody failed become valid. A disputed problem without a verdict
    stays unchecked and is reported as held.
    """
    by_problem = {}
    for verdict in verdicts:
        if verdict.problem in by_problem:
            raise DataIntegrityError(f"Two verdicts for problem '{verdict.problem}'")
        by_problem[verdict.problem] = verdict
    known = {p.id for p in problems}
    unknown = sorted(set(by_problem) - known)
    if unknown:
        raise DataIntegrityError(f"Verdicts reference unknown problems: {', '.join(unknown[:5])}")

    grouped = {}
    for record in records:
        grouped.setdefault(record.problem, []).append(record)
    orphans = sorted(set(grouped) - known)
    if orphans:
        raise DataIntegrityError(f"Solve records reference unknown problems: {', '.join(orphans[:5])}")

    settled_problems = []
    settled_records = []
    held = []
    for problem in sorted(problems, key=lambda p: p.id):
        own = grouped.get(problem.id, [])
        verdict = by_problem.get(problem.id)
        if verdict is not None:
            problem, own = apply_verdict(problem, verdict, own)
        elif not needs_verification(problem, own):
            problem = replace(problem, validity=Validity.VALID)
        else:
            held.append(problem.id)
        settled_problems.append(problem)
        settled_records.extend(own)

    if held:
        logger.warning(f"{len(held)} disputed problem(s) have no verdict and are held out of scoring")
    settlement = Settlement(problems=settled_problems, records=settled_records, held=held)
    logger.info(
        f"Settled {len(problems)} problems: {len(settlement.scored_problems)} valid, "
        f"{len(settlement.excluded)} excluded, {len(held)} held"
    )
    return settlement

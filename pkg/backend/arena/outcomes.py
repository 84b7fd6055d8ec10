import logging
from dataclasses import dataclass, field

from arena.domain import Validity
from arena.exceptions import DataIntegrityError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OutcomeMatrix:
    """Binary solve outcomes keyed by (solver, problem id), defined on the observed set only."""
    entries: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, pair):
        return pair in self.entries

    def __getitem__(self, pair):
        return self.entries[pair]

    @property
    def solvers(self):
        return sorted({solver for solver, _ in self.entries})

    @property
    def problems(self):
        return sorted({problem for _, problem in self.entries})

    def items(self):
        return sorted(self.entries.items())

    def for_problem(self, problem_id):
        return {solver: y for (solver, problem), y in self.entries.items() if problem == problem_id}


def build_outcome_matrix(records, problems):
    """
    Collect solve outcomes over the observed set.

    Records on invalid problems are skipped, self-authored attempts are
    dropped with a logged count, and a repeated (solver, problem) pair is a
    data-integrity error.
    """
    by_id = {problem.id: problem for problem in problems}
    entries = {}
    self_authored = 0
    excluded = 0

    for record in records:
        problem = by_id.get(record.problem)
        if problem is None:
            raise DataIntegrityError(f"Solve record references unknown problem '{record.problem}'")
        if record.solver == problem.author:
            self_authored += 1
            continue
        if problem.validity == Validity.INVALID:
            excluded += 1
            continue
        pair = (record.solver, record.problem)
        if pair in entries:
            raise DataIntegrityError(f"Duplicate solve record for solver '{record.solver}' on problem '{record.problem}'")
        if record.outcome not in (0, 1):
            raise DataIntegrityError(f"Outcome for {pair} must be 0 or 1, got {record.outcome!r}")
        entries[pair] = int(record.outcome)

    if self_authored:
        logger.warning(f"Dropped {self_authored} self-authored solve record(s)")
    if excluded:
        logger.info(f"Skipped {excluded} record(s) on excluded problems")
    return OutcomeMatrix(entries)

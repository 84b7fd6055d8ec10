"""
One arena round: generate -> solve -> verify -> rank -> report.

Every phase reads what the earlier phases persisted and writes its own
artifacts; nothing upstream is rewritten. After each phase the run
directory's checkpoint.json records the phases completed so far.
"""
import logging
import re
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from django.conf import settings

from agents.registry import build_agents
from arena.analytics import summarize
from arena.exceptions import (
    ArenaError,
    ConfigurationError,
    DataIntegrityError,
    PhaseError,
    VerificationError,
)
from arena.leaderboard import build_leaderboard, export_leaderboard, rows_to_dicts
from arena.outcomes import build_outcome_matrix
from arena.settlement import settle
from arena.solving import solve_problem
from arena.storage import CHECKPOINT, MANIFEST, ArtifactStore, interval_to_row
from arena.taxonomy import plan_domain_schedule
from genpipe.pipeline import GenerationPipeline
from rating.bootstrap import bootstrap_ci, rank_ranges
from rating.elo import rate_models
from rating.rasch import fit
from verification.agreement import compare_backbones
from verification.candidates import needs_verification
from verification.verifier_service import VerifierService

logger = logging.getLogger(__name__)

PHASES = ('generate', 'solve', 'verify', 'rank', 'report')
LEADERBOARD_FILES = {'markdown': 'leaderboard.md', 'json': 'leaderboard.json', 'csv': 'leaderboard.csv', 'xlsx': 'leaderboard.xlsx'}


@dataclass(frozen=True)
class RunReport:
    manifest_hash: str
    ratings: list
    intervals: list
    ranges: dict
    leaderboard: list
    counts: dict
    fit: dict
    analytics: dict
    held: list = field(default_factory=list)
    excluded: list = field(default_factory=list)
    overridden: list = field(default_factory=list)

    def to_dict(self):
        return {
            'manifest_hash': self.manifest_hash,
            'counts': self.counts,
            'fit': self.fit,
            'ratings': [asdict(row) for row in self.ratings],
            'intervals': [interval_to_row(row) for row in self.intervals],
            'ranges': {model: list(bounds) for model, bounds in sorted(self.ranges.items())},
            'leaderboard': rows_to_dicts(self.leaderboard),
            'analytics': self.analytics,
            'held': list(self.held),
            'excluded': list(self.excluded),
            'overridden': list(self.overridden),
        }


def _safe_name(name):
    return re.sub(r'[^A-Za-z0-9._-]+', '_', name)


class ArenaRoundService:
    def __init__(self, manifest, out_dir, agents=None):
        self.manifest = manifest
        self.out_dir = Path(out_dir)
        self.store = ArtifactStore(self.out_dir, manifest.hash)
        self._agents = agents

    @property
    def agents(self):
        if self._agents is None:
            self._agents = build_agents(self.manifest)
        return self._agents

    def agent(self, name):
        try:
            return self.agents[name]
        except KeyError:
            raise ConfigurationError(f"Model '{name}' is not listed in the manifest")

    def _map(self, fn, items):
        """Apply fn to every item with up to `parallelism` workers, keeping input order."""
        items = list(items)
        if self.manifest.parallelism <= 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.manifest.parallelism) as pool:
            return list(pool.map(fn, items))

    def _run_phase(self, name, action):
        logger.info(f"Phase '{name}' started ({self.out_dir})")
        try:
            result = action()
        except (ConfigurationError, DataIntegrityError, PhaseError):
            raise
        except ArenaError as e:
            last = None
            try:
                last = self.store.load_checkpoint().get('last')
            except ArenaError:
                pass
            checkpoint = f"{self.store.path(CHECKPOINT)} (after '{last}')" if last else None
            logger.error(f"Phase '{name}' failed: {e}")
            raise PhaseError(name, checkpoint, e) from e

        completed = [phase for phase in self.store.load_checkpoint()['completed'] if phase != name]
        completed.append(name)
        self.store.save_checkpoint(completed)
        logger.info(f"Phase '{name}' finished")
        return result

    # -----------------------
    # Phase 1
    # -----------------------
    def _author(self, name):
        schedule = plan_domain_schedule(
            self.manifest.problems_per_model, list(self.manifest.domains), seed=self.manifest.seed, key=name
        )
        pipeline = GenerationPipeline(self.manifest.pipeline_stages, self.manifest.amplification_rounds)
        problems = pipeline.author_problems(self.agent(name), schedule)
        if pipeline.fallbacks:
            logger.warning(f"'{name}': {pipeline.fallbacks} amplification round(s) fell back")
        return problems

    def generate(self):
        def action():
            self.store.write_json(MANIFEST, 'manifest', self.manifest.to_dict())
            authored = self._map(self._author, self.manifest.authors)
            problems = [problem for batch in authored for problem in batch]
            self.store.save_problems(problems)
            return problems

        return self._run_phase('generate', action)

    # -----------------------
    # Phase 2
    # -----------------------
    def solve(self):
        def action():
            problems = self.store.load_problems()
            tasks = [
                (solver, problem)
                for problem in problems
                for solver in self.manifest.solvers
                if solver != problem.author
            ]
            logger.info(f"Dispatching {len(tasks)} solve attempts over {len(problems)} problems")
            records = self._map(lambda task: solve_problem(self.agent(task[0]), task[1]), tasks)
            self.store.save_records(records)
            return records

        return self._run_phase('solve', action)

    # -----------------------
    # Phase 3
    # -----------------------
    def _verifier(self, backbone):
        return VerifierService(
            self.agent(backbone),
            samples=self.manifest.verifier_samples,
            escalation_samples=settings.ARENA_VERIFIER_ESCALATION_SAMPLES,
        )

    def _verify_all(self, service, problems, records):
        grouped = defaultdict(list)
        for record in records:
            grouped[record.problem].append(record)
        disputed = [p for p in problems if needs_verification(p, grouped[p.id])]
        logger.info(f"{len(disputed)} of {len(problems)} problems need verification by '{service.backbone}'")

        def check(problem):
            try:
                return service.verify_problem(problem, grouped[problem.id])
            except VerificationError as e:
                logger.error(f"Problem '{problem.id}' held for manual replay: {e}")
                return None

        outcomes = self._map(check, disputed)
        verdicts = [verdict for verdict in outcomes if verdict is not None]
        held = [problem.id for problem, verdict in zip(disputed, outcomes) if verdict is None]
        return verdicts, held

    def verify(self):
        def action():
            problems = self.store.load_problems()
            records = self.store.load_records()
            verdicts, held = self._verify_all(self._verifier(self.manifest.verifier), problems, records)
            self.store.save_verdicts(verdicts)
            return verdicts, held

        return self._run_phase('verify', action)

    def replay_verify(self, backbone):
        """Re-verify the problems the run's verifier judged with another backbone and compare."""
        def action():
            problems = self.store.load_problems()
            records = self.store.load_records()
            original = self.store.load_verdicts()
            judged = {verdict.problem for verdict in original}
            targets = [p for p in problems if p.id in judged]
            verdicts, held = self._verify_all(self._verifier(backbone), targets, records)
            self.store.save_verdicts(verdicts, name=f"verdicts_{_safe_name(backbone)}.jsonl")

            common = {v.problem for v in verdicts} & judged
            report = compare_backbones(
                [v for v in original if v.problem in common],
                [v for v in verdicts if v.problem in common],
            )
            payload = {**report.to_dict(), 'held': held}
            self.store.write_json('agreement.json', 'agreement', payload)
            return report

        return self._run_phase('replay_verify', action)

    # -----------------------
    # Phase 4
    # -----------------------
    def _settled(self):
        problems = self.store.load_problems()
        records = self.store.load_records()
        verdicts = self.store.load_verdicts()
        settlement = settle(problems, records, verdicts)
        scored = settlement.scored_problems
        matrix = build_outcome_matrix(settlement.scored_records, scored)
        return settlement, matrix, verdicts

    def rank(self):
        def action():
            settlement, matrix, _ = self._settled()
            rank_config = self.manifest.rank_config()
            full = fit(
                matrix,
                lam=rank_config.lam,
                tolerance=rank_config.tolerance,
                max_iterations=rank_config.max_iterations,
            )
            logger.info(
                f"Rasch fit over {len(matrix)} observations: {full.iterations} sweeps, "
                f"gradient norm {full.final_grad_norm:.2e}"
            )
            intervals = bootstrap_ci(
                matrix, settlement.scored_problems, self.manifest.bootstrap_spec(), rank_config, full_fit=full
            )
            ranges = rank_ranges(intervals)
            self.store.save_fit(full)
            self.store.save_intervals(intervals)
            self.store.save_ranges(ranges)
            return full, intervals, ranges

        return self._run_phase('rank', action)

    def report(self, newcomers=None, incumbents=None, formats=('markdown',)):
        def action():
            settlement, matrix, verdicts = self._settled()
            scored = settlement.scored_problems
            full = self.store.load_fit()
            intervals = self.store.load_intervals()
            ranges = self.store.load_ranges()
            ratings = rate_models(full, scored, self.manifest.rank_config())
            leaderboard = build_leaderboard(ratings, intervals, ranges)

            counts = {
                'problems': len(settlement.problems),
                'valid': len(scored),
                'excluded': len(settlement.excluded),
                'held': len(settlement.held),
                'overridden': sum(1 for p in scored if p.gold_overridden),
                'observations': len(matrix),
                'verdicts': len(verdicts),
                'verifier_conflicts': sum(1 for v in verdicts if v.conflict),
            }
            report = RunReport(
                manifest_hash=self.manifest.hash,
                ratings=ratings,
                intervals=intervals,
                ranges=ranges,
                leaderboard=leaderboard,
                counts=counts,
                fit={
                    'lambda': full.lam,
                    'converged': full.converged,
                    'iterations': full.iterations,
                    'final_grad_norm': full.final_grad_norm,
                    'log_likelihood': full.log_likelihood,
                },
                analytics=summarize(matrix, scored, newcomers, incumbents),
                held=list(settlement.held),
                excluded=[p.id for p in settlement.excluded],
                overridden=[p.id for p in scored if p.gold_overridden],
            )
            self.store.save_report(report.to_dict())
            for fmt in formats:
                export_leaderboard(leaderboard, self.out_dir / LEADERBOARD_FILES[fmt], fmt)
            return report

        return self._run_phase('report', action)

    def run_round(self, formats=('markdown',)):
        """All phases in order; returns the RunReport."""
        self.generate()
        self.solve()
        self.verify()
        self.rank()
        return self.report(formats=formats)

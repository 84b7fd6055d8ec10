"""
Run artifacts on disk.

Per-item artifacts are jsonl, whole-run summaries json. Every file starts
with a header {schema_version, manifest_hash, kind}: for jsonl it is the first
line, for json it is the "header" key. Writes go to a temporary file in the
same directory and are moved into place with os.replace.
"""
import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from arena.domain import (
    DomainTag,
    GenerationTrace,
    IntervalRow,
    MetaPrompt,
    Oracle,
    Problem,
    SolveRecord,
    Verdict,
)
from arena.exceptions import IntegrityError, LoadError
from arena.serializers import (
    FitSerializer,
    HeaderSerializer,
    IntervalRowSerializer,
    ProblemRowSerializer,
    SolveRecordRowSerializer,
    VerdictRowSerializer,
)
from rating.rasch import RaschFit

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

MANIFEST = 'manifest.json'
PROBLEMS = 'problems.jsonl'
RECORDS = 'records.jsonl'
VERDICTS = 'verdicts.jsonl'
FIT = 'fit.json'
INTERVALS = 'intervals.json'
RANGES = 'ranges.json'
REPORT = 'report.json'
CHECKPOINT = 'checkpoint.json'


def dumps(data):
    return json.dumps(data, sort_keys=True, ensure_ascii=False, separators=(',', ':'), allow_nan=False)


def atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _first_error(errors):
    """(field, message) of the first serializer error, descending into nested fields."""
    if isinstance(errors, dict):
        name, value = next(iter(errors.items()))
        inner, message = _first_error(value)
        if name == 'non_field_errors':
            return inner, message
        return (f"{name}.{inner}" if inner else name), message
    if isinstance(errors, list) and errors:
        return _first_error(errors[0])
    return None, str(errors)


def _validated(serializer_class, data, path, line=None):
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        name, message = _first_error(serializer.errors)
        raise LoadError(message, path=path, line=line, field=name)
    return serializer.validated_data


# -----------------------
# Row conversion
# -----------------------
def _domain_dict(domain):
    return {'broad_area': domain.broad_area, 'subfield': domain.subfield}


def problem_to_row(problem):
    trace = problem.provenance
    meta = trace.meta_prompt
    return {
        'id': problem.id,
        'author': problem.author,
        'domain': _domain_dict(problem.domain),
        'statement': problem.statement,
        'gold': problem.gold,
        'original_gold': problem.original_gold,
        'gold_overridden': problem.gold_overridden,
        'validity': str(problem.validity),
        'stages_used': trace.stages_used,
        'provenance': {
            'meta_prompt': (
                {'author': meta.author, 'domain': _domain_dict(meta.domain), 'text': meta.text} if meta else None
            ),
            'draft_statement': trace.draft_statement,
            'draft_gold': trace.draft_gold,
            'amplification_history': [list(variant) for variant in trace.amplification_history],
        },
        'oracle': asdict(problem.oracle) if problem.oracle else None,
    }


def problem_from_row(data):
    provenance = data['provenance']
    meta = provenance.get('meta_prompt')
    trace = GenerationTrace(
        stages_used=data['stages_used'],
        draft_statement=provenance['draft_statement'],
        draft_gold=provenance['draft_gold'],
        meta_prompt=MetaPrompt(meta['author'], DomainTag(**meta['domain']), meta['text']) if meta else None,
        amplification_history=tuple(tuple(variant) for variant in provenance['amplification_history']),
    ).check()
    oracle = data.get('oracle')
    return Problem(
        id=data['id'],
        author=data['author'],
        domain=DomainTag(**data['domain']),
        statement=data['statement'],
        gold=data['gold'],
        provenance=trace,
        original_gold=data['original_gold'],
        gold_overridden=data['gold_overridden'],
        validity=data['validity'],
        oracle=Oracle(**oracle) if oracle else None,
    )


def record_to_row(record):
    return {**asdict(record), 'judgement': str(record.judgement)}


def record_from_row(data):
    return SolveRecord(**{key: data[key] for key in ('solver', 'problem', 'answer', 'trace', 'outcome', 'judgement')})


def verdict_to_row(verdict):
    return asdict(verdict)


def verdict_from_row(data):
    return Verdict(**{key: data.get(key) for key in (
        'problem', 'backbone', 'valid', 'selected', 'rationale', 'selected_index', 'samples', 'conflict'
    )})


def fit_to_dict(fit_result):
    return {
        'abilities': fit_result.abilities,
        'difficulties': fit_result.difficulties,
        'lambda': fit_result.lam,
        'converged': fit_result.converged,
        'iterations': fit_result.iterations,
        'final_grad_norm': fit_result.final_grad_norm,
        'log_likelihood': fit_result.log_likelihood,
    }


def fit_from_dict(data):
    return RaschFit(
        abilities=dict(data['abilities']),
        difficulties=dict(data['difficulties']),
        lam=data['lambda'],
        converged=data['converged'],
        iterations=data['iterations'],
        final_grad_norm=data['final_grad_norm'],
        log_likelihood=data['log_likelihood'],
    )


def interval_to_row(row):
    return {**asdict(row), 'axis': str(row.axis)}


def interval_from_row(data):
    return IntervalRow(**data)


# -----------------------
# Store
# -----------------------
class ArtifactStore:
    """Reads and writes the artifacts of one run directory, guarded by the manifest hash."""

    def __init__(self, directory, manifest_hash=None):
        self.directory = Path(directory)
        self.manifest_hash = manifest_hash

    def path(self, name):
        return self.directory / name

    def exists(self, name):
        return self.path(name).exists()

    def header(self, kind):
        return {'schema_version': SCHEMA_VERSION, 'manifest_hash': self.manifest_hash, 'kind': kind}

    def _check_header(self, header, kind, path, line=None):
        data = _validated(HeaderSerializer, header, path, line)
        if data['schema_version'] != SCHEMA_VERSION:
            raise LoadError(
                f"schema version {data['schema_version']} is not supported (expected {SCHEMA_VERSION})",
                path=path, line=line, field='schema_version',
            )
        if data['kind'] != kind:
            raise LoadError(f"expected a '{kind}' artifact, found '{data['kind']}'", path=path, line=line, field='kind')
        if self.manifest_hash is None:
            self.manifest_hash = data['manifest_hash']
        elif data['manifest_hash'] != self.manifest_hash:
            raise IntegrityError(
                f"{path} belongs to run {data['manifest_hash'][:12]}, expected {self.manifest_hash[:12]}"
            )

    # jsonl
    def write_jsonl(self, name, kind, rows):
        lines = [dumps(self.header(kind))] + [dumps(row) for row in rows]
        atomic_write(self.path(name), '\n'.join(lines) + '\n')
        logger.info(f"Wrote {len(lines) - 1} {kind} row(s) to {self.path(name)}")

    def read_jsonl(self, name, kind, serializer_class):
        path = self.path(name)
        if not path.exists():
            raise LoadError(f"missing artifact '{name}'", path=path)
        rows = []
        header_seen = False
        with open(path, encoding='utf-8') as handle:
            for number, raw in enumerate(handle, start=1):
                if not raw.strip():
                    continue
                try:
                    data = json.loads(raw)
                except json.JSONDecodeError as e:
                    raise LoadError(f"unreadable JSON ({e.msg})", path=path, line=number) from e
                if not header_seen:
                    self._check_header(data, kind, path, line=number)
                    header_seen = True
                    continue
                rows.append(_validated(serializer_class, data, path, line=number))
        if not header_seen:
            raise LoadError('artifact has no header line', path=path, line=1)
        return rows

    # json
    def write_json(self, name, kind, payload):
        atomic_write(self.path(name), dumps({'header': self.header(kind), 'data': payload}) + '\n')
        logger.info(f"Wrote {kind} to {self.path(name)}")

    def read_json(self, name, kind):
        path = self.path(name)
        if not path.exists():
            raise LoadError(f"missing artifact '{name}'", path=path)
        try:
            document = json.loads(path.read_text(encoding='utf-8'))
        except json.JSONDecodeError as e:
            raise LoadError(f"unreadable JSON ({e.msg})", path=path, line=e.lineno) from e
        if not isinstance(document, dict) or 'header' not in document or 'data' not in document:
            raise LoadError('expected an object with header and data', path=path, field='header')
        self._check_header(document['header'], kind, path)
        return document['data']

    # typed artifacts
    def save_problems(self, problems):
        self.write_jsonl(PROBLEMS, 'problems', [problem_to_row(p) for p in sorted(problems, key=lambda p: p.id)])

    def load_problems(self):
        return [problem_from_row(row) for row in self.read_jsonl(PROBLEMS, 'problems', ProblemRowSerializer)]

    def save_records(self, records, name=RECORDS):
        ordered = sorted(records, key=lambda r: (r.problem, r.solver))
        self.write_jsonl(name, 'records', [record_to_row(r) for r in ordered])

    def load_records(self, name=RECORDS):
        return [record_from_row(row) for row in self.read_jsonl(name, 'records', SolveRecordRowSerializer)]

    def save_verdicts(self, verdicts, name=VERDICTS):
        self.write_jsonl(name, 'verdicts', [verdict_to_row(v) for v in sorted(verdicts, key=lambda v: v.problem)])

    def load_verdicts(self, name=VERDICTS):
        return [verdict_from_row(row) for row in self.read_jsonl(name, 'verdicts', VerdictRowSerializer)]

    def save_fit(self, fit_result):
        self.write_json(FIT, 'fit', fit_to_dict(fit_result))

    def load_fit(self):
        path = self.path(FIT)
        return fit_from_dict(_validated(FitSerializer, self.read_json(FIT, 'fit'), path))

    def save_intervals(self, intervals):
        rows = sorted(intervals, key=lambda r: (r.model, str(r.axis)))
        self.write_json(INTERVALS, 'intervals', [interval_to_row(r) for r in rows])

    def load_intervals(self):
        path = self.path(INTERVALS)
        return [interval_from_row(_validated(IntervalRowSerializer, row, path)) for row in self.read_json(INTERVALS, 'intervals')]

    def save_ranges(self, ranges):
        self.write_json(RANGES, 'ranges', {model: list(bounds) for model, bounds in sorted(ranges.items())})

    def load_ranges(self):
        data = self.read_json(RANGES, 'ranges')
        try:
            return {model: (int(bounds[0]), int(bounds[1])) for model, bounds in data.items()}
        except (TypeError, ValueError, IndexError, AttributeError) as e:
            raise LoadError(f"malformed rank range ({e})", path=self.path(RANGES), field='ranges') from e

    def save_report(self, report):
        self.write_json(REPORT, 'report', report)

    def load_report(self):
        return self.read_json(REPORT, 'report')

    def save_checkpoint(self, completed):
        self.write_json(CHECKPOINT, 'checkpoint', {'completed': list(completed), 'last': completed[-1] if completed else None})

    def load_checkpoint(self):
        if not self.exists(CHECKPOINT):
            return {'completed': [], 'last': None}
        return self.read_json(CHECKPOINT, 'checkpoint')


# -----------------------
# Whole runs
# -----------------------
@dataclass
class RunArtifacts:
    manifest_hash: str
    problems: list = field(default_factory=list)
    records: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    fit: Optional[RaschFit] = None
    intervals: list = field(default_factory=list)
    ranges: dict = field(default_factory=dict)
    report: Optional[dict] = None


def save_run(artifacts, directory):
    store = ArtifactStore(directory, artifacts.manifest_hash)
    store.save_problems(artifacts.problems)
    store.save_records(artifacts.records)
    store.save_verdicts(artifacts.verdicts)
    if artifacts.fit is not None:
        store.save_fit(artifacts.fit)
    if artifacts.intervals:
        store.save_intervals(artifacts.intervals)
    if artifacts.ranges:
        store.save_ranges(artifacts.ranges)
    if artifacts.report is not None:
        store.save_report(artifacts.report)
    return Path(directory)


def load_run(directory, manifest_hash=None):
    """Load every artifact present; all of them must carry the same manifest hash."""
    store = ArtifactStore(directory, manifest_hash)
    problems = store.load_problems()
    records = store.load_records()
    verdicts = store.load_verdicts() if store.exists(VERDICTS) else []
    return RunArtifacts(
        manifest_hash=store.manifest_hash,
        problems=sorted(problems, key=lambda p: p.id),
        records=sorted(records, key=lambda r: (r.problem, r.solver)),
        verdicts=sorted(verdicts, key=lambda v: v.problem),
        fit=store.load_fit() if store.exists(FIT) else None,
        intervals=store.load_intervals() if store.exists(INTERVALS) else [],
        ranges=store.load_ranges() if store.exists(RANGES) else {},
        report=store.load_report() if store.exists(REPORT) else None,
    )

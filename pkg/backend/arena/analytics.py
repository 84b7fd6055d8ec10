"""
Descriptive statistics over a settled outcome matrix.
"""
import logging

import pandas as pd

logger = logging.getLogger(__name__)


def outcome_frame(matrix, problems):
    """One row per observation with solver, problem, author, broad area and outcome."""
    by_id = {p.id: p for p in problems}
    rows = [
        {
            'solver': solver,
            'problem': problem,
            'author': by_id[problem].author,
            'area': by_id[problem].domain.broad_area,
            'outcome': outcome,
        }
        for (solver, problem), outcome in matrix.items()
    ]
    return pd.DataFrame(rows, columns=['solver', 'problem', 'author', 'area', 'outcome'])


def _as_dict(series):
    return {str(key): float(value) for key, value in series.sort_index().items()}


def problem_solve_rates(frame):
    return _as_dict(frame.groupby('problem')['outcome'].mean())


def share_solved_by_all(frame):
    """Fraction of problems every attempting solver got right."""
    if frame.empty:
        return 0.0
    return float((frame.groupby('problem')['outcome'].min() == 1).mean())


def area_accuracy(frame):
    return _as_dict(frame.groupby('area')['outcome'].mean())


def solver_accuracy(frame):
    return _as_dict(frame.groupby('solver')['outcome'].mean())


def author_solve_rates(frame):
    """Mean solve rate of each author's problems across the other solvers."""
    return _as_dict(frame.groupby('author')['outcome'].mean())


def error_rate(frame):
    return float(1.0 - frame['outcome'].mean()) if not frame.empty else 0.0


def break_rate(frame, authors, incumbents):
    """
    Share of the given authors' problems that defeat at least one incumbent solver.

    Only problems attempted by some incumbent count.
    """
    attempts = frame[frame['author'].isin(list(authors)) & frame['solver'].isin(list(incumbents))]
    if attempts.empty:
        return None
    return float((attempts.groupby('problem')['outcome'].min() == 0).mean())


def summarize(matrix, problems, newcomers=None, incumbents=None):
    frame = outcome_frame(matrix, problems)
    summary = {
        'observations': int(len(frame)),
        'problems': int(frame['problem'].nunique()),
        'error_rate': error_rate(frame),
        'share_solved_by_all': share_solved_by_all(frame),
        'area_accuracy': area_accuracy(frame),
        'solver_accuracy': solver_accuracy(frame),
        'author_solve_rates': author_solve_rates(frame),
    }
    if newcomers and incumbents:
        newcomers = sorted(newcomers)
        incumbents = sorted(incumbents)
        others = sorted(set(frame['author']) - set(newcomers))
        summary['break_rates'] = {
            'newcomers': newcomers,
            'incumbents': incumbents,
            'newcomer_break_rate': break_rate(frame, newcomers, incumbents),
            'other_break_rate': break_rate(frame, others, incumbents),
        }
        logger.info(f"Break rates: {summary['break_rates']}")
    return summary

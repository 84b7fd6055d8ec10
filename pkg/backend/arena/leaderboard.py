"""
Leaderboard assembly and export.

Markdown shows integer ratings (half-to-even rounding) in the layout
# | Model | Solve | Author | Composite | 95% CI | Range. JSON keeps full
precision. CSV goes through pandas, XLSX through openpyxl.
"""
import json
import logging
from dataclasses import asdict
from pathlib import Path

import pandas as pd
from openpyxl import Workbook
from openpyxl.styles import Alignment, Font, PatternFill

from arena.domain import Axis, LeaderboardRow
from arena.exceptions import ConfigurationError
from arena.storage import atomic_write
from rating.elo import display_rating

logger = logging.getLogger(__name__)

FORMATS = ('json', 'markdown', 'csv', 'xlsx')
COLUMNS = ['#', 'Model', 'Solve', 'Author', 'Composite', '95% CI', 'Range']
MISSING = 'n/a'


def build_leaderboard(ratings, intervals=(), ranges=None):
    """
    Rows sorted by composite descending; models without a composite go last.

    Ties fall back to the solve rating, then the model name.
    """
    ranges = ranges or {}
    ci = {row.model: (row.lower, row.upper) for row in intervals if row.axis == Axis.COMPOSITE}

    def order(row):
        has_composite = row.composite is not None
        return (not has_composite, -(row.composite or 0.0), -row.solve_rating, row.model)

    rows = []
    for position, rating in enumerate(sorted(ratings, key=order), start=1):
        flags = []
        if rating.author_rating is None:
            flags.append('no_valid_problems')
        if rating.problems_authored_valid and rating.gold_correct_count == 0:
            flags.append('no_gold_correct_problems')
        rows.append(
            LeaderboardRow(
                rank=position,
                model=rating.model,
                solve=rating.solve_rating,
                author=rating.author_rating,
                composite=rating.composite,
                ci=ci.get(rating.model),
                range=tuple(ranges[rating.model]) if rating.model in ranges else None,
                flags=tuple(flags),
            )
        )
    return rows


def _display(value):
    rounded = display_rating(value)
    return MISSING if rounded is None else str(rounded)


def _display_ci(ci):
    if ci is None:
        return MISSING
    return f"[{display_rating(ci[0])}, {display_rating(ci[1])}]"


def _display_range(bounds):
    if bounds is None:
        return MISSING
    return f"{bounds[0]}–{bounds[1]}"


def display_rows(rows):
    return [
        [
            str(row.rank),
            row.model,
            _display(row.solve),
            _display(row.author),
            _display(row.composite),
            _display_ci(row.ci),
            _display_range(row.range),
        ]
        for row in rows
    ]


def to_markdown(rows):
    lines = [
        '| ' + ' | '.join(COLUMNS) + ' |',
        '|' + '|'.join(['---:', ':---'] + ['---:'] * (len(COLUMNS) - 2)) + '|',
    ]
    lines += ['| ' + ' | '.join(cells) + ' |' for cells in display_rows(rows)]
    return '\n'.join(lines) + '\n'


def rows_to_dicts(rows):
    payload = []
    for row in rows:
        data = asdict(row)
        data['ci'] = list(row.ci) if row.ci is not None else None
        data['range'] = list(row.range) if row.range is not None else None
        data['flags'] = list(row.flags)
        payload.append(data)
    return payload


def to_json(rows):
    return json.dumps(rows_to_dicts(rows), sort_keys=True, indent=2, allow_nan=False) + "\n"


def to_frame(rows):
    return pd.DataFrame(
        [
            {
                'rank': row.rank,
                'model': row.model,
                'solve': row.solve,
                'author': row.author,
                'composite': row.composite,
                'ci_lower': row.ci[0] if row.ci else None,
                'ci_upper': row.ci[1] if row.ci else None,
                'best_rank': row.range[0] if row.range else None,
                'worst_rank': row.range[1] if row.range else None,
                'flags': ','.join(row.flags),
            }
            for row in rows
        ],
        columns=['rank', 'model', 'solve', 'author', 'composite', 'ci_lower', 'ci_upper', 'best_rank', 'worst_rank', 'flags'],
    )


def write_xlsx(rows, path, title='Leaderboard'):
    wb = Workbook()
    ws = wb.active
    ws.title = title[:31]

    header_font = Font(bold=True, color="FFFFFF")
    header_fill = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
    for col, header in enumerate(COLUMNS, 1):
        cell = ws.cell(row=1, column=col, value=header)
        cell.font = header_font
        cell.fill = header_fill
        cell.alignment = Alignment(horizontal='center')

    for r, cells in enumerate(display_rows(rows), 2):
        for col, value in enumerate(cells, 1):
            ws.cell(row=r, column=col, value=value)

    for column in ws.columns:
        width = max(len(str(cell.value or '')) for cell in column)
        ws.column_dimensions[column[0].column_letter].width = width + 2

    path.parent.mkdir(parents=True, exist_ok=True)
    wb.save(path)


def export_leaderboard(rows, path, fmt='markdown'):
    if fmt not in FORMATS:
        raise ConfigurationError(f"Unknown leaderboard format '{fmt}' (choose from {', '.join(FORMATS)})")
    path = Path(path)
    if fmt == 'markdown':
        atomic_write(path, to_markdown(rows))
    elif fmt == 'json':
        atomic_write(path, to_json(rows))
    elif fmt == 'csv':
        atomic_write(path, to_frame(rows).to_csv(index=False, lineterminator='\n'))
    else:
        write_xlsx(rows, path)
    logger.info(f"Exported {len(rows)} leaderboard row(s) as {fmt} to {path}")
    return path

import json
import tempfile
from pathlib import Path

import pandas as pd
from django.test import SimpleTestCase
from openpyxl import load_workbook

from arena.domain import Axis, IntervalRow, RatingRow
from arena.exceptions import ConfigurationError
from arena.leaderboard import (
    COLUMNS,
    build_leaderboard,
    export_leaderboard,
    to_json,
    to_markdown,
)
from rating.bootstrap import rank_ranges
from rating.elo import composite
from rating.tests.fixtures import PUBLISHED, PUBLISHED_INTERVALS

HEADER = '| # | Model | Solve | Author | Composite | 95% CI | Range |'


def published_inputs():
    ratings = [
        RatingRow(model=m, solve_rating=float(s), author_rating=float(a), composite=composite(float(s), float(a)),
                  problems_authored_valid=30, gold_correct_count=29)
        for m, s, a, _ in PUBLISHED
    ]
    intervals = [
        IntervalRow(model=m, axis=Axis.COMPOSITE, point=(lo + hi) / 2, lower=float(lo), upper=float(hi))
        for m, (lo, hi), _ in PUBLISHED_INTERVALS
    ]
    return ratings, intervals, rank_ranges(intervals)


class BuildLeaderboardTests(SimpleTestCase):
    def test_published_table(self):
        ratings, intervals, ranges = published_inputs()
        rows = build_leaderboard(ratings, intervals, ranges)
        self.assertEqual([row.model for row in rows], [m for m, _, _, _ in PUBLISHED])
        for row, (_, _, _, expected) in zip(rows, PUBLISHED):
            self.assertLessEqual(abs(row.composite - expected), 1)

    def test_markdown_layout(self):
        ratings, intervals, ranges = published_inputs()
        lines = to_markdown(build_leaderboard(ratings, intervals, ranges)).splitlines()
        self.assertEqual(lines[0], HEADER)
        self.assertEqual(len(lines), 2 + 19)
        self.assertEqual(lines[2], '| 1 | Gemini-3.1-Pro-high | 2214 | 1624 | 1919 | [1856, 2000] | 1–2 |')
        self.assertEqual(lines[-1], '| 19 | Gemini-3-Flash-low | 1264 | 1226 | 1245 | [1178, 1303] | 16–19 |')

    def test_markdown_composites_within_one(self):
        ratings, intervals, ranges = published_inputs()
        lines = to_markdown(build_leaderboard(ratings, intervals, ranges)).splitlines()[2:]
        for line, (model, _, _, expected) in zip(lines, PUBLISHED):
            cells = [cell.strip() for cell in line.strip('|').split('|')]
            self.assertEqual(cells[1], model)
            self.assertLessEqual(abs(int(cells[COLUMNS.index('Composite')]) - expected), 1)

    def test_empty_leaderboard(self):
        self.assertEqual(to_markdown([]).splitlines()[0], HEADER)
        self.assertEqual(len(to_markdown([]).splitlines()), 2)

    def test_missing_author_sorts_last_and_flags(self):
        ratings = [
            RatingRow('solo', 1900.0, None, None),
            RatingRow('pair', 1500.0, 1400.0, 1450.0, problems_authored_valid=3, gold_correct_count=0),
        ]
        rows = build_leaderboard(ratings)
        self.assertEqual([r.model for r in rows], ['pair', 'solo'])
        self.assertEqual(rows[0].flags, ('no_gold_correct_problems',))
        self.assertEqual(rows[1].flags, ('no_valid_problems',))
        self.assertIn('| 2 | solo | 1900 | n/a | n/a | n/a | n/a |', to_markdown(rows))

    def test_ties_broken_by_solve_then_name(self):
        ratings = [RatingRow('b', 1500.0, 1500.0, 1500.0), RatingRow('a', 1500.0, 1500.0, 1500.0), RatingRow('c', 1600.0, 1400.0, 1500.0)]
        self.assertEqual([r.model for r in build_leaderboard(ratings)], ['c', 'a', 'b'])

    def test_output_deterministic(self):
        ratings, intervals, ranges = published_inputs()
        first = to_json(build_leaderboard(ratings, intervals, ranges))
        second = to_json(build_leaderboard(list(reversed(ratings)), list(reversed(intervals)), ranges))
        self.assertEqual(first, second)
        self.assertEqual(json.loads(first)[0]['range'], [1, 2])


class ExportTests(SimpleTestCase):
    def setUp(self):
        ratings, intervals, ranges = published_inputs()
        self.rows = build_leaderboard(ratings, intervals, ranges)
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def test_csv(self):
        path = export_leaderboard(self.rows, self.dir / 'board.csv', 'csv')
        frame = pd.read_csv(path)
        self.assertEqual(len(frame), 19)
        self.assertEqual(frame.loc[0, 'model'], 'Gemini-3.1-Pro-high')
        self.assertEqual(frame.loc[18, 'worst_rank'], 19)

    def test_xlsx(self):
        path = export_leaderboard(self.rows, self.dir / 'board.xlsx', 'xlsx')
        sheet = load_workbook(path).active
        self.assertEqual([cell.value for cell in sheet[1]], COLUMNS)
        self.assertTrue(sheet['A1'].font.bold)
        self.assertEqual(sheet['B2'].value, 'Gemini-3.1-Pro-high')

    def test_json_and_markdown(self):
        export_leaderboard(self.rows, self.dir / 'board.json', 'json')
        export_leaderboard(self.rows, self.dir / 'board.md', 'markdown')
        self.assertEqual(len(json.loads((self.dir / 'board.json').read_text())), 19)
        self.assertTrue((self.dir / 'board.md').read_text().startswith(HEADER))

    def test_unknown_format(self):
        with self.assertRaises(ConfigurationError):
            export_leaderboard(self.rows, self.dir / 'board.pdf', 'pdf')

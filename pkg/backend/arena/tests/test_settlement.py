from django.test import SimpleTestCase

from arena.domain import Validity
from arena.exceptions import DataIntegrityError
from arena.settlement import settle
from arena.tests.factories import make_problem, make_record, make_verdict


class SettleTests(SimpleTestCase):
    def setUp(self):
        unchecked = Validity.UNCHECKED
        self.clean = make_problem('a', 0, validity=unchecked)
        self.overridden = make_problem('a', 1, gold='199', validity=unchecked)
        self.invalid = make_problem('b', 0, validity=unchecked)
        self.held = make_problem('b', 1, validity=unchecked)
        self.problems = [self.held, self.invalid, self.overridden, self.clean]
        self.records = [
            make_record('b', self.clean.id),
            make_record('c', self.clean.id),
            make_record('b', self.overridden.id, '98', outcome=0),
            make_record('c', self.overridden.id, '98', outcome=0),
            make_record('a', self.invalid.id, '2', outcome=0),
            make_record('c', self.invalid.id),
            make_record('a', self.held.id, '3', outcome=0),
        ]
        self.verdicts = [
            make_verdict(self.overridden.id, selected='98', index=2),
            make_verdict(self.invalid.id, valid=0),
        ]

    def test_verdicts_applied_and_undisputed_problems_validated(self):
        settlement = settle(self.problems, self.records, self.verdicts)
        by_id = {p.id: p for p in settlement.problems}
        self.assertEqual(by_id[self.clean.id].validity, Validity.VALID)
        self.assertEqual(by_id[self.overridden.id].validity, Validity.VALID)
        self.assertTrue(by_id[self.overridden.id].gold_overridden)
        self.assertEqual(by_id[self.invalid.id].validity, Validity.INVALID)
        self.assertEqual(by_id[self.held.id].validity, Validity.UNCHECKED)
        self.assertEqual(settlement.held, [self.held.id])

    def test_scored_set(self):
        settlement = settle(self.problems, self.records, self.verdicts)
        self.assertEqual([p.id for p in settlement.scored_problems], [self.clean.id, self.overridden.id])
        self.assertEqual([p.id for p in settlement.excluded], [self.invalid.id])
        scored = {(r.solver, r.problem): r.outcome for r in settlement.scored_records}
        self.assertEqual(scored[('b', self.overridden.id)], 1)
        self.assertNotIn(('a', self.held.id), scored)

    def test_inputs_untouched(self):
        settle(self.problems, self.records, self.verdicts)
        self.assertEqual(self.overridden.gold, '199')
        self.assertEqual(self.records[2].outcome, 0)

    def test_order_independent(self):
        a = settle(self.problems, self.records, self.verdicts)
        b = settle(list(reversed(self.problems)), self.records, list(reversed(self.verdicts)))
        self.assertEqual(a.problems, b.problems)

    def test_duplicate_verdicts(self):
        with self.assertRaises(DataIntegrityError):
            settle(self.problems, self.records, self.verdicts + self.verdicts[:1])

    def test_verdict_for_unknown_problem(self):
        with self.assertRaises(DataIntegrityError):
            settle(self.problems, self.records, [make_verdict('z/p001')])

    def test_orphan_records(self):
        with self.assertRaises(DataIntegrityError):
            settle(self.problems, self.records + [make_record('c', 'z/p001')], [])

from django.test import SimpleTestCase

from arena.exceptions import ComparisonError
from arena.tests.factories import make_verdict
from verification.agreement import compare_backbones


def verdict_lists(kept_same=0, kept_different=0, exclusion_split=0, dropped_by_both=0):
    """Two backbones' verdicts with the requested mix of agreements."""
    a, b = [], []
    n = 0
    for _ in range(kept_same):
        a.append(make_verdict(f"m/p{n:04d}", selected='98', backbone='alpha'))
        b.append(make_verdict(f"m/p{n:04d}", selected='196/2', backbone='beta'))
        n += 1
    for _ in range(kept_different):
        a.append(make_verdict(f"m/p{n:04d}", selected='98', backbone='alpha'))
        b.append(make_verdict(f"m/p{n:04d}", selected='199', backbone='beta'))
        n += 1
    for _ in range(exclusion_split):
        a.append(make_verdict(f"m/p{n:04d}", selected='98', backbone='alpha'))
        b.append(make_verdict(f"m/p{n:04d}", valid=0, backbone='beta'))
        n += 1
    for _ in range(dropped_by_both):
        a.append(make_verdict(f"m/p{n:04d}", valid=0, backbone='alpha'))
        b.append(make_verdict(f"m/p{n:04d}", valid=0, backbone='beta'))
        n += 1
    return a, b


class CompareBackbonesTests(SimpleTestCase):
    def test_identical_lists(self):
        a, b = verdict_lists(kept_same=100)
        report = compare_backbones(a, b)
        self.assertEqual(report.exclusion_agreement, 1.0)
        self.assertEqual(report.answer_agreement, 1.0)
        self.assertEqual((report.backbone_a, report.backbone_b), ('alpha', 'beta'))

    def test_one_difference_in_a_hundred(self):
        a, b = verdict_lists(kept_same=99, exclusion_split=1)
        report = compare_backbones(a, b)
        self.assertAlmostEqual(report.exclusion_agreement, 0.99)
        self.assertEqual(report.exclusion_disagreements, [{'problem': 'm/p0099', 'a': 1, 'b': 0}])

    def test_published_replay_counts(self):
        a, b = verdict_lists(kept_same=331, kept_different=2, exclusion_split=10, dropped_by_both=71)
        report = compare_backbones(a, b)
        self.assertEqual(report.total, 414)
        self.assertEqual(report.same_exclusion, 404)
        self.assertAlmostEqual(report.exclusion_agreement, 0.975, delta=0.001)
        self.assertEqual((report.same_answer, report.kept_by_both), (331, 333))
        self.assertEqual(round(100 * report.answer_agreement, 1), 99.4)
        self.assertEqual(len(report.answer_disagreements), 2)

    def test_nothing_kept_by_both(self):
        a, b = verdict_lists(dropped_by_both=3)
        self.assertIsNone(compare_backbones(a, b).answer_agreement)

    def test_different_problem_sets(self):
        a, b = verdict_lists(kept_same=3)
        with self.assertRaises(ComparisonError):
            compare_backbones(a, b[:2])

    def test_duplicate_verdicts(self):
        a, b = verdict_lists(kept_same=3)
        with self.assertRaises(ComparisonError):
            compare_backbones(a + a[:1], b)

    def test_report_serializes(self):
        a, b = verdict_lists(kept_same=2, kept_different=1)
        data = compare_backbones(a, b).to_dict()
        self.assertEqual(data['kept_by_both'], 3)
        self.assertAlmostEqual(data['answer_agreement'], 2 / 3)

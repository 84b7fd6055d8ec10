from django.test import SimpleTestCase

from arena.exceptions import GenerationError
from genpipe.parsing import clean_gold, parse_problem_reply


class ParseProblemReplyTests(SimpleTestCase):
    def test_plain_sections(self):
        statement, gold = parse_problem_reply('STATEMENT: Compute $\\int_0^1 x\\,dx$.\nANSWER: 1/2')
        self.assertEqual(statement, 'Compute $\\int_0^1 x\\,dx$.')
        self.assertEqual(gold, '1/2')

    def test_markdown_bold_and_multiline_statement(self):
        reply = '**STATEMENT:** Let $n = 5$.\nHow many subsets?\n\n**ANSWER:** \\boxed{32}\nBecause 2^5.'
        statement, gold = parse_problem_reply(reply)
        self.assertEqual(statement, 'Let $n = 5$.\nHow many subsets?')
        self.assertEqual(gold, '32')

    def test_first_section_wins(self):
        statement, gold = parse_problem_reply('STATEMENT: first\nANSWER: 3\nSTATEMENT: second\nANSWER: 4')
        self.assertEqual((statement, gold), ('first', '3'))

    def test_missing_sections(self):
        with self.assertRaises(GenerationError):
            parse_problem_reply('Here is a nice problem about primes.')
        with self.assertRaises(GenerationError):
            parse_problem_reply('STATEMENT: only a statement')
        with self.assertRaises(GenerationError):
            parse_problem_reply('')

    def test_gold_must_be_closed_form(self):
        with self.assertRaises(GenerationError):
            parse_problem_reply('STATEMENT: Find n.\nANSWER: n + 1')


class CleanGoldTests(SimpleTestCase):
    def test_strips_boxed_and_backticks(self):
        self.assertEqual(clean_gold('`\\boxed{\\frac{1}{\\pi}}`'), '\\frac{1}{\\pi}')

    def test_first_line_only(self):
        self.assertEqual(clean_gold('\n  98\n(the count)'), '98')

    def test_empty(self):
        self.assertEqual(clean_gold('   \n'), '')

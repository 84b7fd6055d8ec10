from django.test import SimpleTestCase

from agents.base import Purpose
from agents.synthetic import SyntheticAgent
from agents.tests.fakes import ScriptedAgent
from arena.domain import DomainTag, MetaPrompt
from arena.exceptions import ConfigurationError, GenerationError
from genpipe.pipeline import GenerationPipeline, problem_id
from genpipe.prompts import PromptLibrary, default_library

DOMAIN = DomainTag('Discrete Mathematics', 'combinatorics')

CANNED = {
    Purpose.META_PROMPT: 'Ask for a subset count with a twist.',
    Purpose.GENERATE: 'STATEMENT: How many subsets does a 5-element set have?\nANSWER: 32',
    Purpose.AMPLIFY: 'STATEMENT: How many subsets of a 10-element set have even size?\nANSWER: 2^9',
}


class PromptTests(SimpleTestCase):
    def test_values_inserted(self):
        text = default_library.render('generate_direct', domain_area='Analysis', domain_subfield='real analysis')
        self.assertIn('real analysis', text)
        self.assertNotIn('{domain_area}', text)

    def test_missing_value(self):
        with self.assertRaises(ConfigurationError):
            default_library.render('amplify', domain_area='Analysis')

    def test_missing_template(self):
        with self.assertRaises(ConfigurationError):
            PromptLibrary().template('no_such_template')

    def test_braces_in_values_kept(self):
        text = default_library.render('amplify', domain_area='A', domain_subfield='B', draft_statement='$\\frac{1}{2}$', draft_gold='{x}')
        self.assertIn('$\\frac{1}{2}$', text)


class StageTests(SimpleTestCase):
    def setUp(self):
        self.pipeline = GenerationPipeline(stages=3, amplification_rounds=1)
        self.canned = SyntheticAgent('canned', canned=CANNED)

    def test_meta_prompt_is_fixed_for_canned_agent(self):
        first = self.pipeline.make_meta_prompt(self.canned, DOMAIN)
        second = self.pipeline.make_meta_prompt(self.canned, DOMAIN)
        self.assertEqual(first, second)
        self.assertEqual(first, MetaPrompt(author='canned', domain=DOMAIN, text=CANNED[Purpose.META_PROMPT]))

    def test_empty_meta_prompt_asked_twice(self):
        agent = ScriptedAgent(**{Purpose.META_PROMPT: ['', '  ']})
        with self.assertRaises(GenerationError):
            self.pipeline.make_meta_prompt(agent, DOMAIN)
        self.assertEqual(len(agent.prompts), 2)

    def test_generate_from_meta_prompt(self):
        meta = MetaPrompt(author='canned', domain=DOMAIN, text='Ask about subsets.')
        self.assertEqual(
            self.pipeline.generate_problem(self.canned, meta),
            ('How many subsets does a 5-element set have?', '32'),
        )

    def test_prose_reply_gets_one_reask(self):
        agent = ScriptedAgent(**{Purpose.GENERATE: ['Sure! Here is a problem.', CANNED[Purpose.GENERATE]]})
        self.assertEqual(self.pipeline.generate_problem(agent, DOMAIN)[1], '32')
        self.assertEqual(len(agent.prompts), 2)
        self.assertTrue(agent.prompts[1][1].endswith(PromptLibrary().template('format_reminder')))

    def test_second_prose_reply_fails(self):
        agent = ScriptedAgent(**{Purpose.GENERATE: ['prose', 'more prose']})
        with self.assertRaises(GenerationError):
            self.pipeline.generate_problem(agent, DOMAIN)

    def test_zero_rounds_is_identity(self):
        draft = ('Statement', '7')
        final, history = self.pipeline.amplify(self.canned, draft, 0, domain=DOMAIN)
        self.assertEqual(final, draft)
        self.assertEqual(history, ())

    def test_one_round_history(self):
        final, history = self.pipeline.amplify(self.canned, ('Statement', '7'), 1, domain=DOMAIN)
        self.assertEqual(final, ('How many subsets of a 10-element set have even size?', '2^9'))
        self.assertEqual(history, (final,))

    def test_unreadable_round_keeps_previous_version(self):
        agent = ScriptedAgent(**{Purpose.AMPLIFY: ['garbled', CANNED[Purpose.AMPLIFY]]})
        final, history = self.pipeline.amplify(agent, ('Statement', '7'), 2, domain=DOMAIN)
        self.assertEqual(history[0], ('Statement', '7'))
        self.assertEqual(history[1], final)
        self.assertEqual(self.pipeline.fallbacks, 1)

    def test_negative_rounds(self):
        with self.assertRaises(GenerationError):
            self.pipeline.amplify(self.canned, ('Statement', '7'), -1)


class PipelineTests(SimpleTestCase):
    def setUp(self):
        self.agent = SyntheticAgent('canned', canned=CANNED)

    def test_direct_generation_trace(self):
        problem = GenerationPipeline(stages=1).author_slot(self.agent, DOMAIN, 0)
        self.assertEqual(problem.id, 'canned/p001')
        self.assertEqual(problem.provenance.stages_used, 1)
        self.assertIsNone(problem.provenance.meta_prompt)
        self.assertEqual(problem.gold, '32')

    def test_two_stage_trace(self):
        problem = GenerationPipeline(stages=2).author_slot(self.agent, DOMAIN, 4)
        self.assertEqual(problem.id, 'canned/p005')
        self.assertEqual(problem.provenance.meta_prompt.text, CANNED[Purpose.META_PROMPT])
        self.assertEqual(problem.provenance.amplification_history, ())
        self.assertEqual(problem.statement, problem.provenance.draft_statement)

    def test_three_stage_trace(self):
        problem = GenerationPipeline(stages=3, amplification_rounds=2).author_slot(self.agent, DOMAIN, 0)
        trace = problem.provenance
        self.assertEqual(trace.stages_used, 3)
        self.assertEqual(len(trace.amplification_history), 2)
        self.assertEqual(trace.draft_gold, '32')
        self.assertEqual(problem.gold, '2^9')
        self.assertEqual(problem.original_gold, '2^9')

    def test_synthetic_author_bypasses_prompts(self):
        agent = SyntheticAgent('synth', seed=1)
        problems = GenerationPipeline(stages=3).author_problems(agent, [DOMAIN, DOMAIN])
        self.assertEqual([p.id for p in problems], ['synth/p001', 'synth/p002'])
        self.assertTrue(all(p.oracle is not None for p in problems))

    def test_invalid_stage_count(self):
        with self.assertRaises(GenerationError):
            GenerationPipeline(stages=4)

    def test_problem_id(self):
        self.assertEqual(problem_id('m', 29), 'm/p030')

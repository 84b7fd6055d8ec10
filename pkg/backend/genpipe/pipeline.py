"""
Problem authoring: meta-prompting, generation and difficulty amplification.

stages_used = 1  direct generation from the domain tag
stages_used = 2  the author first writes its own authoring prompt
stages_used = 3  as 2, followed by `amplification_rounds` hardening rewrites
"""
import logging

from agents.base import Purpose
from arena.domain import GenerationTrace, MetaPrompt, Problem
from arena.exceptions import GenerationError
from genpipe.parsing import parse_problem_reply
from genpipe.prompts import default_library

logger = logging.getLogger(__name__)


class GenerationPipeline:
    def __init__(self, stages=3, amplification_rounds=1, prompts=None):
        if stages not in (1, 2, 3):
            raise GenerationError(f"Pipeline stages must be 1, 2 or 3, got {stages}")
        if amplification_rounds < 0:
            raise GenerationError(f"Amplification rounds must be non-negative, got {amplification_rounds}")
        self.stages = stages
        self.amplification_rounds = amplification_rounds
        self.prompts = prompts or default_library
        self.fallbacks = 0

    def _context(self, agent, domain, **extra):
        return {'author': agent.name, 'domain': domain, **extra}

    # -----------------------
    # Stage 1
    # -----------------------
    def make_meta_prompt(self, agent, domain):
        prompt = self.prompts.render(
            'meta_prompt', domain_area=domain.broad_area, domain_subfield=domain.subfield
        )
        for attempt in range(2):
            text = agent.complete(prompt, purpose=Purpose.META_PROMPT, context=self._context(agent, domain))
            if text and text.strip():
                return MetaPrompt(author=agent.name, domain=domain, text=text)
            logger.warning(f"Empty meta-prompt from '{agent.name}' for {domain} (attempt {attempt + 1})")
        raise GenerationError(f"'{agent.name}' returned an empty meta-prompt for {domain}")

    # -----------------------
    # Stage 2
    # -----------------------
    def generate_problem(self, agent, source):
        """Draft (statement, gold) from a MetaPrompt, or directly from a DomainTag."""
        if isinstance(source, MetaPrompt):
            domain = source.domain
            prompt = self.prompts.render(
                'generate_from_meta',
                meta_prompt=source.text,
                domain_area=domain.broad_area,
                domain_subfield=domain.subfield,
            )
        else:
            domain = source
            prompt = self.prompts.render(
                'generate_direct', domain_area=domain.broad_area, domain_subfield=domain.subfield
            )
        context = self._context(agent, domain)

        reply = agent.complete(prompt, purpose=Purpose.GENERATE, context=context)
        try:
            return parse_problem_reply(reply)
        except GenerationError as e:
            logger.warning(f"Re-asking '{agent.name}' for a well-formed problem ({domain}): {e}")

        reply = agent.complete(
            prompt + self.prompts.template('format_reminder'), purpose=Purpose.GENERATE, context=context
        )
        try:
            return parse_problem_reply(reply)
        except GenerationError as e:
            raise GenerationError(f"'{agent.name}' produced no usable problem for {domain}: {e}") from e

    # -----------------------
    # Stage 3
    # -----------------------
    def amplify(self, agent, draft, rounds, domain=None):
        """
        Apply `rounds` hardening rewrites to a (statement, gold) draft.

        A round whose reply cannot be parsed keeps the previous version. The
        history holds the version in effect after every round.
        """
        if rounds < 0:
            raise GenerationError(f"Amplification rounds must be non-negative, got {rounds}")
        current = draft
        history = []
        for round_index in range(rounds):
            prompt = self.prompts.render(
                'amplify',
                domain_area=domain.broad_area if domain else '',
                domain_subfield=domain.subfield if domain else '',
                draft_statement=current[0],
                draft_gold=current[1],
            )
            reply = agent.complete(
                prompt, purpose=Purpose.AMPLIFY, context=self._context(agent, domain, round=round_index)
            )
            try:
                current = parse_problem_reply(reply)
            except GenerationError as e:
                self.fallbacks += 1
                logger.warning(
                    f"Amplification round {round_index + 1} for '{agent.name}' fell back to the previous version: {e}"
                )
            history.append(current)
        return current, tuple(history)

    # -----------------------
    # Full pipeline
    # -----------------------
    def author_slot(self, agent, domain, slot):
        meta = None
        history = ()
        if self.stages == 1:
            draft = self.generate_problem(agent, domain)
        else:
            meta = self.make_meta_prompt(agent, domain)
            draft = self.generate_problem(agent, meta)
        final = draft
        if self.stages == 3:
            final, history = self.amplify(agent, draft, self.amplification_rounds, domain=domain)

        trace = GenerationTrace(
            stages_used=self.stages,
            draft_statement=draft[0],
            draft_gold=draft[1],
            meta_prompt=meta,
            amplification_history=history,
        ).check()
        return Problem(
            id=problem_id(agent.name, slot),
            author=agent.name,
            domain=domain,
            statement=final[0],
            gold=final[1],
            provenance=trace,
        )

    def author_problems(self, agent, schedule):
        """One problem per schedule slot, authored sequentially."""
        if agent.synthetic and not agent.is_canned:
            return agent.synth_author(len(schedule), schedule)
        problems = [self.author_slot(agent, domain, slot) for slot, domain in enumerate(schedule)]
        logger.info(f"'{agent.name}' authored {len(problems)} problem(s) with {self.stages}-stage generation")
        return problems


def problem_id(author, slot):
    return f"{author}/p{slot + 1:03d}"

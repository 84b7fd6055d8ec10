from agents.base import Agent


class ScriptedAgent(Agent):
    """Replies from per-purpose queues and records every prompt."""

    def __init__(self, name='scripted', **replies):
        super().__init__(name)
        self.replies = {purpose: list(queue) for purpose, queue in replies.items()}
        self.prompts = []

    def complete(self, prompt, *, purpose, context=None):
        self.prompts.append((purpose, prompt))
        return self.replies[purpose].pop(0)

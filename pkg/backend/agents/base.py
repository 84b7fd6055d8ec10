class Purpose:
    META_PROMPT = 'meta_prompt'
    GENERATE = 'generate'
    AMPLIFY = 'amplify'
    SOLVE = 'solve'
    VERIFY = 'verify'

    ALL = (META_PROMPT, GENERATE, AMPLIFY, SOLVE, VERIFY)


class Agent:
    """A participant that turns a prompt into a completion."""

    synthetic = False

    def __init__(self, name):
        self.name = name

    def complete(self, prompt, *, purpose, context=None):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"

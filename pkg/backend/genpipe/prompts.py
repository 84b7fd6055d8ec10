"""
Prompt templates stored as plain-text files next to each app.

Templates use named placeholders such as {domain_area}, {domain_subfield}
and {draft_statement}; substituted values are inserted verbatim.
"""
from functools import lru_cache
from pathlib import Path

from arena.exceptions import ConfigurationError

PROMPTS_DIR = Path(__file__).resolve().parent / 'prompts'


class PromptLibrary:
    def __init__(self, directory=PROMPTS_DIR):
        self.directory = Path(directory)

    def template(self, name):
        return _read(self.directory / f"{name}.txt")

    def render(self, name, **values):
        text = self.template(name)
        try:
            return text.format_map(values)
        except KeyError as e:
            raise ConfigurationError(f"Prompt template '{name}' needs a value for {e}") from e


@lru_cache(maxsize=None)
def _read(path):
    try:
        return path.read_text(encoding='utf-8')
    except FileNotFoundError:
        raise ConfigurationError(f"Prompt template not found: {path}")


default_library = PromptLibrary()

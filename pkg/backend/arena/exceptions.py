"""
Error hierarchy for the arena engine.

Every error carries the process exit code the management commands report:
2 configuration, 3 phase failure, 4 data integrity.
"""


class ArenaError(Exception):
    exit_code = 3


class ConfigurationError(ArenaError):
    exit_code = 2

    def __init__(self, message, errors=None):
        super().__init__(message)
        self.errors = errors or {}


class DataIntegrityError(ArenaError):
    exit_code = 4


class IntegrityError(DataIntegrityError):
    """Artifacts from different runs were mixed."""


class LoadError(DataIntegrityError):
    def __init__(self, message, path=None, line=None, field=None):
        location = str(path) if path else ""
        if line is not None:
            location = f"{location}:{line}"
        if field:
            message = f"{message} (field '{field}')"
        super().__init__(f"{location}: {message}" if location else message)
        self.path = path
        self.line = line
        self.field = field


class PhaseError(ArenaError):
    def __init__(self, phase, checkpoint, cause=None):
        super().__init__(
            f"Phase '{phase}' failed: {cause}. Last checkpoint: {checkpoint or 'none'}"
        )
        self.phase = phase
        self.checkpoint = checkpoint
        self.cause = cause


class GenerationError(ArenaError):
    pass


class ExpressionParseError(ArenaError):
    def __init__(self, message, position=None, text=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position
        self.text = text


class EvaluationError(ArenaError):
    pass


class JudgmentError(ArenaError):
    pass


class VerificationError(ArenaError):
    pass


class ComparisonError(ArenaError):
    pass


class FitError(ArenaError):
    def __init__(self, message, iterations=None, grad_norm=None):
        super().__init__(message)
        self.iterations = iterations
        self.grad_norm = grad_norm


class DivergenceError(FitError):
    def __init__(self, problem_id, outcome):
        kind = "correct" if outcome else "wrong"
        super().__init__(
            f"Problem '{problem_id}' is all-{kind}; its difficulty diverges without regularization (lambda = 0)"
        )
        self.problem_id = problem_id


class BootstrapError(ArenaError):
    pass


class TransportError(ArenaError):
    pass


class EndpointError(ArenaError):
    def __init__(self, status, body):
        super().__init__(f"Endpoint returned HTTP {status}: {body}")
        self.status = status
        self.body = body

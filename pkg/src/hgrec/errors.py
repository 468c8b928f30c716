"""Exception hierarchy.

HgrecError and its subclasses mark user/data problems (CLI exit code 2);
anything else escaping a command is an internal error (exit code 1).
"""


class HgrecError(Exception):
    """Base class for user- or data-caused failures."""


class ExportParseError(HgrecError):
    """A JSONL export line could not be parsed."""

    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class EmptyCorpusError(HgrecError):
    """Cleaning removed every pull request."""


class ConfigError(HgrecError):
    """Invalid hyperparameter or run configuration."""


class NoEdgesError(HgrecError):
    """A hypergraph without edges cannot be assembled for ranking."""


class ConvergenceError(HgrecError):
    """Iterative solve did not reach tolerance within max_iter."""

    def __init__(self, iterations, residual, tol):
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(last step {residual:.3e}, tol {tol:.3e})"
        )
        self.iterations = iterations
        self.residual = residual
        self.tol = tol


class SolverError(HgrecError):
    """Direct solve produced a non-finite result."""


class CorpusSpanError(HgrecError):
    """Corpus does not span enough months for the evaluation protocol."""


class UndefinedMetricError(HgrecError):
    """A metric was requested over an empty record set."""

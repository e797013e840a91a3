"""Exception hierarchy shared by every solver module and the CLI."""


class CausalGameError(Exception):
    """Base class for domain failures (CLI exit status 1)."""


class ModelValidationError(CausalGameError):
    """A model, family, belief or game violates a structural invariant."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class QueryError(CausalGameError):
    """A probability query was malformed: unknown variable or value, bad assignment."""


class NullEventError(QueryError):
    """Conditioning on an event of probability zero."""


class ImpossibleObservationError(CausalGameError):
    """An observation has likelihood zero under every believed model."""


class SearchSpaceTooLarge(CausalGameError):
    pass


class ParseError(Exception):
    """Malformed input document (CLI exit status 2).

    ``where`` is a field path such as ``cpts.C[1].dist`` or a ``line:col``
    position for JSON syntax errors.
    """

    def __init__(self, message, where=None, path=None):
        self.message = message
        self.where = where
        self.path = path
        prefix = ""
        if path is not None:
            prefix += f"{path}: "
        if where:
            prefix += f"{where}: "
        super().__init__(prefix + message)

    def at_path(self, path) -> "ParseError":
        return self if self.path is not None else ParseError(self.message, self.where, str(path))


class ConfigError(Exception):
    """Invalid run configuration (CLI exit status 2)."""

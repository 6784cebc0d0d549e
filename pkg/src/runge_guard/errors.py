"""Exception types raised across the package."""


class DomainError(ValueError):
    """Evaluation point lies outside the interval an object is valid on."""


class BoundaryWindowError(ValueError):
    """A window lacks the neighbouring samples a borrowing scheme needs."""


class ContiguityError(ValueError):
    """An increment stream has a gap or a non-uniform step."""


class ConfigError(ValueError):
    """A scenario file is malformed; carries the offending line/field."""

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.field = field

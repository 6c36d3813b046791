"""Exception types shared across the toolkit."""


class ArgmineError(Exception):
    """Base class for all toolkit errors."""


class CorpusParseError(ArgmineError):
    """Raised when a corpus file is not syntactically valid JSON."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class CorpusSchemaError(ArgmineError):
    """Raised when a corpus file violates the document schema.

    Carries the offending document id and field path when known.
    """

    def __init__(self, message, doc_id=None, field=None):
        parts = []
        if doc_id is not None:
            parts.append(f"doc '{doc_id}'")
        if field is not None:
            parts.append(f"field '{field}'")
        if parts:
            message = f"{message} [{', '.join(parts)}]"
        super().__init__(message)
        self.doc_id = doc_id
        self.field = field


class CorpusValidationError(ArgmineError):
    """Raised when a parsed corpus fails invariant validation."""

    def __init__(self, findings):
        self.findings = list(findings)
        lines = "; ".join(str(f) for f in self.findings[:5])
        more = "" if len(self.findings) <= 5 else f" (+{len(self.findings) - 5} more)"
        super().__init__(f"{len(self.findings)} validation error(s): {lines}{more}")


class GoldConstructionError(ArgmineError):
    """Raised when majority-vote gold construction is impossible."""


class DegenerateDataError(ArgmineError):
    """Raised when an agreement statistic is undefined for the given data."""


class ResourceError(ArgmineError):
    """Raised when a feature set is selected without its required resource."""


class EmbeddingFormatError(ArgmineError):
    """Raised on malformed word-vector files."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class ModelFormatError(ArgmineError):
    """Raised when a model file cannot be read or has the wrong version."""


class ConfigMismatchError(ArgmineError):
    """Raised when a model is applied with resources for a different feature config."""

"""Exceptions raised by the diagram library."""


class CompilationError(Exception):

    def __init__(self, value):
        self.value = value

    def __str__(self):
        return f"{self.__class__.__name__}: {self.value}"


class ScopeError(CompilationError):
    """Arity, scope or variable mismatch."""


class CapExceededError(ScopeError):
    """Enumeration or exact-minimisation cap exceeded."""


class VtreeError(CompilationError):
    pass


class SddError(CompilationError):
    pass


class ObddError(CompilationError):
    pass


class FormatError(CompilationError):
    """Malformed vtree, SDD or function-spec text."""

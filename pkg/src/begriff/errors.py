"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class BegriffError(Exception):
    """Base class for all package errors."""


class ParseError(BegriffError):
    """Lexical or syntactic error, optionally located by a source span."""

    def __init__(self, message: str, span=None):
        self.span = span
        if span is not None:
            message = f"{message} at {span}"
        super().__init__(message)


class LayerError(BegriffError):
    """FOL and Frege vocabulary mixed, or a rule used in the wrong layer."""


class CaptureError(BegriffError):
    def __init__(self, bound: str, span=None, detail: str = ""):
        self.bound = bound
        self.span = span
        msg = f"substitution would capture a free variable under binder {bound!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class SelectorError(BegriffError):
    """Occurrence selector out of range."""


class ArityError(BegriffError):
    pass


class SideConditionViolation(BegriffError):
    def __init__(self, condition: str, clause: str = ""):
        self.condition = condition
        self.clause = clause
        text = condition if not clause else f"{condition} [{clause}]"
        super().__init__(text)


class MissingBinding(BegriffError):
    pass


class ShapeMismatch(BegriffError):
    pass


class GuardBlocked(BegriffError):
    """An instantiation refused in guarded mode by a certified distinctness theorem."""

    def __init__(self, var: str, term_text: str, blocking_id: str):
        self.var = var
        self.term_text = term_text
        self.blocking_id = blocking_id
        super().__init__(
            f"instantiation {var} := {term_text} blocked by guard {blocking_id}"
        )


class ModeError(BegriffError):
    pass


class UnknownStep(BegriffError):
    pass

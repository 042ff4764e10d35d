"""Shared error types with stable reason codes.

The CLI and the HTTP service reject invalid inputs with the same reason code
so a request refused by one is refused by the other for the same stated
reason (the CLI maps codes to exit classes, the service to HTTP statuses).
"""

from __future__ import annotations


class ValidationError(ValueError):
    """Invalid parameters or payloads; carries a stable machine-readable code."""

    def __init__(self, code: str, message: str, field: str | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.field = field

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "field": self.field}


class RecipeStepError(ValidationError):
    """A correction-recipe step failed; records which step."""

    def __init__(self, step_index: int, op: str, cause: ValidationError):
        super().__init__(cause.code, f"step {step_index} ({op}): {cause.message}", cause.field)
        self.step_index = step_index
        self.op = op

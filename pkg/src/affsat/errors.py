"""Shared exception types.

PreconditionError signals a violated operation contract (CLI exit 2);
StabilizationError and PoleError signal computation failures (exit 3).
"""


class PreconditionError(ValueError):
    def __init__(self, module, operation, message):
        self.module = module
        self.operation = operation
        self.message = message
        super().__init__("%s.%s: %s" % (module, operation, message))


class StabilizationError(RuntimeError):
    def __init__(self, message, detail=None):
        self.detail = detail or {}
        super().__init__(message)


class PoleError(ValueError):
    def __init__(self, message, detail=None):
        self.detail = detail or {}
        super().__init__(message)

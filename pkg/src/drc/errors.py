"""Exception hierarchy shared by the library and the CLI.

Each class carries the process exit code the CLI maps it to.
"""


class DRCError(Exception):
    exit_code = 1


class InputError(DRCError, ValueError):
    """Bad user input: weights that do not sum correctly, malformed specs."""

    exit_code = 2


class GuardOverflow(DRCError):
    """A configured size guard was exceeded."""

    exit_code = 3

    def __init__(self, message, partial_count=None):
        super().__init__(message)
        self.partial_count = partial_count


class InvariantError(DRCError, AssertionError):
    """An internal identity failed; this indicates a bug, not bad input."""

    exit_code = 4


class SchemaError(InputError):
    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer

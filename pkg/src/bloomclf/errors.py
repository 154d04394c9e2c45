"""Exception hierarchy.

Everything raised on bad user input derives from :class:`InputError`, which the
CLI maps to exit code 2. Anything else escaping a command is an internal error.
"""


class BloomError(Exception):
    """Base class for all package errors."""


class InputError(BloomError, ValueError):
    """Problem with caller-supplied data, files or arguments."""


class EmptyText(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class UnknownLabel(InputError):
    def __init__(self, label, row=None):
        self.label = label
        self.row = row
        where = f" (row {row})" if row is not None else ""
        super().__init__(f"unknown Bloom level {label!r}{where}")


class EmptyCorpus(InputError):
    pass


class ClassTooSmall(InputError):
    def __init__(self, class_name, count):
        self.class_name = class_name
        self.count = count
        super().__init__(
            f"class {class_name!r} has {count} record(s); at least 2 are needed to split"
        )


class EmptyVocabulary(InputError):
    pass


class SingleClass(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NegativeCount(InputError):
    pass


class NonFiniteLoss(BloomError, ArithmeticError):
    """Training diverged; usually a learning rate that is too large."""


class VersionMismatch(InputError):
    pass


class CorruptFile(InputError):
    def __init__(self, message, offset=0):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


class LengthMismatch(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class EmptyMatrix(InputError):
    pass


class NotACoarsening(InputError):
    pass


class InsufficientData(InputError):
    pass


class EmptyBank(InputError):
    pass


class BankFormatError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

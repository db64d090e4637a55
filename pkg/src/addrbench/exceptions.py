class AddrBenchError(Exception):
    """Base class for all errors raised by addrbench."""


class EmptyRecord(AddrBenchError, ValueError):
    pass


class InvalidRecord(AddrBenchError, ValueError):
    pass


class EmptyInput(AddrBenchError, ValueError):
    pass


class NotApplicable(AddrBenchError, ValueError):
    """An error kind was requested for a record (or text) it cannot apply to."""


class LexiconLoadError(AddrBenchError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IngestError(AddrBenchError):
    pass


class TrainDataError(AddrBenchError, ValueError):
    def __init__(self, message, index=None):
        self.index = index
        if index is not None:
            message = f"record {index}: {message}"
        super().__init__(message)


class ModelLoadError(AddrBenchError):
    pass


class AlignmentError(AddrBenchError, ValueError):
    def __init__(self, message, index=None):
        self.index = index
        if index is not None:
            message = f"record {index}: {message}"
        super().__init__(message)

"""Exception types raised across the pipeline."""


class ExamStressError(Exception):
    """Base class for every domain error raised by this package."""


class ParseError(ExamStressError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidRate(ExamStressError):
    pass


class EmptyRecording(ExamStressError):
    pass


class InvalidGrade(ExamStressError):
    pass


class DuplicateRecord(ExamStressError):
    pass


class IncompleteSession(ExamStressError):
    pass


class MissingGrade(ExamStressError):
    pass


class InvalidArgument(ExamStressError, ValueError):
    pass


class NoCommonWindow(ExamStressError):
    pass


class InvalidWindow(ExamStressError, ValueError):
    pass


class EmptyInput(ExamStressError, ValueError):
    pass


class DegenerateSignal(ExamStressError):
    pass


class InvalidSample(ExamStressError, ValueError):
    pass


class SingleClassTrainingSet(ExamStressError):
    pass


class InvalidK(ExamStressError, ValueError):
    pass


class UndefinedAuc(ExamStressError):
    pass


class InsufficientStudents(ExamStressError):
    pass


class ConfigError(ExamStressError):
    pass

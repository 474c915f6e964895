from enum import Enum
from typing import List, Any


class Err(Enum):
    # input errors, exit code 2
    DIMENSION_MISMATCH = 1
    NOT_HERMITIAN = 2
    INCONSISTENT_TRIPLE = 3
    MALFORMED_FILE = 4
    UNSUPPORTED_FORMAT_VERSION = 5
    INVALID_CUTOFF = 6
    INVALID_LABELS = 7
    UNKNOWN_GEOMETRY = 8
    NEGATIVE_DISTANCE = 9
    DISCONNECTED_WEIGHTS = 10
    TOO_FEW_SHELLS = 11
    ZERO_EIGENVALUE = 12
    INVALID_ARGUMENT = 13
    NOT_NORMALIZED = 14

    # numerical failures, exit code 3
    STRESS_INCREASED = 30
    NOT_CONVERGED = 31

    # i/o failures, exit code 4
    IO_FAILURE = 40

    UNKNOWN = 9999


class ExitCode(Enum):
    OK = 0
    INPUT_ERROR = 2
    NOT_CONVERGED = 3
    IO_FAILURE = 4


class ForgeError(Exception):
    def __init__(self, code: Err, errors: List[Any] = []):
        message = f"Error code: {code.name}"
        if len(errors) > 0:
            message += f" {errors}"
        super(ForgeError, self).__init__(message)
        self.code = code
        self.errors = errors


def exit_code_for(code: Err) -> ExitCode:
    if code == Err.IO_FAILURE:
        return ExitCode.IO_FAILURE
    if code.value >= 30 and code != Err.UNKNOWN:
        return ExitCode.NOT_CONVERGED
    return ExitCode.INPUT_ERROR

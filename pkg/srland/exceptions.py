"""
Error hierarchy; every error carries the process exit code the CLI returns for it.
"""
from typing import Optional


class SRLandError(Exception):
    exit_code = 1

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.stage = stage

    def with_stage(self, stage: str) -> "SRLandError":
        """Tag the error with the pipeline stage it came from (first tag wins)."""
        if self.stage is None:
            self.stage = stage
        return self

    def __str__(self) -> str:
        if self.stage:
            return f"[{self.stage}] {self.message}"
        return self.message


class ParameterError(SRLandError, ValueError):
    exit_code = 1


class DataFormatError(SRLandError):
    exit_code = 2


class ShapeError(DataFormatError):
    pass


class DataError(DataFormatError):
    pass


class NumericalError(SRLandError, ArithmeticError):
    exit_code = 3


class ConnectivityError(SRLandError):
    exit_code = 4

    def __init__(self, message: str, components: int = 0, vertex: Optional[int] = None):
        super().__init__(message)
        self.components = components
        self.vertex = vertex


class CoverageWarning(UserWarning):
    """Some ground-truth class received no label; the run still succeeds."""
    exit_code = 5

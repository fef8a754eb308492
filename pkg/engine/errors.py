from typing import Optional


class GammaError(Exception):
    """Base class for every error the engine raises on purpose."""

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InvalidDataError(GammaError):
    pass


class DepthError(GammaError):
    pass


class MoveError(GammaError):
    def __init__(self, detail: str, position: Optional[int] = None):
        if position is not None:
            detail = f"move #{position}: {detail}"
        super().__init__(detail)
        self.position = position


class PatternError(MoveError):
    pass


class GammaSyntaxError(GammaError):
    def __init__(self, line: int, column: int, expected: str):
        super().__init__(f"syntax error at line {line}, column {column}: {expected}")
        self.line = line
        self.column = column
        self.expected = expected


class OracleError(GammaError):
    pass


class PoleProximityError(OracleError):
    pass


class OracleOverflowError(OracleError):
    pass


class NoAdmissiblePointsError(OracleError):
    pass

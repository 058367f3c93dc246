"""Иерархия исключений пакета.

Все вычислительные ошибки наследуются от EmbeddingError, поэтому CLI и
пакетный прогон перехватывают их одним обработчиком.
"""
import math
from typing import Optional, Tuple


class EmbeddingError(Exception):
    """Базовое исключение."""


class InadmissibleSpec(EmbeddingError):
    pass


class QuadratureFailure(EmbeddingError):
    pass


class NonFiniteIntegrand(EmbeddingError):
    pass


class BadCount(EmbeddingError):
    pass


class EmptyWindow(EmbeddingError):
    pass


class NotQuasiconcave(EmbeddingError):
    pass


class DegenerateRatio(EmbeddingError):
    pass


class ClassificationFailure(EmbeddingError):
    pass


class OutOfScope(EmbeddingError):
    pass


class NonFinitePhi(EmbeddingError):
    pass


class ExponentDegenerate(EmbeddingError):
    pass


class NonFinite(EmbeddingError):
    """Расходящийся фрагмент; value всегда +inf, window указывает место."""

    def __init__(self, message: str, window: Optional[Tuple[float, float]] = None):
        super().__init__(message)
        self.window = window
        self.value = math.inf


class NonPositive(EmbeddingError):
    pass


class WrongMonotonicity(EmbeddingError):
    pass


class EmptyCovering(EmbeddingError):
    pass


class NotMonotone(EmbeddingError):
    pass


class ConfigError(EmbeddingError):
    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        location = []
        if field:
            location.append(f"поле '{field}'")
        if line:
            location.append(f"строка {line}")
        super().__init__(f"{message} ({', '.join(location)})" if location else message)
        self.field = field
        self.line = line


class EmptyBatch(EmbeddingError):
    pass


class IoError(EmbeddingError):
    pass

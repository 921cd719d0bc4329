"""
Excepciones de la librería.

Todas derivan de `MonodromyError` para que la CLI pueda traducirlas a códigos
de salida en un único punto.
"""


class MonodromyError(Exception):
    """Error base de la librería."""


class DivByZero(MonodromyError, ZeroDivisionError):
    """División por el elemento cero de un cuerpo ciclotómico."""


class EmptySolution(MonodromyError):
    """Sólo H = 0 satisface el sistema de formas hermíticas invariantes."""


class DegenerateForm(MonodromyError):
    """La forma hermítica tiene radical no trivial."""

    def __init__(self, message: str, rank: int, dim: int):
        super().__init__(message)
        self.rank = rank
        self.dim = dim


class ZeroCharacter(MonodromyError):
    """Algún μ_j del carácter es 0 en Z/rZ."""


class BadParameters(MonodromyError, ValueError):
    """Parámetros (n, m, r, i) fuera de rango."""


class RadicalDimensionUnexpected(MonodromyError):
    """El cociente por el radical no deja dimensión m − 2."""


class BudgetExceeded(MonodromyError):
    """La clausura no se estabilizó dentro del presupuesto de palabras."""

    def __init__(self, message: str, words_used: int):
        super().__init__(message)
        self.words_used = words_used


class Inconclusive(MonodromyError):
    """La búsqueda de testigos terminó sin resultado."""


class InconsistencyError(MonodromyError):
    """Un invariante entre módulos no se cumple."""

    def __init__(self, invariant: str, detail: str):
        super().__init__(f"invariante violado [{invariant}]: {detail}")
        self.invariant = invariant
        self.detail = detail


class UsageError(MonodromyError):
    """Invocación incorrecta de la CLI."""

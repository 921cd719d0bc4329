"""
Aritmética exacta en cuerpos ciclotómicos Q(ζ_N).

Un elemento se guarda en la base de potencias {ζ_N^k : 0 ≤ k < φ(N)} reducido
módulo el N-ésimo polinomio ciclotómico, con coeficientes `Fraction`. La forma
es canónica: dos elementos iguales al mismo conductor tienen los mismos
coeficientes. Las operaciones entre conductores distintos elevan ambos
operandos al mínimo común múltiplo.

La aproximación certificada evalúa el polinomio representante con la
aritmética de intervalos de mpmath (redondeo hacia fuera en cada paso); de
ahí se deciden signos de números reales sin usar coma flotante.
"""

from __future__ import annotations

import logging
import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Dict, Iterator, Optional, Tuple, Union

import sympy
from mpmath import iv
from mpmath.libmp import to_rational
from sympy import QQ, Poly, Symbol

from app.core.errors import DivByZero

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

_X = Symbol("x")


# ---------------------------------------------------------------------------
# Tablas por conductor
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def totient(n: int) -> int:
    """φ(n) como entero de Python."""
    return int(sympy.totient(n))


@lru_cache(maxsize=None)
def cyclotomic_coefficients(n: int) -> Tuple[int, ...]:
    """Coeficientes enteros de Φ_n, del término constante al líder (mónico)."""
    poly = sympy.cyclotomic_poly(n, _X, polys=True)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def _reduce(poly: list, n: int) -> Tuple[Fraction, ...]:
    """Reducir un polinomio (lista baja→alta, se modifica) módulo Φ_n."""
    phi = cyclotomic_coefficients(n)
    deg = len(phi) - 1
    for k in range(len(poly) - 1, deg - 1, -1):
        c = poly[k]
        if c:
            base = k - deg
            for j in range(deg):
                if phi[j]:
                    poly[base + j] -= c * phi[j]
            poly[k] = 0
    if len(poly) < deg:
        poly.extend([Fraction(0)] * (deg - len(poly)))
    return tuple(Fraction(c) for c in poly[:deg])


@lru_cache(maxsize=None)
def _power_table(n: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """ζ_n^e reducido, para 0 ≤ e < n."""
    deg = totient(n)
    rows = []
    for e in range(n):
        if e < deg:
            row = [Fraction(0)] * deg
            row[e] = Fraction(1)
            rows.append(tuple(row))
        else:
            mono = [Fraction(0)] * (e + 1)
            mono[e] = Fraction(1)
            rows.append(_reduce(mono, n))
    return tuple(rows)


@lru_cache(maxsize=None)
def _descent_table(n: int, d: int) -> Tuple[Tuple[Tuple[Fraction, ...], ...], Tuple[Tuple[Fraction, ...], ...]]:
    """Imágenes de la base de Q(ζ_d) en Q(ζ_n) y una inversa por la izquierda."""
    step = n // d
    table = _power_table(n)
    lifts = sympy.Matrix([[_to_sympy(v) for v in table[(k * step) % n]] for k in range(totient(d))])
    left = (lifts * lifts.T).inv() * lifts

    def as_fractions(m: sympy.Matrix) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(
            tuple(Fraction(int(v.p), int(v.q)) for v in m.row(i)) for i in range(m.rows)
        )

    return as_fractions(lifts), as_fractions(left)


# ---------------------------------------------------------------------------
# Elementos
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CycloNum:
    """Elemento de Q(ζ_N) en forma canónica."""

    conductor: int
    coeffs: Tuple[Fraction, ...]

    # -- construcción -----------------------------------------------------

    @classmethod
    def rational(cls, value: Rational, conductor: int = 1) -> "CycloNum":
        coeffs = [Fraction(0)] * totient(conductor)
        coeffs[0] = Fraction(value)
        return cls(conductor, tuple(coeffs))

    @classmethod
    def zero(cls, conductor: int = 1) -> "CycloNum":
        return cls.rational(0, conductor)

    @classmethod
    def one(cls, conductor: int = 1) -> "CycloNum":
        return cls.rational(1, conductor)

    @classmethod
    def coerce(cls, value: Any, conductor: int = 1) -> "CycloNum":
        if isinstance(value, CycloNum):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.rational(value, conductor)
        raise TypeError(f"No se puede convertir {type(value).__name__} a CycloNum")

    # -- consultas --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("El elemento no es racional")
        return self.coeffs[0]

    def size(self) -> int:
        """Tamaño serializado aproximado; sirve para elegir pivotes."""
        return sum(c.numerator.bit_length() + c.denominator.bit_length() for c in self.coeffs if c)

    # -- cambio de conductor ----------------------------------------------

    def lift(self, conductor: int) -> "CycloNum":
        """Sumergir en Q(ζ_M) con N | M."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"{self.conductor} no divide a {conductor}")
        if self.is_rational():
            return CycloNum.rational(self.coeffs[0], conductor)
        step = conductor // self.conductor
        table = _power_table(conductor)
        out = [Fraction(0)] * totient(conductor)
        for k, c in enumerate(self.coeffs):
            if c:
                row = table[(k * step) % conductor]
                for j, v in enumerate(row):
                    if v:
                        out[j] += c * v
        return CycloNum(conductor, tuple(out))

    def descend(self, conductor: int) -> Optional["CycloNum"]:
        """Representante en Q(ζ_d) con d | N, o None si `self` no pertenece a ese subcuerpo."""
        if conductor == self.conductor:
            return self
        if self.conductor % conductor:
            raise ValueError(f"{conductor} no divide a {self.conductor}")
        if self.is_rational():
            return CycloNum.rational(self.coeffs[0], conductor)
        lifts, left = _descent_table(self.conductor, conductor)
        coeffs = tuple(sum((w * c for w, c in zip(row, self.coeffs) if c), Fraction(0)) for row in left)
        back = [Fraction(0)] * len(self.coeffs)
        for b, row in zip(coeffs, lifts):
            if b:
                for j, v in enumerate(row):
                    back[j] += b * v
        if tuple(back) != self.coeffs:
            return None
        return CycloNum(conductor, coeffs)

    @cached_property
    def minimal_form(self) -> "CycloNum":
        """Representante al menor conductor que contiene al elemento."""
        if self.is_rational():
            return CycloNum.rational(self.coeffs[0])
        for d in sympy.divisors(self.conductor)[1:-1]:
            smaller = self.descend(int(d))
            if smaller is not None:
                return smaller
        return self

    def _unify(self, other: Any) -> Tuple["CycloNum", "CycloNum"]:
        other = CycloNum.coerce(other, self.conductor)
        if other.conductor == self.conductor:
            return self, other
        n = math.lcm(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    # -- aritmética -------------------------------------------------------

    def __add__(self, other: Any) -> "CycloNum":
        a, b = self._unify(other)
        return CycloNum(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __sub__(self, other: Any) -> "CycloNum":
        a, b = self._unify(other)
        return CycloNum(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other: Any) -> "CycloNum":
        return CycloNum.coerce(other, self.conductor) - self

    def __neg__(self) -> "CycloNum":
        return CycloNum(self.conductor, tuple(-c for c in self.coeffs))

    def __mul__(self, other: Any) -> "CycloNum":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        a, b = self._unify(other)
        if b.is_rational():
            return a.scale(b.coeffs[0])
        if a.is_rational():
            return b.scale(a.coeffs[0])
        deg = len(a.coeffs)
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycloNum(a.conductor, _reduce(prod, a.conductor))

    __rmul__ = __mul__

    def scale(self, value: Rational) -> "CycloNum":
        value = Fraction(value)
        if value == 1:
            return self
        return CycloNum(self.conductor, tuple(c * value for c in self.coeffs))

    def inverse(self) -> "CycloNum":
        """Inverso mediante el inverso modular del polinomio representante."""
        if self.is_zero():
            raise DivByZero("División por cero en un cuerpo ciclotómico")
        if self.is_rational():
            return CycloNum.rational(1 / self.coeffs[0], self.conductor)
        phi = Poly(list(reversed(cyclotomic_coefficients(self.conductor))), _X, domain=QQ)
        rep = Poly([_to_sympy(c) for c in reversed(self.coeffs)], _X, domain=QQ)
        inv = rep.invert(phi)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        coeffs.extend([Fraction(0)] * (len(self.coeffs) - len(coeffs)))
        return CycloNum(self.conductor, tuple(coeffs))

    def __truediv__(self, other: Any) -> "CycloNum":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivByZero("División por cero en un cuerpo ciclotómico")
            return self.scale(Fraction(1) / Fraction(other))
        return self * CycloNum.coerce(other, self.conductor).inverse()

    def __rtruediv__(self, other: Any) -> "CycloNum":
        return CycloNum.coerce(other, self.conductor) * self.inverse()

    def __pow__(self, exponent: int) -> "CycloNum":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        acc = CycloNum.one(self.conductor)
        base = self
        while exponent:
            if exponent & 1:
                acc = acc * base
            base = base * base
            exponent >>= 1
        return acc

    # -- automorfismos ----------------------------------------------------

    def galois(self, a: int) -> "CycloNum":
        """Aplicar σ_a: ζ_N ↦ ζ_N^a con gcd(a, N) = 1."""
        n = self.conductor
        if math.gcd(a, n) != 1:
            raise ValueError(f"σ_{a} no es un automorfismo de Q(ζ_{n})")
        if self.is_rational():
            return self
        table = _power_table(n)
        out = [Fraction(0)] * len(self.coeffs)
        for k, c in enumerate(self.coeffs):
            if c:
                for j, v in enumerate(table[(a * k) % n]):
                    if v:
                        out[j] += c * v
        return CycloNum(n, tuple(out))

    def conjugate(self) -> "CycloNum":
        return self.galois(-1)

    # -- igualdad ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (CycloNum, int, Fraction)):
            return NotImplemented
        a, b = self._unify(other)
        return a.coeffs == b.coeffs

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        # Elementos iguales comparten el menor conductor que los contiene.
        least = self.minimal_form
        return hash((least.conductor, least.coeffs))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"{c}*z^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"CycloNum(N={self.conductor}: {body})"

    # -- serialización ----------------------------------------------------

    def to_json(self) -> Dict[str, Any]:
        return {
            "conductor": self.conductor,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "CycloNum":
        conductor = int(data["conductor"])
        coeffs = tuple(Fraction(s) for s in data["coeffs"])
        if len(coeffs) != totient(conductor):
            raise ValueError(
                f"Se esperaban {totient(conductor)} coeficientes para N={conductor}, "
                f"hay {len(coeffs)}"
            )
        return cls(conductor, coeffs)

    # -- aproximación -----------------------------------------------------

    def approximate(self, precision_bits: int) -> "CertifiedApprox":
        return approximate(self, precision_bits)


def _to_sympy(c: Fraction):
    return sympy.Rational(c.numerator, c.denominator)


# ---------------------------------------------------------------------------
# Operaciones de la API
# ---------------------------------------------------------------------------

def field_arithmetic(a: CycloNum, b: CycloNum, op: str) -> CycloNum:
    """Aplicar `op` ∈ {add, sub, mul, div} tras unificar conductores."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"Operación desconocida: {op}")


def root_of_unity(n: int, k: int = 1) -> CycloNum:
    """ζ_n^k en forma canónica."""
    if n < 1:
        raise ValueError("El conductor debe ser positivo")
    return CycloNum(n, _power_table(n)[k % n])


def conjugate(a: CycloNum) -> CycloNum:
    return a.conjugate()


def sqrt_minus_one(conductor: int = 4) -> CycloNum:
    """√−1 representado como ζ_4 dentro de Q(ζ_N), 4 | N."""
    return root_of_unity(4, 1).lift(math.lcm(4, conductor))


def root_of_unity_order(a: CycloNum) -> Optional[int]:
    """Orden multiplicativo de `a` si es raíz de la unidad, si no None."""
    if a.is_zero():
        return None
    # Las raíces de la unidad de Q(ζ_N) son ±ζ_N^k.
    bound = math.lcm(2, a.conductor)
    if a ** bound != 1:
        return None
    for d in sympy.divisors(bound):
        if a ** int(d) == 1:
            return int(d)
    return bound


# ---------------------------------------------------------------------------
# Aproximación certificada
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertifiedApprox:
    """El valor complejo exacto está a distancia ≤ radius de (re_mid, im_mid)."""

    re_mid: Fraction
    im_mid: Fraction
    radius: Fraction

    def conjugate(self) -> "CertifiedApprox":
        return CertifiedApprox(self.re_mid, -self.im_mid, self.radius)

    def contains(self, re: Fraction, im: Fraction) -> bool:
        # Comparación en norma L1, que acota la euclídea.
        return abs(re - self.re_mid) + abs(im - self.im_mid) <= 2 * self.radius


@contextmanager
def _interval_precision(bits: int) -> Iterator[None]:
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def _interval_bounds(x: Any) -> Tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return Fraction(*to_rational(lo)), Fraction(*to_rational(hi))


@lru_cache(maxsize=None)
def _unit_circle_table(n: int, prec: int) -> Tuple[Tuple[Any, Any], ...]:
    """Intervalos de cos y sen de 2πk/n (0 ≤ k < φ(n)) a `prec` bits."""
    with _interval_precision(prec):
        angle = 2 * iv.pi / n
        return tuple((iv.cos(angle * k), iv.sin(angle * k)) for k in range(totient(n)))


def approximate(a: CycloNum, precision_bits: int) -> CertifiedApprox:
    """Encierro racional del valor de `a` bajo ζ_N ↦ exp(2π√−1/N)."""
    if precision_bits <= 0:
        raise ValueError("precision_bits debe ser positivo")
    if a.is_zero():
        return CertifiedApprox(Fraction(0), Fraction(0), Fraction(0))
    target = Fraction(1, 1 << precision_bits)
    prec = precision_bits + 32
    while True:
        with _interval_precision(prec):
            re, im = iv.mpf(0), iv.mpf(0)
            for c, (cos_k, sin_k) in zip(a.coeffs, _unit_circle_table(a.conductor, prec)):
                if c:
                    coeff = iv.mpf(c.numerator) / c.denominator
                    re = re + coeff * cos_k
                    im = im + coeff * sin_k
            re_lo, re_hi = _interval_bounds(re)
            im_lo, im_hi = _interval_bounds(im)
        # La caja [re_lo, re_hi] × [im_lo, im_hi] contiene el valor exacto.
        radius = (re_hi - re_lo) / 2 + (im_hi - im_lo) / 2
        if radius <= target:
            return CertifiedApprox((re_lo + re_hi) / 2, (im_lo + im_hi) / 2, radius)
        logger.debug("Encierro de radio %s a %d bits; se amplía la precisión", float(radius), prec)
        prec += 32


def real_sign(a: CycloNum, start_bits: int = 64) -> int:
    """
    Signo exacto de un elemento real (a = conj(a)).

    La respuesta no depende de `start_bits`: sólo fija desde qué precisión
    empieza el refinamiento, que se duplica hasta que el encierro excluye el 0.
    """
    if a.is_zero():
        return 0
    if a.is_rational():
        return 1 if a.coeffs[0] > 0 else -1
    if a != a.conjugate():
        raise ValueError("real_sign requiere un elemento real")
    bits = start_bits
    while True:
        approx = approximate(a, bits)
        if abs(approx.re_mid) > approx.radius:
            return 1 if approx.re_mid > 0 else -1
        bits *= 2

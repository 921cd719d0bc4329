"""
Retículo de Milnor de la singularidad de Fermat z₁^r + … + z_{n+1}^r.

El modelo es diagonal por caracteres: un vector de base por cada tupla
(μ₁, …, μ_{n+1}) con todas las entradas no nulas. Las fórmulas del anillo de
grupo Q[(Z/r)^{n+1}] sólo se usan como oráculo de verificación.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from app.algebra.cyclotomic import CycloNum, root_of_unity, sqrt_minus_one
from app.core.errors import BadParameters, ZeroCharacter

logger = logging.getLogger(__name__)

GroupRingElement = Dict[Tuple[int, ...], int]


@dataclass(frozen=True)
class CharTuple:
    r: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.r < 2:
            raise BadParameters(f"r debe ser ≥ 2, recibido {self.r}")
        object.__setattr__(self, "entries", tuple(e % self.r for e in self.entries))

    @property
    def n(self) -> int:
        return len(self.entries) - 1

    def total(self) -> int:
        return sum(self.entries) % self.r

    def is_supported(self) -> bool:
        return all(self.entries)

    def negate(self) -> "CharTuple":
        return CharTuple(self.r, tuple(-e for e in self.entries))

    def require_support(self):
        if not self.is_supported():
            raise ZeroCharacter(f"Carácter con entrada nula: {self.entries} (mod {self.r})")

    def to_json(self) -> Dict:
        return {"r": self.r, "entries": list(self.entries)}


@dataclass(frozen=True)
class PhamLattice:
    n: int
    r: int
    support: Tuple[CharTuple, ...] = field(default_factory=tuple)

    @property
    def rank(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class PLDatum:
    """Constante c, autointersección H(e, e) y valor propio del ciclo evanescente."""

    c: CycloNum
    self_pairing: CycloNum
    eigenvalue: CycloNum

    def identity_holds(self) -> bool:
        return self.self_pairing * self.c == self.eigenvalue - 1

    @property
    def is_transvection(self) -> bool:
        return self.self_pairing.is_zero()

    def to_json(self) -> Dict:
        return {
            "c": self.c.to_json(),
            "self_pairing": self.self_pairing.to_json(),
            "eigenvalue": self.eigenvalue.to_json(),
        }


def _sign_exponent(n: int) -> int:
    return -1 if (n * (n + 1) // 2) % 2 else 1


def _field(r: int) -> int:
    return math.lcm(r, 4)


def character_support(n: int, r: int) -> PhamLattice:
    """Caracteres con espacio propio no nulo: todas las entradas ≠ 0."""
    if n < 0 or r < 2:
        raise BadParameters(f"Se requiere n ≥ 0 y r ≥ 2, recibido n={n}, r={r}")
    support = tuple(
        CharTuple(r, entries) for entries in itertools.product(range(1, r), repeat=n + 1)
    )
    return PhamLattice(n=n, r=r, support=support)


def _vanishing_product(mu: CharTuple) -> CycloNum:
    """∏ (1 − ζ_r^{−μ_j})."""
    acc = CycloNum.one(mu.r)
    for e in mu.entries:
        acc = acc * (1 - root_of_unity(mu.r, -e))
    return acc


def intersection_number(mu: CharTuple) -> CycloNum:
    """Q(ε_μ, e_{−μ}) = r^{−(n+1)} ∏ (1 − ζ_r^{−μ_j})."""
    mu.require_support()
    return _vanishing_product(mu).scale(Fraction(1, mu.r ** (mu.n + 1)))


def pl_coefficient(mu: CharTuple) -> PLDatum:
    """
    Datos de Picard–Lefschetz del carácter μ.

    Args:
        mu: carácter con todas las entradas no nulas

    Returns:
        PLDatum con c_μ, H(e_μ, e_μ) y el valor propio ζ_r^{Σμ}
    """
    mu.require_support()
    n, r = mu.n, mu.r
    i_unit = sqrt_minus_one(_field(r))
    denominator = (i_unit ** n) * _vanishing_product(mu)
    c = CycloNum.rational(-_sign_exponent(n) * r ** (n + 1), _field(r)) / denominator
    eigenvalue = root_of_unity(r, mu.total())
    return PLDatum(c=c, self_pairing=(eigenvalue - 1) / c, eigenvalue=eigenvalue)


def monodromy_eigenvalues(n: int, r: int) -> Dict[CharTuple, CycloNum]:
    lattice = character_support(n, r)
    return {mu: root_of_unity(r, mu.total()) for mu in lattice.support}


def transvection_eigenvalue(mu: CharTuple) -> CycloNum:
    """Valor propio de e_μ bajo Φ(e) = e + c·H(e, e)·e."""
    datum = pl_coefficient(mu)
    return 1 + datum.c * datum.self_pairing


def check_params(n: int, m: int, r: int, i: int):
    if r < 2 or m % r:
        raise BadParameters(f"r debe ser ≥ 2 y dividir a m (m={m}, r={r})")
    if not 1 <= i <= r - 1:
        raise BadParameters(f"Se requiere 1 ≤ i ≤ r − 1 (i={i}, r={r})")
    if n < 0:
        raise BadParameters(f"n debe ser no negativo (n={n})")


def cyclic_pl_data(n: int, m: int, r: int, i: int) -> PLDatum:
    """
    Constantes del ciclo evanescente e_(i) del recubrimiento cíclico.

    c = −(−1)^{n(n+1)/2} r^{n+m} / (√−1^n (1 − ζ_r^{−i})^{n+1}) y
    H(e, e) = (ζ_r^{(n+1)i} − 1)·c⁻¹.
    """
    check_params(n, m, r, i)
    i_unit = sqrt_minus_one(_field(r))
    denominator = (i_unit ** n) * (1 - root_of_unity(r, -i)) ** (n + 1)
    c = CycloNum.rational(-_sign_exponent(n) * r ** (n + m), _field(r)) / denominator
    eigenvalue = root_of_unity(r, (n + 1) * i)
    datum = PLDatum(c=c, self_pairing=(eigenvalue - 1) / c, eigenvalue=eigenvalue)
    logger.debug(f"cyclic_pl_data({n}, {m}, {r}, {i}): transvección={datum.is_transvection}")
    return datum


def kummer_support(n: int, m: int, r: int) -> List[Tuple[int, ...]]:
    """Tuplas (a_1, …, a_{m−1}) con a_1..a_{n+1} ≠ 0 y cola libre en (Z/r)^{m−n−2}."""
    if m < n + 3:
        raise BadParameters(f"Se requiere m ≥ n + 3 (n={n}, m={m})")
    heads = itertools.product(range(1, r), repeat=n + 1)
    tails = list(itertools.product(range(r), repeat=m - n - 2))
    return [head + tail for head in heads for tail in tails]


def n1_projection_support(n: int, m: int, r: int, i: int) -> int:
    """
    Número de clases que sobreviven en el autoespacio i tras cocientar por N₁.

    Sólo sobreviven las tuplas con a_1 = … = a_{n+1} = i; la acción de N₁
    mueve la cola a (0, …, 0), así que todas se identifican con e_(i).
    """
    if i % r == 0:
        return 0
    check_params(n, m, r, i)
    representatives = set()
    for a in kummer_support(n, m, r):
        head = a[:n + 1]
        if all(x == i for x in head):
            representatives.add(head + (0,) * (m - n - 2))
    return len(representatives)


# ---------------------------------------------------------------------------
# Oráculos del anillo de grupo
# ---------------------------------------------------------------------------

def _group_ring_mul(a: GroupRingElement, b: GroupRingElement, r: int) -> GroupRingElement:
    out: GroupRingElement = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            key = tuple((x + y) % r for x, y in zip(ka, kb))
            out[key] = out.get(key, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def _one_minus(index: Tuple[int, ...], r: int) -> GroupRingElement:
    zero = tuple(0 for _ in index)
    return {zero: 1, tuple(x % r for x in index): -1}


def _evaluate_character(element: GroupRingElement, mu: CharTuple) -> CycloNum:
    """Evaluar ω_j ↦ ζ_r^{−μ_j}."""
    acc = CycloNum.zero(mu.r)
    for key, coeff in element.items():
        exponent = -sum(a * m for a, m in zip(key, mu.entries))
        acc = acc + root_of_unity(mu.r, exponent) * coeff
    return acc


def group_ring_intersection_number(mu: CharTuple) -> CycloNum:
    """(ε | e) = ∏(1 − ω_j) en el anillo de grupo, proyectado sobre μ."""
    mu.require_support()
    r, size = mu.r, mu.n + 1
    element: GroupRingElement = {tuple(0 for _ in range(size)): 1}
    for j in range(size):
        unit = tuple(1 if k == j else 0 for k in range(size))
        element = _group_ring_mul(element, _one_minus(unit, r), r)
    return _evaluate_character(element, mu).scale(Fraction(1, r ** size))


def self_intersection_oracle(mu: CharTuple) -> CycloNum:
    """
    H(e_μ, e_μ) a partir de (e|e) = ±∏(1 − ω_j)·(1 − ω_1⁻¹⋯ω_{n+1}⁻¹).

    Debe coincidir con `pl_coefficient(mu).self_pairing`.
    """
    mu.require_support()
    r, size = mu.r, mu.n + 1
    element: GroupRingElement = {tuple(0 for _ in range(size)): _sign_exponent(mu.n)}
    for j in range(size):
        unit = tuple(1 if k == j else 0 for k in range(size))
        element = _group_ring_mul(element, _one_minus(unit, r), r)
    element = _group_ring_mul(element, _one_minus(tuple(-1 for _ in range(size)), r), r)
    projected = _evaluate_character(element, mu).scale(Fraction(1, r ** size))
    return sqrt_minus_one(_field(r)) ** mu.n * projected

"""
Matrices de monodromía del caso de curvas (n = 1) y sus potencias exteriores.

La acción de los generadores de trenzas sobre H¹(C)_(i) se obtiene de la
representación de Burau especializada en t = ζ_r^i: primero se restringe al
hiperplano invariante y luego se cociente por el radical de la forma.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from app.algebra.cyclotomic import CycloNum, root_of_unity
from app.algebra.exactla import (
    FieldMatrix,
    FieldVector,
    HermitianForm,
    Subspace,
    inverse,
    invariant_hermitian_forms,
    quotient,
    quotient_columns,
    radical,
    rank,
    restrict,
    signature_details,
    wedge_power,
)
from app.core.errors import BadParameters, InconsistencyError, RadicalDimensionUnexpected
from app.monodromy.invariants import binom, curve_hodge_numbers
from app.monodromy.pham import PLDatum, check_params, cyclic_pl_data

logger = logging.getLogger(__name__)

# Letra de una palabra: (índice del generador, ±1)
Letter = Tuple[int, int]
Word = Tuple[Letter, ...]

CONVENTION_POSITIVE = "t=zeta_r^i"
CONVENTION_NEGATIVE = "t=zeta_r^-i"


def word_to_json(word: Sequence[Letter]) -> List[List[int]]:
    return [[j, e] for j, e in word]


def word_from_json(data: Sequence[Sequence[int]]) -> Word:
    return tuple((int(j), int(e)) for j, e in data)


def invert_word(word: Sequence[Letter]) -> Word:
    return tuple((j, -e) for j, e in reversed(word))


@dataclass(frozen=True)
class MonodromyRep:
    """Imágenes de los generadores de trenzas junto con la forma invariante."""

    dim: int
    generators: Tuple[FieldMatrix, ...]
    form: HermitianForm
    params: Optional[Tuple[int, int, int]] = None
    wedge: int = 1
    convention: str = CONVENTION_POSITIVE
    scale_free: bool = False
    base: Optional["MonodromyRep"] = None

    @cached_property
    def inverses(self) -> Tuple[FieldMatrix, ...]:
        if self.base is not None:
            return tuple(wedge_power(g, self.wedge) for g in self.base.inverses)
        return tuple(inverse(g) for g in self.generators)

    @property
    def conductor(self) -> int:
        return math.lcm(*(g.conductor for g in self.generators), self.form.gram.conductor)

    def letters(self) -> List[Letter]:
        """Alfabeto generadores/inversos en orden fijo."""
        out = []
        for j in range(len(self.generators)):
            out.extend([(j, 1), (j, -1)])
        return out

    def letter(self, letter: Letter) -> FieldMatrix:
        j, e = letter
        return self.generators[j] if e > 0 else self.inverses[j]

    def evaluate(self, word: Sequence[Letter]) -> FieldMatrix:
        acc = FieldMatrix.identity(self.dim, self.conductor)
        for letter in word:
            acc = acc @ self.letter(letter)
        return acc

    def act(self, word: Sequence[Letter], v: FieldVector) -> FieldVector:
        for letter in reversed(word):
            v = self.letter(letter).apply(v)
        return v

    def braid_relations_hold(self) -> bool:
        gens = self.generators
        for a in range(len(gens)):
            for b in range(a + 1, len(gens)):
                if b == a + 1:
                    if gens[a] @ gens[b] @ gens[a] != gens[b] @ gens[a] @ gens[b]:
                        return False
                elif gens[a] @ gens[b] != gens[b] @ gens[a]:
                    return False
        return True

    def form_is_invariant(self) -> bool:
        return all(self.form.is_invariant_under(g) for g in self.generators)

    def to_json(self) -> Dict:
        return {
            "dim": self.dim,
            "wedge": self.wedge,
            "params": list(self.params) if self.params else None,
            "convention": self.convention,
            "scale_free": self.scale_free,
            "generators": [g.to_json() for g in self.generators],
            "gram": self.form.gram.to_json(),
        }


@dataclass(frozen=True)
class MeridianReflection:
    matrix: FieldMatrix
    cycle: FieldVector
    datum: PLDatum
    word: Word = field(default_factory=tuple)

    def verify(self, form: HermitianForm) -> bool:
        """Comprobar M·v = v + c·H(v, e)·e sobre la base canónica."""
        d = self.matrix.rows
        for k in range(d):
            v = FieldVector.unit(d, k, self.matrix.conductor)
            expected = v + self.cycle.scale(self.datum.c * form.pair(v, self.cycle))
            if self.matrix.apply(v) != expected:
                return False
        return True

    def to_json(self) -> Dict:
        return {
            "word": word_to_json(self.word),
            "cycle": self.cycle.to_json(),
            "datum": self.datum.to_json(),
        }


def burau_matrices(m: int, t: CycloNum) -> List[FieldMatrix]:
    """Generadores de Burau no reducidos m×m: bloque [[1−t, t], [1, 0]] en (j, j+1)."""
    if m < 3:
        raise BadParameters(f"Se requiere m ≥ 3 (m={m})")
    n = t.conductor
    zero, one = CycloNum.zero(n), CycloNum.one(n)
    out = []
    for j in range(m - 1):
        rows = [[one if a == b else zero for b in range(m)] for a in range(m)]
        rows[j][j], rows[j][j + 1] = 1 - t, t
        rows[j + 1][j], rows[j + 1][j + 1] = one, zero
        out.append(FieldMatrix.from_rows(rows, n))
    return out


def _burau_hyperplane(m: int, t: CycloNum) -> Subspace:
    """ker(1, t, …, t^{m−1}), generado por t·e_k − e_{k+1}."""
    n = t.conductor
    vectors = []
    for k in range(m - 1):
        values = [CycloNum.zero(n)] * m
        values[k], values[k + 1] = t, CycloNum.rational(-1, n)
        vectors.append(FieldVector.of(values, n))
    return Subspace.span(vectors, m, n)


def _submatrix(m: FieldMatrix, keep: Sequence[int]) -> FieldMatrix:
    return FieldMatrix.from_rows([[m[a, b] for b in keep] for a in keep], m.conductor)


def _meridian_cycle(g: FieldMatrix) -> Tuple[FieldMatrix, FieldVector, int]:
    """Cuadrado del generador, primera columna no nula de g² − I y su índice."""
    square = g @ g
    diff = square - FieldMatrix.identity(g.rows, g.conductor)
    for k in range(diff.cols):
        col = diff.column(k)
        if not col.is_zero():
            return square, col, k
    raise InconsistencyError("meridian-rank", "g² − I es nula")


def _quotient_rep(restricted: List[FieldMatrix], target_dim: int):
    forms = invariant_hermitian_forms(restricted)
    for form in forms:
        rad = radical(form)
        if restricted[0].rows - rad.dim != target_dim:
            continue
        keep = quotient_columns(rad)
        gram = _submatrix(form.gram, keep)
        if rank(gram) != target_dim:
            continue
        return [quotient(g, rad) for g in restricted], HermitianForm(gram)
    dims = [restricted[0].rows - radical(f).dim for f in forms]
    raise RadicalDimensionUnexpected(
        f"Ningún cociente por el radical tiene dimensión {target_dim} (obtenido {dims})"
    )


def _build(m: int, r: int, i: int, exponent: int, convention: str) -> MonodromyRep:
    n = math.lcm(r, 4)
    t = root_of_unity(r, exponent).lift(n)
    burau = burau_matrices(m, t)
    hyperplane = _burau_hyperplane(m, t)
    restricted = [restrict(g, hyperplane) for g in burau]
    generators, form = _quotient_rep(restricted, m - 2)
    logger.debug(f"Burau ({m}, {r}, {i}) {convention}: cociente de dimensión {m - 2}")

    datum = cyclic_pl_data(1, m, r, i)
    scale_free = datum.is_transvection
    if not scale_free:
        _, cycle, _ = _meridian_cycle(generators[0])
        current = form.pair(cycle, cycle)
        factor = datum.self_pairing / current
        if factor != factor.conjugate():
            raise InconsistencyError("form-normalization", f"factor de escala no real: {factor!r}")
        form = form.scale(factor)
    return MonodromyRep(
        dim=m - 2,
        generators=tuple(generators),
        form=form,
        params=(m, r, i),
        convention=convention,
        scale_free=scale_free,
    )


def build_curve_rep(m: int, r: int, i: int) -> MonodromyRep:
    """
    Representación de monodromía sobre H¹(C)_(i) para la curva cíclica.

    Args:
        m: número de puntos de ramificación (r | m, m ≥ 3)
        r: grado del recubrimiento
        i: índice del autoespacio, 1 ≤ i ≤ r − 1

    Returns:
        MonodromyRep de dimensión m − 2 con forma no degenerada calibrada
    """
    check_params(1, m, r, i)
    if m < 3:
        raise BadParameters(f"Se requiere m ≥ 3 (m={m})")
    h10, h01 = curve_hodge_numbers(m, r, i)
    expected = (max(h10, h01), min(h10, h01))
    attempts = ((i, CONVENTION_POSITIVE), (-i, CONVENTION_NEGATIVE))
    for exponent, convention in attempts:
        rep = _build(m, r, i, exponent, convention)
        found = signature_details(rep.form).unordered
        if found == expected:
            logger.info(f"Representación de curva ({m}, {r}, {i}) con convención {convention}")
            if not rep.scale_free and convention == CONVENTION_POSITIVE:
                pl = cyclic_pl_data(1, m, r, i)
                if meridian_matrix(rep, 0).datum.c != pl.c:
                    raise InconsistencyError("meridian-pl-constant", f"c del meridiano ≠ c de ({m}, {r}, {i})")
            return rep
        logger.warning(f"Signatura {found} ≠ {expected} con {convention}; se prueba la convención opuesta")
    raise InconsistencyError("curve-signature", f"ninguna convención reproduce {expected} en ({m}, {r}, {i})")


def meridian_matrix(rep: MonodromyRep, j: int) -> MeridianReflection:
    """Meridiano g_j² como reflexión de Picard–Lefschetz v ↦ v + c·H(v, e)·e."""
    if not 0 <= j < len(rep.generators):
        raise BadParameters(f"Índice de generador fuera de rango: {j}")
    square, cycle, k = _meridian_cycle(rep.generators[j])
    diff = square - FieldMatrix.identity(rep.dim, square.conductor)
    if rank(diff) != 1:
        raise InconsistencyError("meridian-rank", f"rank(g_{j}² − I) ≠ 1")
    eigenvalue = 1 + diff.trace()
    # (g² − I)e_k = cycle, de modo que c·H(e_k, cycle) = 1.
    unit = FieldVector.unit(rep.dim, k, square.conductor)
    c = 1 / rep.form.pair(unit, cycle)
    datum = PLDatum(c=c, self_pairing=rep.form.pair(cycle, cycle), eigenvalue=eigenvalue)
    return MeridianReflection(matrix=square, cycle=cycle, datum=datum, word=((j, 1), (j, 1)))


def meridian_family(rep: MonodromyRep, j: int, word: Sequence[Letter]) -> MeridianReflection:
    """Conjugado w·g_j²·w⁻¹; el ciclo se transporta como w·e_j."""
    base = meridian_matrix(rep, j)
    if not word:
        return base
    w = rep.evaluate(word)
    w_inv = rep.evaluate(invert_word(word))
    return MeridianReflection(
        matrix=w @ base.matrix @ w_inv,
        cycle=w.apply(base.cycle),
        datum=base.datum,
        word=tuple(word) + base.word + invert_word(word),
    )


def wedge_rep(rep: MonodromyRep, n: int) -> MonodromyRep:
    if n == 1:
        return rep
    if not 1 <= n <= rep.dim - 1:
        raise BadParameters(f"Se requiere 1 ≤ n ≤ {rep.dim - 1} (n={n})")
    return MonodromyRep(
        dim=binom(rep.dim, n),
        generators=tuple(wedge_power(g, n) for g in rep.generators),
        form=HermitianForm(wedge_power(rep.form.gram, n)),
        params=rep.params,
        wedge=n,
        convention=rep.convention,
        scale_free=rep.scale_free,
        base=rep,
    )


def sp_isotypic_dims(d: int, n: int) -> List[int]:
    """Dimensiones de las partes primitivas de ∧ⁿ bajo el grupo simpléctico de un espacio de dimensión d."""
    if d % 2 or not 0 <= n <= d:
        raise BadParameters(f"Se requiere d par y 0 ≤ n ≤ d (d={d}, n={n})")
    n = min(n, d - n)
    dims = [binom(d, n - 2 * k) - binom(d, n - 2 * k - 2) for k in range(n // 2 + 1)]
    return [x for x in dims if x > 0]

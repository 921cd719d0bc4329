"""
Certificación mecánica de los criterios de densidad de Zariski.

Para cada (n, m, r, i) se comprueba que la órbita de los ciclos evanescentes
genera el espacio, que ningún subespacio invariante separa los ciclos, que la
monodromía es infinita y qué tipo de reflexión es cada meridiano.
"""

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy
from pydantic import BaseModel, Field
from sympy.utilities.iterables import partitions

from app.algebra.cyclotomic import CycloNum, root_of_unity_order, totient
from app.algebra.exactla import (
    Echelon,
    FieldMatrix,
    FieldVector,
    HermitianForm,
    Subspace,
    algebra_closure,
    annihilating_polynomial,
    is_squarefree,
    minimal_polynomial,
    poly_norm,
    rational_roots_are_torsion,
    rank,
    restrict,
    wedge_power,
    wedge_vectors,
)
from app.core.config import DEFAULT_WORD_BUDGET
from app.core.errors import BadParameters, BudgetExceeded, Inconclusive, InconsistencyError
from app.monodromy.coverrep import (
    MonodromyRep,
    Word,
    build_curve_rep,
    meridian_matrix,
    sp_isotypic_dims,
    word_from_json,
    word_to_json,
    wedge_rep,
)
from app.monodromy.invariants import Params, criterion, expected_group, proof_case
from app.monodromy.pham import cyclic_pl_data

logger = logging.getLogger(__name__)

STATUS_VERIFIED = "VERIFIED"
STATUS_CONDITIONAL = "CONDITIONAL"
STATUS_NOT_VERIFIED = "NOT-VERIFIED"
STATUS_HYPOTHESIS = "HYPOTHESIS_NOT_MET"


class DensityCertificate(BaseModel):
    """Veredicto estructurado con los testigos exactos de cada rama."""

    params: Dict[str, int]
    mode: str = Field(..., description="FULL (n = 1) o CONDITIONAL (n ≥ 2)")
    status: str
    verdict: str
    expected_group: str
    condition: Optional[str] = None
    proof_case: Optional[str] = None
    criterion: Optional[str] = None
    span_ok: Optional[bool] = None
    span_dim: Optional[int] = None
    span_witnesses: List[Dict[str, Any]] = Field(default_factory=list)
    invariant_subspace: Optional[Dict[str, Any]] = None
    infinite_ok: Optional[bool] = None
    infinite_witness: Optional[Dict[str, Any]] = None
    reflection_data: List[Dict[str, Any]] = Field(default_factory=list)
    wedge_dichotomy: Optional[str] = None
    isotypic_dims: Optional[List[int]] = None
    isotypic_components: Optional[List[int]] = None
    abstract_meridian: Optional[Dict[str, Any]] = None
    convention_flags: Dict[str, Any] = Field(default_factory=dict)
    reasons: List[str] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# Órbitas y subespacios invariantes
# ---------------------------------------------------------------------------

def orbit_span(
    rep: MonodromyRep, seeds: Sequence[FieldVector], word_budget: int = DEFAULT_WORD_BUDGET
) -> Tuple[Subspace, List[Dict[str, Any]]]:
    """
    Menor subespacio estable que contiene las semillas, por clausura en anchura.

    Args:
        rep: representación con generadores e inversos
        seeds: vectores no nulos
        word_budget: número máximo de aplicaciones de letras

    Returns:
        (subespacio, testigos) donde cada testigo es {"seed", "word"} y aporta
        un vector nuevo a la base
    """
    n = math.lcm(rep.conductor, *(s.conductor for s in seeds))
    ech = Echelon(rep.dim, n)
    queue = deque()
    for k, seed in enumerate(seeds):
        if seed.is_zero():
            raise BadParameters(f"La semilla {k} es nula")
        if ech.add(seed.lift(n).to_row()):
            queue.append((k, (), seed))
    witnesses: List[Dict[str, Any]] = []
    used = 0
    letters = rep.letters()
    while queue and ech.rank < rep.dim:
        k, word, vec = queue.popleft()
        for letter in letters:
            used += 1
            if used > word_budget:
                raise BudgetExceeded(
                    f"La órbita no se estabilizó en {word_budget} palabras (rango {ech.rank})", used
                )
            image = rep.letter(letter).apply(vec)
            new_word = (letter,) + word
            if ech.add(image.lift(n).to_row()):
                witnesses.append({"seed": k, "word": word_to_json(new_word)})
                queue.append((k, new_word, image))
                if ech.rank == rep.dim:
                    break
    logger.debug(f"orbit_span: dimensión {ech.rank}/{rep.dim} con {used} palabras")
    return Subspace.from_echelon(ech), witnesses


def invariant_subspace_from(
    rep: MonodromyRep, v: FieldVector, word_budget: int = DEFAULT_WORD_BUDGET
) -> Subspace:
    return orbit_span(rep, [v], word_budget)[0]


def _separating_subspace(
    rep: MonodromyRep,
    cycles: Sequence[FieldVector],
    word_budget: int,
    ambient_dim: Optional[int] = None,
) -> Optional[Subspace]:
    """
    Un U invariante propio con todos los ciclos en U ∪ U^⊥, si existe alguno
    generado por un ciclo. Con `ambient_dim` el espacio de referencia es la
    órbita de los ciclos y no todo V.
    """
    full = rep.dim if ambient_dim is None else ambient_dim
    for cycle in cycles:
        sub = invariant_subspace_from(rep, cycle, word_budget)
        if sub.dim >= full:
            continue
        perp = rep.form.orthogonal_complement(sub)
        if all(sub.contains(c) or perp.contains(c) for c in cycles):
            return sub
    return None


# ---------------------------------------------------------------------------
# Infinitud
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def torsion_orders(degree_bound: int) -> Tuple[int, ...]:
    """Órdenes N′ con φ(N′) ≤ degree_bound (φ(N′) ≥ √(N′/2) acota la búsqueda)."""
    limit = 2 * degree_bound * degree_bound + 2
    return tuple(k for k in range(1, limit + 1) if int(sympy.totient(k)) <= degree_bound)


@lru_cache(maxsize=None)
def torsion_exponent(d: int, conductor: int) -> int:
    """K(d): todo elemento de orden finito de GL_d(Q(ζ_N)) cumple g^K = 1."""
    return math.lcm(*torsion_orders(d * totient(conductor)))


def divides_torsion_polynomial(poly: Sequence[CycloNum]) -> bool:
    """¿Divide `poly` a X^K − 1? Equivale a ser libre de cuadrados con raíces de la unidad."""
    if len(poly) <= 1:
        return True
    if not is_squarefree(poly):
        return False
    return rational_roots_are_torsion(poly_norm(poly))


def _generic_vector(dim: int, conductor: int) -> FieldVector:
    return FieldVector.of(list(range(1, dim + 1)), conductor)


def _classify_infinite(g: FieldMatrix, word: Word, conductor: int) -> Dict[str, Any]:
    minpoly = minimal_polynomial(g)
    d = g.rows
    unipotent = len(minpoly) > 2 and _is_power_of_x_minus_one(minpoly)
    if unipotent:
        diff = g - FieldMatrix.identity(d, g.conductor)
        reason = "transvection" if rank(diff) == 1 else "unipotent"
    elif not is_squarefree(minpoly):
        reason = "non_semisimple"
    else:
        reason = "non_torsion_eigenvalue"
    return {
        "word": word_to_json(word),
        "reason": reason,
        "minimal_polynomial": [c.to_json() for c in minpoly],
        "torsion_bound_bits": torsion_exponent(d, conductor).bit_length(),
    }


def _is_power_of_x_minus_one(poly: Sequence[CycloNum]) -> bool:
    k = len(poly) - 1
    return all(c == math.comb(k, j) * (-1) ** (k - j) for j, c in enumerate(poly))


def _image(rep: MonodromyRep, element: FieldMatrix) -> FieldMatrix:
    if rep.base is None:
        return element
    return wedge_power(element, rep.wedge)


def is_infinite(rep: MonodromyRep, word_budget: int = DEFAULT_WORD_BUDGET) -> Tuple[bool, Optional[Dict[str, Any]]]:
    """
    Buscar un elemento de orden infinito recorriendo palabras en anchura.

    Para representaciones exteriores las palabras se recorren en el grupo de
    la curva y se prueba su imagen. Devuelve (False, testigo) sólo cuando el
    grupo se enumera completo.
    """
    search = rep.base if rep.base is not None else rep
    n = rep.conductor
    identity = FieldMatrix.identity(search.dim, search.conductor)
    seen = {identity}
    queue = deque([((), identity)])
    letters = search.letters()
    generic = _generic_vector(rep.dim, n)
    explored = 0
    while queue:
        word, element = queue.popleft()
        for letter in letters:
            candidate = element @ search.letter(letter)
            if candidate in seen:
                continue
            seen.add(candidate)
            explored += 1
            if explored > word_budget:
                raise Inconclusive(f"Sin testigo de infinitud tras {word_budget} palabras")
            new_word = word + (letter,)
            image = _image(rep, candidate)
            if not divides_torsion_polynomial(annihilating_polynomial(image, generic)):
                witness = _classify_infinite(image, new_word, n)
                logger.info(f"Testigo de infinitud ({witness['reason']}) con palabra de longitud {len(new_word)}")
                return True, witness
            queue.append((new_word, candidate))
    return False, {"reason": "finite_group", "order": len(seen)}


# ---------------------------------------------------------------------------
# Reflexiones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReflectionClass:
    kind: str
    rank: int
    order: Optional[int] = None
    isotropic: Optional[bool] = None

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind, "rank": self.rank, "order": self.order, "isotropic": self.isotropic}


def reflection_classify(g: FieldMatrix, form: HermitianForm) -> ReflectionClass:
    """transvection | complex_reflection(order) | not_reflection."""
    diff = g - FieldMatrix.identity(g.rows, g.conductor)
    r = rank(diff)
    if r != 1:
        return ReflectionClass(kind="not_reflection", rank=r)
    image = next(diff.column(k) for k in range(diff.cols) if not diff.column(k).is_zero())
    isotropic = form.pair(image, image).is_zero()
    if (diff @ diff).vectorize().is_zero():
        return ReflectionClass(kind="transvection", rank=1, isotropic=isotropic)
    eigenvalue = 1 + diff.trace()
    order = root_of_unity_order(eigenvalue)
    if order is None:
        return ReflectionClass(kind="not_reflection", rank=1, isotropic=isotropic)
    return ReflectionClass(kind="complex_reflection", rank=1, order=order, isotropic=isotropic)


# ---------------------------------------------------------------------------
# Dicotomía de potencias exteriores
# ---------------------------------------------------------------------------

def jordan_unipotent(blocks: Sequence[int]) -> FieldMatrix:
    d = sum(blocks)
    rows = [[0] * d for _ in range(d)]
    start = 0
    for size in blocks:
        for k in range(start, start + size):
            rows[k][k] = 1
            if k + 1 < start + size:
                rows[k][k + 1] = 1
        start += size
    return FieldMatrix.from_rows(rows)


def jordan_types(w_dim: int) -> List[Tuple[int, ...]]:
    """Particiones de w_dim salvo la trivial (1, …, 1), de mayor a menor."""
    types = []
    for part in partitions(w_dim):
        blocks = tuple(sorted(itertools.chain.from_iterable([k] * v for k, v in part.items()), reverse=True))
        if blocks[0] > 1:
            types.append(blocks)
    return sorted(types, reverse=True)


def wedge_dichotomy_check(w_dim: int, n: int) -> bool:
    """rank(∧ⁿh − I) ≥ 2 para todo unipotente h ≠ I de tamaño w_dim."""
    if n < 2 or w_dim < n + 2:
        raise BadParameters(f"Se requiere n ≥ 2 y w_dim ≥ n + 2 (w_dim={w_dim}, n={n})")
    for blocks in jordan_types(w_dim):
        h = wedge_power(jordan_unipotent(blocks), n)
        r = rank(h - FieldMatrix.identity(h.rows))
        if r < 2:
            logger.error(f"Tipo de Jordan {blocks}: rank(∧^{n} h − I) = {r}")
            return False
    return True


# ---------------------------------------------------------------------------
# Certificador
# ---------------------------------------------------------------------------

def isotypic_components(rep: MonodromyRep, sub: Subspace, dims: Sequence[int]) -> Optional[List[int]]:
    """
    Componentes isotípicas cuya suma es el subespacio invariante `sub`.

    Una suma sin multiplicidades de componentes absolutamente irreducibles de
    dimensiones d_j genera un álgebra de dimensión Σ d_j²; se exige que la
    clausura del álgebra de los generadores restringidos tenga exactamente esa
    dimensión. None si ninguna elección de componentes encaja.
    """
    restricted = [restrict(g, sub) for g in rep.generators]
    algebra_dim = algebra_closure(restricted).dim
    for k in range(1, len(dims) + 1):
        for combo in itertools.combinations(dims, k):
            if sum(combo) == sub.dim and sum(c * c for c in combo) == algebra_dim:
                return list(combo)
    logger.info(f"Órbita de dimensión {sub.dim} con álgebra de dimensión {algebra_dim}: no es isotípica")
    return None


class DensityCertifier:
    """
    Certificador que ensambla las comprobaciones para una tupla (n, m, r, i).

    En modo FULL (n = 1) trabaja con las matrices explícitas de la curva; en
    modo CONDITIONAL (n ≥ 2) con su potencia exterior, y el meridiano de
    Picard–Lefschetz queda como dato abstracto.
    """

    def __init__(self, word_budget: int = DEFAULT_WORD_BUDGET):
        """
        Inicializar el certificador.

        Args:
            word_budget: presupuesto de palabras para órbitas y búsqueda de testigos
        """
        if word_budget <= 0:
            raise BadParameters("El presupuesto de palabras debe ser positivo")
        self.word_budget = word_budget

    def certify(self, params: Params) -> DensityCertificate:
        params.validate()
        label = expected_group(params)
        base = {
            "params": params.to_json(),
            "mode": "FULL" if params.n == 1 else "CONDITIONAL",
            "expected_group": label.label,
        }
        if not label.hypothesis_ok:
            logger.info(f"{params.as_tuple()}: hipótesis no satisfecha ({label.reason})")
            return DensityCertificate(
                **base, status=STATUS_HYPOTHESIS, verdict=label.label, reasons=[label.reason]
            )
        base["proof_case"] = proof_case(params)
        base["criterion"] = criterion(params)
        if params.n == 1:
            return self._certify_curve(params, base, label.label)
        return self._certify_wedge(params, base, label.label)

    # -- modo FULL ----------------------------------------------------------

    def _meridians(self, rep: MonodromyRep, params: Params) -> List[Dict[str, Any]]:
        pl = cyclic_pl_data(1, params.m, params.r, params.i)
        data = []
        for j in range(len(rep.generators)):
            meridian = meridian_matrix(rep, j)
            if not meridian.verify(rep.form):
                raise InconsistencyError("meridian-picard-lefschetz", f"el meridiano {j} no es v ↦ v + cH(v, e)e")
            kind = reflection_classify(meridian.matrix, rep.form)
            if (kind.kind == "transvection") != pl.is_transvection:
                raise InconsistencyError(
                    "reflection-vs-pl", f"meridiano {j}: {kind.kind} pero H(e, e) = 0 es {pl.is_transvection}"
                )
            data.append({"generator": j, "cycle": meridian.cycle, "summary": {
                "generator": j, **kind.to_json(), **meridian.to_json(),
            }})
        return data

    def _certify_curve(self, params: Params, base: Dict[str, Any], verdict: str) -> DensityCertificate:
        logger.info(f"Paso 1: representación de la curva para {params.as_tuple()}")
        rep = build_curve_rep(params.m, params.r, params.i)
        flags = {"convention": rep.convention, "form_scale_free": rep.scale_free}

        logger.info("Paso 2: meridianos y reflexiones")
        meridians = self._meridians(rep, params)
        cycles = [item["cycle"] for item in meridians]
        reasons: List[str] = []

        logger.info("Paso 3: órbita de los ciclos evanescentes")
        span_ok, span, witnesses = self._span(rep, cycles, reasons)
        span_dim = span.dim if span is not None else None

        logger.info("Paso 4: subespacios invariantes")
        separating_ok = True
        try:
            separating = _separating_subspace(rep, cycles, self.word_budget)
        except BudgetExceeded as e:
            separating, separating_ok = None, False
            reasons.append(str(e))
        if separating is not None:
            separating_ok = False
            reasons.append(f"subespacio invariante de dimensión {separating.dim} separa los ciclos")

        logger.info("Paso 5: infinitud")
        infinite_ok, witness = self._infinite(rep, reasons)

        ok = span_ok and separating_ok and infinite_ok
        return DensityCertificate(
            **base,
            status=STATUS_VERIFIED if ok else STATUS_NOT_VERIFIED,
            verdict=verdict if ok else "UNDETERMINED",
            span_ok=span_ok,
            span_dim=span_dim,
            span_witnesses=witnesses,
            invariant_subspace=separating.to_json() if separating is not None else None,
            infinite_ok=infinite_ok,
            infinite_witness=witness,
            reflection_data=[item["summary"] for item in meridians],
            convention_flags=flags,
            reasons=reasons,
        )

    def _span(self, rep: MonodromyRep, seeds: List[FieldVector], reasons: List[str]):
        try:
            sub, witnesses = orbit_span(rep, seeds, self.word_budget)
        except BudgetExceeded as e:
            logger.warning(f"Presupuesto agotado en la órbita: {e}")
            reasons.append(str(e))
            return False, None, []
        if not sub.is_whole():
            reasons.append(f"la órbita genera dimensión {sub.dim} de {rep.dim}")
        return sub.is_whole(), sub, witnesses

    def _infinite(self, rep: MonodromyRep, reasons: List[str]):
        try:
            infinite, witness = is_infinite(rep, self.word_budget)
        except Inconclusive as e:
            logger.warning(f"Infinitud no demostrada: {e}")
            reasons.append(str(e))
            return False, None
        if not infinite:
            reasons.append(f"grupo finito de orden {witness['order']}")
        return infinite, witness

    # -- modo CONDITIONAL ---------------------------------------------------

    def _certify_wedge(self, params: Params, base: Dict[str, Any], verdict: str) -> DensityCertificate:
        n = params.n
        logger.info(f"Paso 1: representación ∧^{n} de la curva para {params.as_tuple()}")
        curve = build_curve_rep(params.m, params.r, params.i)
        rep = wedge_rep(curve, n)
        flags = {"convention": curve.convention, "form_scale_free": curve.scale_free, "wedge": n}
        reasons: List[str] = []

        curve_cycles = [meridian_matrix(curve, j).cycle for j in range(len(curve.generators))]
        seeds = []
        for start in range(len(curve_cycles) - n + 1):
            seed = wedge_vectors(curve_cycles[start:start + n])
            if not seed.is_zero():
                seeds.append(seed)

        logger.info("Paso 2: órbita de los productos exteriores de ciclos")
        span_ok, span, witnesses = self._span(rep, seeds, reasons)
        span_dim = span.dim if span is not None else None
        iso_dims, components = None, None
        if params.r == 2 * params.i and curve.dim % 2 == 0:
            iso_dims = sp_isotypic_dims(curve.dim, n)
            if span is not None and not span_ok:
                components = isotypic_components(rep, span, iso_dims)
                if components is not None:
                    span_ok = True
                    reasons = [r for r in reasons if not r.startswith("la órbita")]
                else:
                    reasons.append("la órbita no es una suma de componentes isotípicas de Sp")

        logger.info("Paso 3: subespacios invariantes")
        separating_ok = True
        try:
            separating = _separating_subspace(
                rep, seeds, self.word_budget, ambient_dim=span_dim if components else None
            )
        except BudgetExceeded as e:
            separating, separating_ok = None, False
            reasons.append(str(e))
        if separating is not None:
            separating_ok = False
            reasons.append(f"subespacio invariante de dimensión {separating.dim} separa los ciclos")

        logger.info("Paso 4: reflexiones de los meridianos exteriores")
        reflection_data = []
        for j, g in enumerate(rep.generators):
            kind = reflection_classify(g @ g, rep.form)
            reflection_data.append({"generator": j, **kind.to_json()})

        logger.info("Paso 5: dicotomía SL(W)/SL(∧ⁿW)")
        if curve.dim >= n + 2:
            dichotomy = "passed" if wedge_dichotomy_check(curve.dim, n) else "failed"
        else:
            dichotomy = "trivial"
        if dichotomy == "failed":
            reasons.append("un unipotente de SL(W) actúa como pseudo-reflexión en ∧ⁿW")

        logger.info("Paso 6: infinitud")
        infinite_ok, witness = self._infinite(rep, reasons)

        abstract = cyclic_pl_data(n, params.m, params.r, params.i)
        ok = span_ok and separating_ok and infinite_ok and dichotomy != "failed"
        return DensityCertificate(
            **base,
            status=STATUS_CONDITIONAL if ok else STATUS_NOT_VERIFIED,
            verdict=verdict if ok else "UNDETERMINED",
            condition="ON-PL-MERIDIAN",
            span_ok=span_ok,
            span_dim=span_dim,
            span_witnesses=witnesses,
            invariant_subspace=separating.to_json() if separating is not None else None,
            infinite_ok=infinite_ok,
            infinite_witness=witness,
            reflection_data=reflection_data,
            wedge_dichotomy=dichotomy,
            isotypic_dims=iso_dims,
            isotypic_components=components,
            abstract_meridian={**abstract.to_json(), "transvection": abstract.is_transvection},
            convention_flags=flags,
            reasons=reasons,
        )

    # -- reverificación -----------------------------------------------------

    def replay(self, certificate: DensityCertificate) -> List[str]:
        """Re-verificar los testigos de un certificado; devuelve la lista de fallos."""
        if certificate.status == STATUS_HYPOTHESIS:
            p = Params(**certificate.params)
            return [] if not expected_group(p).hypothesis_ok else ["la hipótesis sí se cumple"]
        p = Params(**certificate.params)
        curve = build_curve_rep(p.m, p.r, p.i)
        rep = wedge_rep(curve, p.n)
        failures: List[str] = []

        if p.n == 1:
            seeds = [meridian_matrix(rep, j).cycle for j in range(len(rep.generators))]
        else:
            cycles = [meridian_matrix(curve, j).cycle for j in range(len(curve.generators))]
            seeds = [wedge_vectors(cycles[s:s + p.n]) for s in range(len(cycles) - p.n + 1)]
            seeds = [s for s in seeds if not s.is_zero()]
        if certificate.span_dim is not None:
            ech = Echelon(rep.dim, rep.conductor)
            for s in seeds:
                ech.add(s.lift(rep.conductor).to_row())
            for item in certificate.span_witnesses:
                image = rep.act(word_from_json(item["word"]), seeds[item["seed"]])
                ech.add(image.lift(rep.conductor).to_row())
            if ech.rank != certificate.span_dim:
                failures.append(f"span: rango {ech.rank} ≠ {certificate.span_dim}")
            elif certificate.isotypic_components is not None:
                components = isotypic_components(rep, Subspace.from_echelon(ech), certificate.isotypic_dims or [])
                if components != certificate.isotypic_components:
                    failures.append(f"componentes isotípicas: {components} ≠ {certificate.isotypic_components}")

        witness = certificate.infinite_witness
        if witness and "word" in witness:
            search = rep.base if rep.base is not None else rep
            element = _image(rep, search.evaluate(word_from_json(witness["word"])))
            minpoly = minimal_polynomial(element)
            if [c.to_json() for c in minpoly] != witness["minimal_polynomial"]:
                failures.append("infinitud: el polinomio mínimo no coincide")
            elif divides_torsion_polynomial(minpoly):
                failures.append("infinitud: el testigo tiene orden finito")

        for item in certificate.reflection_data:
            j = item["generator"]
            g = rep.generators[j]
            kind = reflection_classify(g @ g, rep.form)
            if kind.kind != item["kind"] or kind.order != item.get("order"):
                failures.append(f"reflexión {j}: {kind.kind} ≠ {item['kind']}")

        if failures:
            logger.error(f"Reverificación fallida para {p.as_tuple()}: {failures}")
        return failures


def certify(params: Params, word_budget: int = DEFAULT_WORD_BUDGET) -> DensityCertificate:
    return DensityCertifier(word_budget).certify(params)


def replay(certificate: DensityCertificate, word_budget: int = DEFAULT_WORD_BUDGET) -> List[str]:
    return DensityCertifier(word_budget).replay(certificate)

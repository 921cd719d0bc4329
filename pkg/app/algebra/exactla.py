"""
Álgebra lineal exacta y densa sobre cuerpos ciclotómicos.

El motor común es `Echelon`: una forma escalonada incremental con filas
dispersas (diccionarios columna → CycloNum) que sirve para rref, núcleos,
clausuras de álgebras, polinomios mínimos y sistemas de formas invariantes.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import sympy
from sympy import QQ, ZZ

from app.algebra.cyclotomic import CycloNum, real_sign, sqrt_minus_one
from app.core.errors import DegenerateForm, EmptySolution

logger = logging.getLogger(__name__)

Row = Dict[int, CycloNum]


def _common_conductor(values: Iterable[Any]) -> int:
    n = 1
    for v in values:
        if isinstance(v, CycloNum):
            n = math.lcm(n, v.conductor)
    return n


# ---------------------------------------------------------------------------
# Vectores y matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldVector:
    """Vector columna exacto; todas las entradas comparten conductor."""

    entries: Tuple[CycloNum, ...]
    conductor: int

    @classmethod
    def of(cls, values: Sequence[Any], conductor: int = 1) -> "FieldVector":
        n = math.lcm(conductor, _common_conductor(values))
        return cls(tuple(CycloNum.coerce(v, n).lift(n) for v in values), n)

    @classmethod
    def unit(cls, dim: int, k: int, conductor: int = 1) -> "FieldVector":
        zero, one = CycloNum.zero(conductor), CycloNum.one(conductor)
        return cls(tuple(one if j == k else zero for j in range(dim)), conductor)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, k: int) -> CycloNum:
        return self.entries[k]

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def lift(self, conductor: int) -> "FieldVector":
        if conductor == self.conductor:
            return self
        return FieldVector(tuple(e.lift(conductor) for e in self.entries), conductor)

    def __add__(self, other: "FieldVector") -> "FieldVector":
        return FieldVector.of([a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "FieldVector") -> "FieldVector":
        return FieldVector.of([a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, c: Any) -> "FieldVector":
        return FieldVector.of([e * c for e in self.entries], self.conductor)

    def conjugate(self) -> "FieldVector":
        return FieldVector(tuple(e.conjugate() for e in self.entries), self.conductor)

    def to_row(self) -> Row:
        return {k: e for k, e in enumerate(self.entries) if not e.is_zero()}

    @classmethod
    def from_row(cls, row: Row, dim: int, conductor: int) -> "FieldVector":
        zero = CycloNum.zero(conductor)
        return cls.of([row.get(k, zero) for k in range(dim)], conductor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def to_json(self) -> Dict[str, Any]:
        n = self.conductor
        return {
            "dim": self.dim,
            "conductor": n,
            "entries": [e.lift(n).to_json()["coeffs"] for e in self.entries],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "FieldVector":
        n = int(data["conductor"])
        return cls.of([CycloNum.from_json({"conductor": n, "coeffs": c}) for c in data["entries"]], n)


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    """Matriz exacta densa, por filas; un único conductor común."""

    rows: int
    cols: int
    entries: Tuple[CycloNum, ...]
    conductor: int

    # -- construcción -----------------------------------------------------

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[Any]], conductor: int = 1) -> "FieldMatrix":
        flat = [v for row in data for v in row]
        n = math.lcm(conductor, _common_conductor(flat))
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, tuple(CycloNum.coerce(v, n).lift(n) for v in flat), n)

    @classmethod
    def identity(cls, d: int, conductor: int = 1) -> "FieldMatrix":
        zero, one = CycloNum.zero(conductor), CycloNum.one(conductor)
        return cls(d, d, tuple(one if i == j else zero for i in range(d) for j in range(d)), conductor)

    @classmethod
    def zeros(cls, rows: int, cols: int, conductor: int = 1) -> "FieldMatrix":
        return cls(rows, cols, tuple(CycloNum.zero(conductor) for _ in range(rows * cols)), conductor)

    @classmethod
    def from_columns(cls, columns: Sequence[FieldVector]) -> "FieldMatrix":
        n = _common_conductor(v for col in columns for v in col.entries)
        dim = columns[0].dim
        return cls.from_rows([[col[i] for col in columns] for i in range(dim)], n)

    @classmethod
    def from_vector(cls, v: FieldVector, d: int) -> "FieldMatrix":
        """Reconstruir una matriz d×d a partir de su vectorización por filas."""
        return cls(d, d, v.entries, v.conductor)

    # -- acceso -----------------------------------------------------------

    def __getitem__(self, index: Tuple[int, int]) -> CycloNum:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[CycloNum, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> FieldVector:
        return FieldVector(tuple(self.entries[i * self.cols + j] for i in range(self.rows)), self.conductor)

    def to_lists(self) -> List[List[CycloNum]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def vectorize(self) -> FieldVector:
        return FieldVector(self.entries, self.conductor)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_identity(self) -> bool:
        return self.is_square and all(
            (e == 1) if i == j else e.is_zero()
            for i in range(self.rows)
            for j, e in enumerate(self.row(i))
        )

    def lift(self, conductor: int) -> "FieldMatrix":
        if conductor == self.conductor:
            return self
        return FieldMatrix(self.rows, self.cols, tuple(e.lift(conductor) for e in self.entries), conductor)

    # -- aritmética -------------------------------------------------------

    def _aligned(self, other: "FieldMatrix") -> Tuple["FieldMatrix", "FieldMatrix"]:
        n = math.lcm(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        a, b = self._aligned(other)
        return FieldMatrix(a.rows, a.cols, tuple(x + y for x, y in zip(a.entries, b.entries)), a.conductor)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        a, b = self._aligned(other)
        return FieldMatrix(a.rows, a.cols, tuple(x - y for x, y in zip(a.entries, b.entries)), a.conductor)

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix(self.rows, self.cols, tuple(-x for x in self.entries), self.conductor)

    def scale(self, c: Any) -> "FieldMatrix":
        c = CycloNum.coerce(c, self.conductor)
        n = math.lcm(self.conductor, c.conductor)
        m = self.lift(n)
        return FieldMatrix(m.rows, m.cols, tuple(x * c for x in m.entries), n)

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Dimensiones incompatibles: {self.cols} vs {other.rows}")
        a, b = self._aligned(other)
        zero = CycloNum.zero(a.conductor)
        # Columnas dispersas de b
        b_rows = [[(j, v) for j, v in enumerate(b.row(k)) if not v.is_zero()] for k in range(b.rows)]
        out: List[CycloNum] = []
        for i in range(a.rows):
            acc = [zero] * b.cols
            for k, x in enumerate(a.row(i)):
                if x.is_zero():
                    continue
                for j, v in b_rows[k]:
                    acc[j] = acc[j] + x * v
            out.extend(acc)
        return FieldMatrix(a.rows, b.cols, tuple(out), a.conductor)

    __mul__ = __matmul__

    def apply(self, v: FieldVector) -> FieldVector:
        n = math.lcm(self.conductor, v.conductor)
        m, v = self.lift(n), v.lift(n)
        zero = CycloNum.zero(n)
        out = []
        for i in range(m.rows):
            acc = zero
            for x, y in zip(m.row(i), v.entries):
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            out.append(acc)
        return FieldVector(tuple(out), n)

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(
            self.cols, self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
            self.conductor,
        )

    def dagger(self) -> "FieldMatrix":
        """Traspuesta conjugada."""
        return FieldMatrix(
            self.cols, self.rows,
            tuple(self[i, j].conjugate() for j in range(self.cols) for i in range(self.rows)),
            self.conductor,
        )

    def power(self, k: int) -> "FieldMatrix":
        if k < 0:
            return inverse(self).power(-k)
        acc = FieldMatrix.identity(self.rows, self.conductor)
        base = self
        while k:
            if k & 1:
                acc = acc @ base
            base = base @ base
            k >>= 1
        return acc

    def trace(self) -> CycloNum:
        acc = CycloNum.zero(self.conductor)
        for i in range(self.rows):
            acc = acc + self[i, i]
        return acc

    # -- igualdad ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    # -- serialización ----------------------------------------------------

    def to_json(self) -> Dict[str, Any]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "conductor": self.conductor,
            "entries": [e.to_json()["coeffs"] for e in self.entries],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "FieldMatrix":
        n = int(data["conductor"])
        entries = tuple(CycloNum.from_json({"conductor": n, "coeffs": c}) for c in data["entries"])
        rows, cols = int(data["rows"]), int(data["cols"])
        if len(entries) != rows * cols:
            raise ValueError("El número de entradas no coincide con rows·cols")
        return cls(rows, cols, entries, n)


# ---------------------------------------------------------------------------
# Motor de eliminación
# ---------------------------------------------------------------------------

class Echelon:
    """
    Forma escalonada incremental con filas dispersas normalizadas.

    Cada fila pivote tiene un 1 en su columna pivote y ceros antes de ella.
    `reduce` recorre los pivotes en orden creciente de columna.
    """

    def __init__(self, ncols: int, conductor: int = 1):
        self.ncols = ncols
        self.conductor = conductor
        self.pivots: Dict[int, Row] = {}
        self._order: List[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Row) -> Row:
        row = dict(row)
        for p in self._order:
            f = row.get(p)
            if f is None:
                continue
            for c, v in self.pivots[p].items():
                new = row.get(c, None)
                new = -(f * v) if new is None else new - f * v
                if new.is_zero():
                    row.pop(c, None)
                else:
                    row[c] = new
        return row

    def add(self, row: Row) -> bool:
        """Añadir una fila; True si aumenta el rango."""
        rem = self.reduce(row)
        if not rem:
            return False
        lead = min(rem)
        inv = rem[lead].inverse()
        normalized = {c: v * inv for c, v in rem.items()}
        normalized[lead] = CycloNum.one(normalized[lead].conductor)
        self.pivots[lead] = normalized
        self._order.append(lead)
        self._order.sort()
        return True

    def contains(self, row: Row) -> bool:
        return not self.reduce(row)

    def reduced_rows(self) -> List[Tuple[int, Row]]:
        """Filas en forma escalonada reducida, ordenadas por pivote."""
        done: Dict[int, Row] = {}
        for p in reversed(self._order):
            row = dict(self.pivots[p])
            for q in list(row):
                if q != p and q in done:
                    f = row[q]
                    for c, v in done[q].items():
                        new = row.get(c)
                        new = -(f * v) if new is None else new - f * v
                        if new.is_zero():
                            row.pop(c, None)
                        else:
                            row[c] = new
            done[p] = row
        return [(p, done[p]) for p in self._order]

    def kernel_rows(self) -> List[Row]:
        """Base del núcleo {x : fila·x = 0 para toda fila}."""
        reduced = self.reduced_rows()
        pivot_set = {p for p, _ in reduced}
        one = CycloNum.one(self.conductor)
        basis = []
        for f in range(self.ncols):
            if f in pivot_set:
                continue
            vec: Row = {f: one}
            for p, row in reduced:
                v = row.get(f)
                if v is not None:
                    vec[p] = -v
            basis.append(vec)
        return basis


def _lift_row(row: Row, n: int) -> Row:
    return {k: v.lift(n) for k, v in row.items()}


# ---------------------------------------------------------------------------
# Subespacios y formas
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Subspace:
    """Subespacio de K^ambient con base en forma escalonada reducida."""

    ambient: int
    basis: Tuple[FieldVector, ...]
    pivots: Tuple[int, ...]
    conductor: int

    @classmethod
    def span(cls, vectors: Iterable[FieldVector], ambient: int, conductor: int = 1) -> "Subspace":
        vectors = list(vectors)
        n = math.lcm(conductor, _common_conductor(e for v in vectors for e in v.entries))
        ech = Echelon(ambient, n)
        for v in vectors:
            ech.add(v.lift(n).to_row())
        return cls.from_echelon(ech)

    @classmethod
    def from_echelon(cls, ech: Echelon) -> "Subspace":
        n = ech.conductor
        reduced = ech.reduced_rows()
        basis = tuple(FieldVector.from_row(_lift_row(row, n), ech.ncols, n) for _, row in reduced)
        return cls(ech.ncols, basis, tuple(p for p, _ in reduced), n)

    @classmethod
    def zero(cls, ambient: int, conductor: int = 1) -> "Subspace":
        return cls(ambient, (), (), conductor)

    @classmethod
    def whole(cls, ambient: int, conductor: int = 1) -> "Subspace":
        return cls(ambient, tuple(FieldVector.unit(ambient, k, conductor) for k in range(ambient)),
                   tuple(range(ambient)), conductor)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_whole(self) -> bool:
        return self.dim == self.ambient

    def echelon(self) -> Echelon:
        ech = Echelon(self.ambient, self.conductor)
        for v in self.basis:
            ech.add(v.to_row())
        return ech

    def contains(self, v: FieldVector) -> bool:
        n = math.lcm(self.conductor, v.conductor)
        ech = Echelon(self.ambient, n)
        for b in self.basis:
            ech.add(b.lift(n).to_row())
        return ech.contains(v.lift(n).to_row())

    def coordinates(self, v: FieldVector) -> List[CycloNum]:
        """Coordenadas en la base escalonada: las entradas en columnas pivote."""
        coords = [v[p] for p in self.pivots]
        rebuilt = FieldVector.of([CycloNum.zero(v.conductor)] * self.ambient, v.conductor)
        for c, b in zip(coords, self.basis):
            rebuilt = rebuilt + b.scale(c)
        if rebuilt != v.lift(rebuilt.conductor):
            raise ValueError("El vector no pertenece al subespacio")
        return coords

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis))

    def to_json(self) -> Dict[str, Any]:
        return {"ambient": self.ambient, "dim": self.dim, "basis": [b.to_json() for b in self.basis]}


@dataclass(frozen=True)
class HermitianForm:
    """Forma H(x, y) = y† G x con G = G†."""

    gram: FieldMatrix

    def __post_init__(self):
        if not self.gram.is_square:
            raise ValueError("La matriz de Gram debe ser cuadrada")
        if self.gram.dagger() != self.gram:
            raise ValueError("La matriz de Gram no es hermítica")

    @property
    def dim(self) -> int:
        return self.gram.rows

    def pair(self, x: FieldVector, y: FieldVector) -> CycloNum:
        gx = self.gram.apply(x)
        acc = CycloNum.zero(gx.conductor)
        for a, b in zip(y.entries, gx.entries):
            if not a.is_zero() and not b.is_zero():
                acc = acc + a.conjugate() * b
        return acc

    def scale(self, c: Any) -> "HermitianForm":
        return HermitianForm(self.gram.scale(c))

    def is_invariant_under(self, g: FieldMatrix) -> bool:
        return g.dagger() @ self.gram @ g == self.gram

    def orthogonal_complement(self, sub: Subspace) -> Subspace:
        """{y : H(u, y) = 0 para todo u ∈ sub}."""
        n = math.lcm(self.gram.conductor, sub.conductor)
        ech = Echelon(self.dim, n)
        for u in sub.basis:
            # H(u, y) = y† G u = 0  ⇔  conj(G u)ᵀ y = 0
            ech.add(self.gram.apply(u).lift(n).conjugate().to_row())
        return Subspace.span(
            (FieldVector.from_row(r, self.dim, n) for r in ech.kernel_rows()), self.dim, n
        )


# ---------------------------------------------------------------------------
# Operaciones
# ---------------------------------------------------------------------------

def _matrix_rows(m: FieldMatrix) -> List[Row]:
    return [{j: v for j, v in enumerate(m.row(i)) if not v.is_zero()} for i in range(m.rows)]


def rref_kernel_rank(m: FieldMatrix) -> Tuple[FieldMatrix, Subspace, int]:
    """Forma escalonada reducida, núcleo y rango de `m`."""
    ech = Echelon(m.cols, m.conductor)
    # Insertar primero las filas más baratas limita el crecimiento de coeficientes.
    rows = sorted(_matrix_rows(m), key=lambda r: sum(v.size() for v in r.values()))
    for row in rows:
        ech.add(row)
    zero = CycloNum.zero(m.conductor)
    reduced = [row for _, row in ech.reduced_rows()]
    dense = [[row.get(j, zero).lift(m.conductor) for j in range(m.cols)] for row in reduced]
    dense += [[zero] * m.cols for _ in range(m.rows - len(reduced))]
    rref = FieldMatrix.from_rows(dense, m.conductor) if m.rows else m
    kernel = Subspace.span(
        (FieldVector.from_row(r, m.cols, m.conductor) for r in ech.kernel_rows()), m.cols, m.conductor
    )
    return rref, kernel, ech.rank


def rank(m: FieldMatrix) -> int:
    ech = Echelon(m.cols, m.conductor)
    for row in _matrix_rows(m):
        ech.add(row)
    return ech.rank


def kernel(m: FieldMatrix) -> Subspace:
    return rref_kernel_rank(m)[1]


def inverse(m: FieldMatrix) -> FieldMatrix:
    """Inversa por eliminación sobre [M | I]."""
    if not m.is_square:
        raise ValueError("Sólo se invierten matrices cuadradas")
    d = m.rows
    one = CycloNum.one(m.conductor)
    ech = Echelon(2 * d, m.conductor)
    for i, row in enumerate(_matrix_rows(m)):
        row = dict(row)
        row[d + i] = one
        ech.add(row)
    reduced = ech.reduced_rows()
    if len(reduced) < d or any(p >= d for p, _ in reduced[:d]) or reduced[d - 1][0] != d - 1:
        raise ValueError("La matriz es singular")
    zero = CycloNum.zero(m.conductor)
    return FieldMatrix.from_rows(
        [[row.get(d + j, zero) for j in range(d)] for _, row in reduced[:d]], m.conductor
    )


def restrict(m: FieldMatrix, sub: Subspace) -> FieldMatrix:
    """Matriz de `m` restringida a un subespacio invariante (base escalonada)."""
    columns = []
    for b in sub.basis:
        columns.append(sub.coordinates(m.apply(b)))
    n = math.lcm(m.conductor, sub.conductor)
    return FieldMatrix.from_rows([[columns[j][i] for j in range(sub.dim)] for i in range(sub.dim)], n)


def quotient_columns(sub: Subspace) -> List[int]:
    """Columnas no pivote: sus vectores unitarios representan V/sub."""
    pivots = set(sub.pivots)
    return [c for c in range(sub.ambient) if c not in pivots]


def quotient(m: FieldMatrix, sub: Subspace) -> FieldMatrix:
    """Acción inducida en V/sub para un subespacio invariante."""
    n = math.lcm(m.conductor, sub.conductor)
    m = m.lift(n)
    keep = quotient_columns(sub)
    cols = []
    for c in keep:
        image = m.column(c)
        # Restar la parte en `sub` anula las columnas pivote.
        for p, b in zip(sub.pivots, sub.basis):
            f = image[p]
            if not f.is_zero():
                image = image - b.lift(n).scale(f)
        cols.append([image[k] for k in keep])
    return FieldMatrix.from_rows([[cols[j][i] for j in range(len(keep))] for i in range(len(keep))], n)


def algebra_closure(generators: Sequence[FieldMatrix]) -> Subspace:
    """Menor álgebra asociativa unital que contiene a los generadores."""
    if not generators:
        raise ValueError("Se necesita al menos un generador")
    d = generators[0].rows
    if any(g.rows != d or g.cols != d for g in generators):
        raise ValueError("Todos los generadores deben ser cuadrados del mismo tamaño")
    n = _common_conductor(e for g in generators for e in g.entries)
    gens = [g.lift(n) for g in generators]
    ech = Echelon(d * d, n)
    worklist = deque()
    for m in [FieldMatrix.identity(d, n)] + gens:
        if ech.add(m.vectorize().to_row()):
            worklist.append(m)
    while worklist:
        m = worklist.popleft()
        for g in gens:
            for candidate in (g @ m, m @ g):
                if ech.add(candidate.vectorize().to_row()):
                    worklist.append(candidate)
        if ech.rank == d * d:
            break
    logger.debug(f"Clausura de álgebra: dimensión {ech.rank} de {d * d}")
    return Subspace.from_echelon(ech)


def invariant_hermitian_forms(generators: Sequence[FieldMatrix]) -> List[HermitianForm]:
    """
    Base del espacio de formas hermíticas H con g† H g = H para todo g.

    Se resuelve el sistema lineal sobre el cuerpo y luego se hermitianiza la
    base (B + B†, √−1(B − B†)), quedándose con una subfamilia independiente.
    """
    d = generators[0].rows
    n = math.lcm(4, _common_conductor(e for g in generators for e in g.entries))
    gens = [g.lift(n) for g in generators]
    one = CycloNum.one(n)
    ech = Echelon(d * d, n)
    for g in gens:
        columns = [[(c, g[c, a]) for c in range(d) if not g[c, a].is_zero()] for a in range(d)]
        trivial = [cols == [(a, one)] for a, cols in enumerate(columns)]
        conj_columns = [[(c, v.conjugate()) for c, v in cols] for cols in columns]
        for a in range(d):
            for b in range(d):
                if trivial[a] and trivial[b]:
                    continue
                # (g† H g − H)_{ab} = Σ conj(g_ca) H_ce g_eb − H_ab
                row: Row = {}
                for c, x in conj_columns[a]:
                    for e, y in columns[b]:
                        k = c * d + e
                        val = x * y
                        prev = row.get(k)
                        row[k] = val if prev is None else prev + val
                k = a * d + b
                row[k] = row[k] - one if k in row else -one
                row = {key: v for key, v in row.items() if not v.is_zero()}
                if row:
                    ech.add(row)
    solutions = ech.kernel_rows()
    if not solutions:
        raise EmptySolution("Sólo la forma nula es invariante")
    i_unit = sqrt_minus_one(n)
    herm = Echelon(d * d, n)
    forms: List[HermitianForm] = []
    for sol in solutions:
        b = FieldMatrix.from_vector(FieldVector.from_row(sol, d * d, n), d)
        bd = b.dagger()
        for candidate in (b + bd, (b - bd).scale(i_unit)):
            if herm.add(candidate.vectorize().to_row()):
                forms.append(HermitianForm(candidate))
    logger.debug(f"Formas hermíticas invariantes: {len(forms)}")
    return forms


@dataclass(frozen=True)
class SignatureResult:
    p: int
    q: int
    first_pivot_sign: int

    @property
    def unordered(self) -> Tuple[int, int]:
        return (max(self.p, self.q), min(self.p, self.q))

    @property
    def oriented(self) -> Tuple[int, int]:
        """Signatura tras normalizar el primer pivote a positivo."""
        return (self.p, self.q) if self.first_pivot_sign > 0 else (self.q, self.p)


def signature_details(form: HermitianForm) -> SignatureResult:
    """Inercia por eliminación simétrica L·D·L† con signos certificados."""
    d = form.dim
    r = rank(form.gram)
    if r < d:
        raise DegenerateForm(f"Forma degenerada: rango {r} < {d}", rank=r, dim=d)
    g = form.gram.to_lists()
    active = list(range(d))
    signs: List[int] = []
    while active:
        diag = [k for k in active if not g[k][k].is_zero()]
        if diag:
            p = min(diag, key=lambda k: g[k][k].size())
        else:
            # Todos los diagonales nulos: congruencia e_a ↦ e_a + λ e_b.
            a, b = min(
                ((x, y) for x in active for y in active if x != y and not g[x][y].is_zero()),
                key=lambda xy: g[xy[0]][xy[1]].size(),
            )
            lam = g[a][b].conjugate()
            for k in active:
                g[k][a] = g[k][a] + lam * g[k][b]
            lam_bar = lam.conjugate()
            for k in active:
                g[a][k] = g[a][k] + lam_bar * g[b][k]
            p = a
        pivot = g[p][p]
        signs.append(real_sign(pivot))
        inv = pivot.inverse()
        rest = [k for k in active if k != p]
        for i in rest:
            f = g[i][p]
            if f.is_zero():
                continue
            f = f * inv
            for j in rest:
                if not g[p][j].is_zero():
                    g[i][j] = g[i][j] - f * g[p][j]
        active = rest
    p_count = sum(1 for s in signs if s > 0)
    return SignatureResult(p_count, d - p_count, signs[0] if signs else 1)


def signature(form: HermitianForm) -> Tuple[int, int]:
    result = signature_details(form)
    return result.p, result.q


def radical(form: HermitianForm) -> Subspace:
    return kernel(form.gram)


def determinant(m: FieldMatrix) -> CycloNum:
    rows = m.to_lists()
    return _det(rows, m.conductor)


def _det(rows: List[List[CycloNum]], conductor: int) -> CycloNum:
    size = len(rows)
    if size == 0:
        return CycloNum.one(conductor)
    if size == 1:
        return rows[0][0]
    if size == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if size <= 4:
        # Desarrollo por la fila con más ceros.
        r = max(range(size), key=lambda i: sum(1 for v in rows[i] if v.is_zero()))
        acc = CycloNum.zero(conductor)
        for j, v in enumerate(rows[r]):
            if v.is_zero():
                continue
            minor = [row[:j] + row[j + 1:] for i, row in enumerate(rows) if i != r]
            term = v * _det(minor, conductor)
            acc = acc - term if (r + j) % 2 else acc + term
        return acc
    work = [list(row) for row in rows]
    det = CycloNum.one(conductor)
    for c in range(size):
        piv = next((i for i in range(c, size) if not work[i][c].is_zero()), None)
        if piv is None:
            return CycloNum.zero(conductor)
        if piv != c:
            work[c], work[piv] = work[piv], work[c]
            det = -det
        det = det * work[c][c]
        inv = work[c][c].inverse()
        for i in range(c + 1, size):
            f = work[i][c]
            if f.is_zero():
                continue
            f = f * inv
            for j in range(c, size):
                if not work[c][j].is_zero():
                    work[i][j] = work[i][j] - f * work[c][j]
    return det


def wedge_indices(d: int, n: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations(range(d), n))


def wedge_power(m: FieldMatrix, n: int) -> FieldMatrix:
    """∧ⁿ M en la base de índices ordenados lexicográficamente (menores n×n)."""
    if not 1 <= n <= m.rows or not m.is_square:
        raise ValueError(f"Se requiere 1 ≤ n ≤ d, recibido n={n}, d={m.rows}")
    idx = wedge_indices(m.rows, n)
    rows = m.to_lists()
    out = []
    for big_i in idx:
        sub_rows = [rows[i] for i in big_i]
        line = []
        for big_j in idx:
            line.append(_det([[row[j] for j in big_j] for row in sub_rows], m.conductor))
        out.append(line)
    return FieldMatrix.from_rows(out, m.conductor)


def wedge_vectors(vectors: Sequence[FieldVector]) -> FieldVector:
    """v₁ ∧ … ∧ vₙ en la base de índices ordenados (menores de [v₁ … vₙ])."""
    n = len(vectors)
    d = vectors[0].dim
    conductor = _common_conductor(e for v in vectors for e in v.entries)
    columns = [v.lift(conductor) for v in vectors]
    coords = []
    for idx in wedge_indices(d, n):
        coords.append(_det([[columns[k][i] for k in range(n)] for i in idx], conductor))
    return FieldVector.of(coords, conductor)


def minimal_polynomial(m: FieldMatrix) -> List[CycloNum]:
    """Polinomio mínimo mónico (coeficientes de menor a mayor grado) vía Krylov."""
    if not m.is_square:
        raise ValueError("El polinomio mínimo requiere una matriz cuadrada")
    d = m.rows
    n = m.conductor
    width = d * d
    one = CycloNum.one(n)
    ech = Echelon(width + d + 1, n)
    power = FieldMatrix.identity(d, n)
    for k in range(d + 1):
        row = power.vectorize().to_row()
        row[width + k] = one
        rem = ech.reduce(row)
        if all(c >= width for c in rem):
            zero = CycloNum.zero(n)
            coeffs = [rem.get(width + j, zero) for j in range(k + 1)]
            lead = coeffs[-1]
            return [c / lead for c in coeffs]
        ech.add(row)
        power = power @ m
    raise AssertionError("Cayley–Hamilton garantiza grado ≤ d")


def annihilating_polynomial(m: FieldMatrix, v: FieldVector) -> List[CycloNum]:
    """Polinomio mónico mínimo p con p(M)·v = 0 (divide al polinomio mínimo)."""
    d = m.rows
    n = math.lcm(m.conductor, v.conductor)
    m, v = m.lift(n), v.lift(n)
    one = CycloNum.one(n)
    ech = Echelon(d + d + 1, n)
    current = v
    for k in range(d + 1):
        row = current.to_row()
        row[d + k] = one
        rem = ech.reduce(row)
        if all(c >= d for c in rem):
            zero = CycloNum.zero(n)
            coeffs = [rem.get(d + j, zero) for j in range(k + 1)]
            lead = coeffs[-1]
            return [c / lead for c in coeffs]
        ech.add(row)
        current = m.apply(current)
    raise AssertionError("La sucesión de Krylov se estabiliza en d pasos")


# ---------------------------------------------------------------------------
# Polinomios con coeficientes ciclotómicos (de menor a mayor grado)
# ---------------------------------------------------------------------------
#
# Un polinomio en X sobre Q(ζ_N) se pasa a sympy como polinomio racional en
# (X, Z) y se trabaja módulo Φ_N(Z).

_X, _Z = sympy.symbols("x z")


def _trim(p: Sequence[CycloNum]) -> List[CycloNum]:
    p = list(p)
    while len(p) > 1 and p[-1].is_zero():
        p.pop()
    return p


def _to_sympy_expr(p: Sequence[CycloNum], conductor: int) -> sympy.Expr:
    terms = []
    for j, c in enumerate(p):
        for k, a in enumerate(c.lift(conductor).coeffs):
            if a:
                terms.append(sympy.Rational(a.numerator, a.denominator) * _X ** j * _Z ** k)
    return sympy.Add(*terms)


def _cyclotomic_expr(conductor: int) -> sympy.Expr:
    return sympy.cyclotomic_poly(conductor, _Z)


def is_squarefree(p: Sequence[CycloNum]) -> bool:
    """Libre de cuadrados sobre Q(ζ_N): el discriminante no se anula módulo Φ_N."""
    p = _trim(p)
    if len(p) <= 2:
        return True
    n = _common_conductor(p)
    f = _to_sympy_expr(p, n)
    disc = sympy.resultant(f, sympy.diff(f, _X), _X)
    reduced = sympy.rem(disc, _cyclotomic_expr(n), _Z)
    return not sympy.Poly(reduced, _Z, domain=QQ).is_zero


def poly_norm(p: Sequence[CycloNum]) -> List[Fraction]:
    """∏_σ σ(p) sobre Gal(Q(ζ_N)/Q), como resultante en Z con Φ_N."""
    p = _trim(p)
    n = _common_conductor(p)
    norm = sympy.resultant(_cyclotomic_expr(n), _to_sympy_expr(p, n), _Z)
    coeffs = sympy.Poly(norm, _X, domain=QQ).all_coeffs()
    return [Fraction(int(c.p), int(c.q)) for c in reversed(coeffs)]


def rational_roots_are_torsion(norm: Sequence[Fraction]) -> bool:
    """Todas las raíces del polinomio racional son raíces de la unidad."""
    if any(c.denominator != 1 for c in norm):
        return False
    poly = sympy.Poly([int(c) for c in reversed(norm)], _X, domain=ZZ)
    if poly.degree() <= 0:
        return True
    _, factors = poly.factor_list()
    return all(factor.is_cyclotomic for factor, _ in factors)

"""
Invariantes combinatorios en forma cerrada: signaturas, números de Hodge,
identidades de dimensión y etiquetas del grupo esperado.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from app.core.errors import BadParameters

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Params:
    n: int
    m: int
    r: int
    i: int

    def problems(self) -> list:
        issues = []
        if self.n < 1:
            issues.append("n ≥ 1")
        if self.r < 2 or self.m % self.r:
            issues.append("r | m")
        if self.m < self.n + 3:
            issues.append("m ≥ n + 3")
        if not 1 <= self.i <= self.r - 1:
            issues.append("1 ≤ i ≤ r − 1")
        return issues

    def validate(self) -> "Params":
        issues = self.problems()
        if issues:
            raise BadParameters(f"Parámetros inválidos {self.as_tuple()}: se requiere {', '.join(issues)}")
        return self

    @property
    def k(self) -> int:
        return self.m // self.r

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.n, self.m, self.r, self.i)

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "r": self.r, "i": self.i}


def binom(a: int, b: int) -> int:
    """C(a, b), nulo fuera del rango 0 ≤ b ≤ a."""
    if a < 0 or b < 0 or b > a:
        return 0
    return math.comb(a, b)


def signature_formula(p: Params) -> Tuple[int, int]:
    """
    Signatura (p_i, q_i) de la forma hermítica en el autoespacio i.

    Args:
        p: parámetros (n, m, r, i) válidos

    Returns:
        (p_i, q_i) con p_i + q_i = C(m − 2, n)
    """
    p.validate()
    ki = p.k * p.i
    a, b = p.m - ki - 1, ki - 1
    pos = sum(binom(a, p.n - 2 * j) * binom(b, 2 * j) for j in range(p.n // 2 + 1))
    neg = sum(binom(a, p.n - 2 * j - 1) * binom(b, 2 * j + 1) for j in range(p.n // 2 + 1))
    return pos, neg


def curve_hodge_numbers(m: int, r: int, i: int) -> Tuple[int, int]:
    if r < 2 or m % r or not 1 <= i <= r - 1:
        raise BadParameters(f"Se requiere r | m y 1 ≤ i ≤ r − 1 (m={m}, r={r}, i={i})")
    ki = m * i // r
    return m - ki - 1, ki - 1


def cover_comparison(p: Params, i0: int) -> bool:
    """Comparar el autoespacio i0 de X con el autoespacio 1 del recubrimiento de grado r/i0."""
    p.validate()
    if i0 < 1 or p.r % i0 or p.i != i0 or p.r // i0 < 2:
        raise BadParameters(f"Se requiere i = i0, i0 | r y r/i0 ≥ 2 (r={p.r}, i={p.i}, i0={i0})")
    reduced = Params(p.n, p.m, p.r // i0, 1)
    return signature_formula(p) == signature_formula(reduced)


def dimension(p: Params) -> int:
    return binom(p.m - 2, p.n)


@dataclass(frozen=True)
class GroupLabel:
    kind: str
    dim: int = 0
    p: int = 0
    q: int = 0
    reason: Optional[str] = None

    @property
    def hypothesis_ok(self) -> bool:
        return self.kind != "HYPOTHESIS_NOT_MET"

    @property
    def label(self) -> str:
        if self.kind == "HYPOTHESIS_NOT_MET":
            return f"HYPOTHESIS_NOT_MET({self.reason})"
        if self.kind == "SU":
            return f"SU({self.p},{self.q})"
        return f"{self.kind}({self.dim})"


def hypothesis_failure(p: Params) -> Optional[str]:
    """Motivo por el que (n, m, r, i) no cumple 1 ≤ i ≤ ⌊r/2⌋ y mi ≥ 2r, o None."""
    issues = p.problems()
    if issues:
        return "invalid: " + ", ".join(issues)
    if p.i > p.r // 2:
        return "i > r/2"
    if p.m * p.i < 2 * p.r:
        return "mi < 2r"
    return None


def expected_group(p: Params) -> GroupLabel:
    reason = hypothesis_failure(p)
    if reason:
        return GroupLabel(kind="HYPOTHESIS_NOT_MET", reason=reason)
    pos, neg = signature_formula(p)
    dim = pos + neg
    if p.r == 2 * p.i:
        return GroupLabel(kind="Sp" if p.n % 2 else "SO", dim=dim, p=pos, q=neg)
    return GroupLabel(kind="SU", dim=dim, p=max(pos, neg), q=min(pos, neg))


def form_type(p: Params) -> str:
    p.validate()
    if p.r == 2 * p.i:
        return "alternating" if p.n % 2 else "symmetric"
    return "hermitian"


def is_calabi_yau(p: Params) -> bool:
    return p.m == p.n + p.k + 1


def proof_case(p: Params) -> str:
    """CASE_1 si r ∤ (n+1)i (H(e, e) ≠ 0), CASE_2 en otro caso."""
    p.validate()
    return "CASE_2" if ((p.n + 1) * p.i) % p.r == 0 else "CASE_1"


def criterion(p: Params) -> str:
    if p.r == 2 * p.i:
        return "deligne_transvections" if p.n % 2 else "deligne_reflections"
    if proof_case(p) == "CASE_1":
        return "carlson_toledo_complex_reflections"
    return "alternative_sl"


def large_fundamental_group_witness(n: int, m: int) -> Optional[Params]:
    """Primer (r, i) con r | m cuya monodromía es densa en un grupo no compacto."""
    if m < n + 3:
        raise BadParameters(f"Se requiere m ≥ n + 3 (n={n}, m={m})")
    for r in range(2, m + 1):
        if m % r:
            continue
        for i in range(1, r // 2 + 1):
            p = Params(n, m, r, i)
            if hypothesis_failure(p):
                continue
            pos, neg = signature_formula(p)
            if pos >= 1 and neg >= 1:
                return p
    return None

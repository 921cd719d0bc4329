"""
Modelos de configuración e informe, y despacho de subcomandos.

`run(config)` es el único punto que traduce un `RunConfig` en cálculo; la CLI,
el barrido y la caché sólo lo envuelven.
"""

import logging
import time
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from app.algebra.cyclotomic import CycloNum
from app.core.config import CACHE_DIR, DEFAULT_PRECISION_BITS, DEFAULT_WORD_BUDGET, TOOL_VERSION
from app.core.errors import UsageError
from app.monodromy.certifier import DensityCertificate, DensityCertifier
from app.monodromy.coverrep import build_curve_rep, meridian_matrix, wedge_rep
from app.monodromy.invariants import (
    Params,
    curve_hodge_numbers,
    dimension,
    expected_group,
    form_type,
    is_calabi_yau,
    large_fundamental_group_witness,
    signature_formula,
)
from app.monodromy.pham import character_support, cyclic_pl_data, intersection_number, pl_coefficient
from app.utils.serialization import canonical_json

# Configurar logging
logger = logging.getLogger(__name__)

SUBCOMMANDS = ("pham", "curve-rep", "invariants", "certify", "sweep")


# Modelos Pydantic
class RunConfig(BaseModel):
    subcommand: str = Field(..., description="pham, curve-rep, invariants, certify o sweep")
    n: Optional[int] = Field(None, description="Dimensión de la hipersuperficie")
    m: Optional[int] = Field(None, description="Número de hiperplanos")
    r: Optional[int] = Field(None, description="Grado del recubrimiento")
    i: Optional[int] = Field(None, description="Índice del autoespacio")
    wedge: int = Field(1, description="Potencia exterior para curve-rep")
    m_max: Optional[int] = Field(None, description="Cota superior de m en el barrido")
    budget: int = Field(DEFAULT_WORD_BUDGET, description="Presupuesto de palabras")
    precision_bits: int = Field(DEFAULT_PRECISION_BITS, description="Bits de las aproximaciones mostradas; no afecta a los veredictos")
    cache_dir: Optional[str] = Field(str(CACHE_DIR), description="Directorio de caché (None la desactiva)")
    out: Optional[str] = Field(None, description="Fichero de salida")
    verify_cache: bool = Field(False, description="Re-verificar testigos al leer de la caché")

    @field_validator("subcommand")
    @classmethod
    def known_subcommand(cls, v: str) -> str:
        if v not in SUBCOMMANDS:
            raise ValueError(f"Subcomando desconocido: {v}")
        return v

    @field_validator("budget", "precision_bits")
    @classmethod
    def positive(cls, v: int) -> int:
        if v <= 0:
            raise ValueError("Los presupuestos deben ser positivos")
        return v

    @model_validator(mode="after")
    def required_params(self) -> "RunConfig":
        needed = {
            "pham": ("n", "r"),
            "curve-rep": ("m", "r", "i"),
            "invariants": ("n", "m", "r", "i"),
            "certify": ("n", "m", "r", "i"),
            "sweep": ("n", "m_max"),
        }[self.subcommand]
        missing = [name for name in needed if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.subcommand} requiere --{' --'.join(missing)}")
        if self.subcommand == "sweep" and self.m_max < self.n + 3:
            raise ValueError("El barrido requiere m_max ≥ n + 3")
        return self

    def params(self) -> Params:
        return Params(self.n, self.m, self.r, self.i)

    def cache_key_data(self) -> Dict[str, Any]:
        """Campos que determinan el resultado (sin rutas ni flags de E/S)."""
        data = self.model_dump(exclude={"cache_dir", "out", "verify_cache"})
        data["tool_version"] = TOOL_VERSION
        return data


class Report(BaseModel):
    tool_version: str = TOOL_VERSION
    subcommand: str
    params: Dict[str, Optional[int]]
    payload: Any
    timing: Optional[Dict[str, float]] = None
    convention_flags: Dict[str, Any] = Field(default_factory=dict)

    def to_canonical(self) -> str:
        """JSON determinista; el tiempo de ejecución queda fuera."""
        return canonical_json(self.model_dump(exclude={"timing"}))


# ---------------------------------------------------------------------------
# Payloads
# ---------------------------------------------------------------------------

def _approx_json(a: CycloNum, precision_bits: int) -> Dict[str, str]:
    approx = a.approximate(precision_bits)
    return {
        "re": format(float(approx.re_mid), ".15g"),
        "im": format(float(approx.im_mid), ".15g"),
    }


def pham_payload(config: RunConfig) -> Dict[str, Any]:
    lattice = character_support(config.n, config.r)
    rows = []
    for mu in lattice.support:
        datum = pl_coefficient(mu)
        rows.append({
            "mu": list(mu.entries),
            "intersection": intersection_number(mu).to_json(),
            **datum.to_json(),
            "transvection": datum.is_transvection,
            "c_approx": _approx_json(datum.c, config.precision_bits),
        })
    payload = {"n": config.n, "r": config.r, "rank": lattice.rank, "support": rows}
    if config.m is not None and config.i is not None:
        cyclic = cyclic_pl_data(config.n, config.m, config.r, config.i)
        payload["cyclic"] = {**cyclic.to_json(), "transvection": cyclic.is_transvection}
    return payload


def curve_rep_payload(config: RunConfig) -> Dict[str, Any]:
    curve = build_curve_rep(config.m, config.r, config.i)
    rep = wedge_rep(curve, config.wedge)
    meridians = [meridian_matrix(curve, j).to_json() for j in range(len(curve.generators))]
    return {
        "representation": rep.to_json(),
        "meridians": meridians,
        "braid_relations": rep.braid_relations_hold(),
        "form_invariant": rep.form_is_invariant(),
    }


def invariants_payload(config: RunConfig) -> Dict[str, Any]:
    p = config.params().validate()
    pos, neg = signature_formula(p)
    h10, h01 = curve_hodge_numbers(p.m, p.r, p.i)
    label = expected_group(p)
    witness = large_fundamental_group_witness(p.n, p.m)
    return {
        "p": pos,
        "q": neg,
        "h10": h10,
        "h01": h01,
        "dimension": dimension(p),
        "expected_group": label.label,
        "hypothesis_ok": label.hypothesis_ok,
        "form_type": form_type(p),
        "calabi_yau": is_calabi_yau(p),
        "large_fundamental_group": witness.to_json() if witness else None,
    }


def certify_payload(config: RunConfig) -> DensityCertificate:
    return DensityCertifier(config.budget).certify(config.params())


def run(config: RunConfig) -> Report:
    """
    Ejecutar un subcomando y devolver su informe.

    Args:
        config: configuración validada

    Returns:
        Report con el payload JSON del módulo correspondiente
    """
    if config.subcommand == "sweep":
        # Importación diferida: el barrido llama de vuelta a run()
        from app.scripts.sweep import run_sweep_sync

        reports = run_sweep_sync(config)
        return Report(
            subcommand="sweep",
            params={"n": config.n, "m_max": config.m_max},
            payload=[report.model_dump(exclude={"timing"}) for report in reports],
        )

    logger.info(f"Ejecutando {config.subcommand} con {config.params().to_json()}")
    started = time.perf_counter()
    flags: Dict[str, Any] = {}
    if config.subcommand == "pham":
        payload = pham_payload(config)
    elif config.subcommand == "curve-rep":
        payload = curve_rep_payload(config)
        flags = {
            "convention": payload["representation"]["convention"],
            "form_scale_free": payload["representation"]["scale_free"],
        }
    elif config.subcommand == "invariants":
        payload = invariants_payload(config)
    elif config.subcommand == "certify":
        certificate = certify_payload(config)
        flags = certificate.convention_flags
        payload = certificate.model_dump()
    else:
        raise UsageError(f"Subcomando desconocido: {config.subcommand}")
    elapsed = time.perf_counter() - started
    logger.info(f"{config.subcommand} terminado en {elapsed:.2f}s")
    return Report(
        subcommand=config.subcommand,
        params=config.params().to_json(),
        payload=payload,
        timing={"seconds": elapsed},
        convention_flags=flags,
    )


def exit_code(report: Report) -> int:
    """0 si el resultado es el esperado, 1 si no se verificó, 2 si falla la hipótesis."""
    certificates: List[Dict[str, Any]] = []
    if report.subcommand == "certify":
        certificates = [report.payload]
    elif report.subcommand == "sweep":
        certificates = [r["payload"] for r in report.payload]
    statuses = {c["status"] for c in certificates}
    if "NOT-VERIFIED" in statuses:
        return 1
    if report.subcommand == "certify" and statuses == {"HYPOTHESIS_NOT_MET"}:
        return 2
    return 0

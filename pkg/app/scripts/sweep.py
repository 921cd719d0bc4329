#!/usr/bin/env python3
"""
Script para certificar todas las tuplas (n, m, r, i) hasta una cota de m.

Cada tupla pasa por el mismo pipeline que `certify`:
1. Representación de la curva (y su potencia exterior si n ≥ 2)
2. Órbita de los ciclos evanescentes
3. Subespacios invariantes e infinitud
4. Informe en la caché
"""

import argparse
import asyncio
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional

# Asegurar que podemos importar desde app
parent_dir = Path(__file__).parents[2]
sys.path.append(str(parent_dir))

from app.api.reports import Report, RunConfig
from app.core.config import LOG_LEVEL, SWEEP_WORKERS
from app.db.cache import cached_run
from app.monodromy.invariants import Params
from app.utils.serialization import canonical_json

logger = logging.getLogger(__name__)


def enumerate_tuples(n: int, m_max: int) -> List[Params]:
    """Tuplas válidas en orden (m, r, i) creciente."""
    out = []
    for m in range(n + 3, m_max + 1):
        for r in range(2, m + 1):
            if m % r:
                continue
            for i in range(1, r):
                out.append(Params(n, m, r, i))
    return out


def tuple_config(config: RunConfig, p: Params) -> RunConfig:
    return RunConfig(
        subcommand="certify",
        n=p.n,
        m=p.m,
        r=p.r,
        i=p.i,
        budget=config.budget,
        precision_bits=config.precision_bits,
        cache_dir=config.cache_dir,
        verify_cache=config.verify_cache,
    )


def _certify_one(data: Dict[str, Any]) -> Dict[str, Any]:
    """Punto de entrada de cada proceso: recibe y devuelve dicts serializables."""
    return cached_run(RunConfig.model_validate(data)).model_dump()


async def run_sweep(config: RunConfig, workers: Optional[int] = None) -> List[Report]:
    """
    Certificar todas las tuplas del barrido.

    Args:
        config: configuración con n y m_max
        workers: procesos en paralelo (0 = secuencial; None toma MONODROMY_WORKERS)

    Returns:
        Lista de informes en el orden de la enumeración
    """
    workers = SWEEP_WORKERS if workers is None else workers
    tuples = enumerate_tuples(config.n, config.m_max)
    configs = [tuple_config(config, p).model_dump() for p in tuples]
    logger.info(f"Barrido n={config.n}, m ≤ {config.m_max}: {len(configs)} tuplas, {workers} procesos")

    if workers == 0:
        results = [_certify_one(data) for data in configs]
    else:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [loop.run_in_executor(pool, _certify_one, data) for data in configs]
            # gather conserva el orden de entrada, no el de finalización
            results = await asyncio.gather(*futures)

    reports = [Report.model_validate(data) for data in results]
    for p, report in zip(tuples, reports):
        logger.info(f"{p.as_tuple()}: {report.payload['status']} {report.payload['verdict']}")
    return reports


def run_sweep_sync(config: RunConfig, workers: Optional[int] = None) -> List[Report]:
    return asyncio.run(run_sweep(config, workers))


def main():
    """Función principal del script."""
    parser = argparse.ArgumentParser(description="Certificar un barrido de parámetros")
    parser.add_argument("--n", type=int, default=1, help="Dimensión de la hipersuperficie")
    parser.add_argument("--m-max", type=int, required=True, help="Cota superior de m")
    parser.add_argument("--budget", type=int, help="Presupuesto de palabras")
    parser.add_argument("--workers", type=int, help="Procesos en paralelo")
    parser.add_argument("--cache-dir", help="Directorio de caché")

    args = parser.parse_args()

    logging.basicConfig(
        level=LOG_LEVEL,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    fields = {"subcommand": "sweep", "n": args.n, "m_max": args.m_max}
    if args.budget is not None:
        fields["budget"] = args.budget
    if args.cache_dir is not None:
        fields["cache_dir"] = args.cache_dir
    config = RunConfig(**fields)

    reports = asyncio.run(run_sweep(config, args.workers))
    for report in reports:
        print(canonical_json(report.model_dump(exclude={"timing"})))


if __name__ == "__main__":
    main()

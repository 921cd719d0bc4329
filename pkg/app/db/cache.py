import hashlib
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional

from app.api.reports import Report, RunConfig, run
from app.core.errors import InconsistencyError
from app.monodromy.certifier import DensityCertificate, DensityCertifier
from app.utils.serialization import canonical_json, load_json

logger = logging.getLogger(__name__)


def cache_key(config: RunConfig) -> str:
    """SHA-256 del RunConfig canónico."""
    return hashlib.sha256(canonical_json(config.cache_key_data()).encode("utf-8")).hexdigest()


class ReportCache:
    """
    Caché de informes en disco, de sólo anexar.

    Cada entrada es un fichero `<sha256>.json`; una entrada existente nunca se
    sobrescribe y la escritura es atómica (fichero temporal + os.replace).
    """

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        os.makedirs(self.directory, exist_ok=True)

    def path_for(self, config: RunConfig) -> Path:
        return self.directory / f"{cache_key(config)}.json"

    def get(self, config: RunConfig, verify: bool = False) -> Optional[Report]:
        """
        Obtener un informe de la caché.

        Args:
            config: configuración que identifica la entrada
            verify: re-verificar los testigos de un certificado antes de devolverlo

        Returns:
            El informe o None si no hay entrada
        """
        path = self.path_for(config)
        if not path.exists():
            logger.debug(f"Caché: fallo para {path.name}")
            return None
        report = Report.model_validate(load_json(path.read_text(encoding="utf-8")))
        logger.info(f"Caché: acierto para {config.subcommand} ({path.name[:12]})")
        if verify and report.subcommand == "certify":
            certificate = DensityCertificate.model_validate(report.payload)
            failures = DensityCertifier(config.budget).replay(certificate)
            if failures:
                raise InconsistencyError("cache-replay", f"{path.name}: {'; '.join(failures)}")
        return report

    def put(self, config: RunConfig, report: Report) -> Path:
        path = self.path_for(config)
        if path.exists():
            logger.debug(f"Caché: la entrada {path.name} ya existe; no se sobrescribe")
            return path
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(canonical_json(report.model_dump()))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        logger.info(f"Caché: guardado {path.name[:12]}")
        return path


def cached_run(config: RunConfig) -> Report:
    """run(config) a través de la caché si hay directorio configurado."""
    if not config.cache_dir or config.subcommand == "sweep":
        return run(config)
    cache = ReportCache(Path(config.cache_dir))
    report = cache.get(config, verify=config.verify_cache)
    if report is None:
        report = run(config)
        cache.put(config, report)
    return report

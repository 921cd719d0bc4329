import os
from pathlib import Path

from dotenv import load_dotenv

# Cargar variables de entorno
load_dotenv()

# Configuración de la herramienta
APP_NAME = os.getenv("APP_NAME", "Monodromía de recubrimientos cíclicos")
TOOL_VERSION = "0.3.0"

# Presupuestos de búsqueda
DEFAULT_WORD_BUDGET = int(os.getenv("MONODROMY_WORD_BUDGET", "10000"))
DEFAULT_PRECISION_BITS = int(os.getenv("MONODROMY_PRECISION_BITS", "128"))

# Caché de informes
CACHE_DIR = Path(os.getenv("MONODROMY_CACHE_DIR", ".monodromy-cache"))

# Logging
LOG_LEVEL = os.getenv("MONODROMY_LOG_LEVEL", "INFO").upper()
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# Paralelismo del barrido (0 = secuencial)
SWEEP_WORKERS = int(os.getenv("MONODROMY_WORKERS", "0"))


# Validar configuración crítica
def validate_config():
    """Validar que las configuraciones numéricas tengan valores utilizables."""
    problems = []

    if DEFAULT_WORD_BUDGET <= 0:
        problems.append("MONODROMY_WORD_BUDGET debe ser positivo")
    if DEFAULT_PRECISION_BITS < 16:
        problems.append("MONODROMY_PRECISION_BITS debe ser al menos 16")
    if SWEEP_WORKERS < 0:
        problems.append("MONODROMY_WORKERS no puede ser negativo")
    if LOG_LEVEL not in LOG_LEVELS:
        problems.append(f"MONODROMY_LOG_LEVEL debe ser uno de {', '.join(LOG_LEVELS)}")

    if problems:
        raise ValueError(
            f"Configuración inválida: {'; '.join(problems)}. "
            "Revisa las variables de entorno o el archivo .env"
        )

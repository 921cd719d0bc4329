import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from app.api.reports import SUBCOMMANDS, Report, RunConfig, exit_code
from app.core.config import APP_NAME, LOG_LEVEL, TOOL_VERSION, validate_config
from app.core.errors import BadParameters, InconsistencyError, MonodromyError, UsageError
from app.db.cache import cached_run
from app.utils.serialization import canonical_json, render_text

logger = logging.getLogger(__name__)

EXIT_USAGE = 64
EXIT_INTERNAL = 70


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="monodromy", description=f"{APP_NAME} (v{TOOL_VERSION})")
    parser.add_argument("subcommand", choices=SUBCOMMANDS, help="Operación a ejecutar")
    parser.add_argument("--n", type=int, help="Dimensión de la hipersuperficie")
    parser.add_argument("--m", type=int, help="Número de hiperplanos")
    parser.add_argument("--r", type=int, help="Grado del recubrimiento")
    parser.add_argument("--i", type=int, help="Índice del autoespacio")
    parser.add_argument("--wedge", type=int, default=1, help="Potencia exterior (curve-rep)")
    parser.add_argument("--m-max", type=int, help="Cota superior de m (sweep)")
    parser.add_argument("--budget", type=int, help="Presupuesto de palabras")
    parser.add_argument("--precision", type=int, help="Bits de las aproximaciones mostradas en los informes; los signos se deciden de forma exacta")
    parser.add_argument("--cache-dir", help="Directorio de caché")
    parser.add_argument("--no-cache", action="store_true", help="No leer ni escribir la caché")
    parser.add_argument("--out", help="Escribir el informe en este fichero")
    parser.add_argument("--verify-cache", action="store_true", help="Re-verificar testigos leídos de la caché")
    parser.add_argument("--format", choices=["json", "text"], default="json", help="Formato de salida")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {
        "subcommand": args.subcommand,
        "n": args.n,
        "m": args.m,
        "r": args.r,
        "i": args.i,
        "wedge": args.wedge,
        "m_max": args.m_max,
        "out": args.out,
        "verify_cache": args.verify_cache,
    }
    if args.budget is not None:
        fields["budget"] = args.budget
    if args.precision is not None:
        fields["precision_bits"] = args.precision
    if args.no_cache:
        fields["cache_dir"] = None
    elif args.cache_dir is not None:
        fields["cache_dir"] = args.cache_dir
    try:
        return RunConfig(**fields)
    except ValidationError as e:
        raise UsageError("; ".join(err["msg"] for err in e.errors())) from e


def emit(report: Report, fmt: str, out: Optional[str]):
    data = report.model_dump(exclude={"timing"})
    text = render_text(data) if fmt == "text" else canonical_json(data) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Informe escrito en {out}")
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    """Función principal de la CLI; devuelve el código de salida."""
    logging.basicConfig(
        level=LOG_LEVEL,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    try:
        validate_config()
        args = build_parser().parse_args(argv)
        config = config_from_args(args)
        report = cached_run(config)
        emit(report, args.format, config.out)
        return exit_code(report)
    except (UsageError, BadParameters) as e:
        logger.error(f"Uso incorrecto: {e}")
        return EXIT_USAGE
    except InconsistencyError as e:
        logger.error(f"Inconsistencia interna: {e.invariant}: {e.detail}")
        return EXIT_INTERNAL
    except (MonodromyError, ValueError) as e:
        logger.exception(f"Error interno: {e}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

import json
from pathlib import Path
from typing import Any, Dict

from jinja2 import Environment, FileSystemLoader, StrictUndefined, select_autoescape

# Configurar Jinja2 para plantillas
templates_dir = Path(__file__).parents[1] / "templates"
env = Environment(
    loader=FileSystemLoader(templates_dir),
    autoescape=select_autoescape(["html", "xml"]),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
)


def canonical_json(data: Any) -> str:
    """JSON determinista: claves ordenadas, sin espacios."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def load_json(text: str) -> Any:
    return json.loads(text)


def render_text(report: Dict[str, Any], template_name: str = "report.txt.j2") -> str:
    """
    Renderizar un informe JSON como texto legible.

    Args:
        report: informe ya serializado (dict con payload)
        template_name: plantilla dentro de app/templates

    Returns:
        Texto plano; los valores exactos se muestran en su forma JSON
    """
    template = env.get_template(template_name)
    return template.render(report=report, dumps=canonical_json)

import json

import pytest

from app.api.reports import Report, RunConfig, exit_code, run
from app.core import config as app_config
from app.db.cache import ReportCache, cache_key, cached_run
from app.main import EXIT_USAGE, main
from app.utils.serialization import canonical_json, render_text


def test_json_canonico():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_config_requiere_parametros():
    with pytest.raises(ValueError):
        RunConfig(subcommand="certify", n=1)
    with pytest.raises(ValueError):
        RunConfig(subcommand="certify", n=1, m=4, r=2, i=1, budget=0)
    with pytest.raises(ValueError):
        RunConfig(subcommand="plot", n=1)
    with pytest.raises(ValueError):
        RunConfig(subcommand="sweep", n=2, m_max=4)


def test_subcomando_invariants(capsys):
    code = main(["invariants", "--n", "1", "--m", "6", "--r", "3", "--i", "1", "--no-cache"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["payload"]["p"] == 3
    assert report["payload"]["q"] == 1
    assert report["payload"]["expected_group"] == "SU(3,1)"
    assert report["payload"]["hypothesis_ok"] is True
    assert "timing" not in report


def test_subcomando_pham():
    report = run(RunConfig(subcommand="pham", n=1, r=3, m=6, i=1))
    assert report.payload["rank"] == 4
    assert len(report.payload["support"]) == 4
    assert report.payload["cyclic"]["transvection"] is False


def test_subcomando_curve_rep():
    report = run(RunConfig(subcommand="curve-rep", m=4, r=2, i=1))
    assert report.payload["representation"]["dim"] == 2
    assert report.payload["braid_relations"]
    assert report.payload["form_invariant"]
    assert len(report.payload["meridians"]) == 3
    assert report.convention_flags["form_scale_free"] is True


def test_errores_de_uso():
    assert main(["certify", "--n", "1", "--no-cache"]) == EXIT_USAGE
    assert main(["plot", "--n", "1"]) == EXIT_USAGE
    assert main(["invariants", "--n", "1", "--m", "5", "--r", "3", "--i", "1", "--no-cache"]) == EXIT_USAGE


def test_certify_con_cache(tmp_path, capsys):
    args = ["certify", "--n", "1", "--m", "4", "--r", "2", "--i", "1", "--cache-dir", str(tmp_path)]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert json.loads(first)["payload"]["status"] == "VERIFIED"
    assert json.loads(first)["payload"]["verdict"] == "Sp(2)"
    assert len(list(tmp_path.glob("*.json"))) == 1

    assert main(args + ["--verify-cache"]) == 0
    second = capsys.readouterr().out
    assert first == second


def test_hipotesis_no_satisfecha_sale_con_2(capsys):
    assert main(["certify", "--n", "1", "--m", "4", "--r", "4", "--i", "1", "--no-cache"]) == 2
    report = json.loads(capsys.readouterr().out)
    assert report["payload"]["status"] == "HYPOTHESIS_NOT_MET"


def test_salida_a_fichero_y_texto(tmp_path):
    out = tmp_path / "report.txt"
    code = main([
        "invariants", "--n", "1", "--m", "6", "--r", "3", "--i", "1",
        "--no-cache", "--format", "text", "--out", str(out),
    ])
    assert code == 0
    text = out.read_text(encoding="utf-8")
    assert "SU(3,1)" in text
    assert "(3, 1)" in text


def test_cache_solo_anexar(tmp_path):
    config = RunConfig(subcommand="invariants", n=1, m=6, r=3, i=1, cache_dir=str(tmp_path))
    cache = ReportCache(tmp_path)
    report = run(config)
    path = cache.put(config, report)
    original = path.read_text(encoding="utf-8")

    altered = report.model_copy(update={"payload": {"p": 0}})
    assert cache.put(config, altered) == path
    assert path.read_text(encoding="utf-8") == original
    assert cache.get(config).payload == report.payload
    assert path.name == f"{cache_key(config)}.json"


def test_clave_de_cache_ignora_rutas(tmp_path):
    a = RunConfig(subcommand="invariants", n=1, m=6, r=3, i=1, cache_dir=str(tmp_path))
    b = RunConfig(subcommand="invariants", n=1, m=6, r=3, i=1, cache_dir=None, out="x.json")
    c = RunConfig(subcommand="invariants", n=1, m=6, r=3, i=2)
    assert cache_key(a) == cache_key(b)
    assert cache_key(a) != cache_key(c)


def test_cached_run_reutiliza_el_informe(tmp_path):
    config = RunConfig(subcommand="certify", n=1, m=4, r=2, i=1, cache_dir=str(tmp_path))
    first = cached_run(config)
    second = cached_run(config)
    assert first.to_canonical() == second.to_canonical()
    assert exit_code(second) == 0


def test_render_de_certificado():
    report = run(RunConfig(subcommand="certify", n=1, m=4, r=2, i=1, cache_dir=None))
    text = render_text(report.model_dump(exclude={"timing"}))
    assert "VERIFIED" in text
    assert "transvection" in text
    assert isinstance(Report.model_validate(json.loads(report.to_canonical())), Report)


def test_validar_configuracion_del_entorno(monkeypatch):
    app_config.validate_config()
    monkeypatch.setattr(app_config, "LOG_LEVEL", "VERBOSE")
    with pytest.raises(ValueError, match="MONODROMY_LOG_LEVEL"):
        app_config.validate_config()

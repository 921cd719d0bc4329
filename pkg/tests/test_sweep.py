import pytest

from app.api.reports import RunConfig, exit_code, run
from app.monodromy.invariants import Params
from app.scripts.sweep import enumerate_tuples, run_sweep, tuple_config


def test_enumeracion_de_tuplas():
    tuples = enumerate_tuples(1, 5)
    assert tuples[:4] == [Params(1, 4, 2, 1), Params(1, 4, 4, 1), Params(1, 4, 4, 2), Params(1, 4, 4, 3)]
    assert len(tuples) == 8
    assert enumerate_tuples(2, 4) == []


def test_configuracion_por_tupla(tmp_path):
    config = RunConfig(subcommand="sweep", n=1, m_max=6, budget=500, cache_dir=str(tmp_path))
    child = tuple_config(config, Params(1, 6, 3, 1))
    assert child.subcommand == "certify"
    assert child.budget == 500
    assert child.cache_dir == str(tmp_path)


@pytest.mark.asyncio
async def test_barrido_secuencial_en_orden(tmp_path):
    config = RunConfig(subcommand="sweep", n=1, m_max=4, cache_dir=str(tmp_path))
    reports = await run_sweep(config, workers=0)
    assert [tuple(r.params[k] for k in "nmri") for r in reports] == [
        (1, 4, 2, 1), (1, 4, 4, 1), (1, 4, 4, 2), (1, 4, 4, 3),
    ]
    statuses = [r.payload["status"] for r in reports]
    assert statuses[0] == "VERIFIED"
    assert statuses[1] == "HYPOTHESIS_NOT_MET"
    assert statuses[3] == "HYPOTHESIS_NOT_MET"
    assert "NOT-VERIFIED" not in statuses
    assert len(list(tmp_path.glob("*.json"))) == 4


@pytest.mark.asyncio
async def test_barrido_determinista(tmp_path):
    config = RunConfig(subcommand="sweep", n=1, m_max=4, cache_dir=str(tmp_path))
    first = [r.to_canonical() for r in await run_sweep(config, workers=0)]
    fresh = RunConfig(subcommand="sweep", n=1, m_max=4, cache_dir=None)
    second = [r.to_canonical() for r in await run_sweep(fresh, workers=0)]
    assert first == second


def test_run_despacha_el_barrido():
    report = run(RunConfig(subcommand="sweep", n=1, m_max=4, cache_dir=None))
    assert report.subcommand == "sweep"
    assert len(report.payload) == 4
    assert exit_code(report) == 0


@pytest.mark.slow
@pytest.mark.asyncio
async def test_barrido_en_paralelo_coincide(tmp_path):
    config = RunConfig(subcommand="sweep", n=1, m_max=6, cache_dir=None)
    sequential = [r.to_canonical() for r in await run_sweep(config, workers=0)]
    parallel = [r.to_canonical() for r in await run_sweep(config, workers=2)]
    assert sequential == parallel

import math

import pytest

from app.core.errors import BadParameters
from app.monodromy.invariants import (
    Params,
    binom,
    cover_comparison,
    criterion,
    curve_hodge_numbers,
    dimension,
    expected_group,
    form_type,
    hypothesis_failure,
    is_calabi_yau,
    large_fundamental_group_witness,
    proof_case,
    signature_formula,
)


def valid_params(m_max: int, n_max: int):
    for n in range(1, n_max + 1):
        for m in range(n + 3, m_max + 1):
            for r in range(2, m + 1):
                if m % r == 0:
                    for i in range(1, r):
                        yield Params(n, m, r, i)


def test_validacion_de_parametros():
    assert Params(1, 6, 3, 1).validate().k == 2
    with pytest.raises(BadParameters):
        Params(1, 7, 3, 1).validate()
    with pytest.raises(BadParameters):
        Params(2, 4, 2, 1).validate()
    assert Params(1, 6, 3, 3).problems() == ["1 ≤ i ≤ r − 1"]


def test_binomial_fuera_de_rango():
    assert binom(3, 5) == 0
    assert binom(-1, 0) == 0
    assert binom(5, 2) == 10


@pytest.mark.parametrize("params,expected", [
    ((1, 6, 3, 1), (3, 1)),
    ((1, 6, 2, 1), (2, 2)),
    ((1, 8, 4, 1), (5, 1)),
    ((1, 4, 2, 1), (1, 1)),
])
def test_signatura_en_forma_cerrada(params, expected):
    assert signature_formula(Params(*params)) == expected


def test_numeros_de_hodge_de_la_curva():
    assert curve_hodge_numbers(6, 3, 1) == (3, 1)
    assert curve_hodge_numbers(6, 3, 2) == (1, 3)
    with pytest.raises(BadParameters):
        curve_hodge_numbers(7, 3, 1)


def test_identidad_de_vandermonde():
    for p in valid_params(12, 4):
        pos, neg = signature_formula(p)
        assert pos + neg == math.comb(p.m - 2, p.n) == dimension(p)


def test_comparacion_de_recubrimientos():
    checked = 0
    for p in valid_params(12, 3):
        if p.r % p.i == 0 and p.r // p.i >= 2:
            assert cover_comparison(p, p.i)
            checked += 1
    assert checked > 0
    with pytest.raises(BadParameters):
        cover_comparison(Params(1, 6, 3, 1), 2)


@pytest.mark.parametrize("params,label", [
    ((1, 4, 2, 1), "Sp(2)"),
    ((1, 6, 2, 1), "Sp(4)"),
    ((1, 6, 3, 1), "SU(3,1)"),
    ((1, 8, 4, 1), "SU(5,1)"),
    ((1, 8, 4, 2), "Sp(6)"),
    ((2, 6, 2, 1), "SO(6)"),
    ((1, 4, 4, 1), "HYPOTHESIS_NOT_MET(mi < 2r)"),
    ((1, 6, 3, 2), "HYPOTHESIS_NOT_MET(i > r/2)"),
])
def test_grupo_esperado(params, label):
    assert expected_group(Params(*params)).label == label


def test_etiqueta_su_normaliza_p_mayor_que_q():
    for p in valid_params(10, 2):
        group = expected_group(p)
        if group.kind == "SU":
            assert group.p >= group.q


def test_hipotesis_con_parametros_invalidos():
    assert hypothesis_failure(Params(1, 7, 3, 1)).startswith("invalid")
    assert not expected_group(Params(1, 7, 3, 1)).hypothesis_ok


def test_tipo_de_forma_y_casos_de_prueba():
    assert form_type(Params(1, 6, 2, 1)) == "alternating"
    assert form_type(Params(2, 6, 2, 1)) == "symmetric"
    assert form_type(Params(1, 6, 3, 1)) == "hermitian"
    assert proof_case(Params(1, 6, 3, 1)) == "CASE_1"
    assert proof_case(Params(1, 4, 2, 1)) == "CASE_2"
    assert criterion(Params(1, 6, 2, 1)) == "deligne_transvections"
    assert criterion(Params(2, 6, 2, 1)) == "deligne_reflections"
    assert criterion(Params(1, 6, 3, 1)) == "carlson_toledo_complex_reflections"
    assert criterion(Params(2, 6, 3, 1)) == "alternative_sl"


def test_calabi_yau_y_grupo_fundamental_grande():
    assert is_calabi_yau(Params(1, 4, 2, 1))
    assert not is_calabi_yau(Params(1, 6, 3, 1))
    assert large_fundamental_group_witness(1, 6) == Params(1, 6, 2, 1)
    with pytest.raises(BadParameters):
        large_fundamental_group_witness(2, 4)


def test_signatura_indefinida_bajo_la_hipotesis():
    checked = 0
    for n in range(1, 6):
        for r in range(2, 8):
            for m in range(n + 3, 30):
                if m % r:
                    continue
                for i in range(1, r // 2 + 1):
                    params = Params(n, m, r, i)
                    if hypothesis_failure(params) is None:
                        pos, neg = signature_formula(params)
                        assert pos > 0 and neg > 0, params
                        checked += 1
    assert checked > 100

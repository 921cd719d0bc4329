import pytest

from app.algebra.cyclotomic import root_of_unity, sqrt_minus_one
from app.core.errors import BadParameters, ZeroCharacter
from app.monodromy.pham import (
    CharTuple,
    character_support,
    check_params,
    cyclic_pl_data,
    group_ring_intersection_number,
    intersection_number,
    kummer_support,
    monodromy_eigenvalues,
    n1_projection_support,
    pl_coefficient,
    self_intersection_oracle,
    transvection_eigenvalue,
)


def test_caracter_reduce_modulo_r():
    mu = CharTuple(3, (4, -1))
    assert mu.entries == (1, 2)
    assert mu.total() == 0
    assert mu.negate().entries == (2, 1)


def test_soporte_de_caracteres():
    assert character_support(1, 3).rank == 4
    assert character_support(2, 4).rank == 27
    with pytest.raises(BadParameters):
        character_support(1, 1)


def test_caracter_con_entrada_nula():
    with pytest.raises(ZeroCharacter):
        pl_coefficient(CharTuple(3, (1, 0)))


@pytest.mark.parametrize("n,r", [(0, 2), (1, 3), (2, 3), (1, 4), (2, 5)])
def test_identidad_picard_lefschetz_por_caracter(n, r):
    for mu in character_support(n, r).support:
        datum = pl_coefficient(mu)
        assert datum.identity_holds()
        assert datum.eigenvalue == root_of_unity(r, sum(mu.entries))
        assert datum.is_transvection == (sum(mu.entries) % r == 0)
        assert transvection_eigenvalue(mu) == datum.eigenvalue


@pytest.mark.slow
def test_identidad_picard_lefschetz_completa():
    for r in range(2, 7):
        for n in range(0, 4):
            lattice = character_support(n, r)
            assert lattice.rank == (r - 1) ** (n + 1)
            assert all(pl_coefficient(mu).identity_holds() for mu in lattice.support)


def test_oraculos_del_anillo_de_grupo():
    for n, r in [(1, 3), (2, 3), (1, 5)]:
        for mu in character_support(n, r).support:
            assert group_ring_intersection_number(mu) == intersection_number(mu)
            assert self_intersection_oracle(mu) == pl_coefficient(mu).self_pairing


def test_valores_propios_de_monodromia():
    eigen = monodromy_eigenvalues(1, 3)
    assert eigen[CharTuple(3, (1, 2))] == 1
    assert eigen[CharTuple(3, (1, 1))] == root_of_unity(3, 2)


def test_constante_del_recubrimiento_en_el_caso_mas_pequeno():
    datum = cyclic_pl_data(1, 4, 2, 1)
    assert datum.c == -8 * sqrt_minus_one()
    assert datum.is_transvection
    assert datum.eigenvalue == 1


def test_constantes_del_recubrimiento():
    for m in range(2, 13):
        for r in range(2, m + 1):
            if m % r:
                continue
            for i in range(1, r):
                for n in range(1, 4):
                    datum = cyclic_pl_data(n, m, r, i)
                    assert datum.identity_holds()
                    assert datum.is_transvection == (((n + 1) * i) % r == 0)


def test_parametros_invalidos():
    with pytest.raises(BadParameters):
        check_params(1, 7, 3, 1)
    with pytest.raises(BadParameters):
        check_params(1, 6, 3, 3)
    with pytest.raises(BadParameters):
        cyclic_pl_data(1, 6, 3, 0)


def test_soporte_de_kummer():
    support = kummer_support(1, 6, 3)
    assert len(support) == 2 ** 2 * 3 ** 3
    assert all(a[0] and a[1] for a in support)
    with pytest.raises(BadParameters):
        kummer_support(2, 4, 2)


def test_proyeccion_sobre_el_autoespacio():
    assert n1_projection_support(1, 6, 3, 1) == 1
    assert n1_projection_support(1, 6, 3, 3) == 0

from fractions import Fraction

import pytest

from app.algebra.cyclotomic import (
    CycloNum,
    approximate,
    conjugate,
    cyclotomic_coefficients,
    field_arithmetic,
    real_sign,
    root_of_unity,
    root_of_unity_order,
    sqrt_minus_one,
    totient,
)
from app.core.errors import DivByZero


def test_tablas_basicas():
    assert totient(12) == 4
    assert cyclotomic_coefficients(3) == (1, 1, 1)
    assert cyclotomic_coefficients(4) == (1, 0, 1)


def test_suma_de_raices_cubicas_es_cero():
    z = root_of_unity(3)
    assert (1 + z + z * z).is_zero()


def test_raiz_de_menos_uno():
    assert sqrt_minus_one() ** 2 == -1
    assert sqrt_minus_one(12) ** 2 == -1
    assert sqrt_minus_one(12).conductor == 12


def test_conductores_mixtos_se_elevan_al_mcm():
    product = root_of_unity(3) * root_of_unity(4)
    assert product.conductor == 12
    assert product == root_of_unity(12, 7)


def test_igualdad_y_hash_entre_conductores():
    z = root_of_unity(3)
    lifted = z.lift(12)
    assert z == lifted
    assert hash(z) == hash(lifted)
    assert CycloNum.rational(2, 5) == 2


def test_hash_distingue_raices_primitivas():
    assert hash(root_of_unity(5, 1)) != hash(root_of_unity(5, 2))
    assert len({root_of_unity(7, k) for k in range(1, 7)}) == 6
    z = root_of_unity(3)
    assert {z, z.lift(12), z.lift(6)} == {z}


def test_descenso_al_menor_conductor():
    z = root_of_unity(3)
    assert root_of_unity(12, 4).descend(3) == z
    assert root_of_unity(12).descend(3) is None
    assert root_of_unity(6).minimal_form.conductor == 3
    sqrt_minus_three = z - z * z
    assert sqrt_minus_three.lift(12).minimal_form.conductor == 3
    assert hash(sqrt_minus_three.lift(12)) == hash(sqrt_minus_three)
    assert CycloNum.rational(5, 8).minimal_form.conductor == 1
    with pytest.raises(ValueError):
        z.descend(2)


def test_inverso_y_division():
    a = 1 + root_of_unity(5)
    assert a * a.inverse() == 1
    assert (a / a) == 1
    assert (1 / a) * a == 1


def test_division_por_cero():
    with pytest.raises(DivByZero):
        CycloNum.zero(5).inverse()
    with pytest.raises(ZeroDivisionError):
        root_of_unity(5) / 0


def test_galois_y_conjugacion():
    z = root_of_unity(5)
    assert z.galois(2) == root_of_unity(5, 2)
    assert conjugate(root_of_unity(7, 3)) == root_of_unity(7, -3)
    with pytest.raises(ValueError):
        z.galois(5)


def test_potencias_negativas():
    z = root_of_unity(8)
    assert z ** -1 == root_of_unity(8, 7)
    assert z ** 8 == 1


def test_serializacion_json():
    a = root_of_unity(12, 5) + Fraction(1, 3)
    assert CycloNum.from_json(a.to_json()) == a
    with pytest.raises(ValueError):
        CycloNum.from_json({"conductor": 5, "coeffs": ["1/1"]})


def test_orden_de_raiz_de_la_unidad():
    assert root_of_unity_order(root_of_unity(12, 4)) == 3
    assert root_of_unity_order(CycloNum.rational(-1, 4)) == 2
    assert root_of_unity_order(1 + sqrt_minus_one()) is None
    assert root_of_unity_order(CycloNum.zero(3)) is None


def test_signo_real_certificado():
    z = root_of_unity(5)
    # 2cos(72°) > 0, 2cos(144°) < 0
    assert real_sign(z + z.conjugate()) == 1
    assert real_sign(z ** 2 + z.conjugate() ** 2) == -1
    assert real_sign(CycloNum.rational(-3, 7)) == -1
    with pytest.raises(ValueError):
        real_sign(z)


def test_aproximacion_contiene_el_valor():
    approx = approximate(sqrt_minus_one(), 64)
    assert approx.contains(Fraction(0), Fraction(1))
    assert approx.radius <= Fraction(1, 2 ** 64)
    cube = approximate(root_of_unity(3), 80)
    assert abs(cube.re_mid + Fraction(1, 2)) <= cube.radius


@pytest.mark.parametrize("bits", [8, 64, 256])
def test_aproximacion_a_varias_precisiones(bits):
    approx = approximate(root_of_unity(6), bits)
    assert approx.radius <= Fraction(1, 2 ** bits)
    assert abs(approx.re_mid - Fraction(1, 2)) <= approx.radius
    # 2·Im = √3
    assert abs((2 * approx.im_mid) ** 2 - 3) <= 8 * approx.radius


@pytest.mark.parametrize("start_bits", [2, 16, 64, 300])
def test_signo_real_no_depende_de_la_precision_inicial(start_bits):
    z = root_of_unity(5)
    golden = z + z.conjugate()
    assert real_sign(golden, start_bits) == 1
    # (√5 − 1)/2 − 0.618034 ≈ −1.1·10⁻⁸
    assert real_sign(golden - Fraction(618034, 1000000), start_bits) == -1


def test_operacion_desconocida():
    with pytest.raises(ValueError):
        field_arithmetic(CycloNum.one(), CycloNum.one(), "pow")
    assert field_arithmetic(root_of_unity(3), root_of_unity(4), "mul") == root_of_unity(12, 7)

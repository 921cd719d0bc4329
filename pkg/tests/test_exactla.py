from fractions import Fraction

import pytest

from app.algebra.cyclotomic import CycloNum, root_of_unity, sqrt_minus_one
from app.algebra.exactla import (
    FieldMatrix,
    FieldVector,
    HermitianForm,
    Subspace,
    algebra_closure,
    annihilating_polynomial,
    determinant,
    inverse,
    invariant_hermitian_forms,
    is_squarefree,
    kernel,
    minimal_polynomial,
    poly_norm,
    radical,
    rank,
    rational_roots_are_torsion,
    rref_kernel_rank,
    signature,
    signature_details,
    wedge_power,
    wedge_vectors,
)
from app.core.errors import DegenerateForm, EmptySolution


def diag(*values):
    d = len(values)
    return FieldMatrix.from_rows([[values[i] if i == j else 0 for j in range(d)] for i in range(d)])


def test_rango_y_nucleo():
    m = FieldMatrix.from_rows([[1, 2], [2, 4]])
    rref, ker, r = rref_kernel_rank(m)
    assert r == 1
    assert ker.dim == 1
    assert ker.contains(FieldVector.of([2, -1]))
    assert rref.row(1) == (CycloNum.zero(), CycloNum.zero())


def test_nucleo_trivial():
    assert kernel(FieldMatrix.identity(3)).dim == 0
    assert rank(FieldMatrix.zeros(2, 3)) == 0


def test_inversa_ciclotomica():
    z = root_of_unity(3)
    m = FieldMatrix.from_rows([[1, z], [0, 1]])
    assert (inverse(m) @ m).is_identity()
    assert m.power(-1) == inverse(m)
    with pytest.raises(ValueError):
        inverse(FieldMatrix.from_rows([[1, 2], [2, 4]]))


def test_coordenadas_en_subespacio():
    sub = Subspace.span([FieldVector.of([1, 1, 0]), FieldVector.of([0, 1, 1])], 3)
    v = FieldVector.of([2, 5, 3])
    coords = sub.coordinates(v)
    rebuilt = sub.basis[0].scale(coords[0]) + sub.basis[1].scale(coords[1])
    assert rebuilt == v
    with pytest.raises(ValueError):
        sub.coordinates(FieldVector.of([1, 0, 0]))


def test_forma_no_hermitica_rechazada():
    with pytest.raises(ValueError):
        HermitianForm(FieldMatrix.from_rows([[1, 2], [3, 1]]))


def test_signatura_diagonal():
    assert signature(HermitianForm(diag(1, -1, 1))) == (2, 1)


def test_signatura_con_diagonal_nula():
    form = HermitianForm(FieldMatrix.from_rows([[0, 1], [1, 0]]))
    result = signature_details(form)
    assert (result.p, result.q) == (1, 1)
    assert result.unordered == (1, 1)


def test_signatura_hermitica_compleja():
    i = sqrt_minus_one()
    form = HermitianForm(FieldMatrix.from_rows([[2, i], [-i, 1]]))
    assert signature(form) == (2, 0)
    negative = HermitianForm(FieldMatrix.from_rows([[-2, i], [-i, -1]]))
    assert signature_details(negative).oriented == (2, 0)


def test_forma_degenerada():
    i = sqrt_minus_one()
    form = HermitianForm(FieldMatrix.from_rows([[1, i], [-i, 1]]))
    with pytest.raises(DegenerateForm) as exc:
        signature(form)
    assert exc.value.rank == 1
    assert radical(form).dim == 1


def test_complemento_ortogonal():
    form = HermitianForm(FieldMatrix.identity(3))
    sub = Subspace.span([FieldVector.unit(3, 0)], 3)
    perp = form.orthogonal_complement(sub)
    assert perp.dim == 2
    assert perp.contains(FieldVector.unit(3, 1))
    assert not perp.contains(FieldVector.unit(3, 0))


def test_formas_invariantes():
    z = root_of_unity(3)
    forms = invariant_hermitian_forms([diag(z, z * z)])
    assert forms
    for form in forms:
        assert form.is_invariant_under(diag(z, z * z))
        # Los autoespacios de ζ y ζ² son ortogonales
        assert form.gram[0, 1].is_zero()


def test_sin_formas_invariantes():
    with pytest.raises(EmptySolution):
        invariant_hermitian_forms([diag(2)])


def test_determinante_y_potencias_exteriores():
    m = diag(2, 3, 5)
    assert wedge_power(m, 2) == diag(6, 10, 15)
    full = FieldMatrix.from_rows([[1, 2, 0], [3, 4, 1], [0, 1, 1]])
    assert wedge_power(full, 3) == FieldMatrix.from_rows([[determinant(full)]])
    assert determinant(full) == -3


def test_producto_exterior_de_vectores():
    e0, e1 = FieldVector.unit(3, 0), FieldVector.unit(3, 1)
    # Índices (0,1), (0,2), (1,2)
    assert wedge_vectors([e0, e1]) == FieldVector.of([1, 0, 0])
    assert wedge_vectors([e0, e0]).is_zero()


def test_polinomio_minimo():
    jordan = FieldMatrix.from_rows([[1, 1], [0, 1]])
    assert minimal_polynomial(jordan) == [1, -2, 1]
    assert minimal_polynomial(FieldMatrix.identity(3)) == [-1, 1]
    assert annihilating_polynomial(jordan, FieldVector.unit(2, 0)) == [-1, 1]
    assert annihilating_polynomial(jordan, FieldVector.unit(2, 1)) == [1, -2, 1]


def test_polinomios_libres_de_cuadrados_y_norma():
    one = CycloNum.one()
    assert not is_squarefree([one, -2 * one, one])
    assert is_squarefree([-one, 0 * one, one])
    z = root_of_unity(3)
    norm = poly_norm([-z, CycloNum.one(3)])
    assert norm == [1, 1, 1]


def test_raices_racionales_de_torsion():
    assert rational_roots_are_torsion([Fraction(-1), Fraction(0), Fraction(1)])
    assert rational_roots_are_torsion([Fraction(1), Fraction(0), Fraction(0), Fraction(0), Fraction(1)])
    assert rational_roots_are_torsion([Fraction(7)])
    assert not rational_roots_are_torsion([Fraction(2), Fraction(0), Fraction(1)])
    assert not rational_roots_are_torsion([Fraction(1), Fraction(-3), Fraction(1)])
    assert not rational_roots_are_torsion([Fraction(1, 2), Fraction(1)])


def matrix_unit(d, i, j):
    return FieldMatrix.from_rows([[1 if (a, b) == (i, j) else 0 for b in range(d)] for a in range(d)])


def test_clausura_de_algebras():
    units = [matrix_unit(2, i, j) for i in range(2) for j in range(2)]
    assert algebra_closure(units).dim == 4
    assert algebra_closure([FieldMatrix.identity(3)]).dim == 1
    swap = FieldMatrix.from_rows([[0, 1], [1, 0]])
    assert algebra_closure([diag(1, -1), swap]).dim == 4
    assert algebra_closure([diag(1, -1)]).dim == 2
    assert algebra_closure([swap]).dim == 2


def test_clausura_monotona_idempotente_y_cerrada():
    weights = diag(1, 2, 3)
    cycle = FieldMatrix.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    small = algebra_closure([weights])
    large = algebra_closure([weights, cycle])
    assert small.dim == 3
    assert large.dim == 9
    assert all(large.contains(b) for b in small.basis)
    again = algebra_closure([FieldMatrix.from_vector(b, 3) for b in small.basis])
    assert again == small
    for b in small.basis:
        m = FieldMatrix.from_vector(b, 3)
        assert small.contains((weights @ m).vectorize())
        assert small.contains((m @ weights).vectorize())


def test_clausura_sin_generadores():
    with pytest.raises(ValueError):
        algebra_closure([])
    with pytest.raises(ValueError):
        algebra_closure([FieldMatrix.identity(2), FieldMatrix.identity(3)])

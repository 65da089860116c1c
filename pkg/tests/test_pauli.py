import json
import math

import numpy as np
import pytest

from contextlab._internal import hilbert, pauli
from contextlab._internal.error import DimensionError, HermiticityError
from contextlab._internal.scenario import (fully_contextual_c_scenario, kcbs_twin_scenario,
                                           scenario_observable)

KCBS = kcbs_twin_scenario()
C4 = fully_contextual_c_scenario()


def random_hermitian(dim, rng):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2


def test_pauli_matrices_from_labels():
    np.testing.assert_allclose(pauli.pauli_matrix('XZ'),
                               np.kron([[0, 1], [1, 0]], [[1, 0], [0, -1]]))
    assert pauli.PauliString('iiz').label == 'IIZ'
    assert pauli.PauliString('III').is_identity()


def test_invalid_label():
    with pytest.raises(DimensionError):
        pauli.PauliString('XQ')


def test_all_labels_are_ordered():
    labels = pauli.all_labels(2)
    assert len(labels) == 16
    assert labels[:5] == ['II', 'IX', 'IY', 'IZ', 'XI']
    assert labels == sorted(labels, key=lambda s: ['IXYZ'.index(c) for c in s])


@pytest.mark.parametrize("dim", [4, 8])
def test_round_trip_on_random_hermitian_matrices(dim):
    rng = np.random.default_rng(dim)
    for _ in range(100):
        h = random_hermitian(dim, rng)
        np.testing.assert_allclose(pauli.reconstruct(pauli.decompose(h)), h, atol=1e-12)


def test_parseval():
    rng = np.random.default_rng(11)
    for dim in (2, 4, 8):
        h = random_hermitian(dim, rng)
        poly = pauli.decompose(h)
        total = sum(c * c for c in poly.terms.values()) * dim
        assert abs(total - np.trace(h @ h).real) < 1e-10


def test_decompose_matches_trace_formula():
    rng = np.random.default_rng(12)
    h = random_hermitian(8, rng)
    poly = pauli.decompose(h)
    for label in ('XYZ', 'IIZ', 'YYI', 'III'):
        expected = np.trace(pauli.pauli_matrix(label) @ h).real / 8
        assert abs(poly.coefficient(label) - expected) < 1e-12


def test_decompose_rejects_non_hermitian():
    with pytest.raises(HermiticityError):
        pauli.decompose([[0, 1], [0, 0]])


def test_decompose_rejects_bad_dimension():
    with pytest.raises(DimensionError):
        pauli.decompose(np.eye(3))


@pytest.mark.parametrize("s", [KCBS, C4], ids=['kcbs-twin', 'c4'])
def test_projector_decompositions(s):
    for proj in s.projectors:
        poly = pauli.decompose(proj)
        np.testing.assert_allclose(pauli.reconstruct(poly), proj, atol=1e-12)
        assert abs(poly.identity_coefficient() - 1.0 / s.dim) < 1e-12


def test_printed_two_qubit_expansions_agree_with_vectors():
    printed = pauli.printed_decompositions(2)
    for proj, p in zip(C4.projectors, printed):
        assert pauli.compare_polynomials(pauli.decompose(proj), p) == []
        np.testing.assert_allclose(pauli.reconstruct(p), proj, atol=1e-12)


@pytest.mark.parametrize("index", [0, 2, 3, 7, 8, 9])
def test_printed_three_qubit_expansions_agree_with_vectors(index):
    printed = pauli.printed_decompositions(3)[index]
    derived = pauli.decompose(KCBS.projectors[index])
    assert pauli.compare_polynomials(derived, printed) == []


# labels where the typeset three-qubit expansions differ from the vectors; every other
# projector agrees term by term
PRINTED_MISMATCHES = {
    1: ['XIX', 'XXI', 'XXZ', 'XYX', 'XZX', 'YIY', 'YYI', 'YYZ', 'YZY'],
    4: ['XIX', 'XXI', 'XXZ', 'XYX', 'XZX', 'YIY', 'YYI', 'YYZ', 'YZY'],
    5: ['XIX', 'XXX', 'XYY', 'XZX', 'XZZ', 'YIY', 'YXY', 'YYX', 'YZY'],
    6: ['XIX', 'XXX', 'XYY', 'XZX', 'YIY', 'YXY', 'YYX', 'YZY'],
}


@pytest.mark.parametrize("index", sorted(PRINTED_MISMATCHES))
def test_printed_three_qubit_mismatches(index):
    printed = pauli.printed_decompositions(3)[index]
    derived = pauli.decompose(KCBS.projectors[index])
    mismatches = pauli.compare_polynomials(derived, printed)
    assert [m.label for m in mismatches] == PRINTED_MISMATCHES[index]
    for m in mismatches:
        if m.label == 'XYX':
            assert abs(derived.coefficient('XYX')) < 1e-12
            assert abs(abs(m.printed) - math.sqrt(2) / 32) < 1e-12
        elif m.label == 'XZZ':
            assert abs(m.printed + m.derived) < 1e-12
        else:
            # sqrt(2) * sqrt(6) typeset where the vectors give sqrt(6)
            assert abs(abs(m.derived) - math.sqrt(6) / 32) < 1e-12
            assert abs(m.printed - math.sqrt(2) * m.derived) < 1e-12


def test_printed_sign_of_xzz_in_projector_5_is_flagged():
    printed = pauli.printed_decompositions(3)[5]
    derived = pauli.decompose(KCBS.projectors[5])
    labels = [m.label for m in pauli.compare_polynomials(derived, printed)]
    assert 'XZZ' in labels
    assert derived.coefficient('XZZ') < 0 < printed.coefficient('XZZ')


def test_aggregate_observable_kcbs_twin():
    agg = scenario_observable(KCBS)
    expected = {'IIZ': 1, 'IZI': 4, 'IZZ': 1, 'ZII': 4, 'ZIZ': 1, 'ZZI': -2, 'ZZZ': 1, 'III': 10}
    assert sorted(agg.labels()) == sorted(expected)
    for label, coeff in expected.items():
        assert abs(agg.coefficient(label) - coeff) < 1e-12


def test_aggregate_observable_c4():
    agg = scenario_observable(C4)
    expected = {'XX': 1, 'YY': 1, 'ZI': -1, 'ZZ': 2, 'IZ': -1, 'II': 10}
    assert sorted(agg.labels()) == sorted(expected)
    for label, coeff in expected.items():
        assert abs(agg.coefficient(label) - coeff) < 1e-12


def test_aggregate_of_nothing_is_zero():
    assert len(pauli.aggregate_observable([], 8, n_qubits=3)) == 0


def test_aggregate_rejects_mixed_shapes():
    with pytest.raises(DimensionError):
        pauli.aggregate_observable([np.eye(2), np.eye(4)], 1)


def test_table_indices():
    assert pauli.table_index('ZII') == 26
    assert pauli.table_label(35) == 'ZZZ'
    assert pauli.table_index('YYY') is None
    assert pauli.table_name('III') == '1'
    assert pauli.table_name('ZZI') == 'A33'
    assert pauli.table_name('ZZ') == 'B3'


def test_polynomial_prunes_and_rejects_complex_coefficients():
    poly = pauli.PauliPolynomial(2, {'XX': 1e-15, 'ZZ': 0.5})
    assert poly.labels() == ['ZZ']
    with pytest.raises(HermiticityError):
        pauli.PauliPolynomial(1, {'X': 1j})


def test_polynomial_arithmetic():
    a = pauli.PauliPolynomial(2, {'XX': 1, 'II': 2})
    b = pauli.PauliPolynomial(2, {'XX': -1, 'ZZ': 3})
    total = a + b
    assert total.terms == {'II': 2.0, 'ZZ': 3.0}
    assert a.scaled(2).coefficient('II') == 4.0
    with pytest.raises(DimensionError):
        a + pauli.PauliPolynomial(3)


def test_polynomial_json():
    agg = scenario_observable(C4)
    text = json.dumps(agg.to_json(), sort_keys=True)
    assert pauli.PauliPolynomial.from_json(text).isclose(agg)
    assert '+10*1' in agg.format()
